"""Text and DOT rendering of analysis results.

The text report lists every reaction with its fire count, then the
extracted dependencies (flux triples).  Reactions are numbered in
ascending fire-count order (ties broken by model order) and dependency
lines refer to those numbers; ``symbolic=True`` swaps the positional
numbers for reaction names.
"""

from .model import INIT_LABEL, Model


def _side(species) -> str:
    return " ".join(sorted(species))


def render_report(counts, flux, model: Model, *, symbolic=False) -> str:
    """Render fire counts and dependencies as the two-section text report."""
    order = sorted(
        range(len(model.reactions)),
        key=lambda i: (counts.get(model.reactions[i].name, 0), i),
    )
    idents = {}
    lines = ["Reactions:", "-" * 10, ""]
    for position, i in enumerate(order, start=1):
        reaction = model.reactions[i]
        idents[reaction.name] = reaction.name if symbolic else str(position)
        lines.append(
            f"{idents[reaction.name]}: {_side(reaction.reactants)}  --> "
            f"{_side(reaction.products)}  fires "
            f"{counts.get(reaction.name, 0)} times."
        )
    lines += ["", "", "Extracted dependencies:", "-" * 23, ""]

    def label_key(label):
        if label == INIT_LABEL:
            return (0, 0, "")
        if symbolic:
            return (1, 0, label)
        return (1, int(idents[label]), "")

    def render_label(label):
        return label if label == INIT_LABEL else idents[label]

    for p, q, n in sorted(
        flux.items(), key=lambda t: (label_key(t[0]), label_key(t[1]))
    ):
        lines.append(f"{render_label(p)} ==> {render_label(q)}  appears {n} times.")
    return "\n".join(lines) + "\n"


def emit_dot(graph, *, min_penwidth=1.0, max_penwidth=8.0) -> str:
    """Render a flux or net-flux graph as DOT with weight-proportional
    edge thickness (linear between ``min_penwidth`` and ``max_penwidth``;
    a uniform-weight graph gets the midpoint)."""
    triples = graph.items()
    nodes = sorted({label for p, q, _ in triples for label in (p, q)})
    weights = [n for _, _, n in triples]
    lines = ["digraph flux {"]
    for node in nodes:
        lines.append(f'  "{node}";')
    if weights:
        w_lo, w_hi = min(weights), max(weights)
        for p, q, n in triples:
            if w_hi > w_lo:
                pen = min_penwidth + (n - w_lo) / (w_hi - w_lo) * (
                    max_penwidth - min_penwidth
                )
            else:
                pen = (min_penwidth + max_penwidth) / 2.0
            lines.append(
                f'  "{p}" -> "{q}" [label="{n}", penwidth={pen:.2f}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
