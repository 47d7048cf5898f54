"""Reader/writer for the textual trace format.

A trace is one line per event.  The first line declares the initial
instances at time zero with an empty left-hand side::

    0.  --> A(1) A(2) A(3) A(4)

and every subsequent line records one reaction firing::

    0.362742117504 A(4)  --> P(4) P(4)

Tokens are ``Name(id)``.  Within a side, token order is a multiset;
:func:`serialize_trace` canonicalizes it (species name, then id).  Lines
are matched back to reactions by comparing species multisets on both
sides, so a model in which two reactions share both multisets cannot be
analyzed from traces — that is reported as an ambiguity error rather than
silently picking one.
"""

import re
from collections import deque

from .errors import AmbiguousReactionError, CausalityViolationError, TraceError
from .model import INIT_LABEL, Model
from .simulate import SpeciesInstance, TransitionInstance, Trajectory

_TOKEN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\((\d+)\)")
_ARROW = "-->"


def _split_line(raw, lineno):
    """Split one physical line into (time, consumed tokens, produced tokens)."""
    if _ARROW not in raw:
        raise TraceError("missing '-->' separator", line=lineno)
    left, _, right = raw.partition(_ARROW)
    fields = left.split()
    if not fields:
        raise TraceError("missing timestamp", line=lineno)
    try:
        t = float(fields[0])
    except ValueError:
        raise TraceError(f"invalid timestamp {fields[0]!r}", line=lineno) from None
    if t < 0:
        raise TraceError(f"negative timestamp {fields[0]!r}", line=lineno)
    return t, _parse_tokens(fields[1:], lineno), _parse_tokens(right.split(), lineno)


def _parse_tokens(fields, lineno):
    tokens = []
    for field in fields:
        m = _TOKEN_RE.fullmatch(field)
        if m is None:
            raise TraceError(f"invalid token {field!r}", line=lineno)
        tokens.append((m.group(1), int(m.group(2))))
    return tokens


def parse_trace(text: str, model: Model) -> Trajectory:
    """Reconstruct a full Trajectory (with origins and birth times) from text.

    Lines are matched to reactions by species multisets; instance origins
    and birth times are rebuilt by forward replay, consuming the oldest
    available instance for each tag.  A consumed tag with no live instance
    is a causality violation.
    """
    lines = [(i + 1, raw.strip()) for i, raw in enumerate(text.splitlines())]
    lines = [(no, raw) for no, raw in lines if raw]
    if not lines:
        raise TraceError("empty trace", line=1)

    by_shape = {}
    for reaction in model.reactions:
        key = (tuple(sorted(reaction.reactants)), tuple(sorted(reaction.products)))
        by_shape.setdefault(key, []).append(reaction)

    lineno, raw = lines[0]
    t, consumed, produced = _split_line(raw, lineno)
    if t != 0.0 or consumed:
        raise TraceError(
            "first line must be the initialization line '0.  --> <tokens>'",
            line=lineno,
        )
    known = set(model.species)
    for sp, _ in produced:
        if sp not in known:
            raise TraceError(f"unknown species {sp!r}", line=lineno)
    # Canonical (species, id) order so parse∘serialize is the identity.
    initial = tuple(
        sorted(
            (SpeciesInstance(sp, tok_id, INIT_LABEL, 0.0) for sp, tok_id in produced),
            key=lambda inst: (inst.species, inst.id),
        )
    )

    # Live instances per tag, oldest first.
    live = {}
    for inst in initial:
        live.setdefault((inst.species, inst.id), deque()).append(inst)

    steps = []
    prev_t = 0.0
    for lineno, raw in lines[1:]:
        t, consumed, produced = _split_line(raw, lineno)
        if t <= prev_t:
            raise TraceError(
                f"timestamp {t!r} does not increase past {prev_t!r}", line=lineno
            )
        prev_t = t
        key = (
            tuple(sorted(sp for sp, _ in consumed)),
            tuple(sorted(sp for sp, _ in produced)),
        )
        matches = by_shape.get(key, [])
        if not matches:
            raise TraceError(
                f"{' '.join(sorted(sp for sp, _ in consumed))} --> "
                f"{' '.join(sorted(sp for sp, _ in produced))} "
                "matches no reaction in the model",
                line=lineno,
            )
        if len(matches) > 1:
            raise AmbiguousReactionError(
                f"line matches {len(matches)} reactions "
                f"({', '.join(r.name for r in matches)})",
                line=lineno,
            )
        reaction = matches[0]

        popped = []
        for sp, tok_id in consumed:
            queue = live.get((sp, tok_id))
            if not queue:
                raise CausalityViolationError(
                    f"consumed instance {sp}({tok_id}) is not available",
                    line=lineno,
                )
            popped.append(queue.popleft())

        # Bind popped instances to reactant slots: by species, and for a
        # homodimer pair in canonical ascending (id, birth) order.
        slots = []
        pool = list(popped)
        for slot_sp in reaction.reactants:
            best = min(
                (p for p in pool if p.species == slot_sp),
                key=lambda p: (p.id, p.birth_time),
            )
            pool.remove(best)
            slots.append(best)

        prod_ids = {}
        for sp, tok_id in produced:
            prod_ids.setdefault(sp, deque()).append(tok_id)
        new_instances = tuple(
            SpeciesInstance(sp, prod_ids[sp].popleft(), reaction.name, t)
            for sp in reaction.products
        )
        for inst in new_instances:
            live.setdefault((inst.species, inst.id), deque()).append(inst)
        steps.append(TransitionInstance(t, reaction.name, tuple(slots), new_instances))

    horizon = steps[-1].time if steps else 0.0
    return Trajectory(model, initial, tuple(steps), horizon)


def _tokens(instances) -> str:
    ordered = sorted(instances, key=lambda i: (i.species, i.id))
    return " ".join(f"{i.species}({i.id})" for i in ordered)


def serialize_trace(trajectory: Trajectory) -> str:
    """Render a trajectory as trace text that parses back to equal structure.

    Timestamps use ``repr``, the shortest decimal form that re-reads to the
    exact same float, so strict monotonicity survives a round trip.
    """
    lines = [f"0.  --> {_tokens(trajectory.initial)}".rstrip()]
    for step in trajectory.steps:
        lines.append(
            f"{step.time!r} {_tokens(step.consumed)}  --> "
            f"{_tokens(step.produced)}".rstrip()
        )
    return "\n".join(lines) + "\n"
