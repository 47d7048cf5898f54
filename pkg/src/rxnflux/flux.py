"""Flux graphs over reaction labels, with net-flux simplification,
threshold filtering and mass-balance audits.

A flux configuration merges causal events by reaction label: the weight of
(p, q) counts the causal edges from firings of p to firings of q (``init``
acts as the label of initial-instance creation).  Weights therefore sum to
the number of causal edges, and the incoming weight of a reaction equals
its fire count times its arity — the hook for mass balance.
"""

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import FluxConsistencyError
from .model import INIT_LABEL, Model


@dataclass
class FluxConfiguration:
    """Weighted directed graph: ``triples[(p, q)] = n`` with n >= 1."""

    triples: dict = field(default_factory=dict)

    def weight(self, p, q) -> int:
        return self.triples.get((p, q), 0)

    def items(self):
        """Triples as (p, q, n), sorted by (p, q)."""
        return [(p, q, n) for (p, q), n in sorted(self.triples.items())]


@dataclass
class NetFluxGraph:
    """Directional residue of a flux configuration: for each unordered
    pair, one direction carrying the positive weight difference."""

    triples: dict = field(default_factory=dict)

    def weight(self, p, q) -> int:
        return self.triples.get((p, q), 0)

    def items(self):
        return [(p, q, n) for (p, q), n in sorted(self.triples.items())]


def flux_configuration(config) -> FluxConfiguration:
    """Merge a causal configuration's events by label and count edges."""
    counts = Counter((source.label, target.label) for source, target in config.edges)
    return FluxConfiguration(dict(counts))


def net_flux(flux) -> NetFluxGraph:
    """Collapse opposite-direction pairs to their signed difference.

    For each unordered {p, q}, keep max(0, n(p,q) - n(q,p)) in the winning
    direction, dropping exact cancellations.  Self-loops pass through.
    """
    out = {}
    for (p, q), n in flux.triples.items():
        if p == q:
            out[(p, q)] = n
            continue
        m = n - flux.triples.get((q, p), 0)
        if m > 0:
            out[(p, q)] = m
    return NetFluxGraph(out)


def threshold_filter(flux, fraction, exclude_init=False) -> FluxConfiguration:
    """Drop triples lighter than ``fraction`` times the mean weight.

    With ``exclude_init`` the init-sourced triples are removed before the
    mean is taken and do not appear in the output — the filtered graph is
    the inter-reaction pathway.
    """
    if fraction < 0:
        raise ValueError("fraction must be non-negative")
    considered = {
        pair: n
        for pair, n in flux.triples.items()
        if not (exclude_init and pair[0] == INIT_LABEL)
    }
    if not considered:
        return FluxConfiguration({})
    cutoff = fraction * (sum(considered.values()) / len(considered))
    return FluxConfiguration({pair: n for pair, n in considered.items() if n >= cutoff})


def _fire_counts_from_flux(flux, model):
    incoming = Counter()
    labels = set(r.name for r in model.reactions) | {INIT_LABEL}
    for (p, q), n in flux.triples.items():
        if p not in labels or q not in labels:
            unknown = p if p not in labels else q
            raise ValueError(f"flux label {unknown!r} is not a model reaction")
        incoming[q] += n
    fires = {}
    for reaction in model.reactions:
        total = incoming.get(reaction.name, 0)
        if total % reaction.arity:
            raise FluxConsistencyError(
                f"inconsistent flux configuration: reaction {reaction.name!r} "
                f"has incoming weight {total}, not divisible by its arity "
                f"{reaction.arity}"
            )
        fires[reaction.name] = total // reaction.arity
    return fires


def mass_balance(flux, model: Model) -> dict:
    """Net production of every species implied by a flux configuration.

    Fire counts are recovered from incoming flux (weight / arity, which
    must divide evenly); each species' balance is fires x (product
    multiplicity - reactant multiplicity), summed over reactions.  All
    model species appear, zeros included.
    """
    fires = _fire_counts_from_flux(flux, model)
    balance = {sp: 0 for sp in model.species}
    for reaction in model.reactions:
        n = fires[reaction.name]
        if not n:
            continue
        for sp in reaction.products:
            balance[sp] += n
        for sp in reaction.reactants:
            balance[sp] -= n
    return balance


def reaction_fire_counts(trajectory, interval=None) -> dict:
    """Count the steps instantiating each reaction, optionally only those
    with timestamps in the half-open interval (t_lo, t_hi]."""
    counts = {r.name: 0 for r in trajectory.model.reactions}
    if interval is None:
        for step in trajectory.steps:
            counts[step.reaction] += 1
    else:
        t_lo, t_hi = interval
        for step in trajectory.steps:
            if t_lo < step.time <= t_hi:
                counts[step.reaction] += 1
    return counts


def flux_to_json(flux) -> str:
    """Export triples as a JSON array ``[{"from": p, "to": q, "n": n}]``."""
    payload = [{"from": p, "to": q, "n": n} for p, q, n in flux.items()]
    return json.dumps(payload, indent=2) + "\n"


def flux_from_json(text: str) -> FluxConfiguration:
    """Inverse of :func:`flux_to_json`; validates shape and positivity."""
    payload = json.loads(text)
    if not isinstance(payload, list):
        raise ValueError("flux JSON must be an array of triples")
    triples = {}
    for entry in payload:
        try:
            p, q, n = entry["from"], entry["to"], entry["n"]
        except (TypeError, KeyError) as exc:
            raise ValueError(f"flux JSON entry {entry!r} lacks from/to/n") from exc
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"flux weight {n!r} is not a positive integer")
        if (p, q) in triples:
            raise ValueError(f"duplicate flux pair ({p!r}, {q!r})")
        triples[(p, q)] = n
    return FluxConfiguration(triples)
