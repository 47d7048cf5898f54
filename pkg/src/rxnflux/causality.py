"""Causal structure of a trajectory: which firing produced what each firing
consumed.

Every firing is an event ``(id, label, time)``; the creation of each initial
instance is an event ``(id, "init", 0)``.  Replaying a trajectory yields one
causal edge per consumed instance, from the event that created the instance
to the firing that consumed it.  A binary step therefore contributes two
edges, and the edge collection is a multiset: a homodimer step may consume
two instances born from the same event, giving the same edge twice.  Flux
accounting depends on that multiplicity, so edges are stored as a sorted
tuple with duplicates preserved.
"""

import json
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .errors import CausalityViolationError
from .model import INIT_LABEL


@dataclass(frozen=True)
class Event:
    """One instance-creating occurrence: a reaction firing or an initial
    instance coming into existence (label ``init``, time 0)."""

    id: int
    label: str
    time: float


def _event_key(event):
    return (event.time, event.label, event.id)


@dataclass(frozen=True)
class CausalConfiguration:
    """Events plus the multiset of causal edges between them.

    ``events`` holds exactly the edge endpoints, sorted by (time, label,
    id); ``edges`` is sorted by (source key, target key).  Two
    configurations with equal causal content compare equal.
    """

    events: tuple
    edges: tuple


def _make_configuration(edges):
    edges = tuple(
        sorted(edges, key=lambda e: (_event_key(e[0]), _event_key(e[1])))
    )
    endpoints = {ev for edge in edges for ev in edge}
    return CausalConfiguration(tuple(sorted(endpoints, key=_event_key)), edges)


def extract_configuration(trajectory) -> CausalConfiguration:
    """Replay a trajectory and collect one causal edge per consumed instance.

    The source of an edge is the event recorded in the consumed instance's
    origin tag; the target is the consuming firing, whose event id is the
    id stamped on its products.  Replay consumes the oldest live instance
    for each (species, id) tag and cross-checks it against the tag, so a
    trajectory that was not produced by a faithful simulation is rejected.
    """
    live = {}
    for inst in trajectory.initial:
        event = Event(inst.id, INIT_LABEL, 0.0)
        live.setdefault((inst.species, inst.id), []).append(event)

    edges = []
    for index, step in enumerate(trajectory.steps):
        stamp = step.produced[0].id if step.produced else step.consumed[0].id
        target = Event(stamp, step.reaction, step.time)
        for inst in step.consumed:
            queue = live.get((inst.species, inst.id))
            if not queue:
                raise CausalityViolationError(
                    f"consumed instance {inst.species}({inst.id}) "
                    "is not available under replay",
                    step=index,
                )
            source = queue.pop(0)
            if source.label != inst.origin or source.time != inst.birth_time:
                raise CausalityViolationError(
                    f"consumed instance {inst.species}({inst.id}) carries "
                    f"origin ({inst.origin!r}, {inst.birth_time!r}) but replay "
                    f"provides ({source.label!r}, {source.time!r})",
                    step=index,
                )
            edges.append((source, target))
        for inst in step.produced:
            live.setdefault((inst.species, inst.id), []).append(target)
    return _make_configuration(edges)


def validate_configuration(config) -> dict:
    """Check configuration laws: acyclicity and cause-closure.

    Returns ``{"acyclic": bool, "causes_closed": bool, "violations": [str]}``
    where violations name the offending events or edges.
    """
    violations = []
    event_set = set(config.events)
    causes_closed = True
    for source, target in config.edges:
        for endpoint, role in ((source, "source"), (target, "target")):
            if endpoint not in event_set:
                causes_closed = False
                violations.append(
                    f"edge {role} ({endpoint.id}, {endpoint.label}, "
                    f"{endpoint.time}) is missing from the event set"
                )
    sorter = TopologicalSorter()
    for event in config.events:
        sorter.add(event)
    for source, target in config.edges:
        sorter.add(target, source)
    try:
        sorter.prepare()
        acyclic = True
    except CycleError as exc:
        acyclic = False
        cycle = exc.args[1]
        violations.append(
            "cycle: "
            + " -> ".join(f"({e.id}, {e.label}, {e.time})" for e in cycle)
        )
    return {
        "acyclic": acyclic,
        "causes_closed": causes_closed,
        "violations": violations,
    }


def restrict_interval(config, t_lo, t_hi) -> CausalConfiguration:
    """Keep the edges whose TARGET event time lies in the half-open
    interval (t_lo, t_hi].

    Source events outside the interval remain as nodes — they label where
    flux came from.  Half-open membership makes edge counts partition
    across adjacent intervals.
    """
    if not t_lo < t_hi:
        raise ValueError(f"empty interval: t_lo={t_lo!r} must be < t_hi={t_hi!r}")
    return _make_configuration(
        edge for edge in config.edges if t_lo < edge[1].time <= t_hi
    )


def configuration_to_json(config) -> str:
    """JSON export: an events array and edges as index pairs into it."""
    index = {event: i for i, event in enumerate(config.events)}
    payload = {
        "events": [
            {"id": e.id, "label": e.label, "time": e.time} for e in config.events
        ],
        "edges": [[index[s], index[t]] for s, t in config.edges],
    }
    return json.dumps(payload, indent=2) + "\n"


def configuration_to_dot(config) -> str:
    """DOT export: one node per event labeled ``<label>@<time>``."""
    index = {event: i for i, event in enumerate(config.events)}
    lines = ["digraph causality {"]
    for i, event in enumerate(config.events):
        lines.append(f'  e{i} [label="{event.label}@{event.time:.12g}"];')
    for source, target in config.edges:
        lines.append(f"  e{index[source]} -> e{index[target]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
