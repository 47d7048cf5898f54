"""Exact stochastic simulation (CTMC) with per-instance identity tracking.

Every species instance carries an id, the label of the event that created
it (``init`` or a reaction name) and its birth time, so trajectories retain
enough information for causal analysis.  The hot loop lives in
:mod:`rxnflux._kernels`; this module translates between the dataclass world
and the kernel's array encoding.

Determinism contract: ``simulate(model, stop, seed)`` is a pure function of
its arguments — one splitmix64 stream per run, fixed draw order (waiting
time, reaction, instances in reactant order), and instance pools kept in
canonical (id, birth) order so results do not depend on storage history.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._backend import BACKEND  # noqa: F401  (re-exported for callers)
from ._kernels import SplitMix64, run_ssa
from .model import INIT_LABEL, Model


@dataclass(frozen=True)
class SpeciesInstance:
    """A tagged token: species name, id, origin event label, birth time."""

    species: str
    id: int
    origin: str
    birth_time: float


@dataclass(frozen=True)
class TransitionInstance:
    """One reaction firing: timestamp, consumed and produced instances."""

    time: float
    reaction: str
    consumed: tuple
    produced: tuple


@dataclass(frozen=True)
class SimulationState:
    instances: tuple
    clock: float


@dataclass(frozen=True)
class Trajectory:
    """An initial instance multiset plus time-ordered transition instances.

    ``horizon`` is the time up to which the trajectory is defined: the
    requested end time when simulating with ``t_end``, otherwise the last
    step's timestamp.
    """

    model: Model
    initial: tuple
    steps: tuple
    horizon: float


def initial_state(model: Model) -> SimulationState:
    """Z0: one instance per initial-multiset element, ids 1..n assigned in
    species-lexicographic then sequential order, all origins ``init``."""
    instances = []
    next_id = 1
    for sp, count in model.initial:  # Model.initial is sorted by species
        for _ in range(count):
            instances.append(SpeciesInstance(sp, next_id, INIT_LABEL, 0.0))
            next_id += 1
    return SimulationState(tuple(instances), 0.0)


def propensity(reaction, state) -> float:
    """Mass-action propensity of one reaction in the given state."""
    counts = Counter(inst.species for inst in state.instances)
    if reaction.arity == 1:
        return reaction.rate * counts[reaction.reactants[0]]
    a, b = reaction.reactants
    if a == b:
        n = counts[a]
        return reaction.rate * n * (n - 1) / 2.0
    return reaction.rate * counts[a] * counts[b]


class _Encoded:
    """Dense-index view of a model for the kernels."""

    def __init__(self, model):
        self.model = model
        self.species = list(model.species)
        self.sp_index = {sp: i for i, sp in enumerate(self.species)}
        self.rate = np.array([r.rate for r in model.reactions], np.float64)
        self.r0 = np.array(
            [self.sp_index[r.reactants[0]] for r in model.reactions], np.int64
        )
        self.r1 = np.array(
            [
                self.sp_index[r.reactants[1]] if r.arity == 2 else -1
                for r in model.reactions
            ],
            np.int64,
        )
        offsets = [0]
        flat = []
        for r in model.reactions:
            flat.extend(self.sp_index[p] for p in r.products)
            offsets.append(len(flat))
        self.prod_off = np.array(offsets, np.int64)
        self.prod_sp = np.array(flat, np.int64)

    def origin_code(self, origin):
        if origin == INIT_LABEL:
            return -1
        return self.rxn_index[origin]

    @property
    def rxn_index(self):
        try:
            return self._rxn_index
        except AttributeError:
            self._rxn_index = {
                r.name: k for k, r in enumerate(self.model.reactions)
            }
            return self._rxn_index

    def origin_name(self, code):
        return INIT_LABEL if code < 0 else self.model.reactions[code].name


def _build_pools(enc, instances):
    n_species = len(enc.species)
    rows = [[] for _ in range(n_species)]
    for inst in instances:
        rows[enc.sp_index[inst.species]].append(inst)
    for row in rows:
        row.sort(key=lambda i: (i.id, i.birth_time))
    cap = max(4, max((len(r) for r in rows), default=0))
    pool_id = np.zeros((n_species, cap), np.int64)
    pool_birth = np.zeros((n_species, cap), np.float64)
    pool_org = np.zeros((n_species, cap), np.int64)
    n_pool = np.zeros(n_species, np.int64)
    for s, row in enumerate(rows):
        n_pool[s] = len(row)
        for q, inst in enumerate(row):
            pool_id[s, q] = inst.id
            pool_birth[s, q] = inst.birth_time
            pool_org[s, q] = enc.origin_code(inst.origin)
    return pool_id, pool_birth, pool_org, n_pool


def _decode_steps(enc, n_steps, st_t, st_r, a, b):
    a_id, a_org, a_birth = a
    b_id, b_org, b_birth = b
    model = enc.model
    steps = []
    for i in range(n_steps):
        k = int(st_r[i])
        reaction = model.reactions[k]
        t = float(st_t[i])
        consumed = [
            SpeciesInstance(
                reaction.reactants[0],
                int(a_id[i]),
                enc.origin_name(int(a_org[i])),
                float(a_birth[i]),
            )
        ]
        if reaction.arity == 2:
            consumed.append(
                SpeciesInstance(
                    reaction.reactants[1],
                    int(b_id[i]),
                    enc.origin_name(int(b_org[i])),
                    float(b_birth[i]),
                )
            )
        produced = tuple(
            SpeciesInstance(p, int(a_id[i]), reaction.name, t)
            for p in reaction.products
        )
        steps.append(TransitionInstance(t, reaction.name, tuple(consumed), produced))
    return steps


def _pools_to_instances(enc, pool_id, pool_birth, pool_org, n_pool):
    instances = []
    for s, sp in enumerate(enc.species):
        for q in range(int(n_pool[s])):
            instances.append(
                SpeciesInstance(
                    sp,
                    int(pool_id[s, q]),
                    enc.origin_name(int(pool_org[s, q])),
                    float(pool_birth[s, q]),
                )
            )
    return tuple(instances)


def step(model, state, rng):
    """Fire one reaction, or return None when the state is dead.

    ``rng`` is a :class:`SplitMix64` stream and is advanced in place, so
    repeated calls continue the same stream that :func:`simulate` uses.
    """
    enc = _Encoded(model)
    pool_id, pool_birth, pool_org, n_pool = _build_pools(enc, state.instances)
    with np.errstate(over="ignore"):
        out = run_ssa(
            enc.rate,
            enc.r0,
            enc.r1,
            enc.prod_off,
            enc.prod_sp,
            pool_id,
            pool_birth,
            pool_org,
            n_pool,
            float(state.clock),
            np.inf,
            1,
            rng.state_array,
        )
    n_steps = out[0]
    if n_steps == 0:
        return None
    steps = _decode_steps(enc, 1, out[1], out[2], out[3:6], out[6:9])
    instances = _pools_to_instances(enc, out[9], out[10], out[11], n_pool)
    return steps[0], SimulationState(instances, float(out[12]))


def simulate(model, *, t_end=None, max_steps=None, seed=0) -> Trajectory:
    """Run the SSA from the model's initial state until a stop condition.

    Exactly one of ``t_end``/``max_steps`` may be omitted; when both are
    given, whichever triggers first stops the run.  The result is a pure
    function of (model, stop condition, seed).
    """
    if t_end is None and max_steps is None:
        raise ValueError("need t_end or max_steps")
    if t_end is not None and not t_end > 0:
        raise ValueError("t_end must be positive")
    if max_steps is not None and max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    enc = _Encoded(model)
    start = initial_state(model)
    pool_id, pool_birth, pool_org, n_pool = _build_pools(enc, start.instances)
    rng = SplitMix64(seed)
    with np.errstate(over="ignore"):
        out = run_ssa(
            enc.rate,
            enc.r0,
            enc.r1,
            enc.prod_off,
            enc.prod_sp,
            pool_id,
            pool_birth,
            pool_org,
            n_pool,
            0.0,
            float(t_end) if t_end is not None else np.inf,
            int(max_steps) if max_steps is not None else 2**62,
            rng.state_array,
        )
    n_steps = out[0]
    steps = _decode_steps(enc, n_steps, out[1], out[2], out[3:6], out[6:9])
    if t_end is not None:
        horizon = float(t_end)
    else:
        horizon = float(out[1][n_steps - 1]) if n_steps else 0.0
    return Trajectory(model, start.instances, tuple(steps), horizon)


def species_counts(trajectory, sample_times):
    """Replay the trajectory, reporting counts at each sample time.

    Returns a list of (time, {species: count}) rows; a count at time s
    reflects every transition with timestamp <= s.  Sample times must be
    non-decreasing and lie within [0, trajectory.horizon].
    """
    horizon = trajectory.horizon
    counts = Counter(inst.species for inst in trajectory.initial)
    rows = []
    idx = 0
    prev = None
    steps = trajectory.steps
    species = trajectory.model.species
    for s in sample_times:
        if prev is not None and s < prev:
            raise ValueError("sample times must be non-decreasing")
        prev = s
        if s < 0 or s > horizon:
            raise ValueError(
                f"sample time {s} outside the trajectory horizon [0, {horizon}]"
            )
        while idx < len(steps) and steps[idx].time <= s:
            for inst in steps[idx].consumed:
                counts[inst.species] -= 1
            for inst in steps[idx].produced:
                counts[inst.species] += 1
            idx += 1
        rows.append((s, {sp: counts.get(sp, 0) for sp in species}))
    return rows


def counts_csv(trajectory, sample_times) -> str:
    """Species-count table as CSV with header ``time,<species...>``."""
    species = trajectory.model.species
    lines = ["time," + ",".join(species)]
    for t, row in species_counts(trajectory, sample_times):
        lines.append(f"{float(t)!r}," + ",".join(str(row[sp]) for sp in species))
    return "\n".join(lines) + "\n"
