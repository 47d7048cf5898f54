"""Array kernels for the stochastic simulation loop.

Everything here is written once against numpy and compiled with numba when
the selected backend allows it (see :mod:`rxnflux._backend`); under the
``python`` backend the very same source runs interpreted, producing
bit-identical results.

Conventions shared with :mod:`rxnflux.simulate`:

- species and reactions are dense indices; ``r1 == -1`` marks a unary
  reaction, ``r1 == r0`` a homodimer;
- instance pools are per-species rows of (id, birth_time, origin) kept
  sorted by (id, birth_time); ``origin`` is -1 for initialization or the
  producing reaction's index;
- the RNG is splitmix64 with its uint64 state carried in a one-element
  array (numba hands uint64 scalars back to Python as signed ints, which
  would corrupt the stream after a wraparound);
- per step the draw order is fixed: waiting time, reaction, then consumed
  instances in reactant order (two ranked draws without replacement for a
  homodimer).
"""

import numpy as np

from ._backend import BACKEND, njit

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _next_u64(rng):
    rng[0] = rng[0] + _GOLD
    z = rng[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def _u01(rng):
    """Uniform on [0, 1) with 53-bit resolution."""
    return np.float64(_next_u64(rng) >> _S11) * _INV53


@njit(cache=True)
def _pick_slot(rng, n):
    """Uniform index in [0, n)."""
    j = np.int64(_u01(rng) * n)
    if j >= n:
        j = n - 1
    return j


@njit(cache=True)
def _oldest_same_id(pool_id, s, j):
    """First pool slot carrying the same id as slot j (smallest birth)."""
    while j > 0 and pool_id[s, j - 1] == pool_id[s, j]:
        j -= 1
    return j


@njit(cache=True)
def _insert(pool_id, pool_birth, pool_org, n_pool, s, iid, birth, org):
    """Insert keeping the (id, birth) order of the species-s row."""
    lo = 0
    hi = n_pool[s]
    while lo < hi:
        mid = (lo + hi) // 2
        pid = pool_id[s, mid]
        if pid < iid or (pid == iid and pool_birth[s, mid] <= birth):
            lo = mid + 1
        else:
            hi = mid
    q = n_pool[s]
    while q > lo:
        pool_id[s, q] = pool_id[s, q - 1]
        pool_birth[s, q] = pool_birth[s, q - 1]
        pool_org[s, q] = pool_org[s, q - 1]
        q -= 1
    pool_id[s, lo] = iid
    pool_birth[s, lo] = birth
    pool_org[s, lo] = org
    n_pool[s] += 1


@njit(cache=True)
def _remove(pool_id, pool_birth, pool_org, n_pool, s, idx):
    n = n_pool[s] - 1
    q = idx
    while q < n:
        pool_id[s, q] = pool_id[s, q + 1]
        pool_birth[s, q] = pool_birth[s, q + 1]
        pool_org[s, q] = pool_org[s, q + 1]
        q += 1
    n_pool[s] = n


@njit(cache=True)
def _grow_pools(pool_id, pool_birth, pool_org):
    ns, cap = pool_id.shape
    nid = np.empty((ns, cap * 2), np.int64)
    nbirth = np.empty((ns, cap * 2), np.float64)
    norg = np.empty((ns, cap * 2), np.int64)
    nid[:, :cap] = pool_id
    nbirth[:, :cap] = pool_birth
    norg[:, :cap] = pool_org
    return nid, nbirth, norg


@njit(cache=True)
def run_ssa(
    rate,
    r0,
    r1,
    prod_off,
    prod_sp,
    pool_id,
    pool_birth,
    pool_org,
    n_pool,
    t0,
    t_end,
    max_steps,
    rng,
):
    """Advance the exact SSA from time t0 until t_end/max_steps/extinction.

    Returns the step count, per-step logs (time, reaction, and the one or
    two consumed instances), the final pools and the final clock.  Log
    arrays are overallocated; only the first n_steps entries are valid.
    """
    n_reactions = rate.shape[0]
    act = np.zeros(n_reactions, np.float64)

    log_cap = 1024
    st_t = np.empty(log_cap, np.float64)
    st_r = np.empty(log_cap, np.int64)
    a_id = np.empty(log_cap, np.int64)
    a_org = np.empty(log_cap, np.int64)
    a_birth = np.empty(log_cap, np.float64)
    b_id = np.empty(log_cap, np.int64)
    b_org = np.empty(log_cap, np.int64)
    b_birth = np.empty(log_cap, np.float64)

    n_steps = 0
    t = t0
    while n_steps < max_steps:
        a0 = 0.0
        for k in range(n_reactions):
            s = r0[k]
            n = n_pool[s]
            if r1[k] < 0:
                ak = rate[k] * n
            elif r1[k] == s:
                ak = rate[k] * n * (n - 1) * 0.5
            else:
                ak = rate[k] * n * n_pool[r1[k]]
            act[k] = ak
            a0 += ak
        if a0 <= 0.0:
            break

        # waiting time; redraw until the clock strictly advances
        t_new = t
        while t_new <= t:
            u = _u01(rng)
            while u == 0.0:
                u = _u01(rng)
            t_new = t + (-np.log(u) / a0)
        if t_new > t_end:
            break
        t = t_new

        # roulette selection in model order
        target = _u01(rng) * a0
        k = -1
        acc = 0.0
        for j in range(n_reactions):
            acc += act[j]
            if target < acc:
                k = j
                break
        if k < 0:
            for j in range(n_reactions - 1, -1, -1):
                if act[j] > 0.0:
                    k = j
                    break

        s0 = r0[k]
        if r1[k] < 0:
            j = _pick_slot(rng, n_pool[s0])
            h = _oldest_same_id(pool_id, s0, j)
            ca_id = pool_id[s0, h]
            ca_org = pool_org[s0, h]
            ca_birth = pool_birth[s0, h]
            cb_id = np.int64(-1)
            cb_org = np.int64(-1)
            cb_birth = 0.0
            _remove(pool_id, pool_birth, pool_org, n_pool, s0, h)
        elif r1[k] == s0:
            # two distinct slots, consumed as the canonically ordered pair
            n = n_pool[s0]
            j1 = _pick_slot(rng, n)
            j2 = _pick_slot(rng, n - 1)
            if j2 >= j1:
                j2 += 1
            lo = j1 if j1 < j2 else j2
            hi = j2 if j1 < j2 else j1
            h_lo = _oldest_same_id(pool_id, s0, lo)
            h_hi = _oldest_same_id(pool_id, s0, hi)
            if h_hi == h_lo:
                h_hi = h_lo + 1
            ca_id = pool_id[s0, h_lo]
            ca_org = pool_org[s0, h_lo]
            ca_birth = pool_birth[s0, h_lo]
            cb_id = pool_id[s0, h_hi]
            cb_org = pool_org[s0, h_hi]
            cb_birth = pool_birth[s0, h_hi]
            _remove(pool_id, pool_birth, pool_org, n_pool, s0, h_hi)
            _remove(pool_id, pool_birth, pool_org, n_pool, s0, h_lo)
        else:
            s1 = r1[k]
            j = _pick_slot(rng, n_pool[s0])
            h = _oldest_same_id(pool_id, s0, j)
            ca_id = pool_id[s0, h]
            ca_org = pool_org[s0, h]
            ca_birth = pool_birth[s0, h]
            _remove(pool_id, pool_birth, pool_org, n_pool, s0, h)
            j = _pick_slot(rng, n_pool[s1])
            h = _oldest_same_id(pool_id, s1, j)
            cb_id = pool_id[s1, h]
            cb_org = pool_org[s1, h]
            cb_birth = pool_birth[s1, h]
            _remove(pool_id, pool_birth, pool_org, n_pool, s1, h)

        if n_steps == log_cap:
            log_cap = log_cap * 2
            tmp_f = np.empty(log_cap, np.float64)
            tmp_f[:n_steps] = st_t
            st_t = tmp_f
            tmp_i = np.empty(log_cap, np.int64)
            tmp_i[:n_steps] = st_r
            st_r = tmp_i
            tmp_i = np.empty(log_cap, np.int64)
            tmp_i[:n_steps] = a_id
            a_id = tmp_i
            tmp_i = np.empty(log_cap, np.int64)
            tmp_i[:n_steps] = a_org
            a_org = tmp_i
            tmp_f = np.empty(log_cap, np.float64)
            tmp_f[:n_steps] = a_birth
            a_birth = tmp_f
            tmp_i = np.empty(log_cap, np.int64)
            tmp_i[:n_steps] = b_id
            b_id = tmp_i
            tmp_i = np.empty(log_cap, np.int64)
            tmp_i[:n_steps] = b_org
            b_org = tmp_i
            tmp_f = np.empty(log_cap, np.float64)
            tmp_f[:n_steps] = b_birth
            b_birth = tmp_f

        st_t[n_steps] = t
        st_r[n_steps] = k
        a_id[n_steps] = ca_id
        a_org[n_steps] = ca_org
        a_birth[n_steps] = ca_birth
        b_id[n_steps] = cb_id
        b_org[n_steps] = cb_org
        b_birth[n_steps] = cb_birth

        # products inherit the first consumed instance's id
        for pi in range(prod_off[k], prod_off[k + 1]):
            sp = prod_sp[pi]
            if n_pool[sp] == pool_id.shape[1]:
                pool_id, pool_birth, pool_org = _grow_pools(
                    pool_id, pool_birth, pool_org
                )
            _insert(pool_id, pool_birth, pool_org, n_pool, sp, ca_id, t, k)

        n_steps += 1

    return (
        n_steps,
        st_t,
        st_r,
        a_id,
        a_org,
        a_birth,
        b_id,
        b_org,
        b_birth,
        pool_id,
        pool_birth,
        pool_org,
        t,
    )


class SplitMix64:
    """Seedable splitmix64 stream: 64-bit state, 64-bit outputs.

    One independent stream is used per simulation run; distinct seeds give
    distinct streams.  The state lives in a one-element uint64 array so the
    njit kernels can advance it in place.
    """

    def __init__(self, seed):
        self._state = np.array(
            [int(seed) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64
        )

    @property
    def state(self):
        return int(self._state[0])

    @property
    def state_array(self):
        return self._state

    def next_u64(self):
        with np.errstate(over="ignore"):
            return int(_next_u64(self._state))

    def u01(self):
        """Uniform on [0, 1)."""
        with np.errstate(over="ignore"):
            return float(_u01(self._state))

    def u01_open(self):
        """Uniform on the open interval (0, 1)."""
        u = self.u01()
        while u == 0.0:
            u = self.u01()
        return u

    def exponential(self, rate):
        """Exponential waiting time with the given rate, via inverse CDF."""
        if rate <= 0.0:
            raise ValueError("rate must be positive")
        return -np.log(self.u01_open()) / rate
