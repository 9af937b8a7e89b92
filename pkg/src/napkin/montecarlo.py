"""Seeded Monte Carlo simulation of round tables.

Random numbers come from SplitMix64.  Every trial owns an independent
stream keyed by ``(seed, trial_index)``, so the result does not depend
on how trials are scheduled across threads; per-trial counts are
aggregated as exact integers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .model import Params, SignedPermutation

__all__ = ["MonteCarloResult", "montecarlo", "sample_trial", "RNG_ALGORITHM"]

RNG_ALGORITHM = "splitmix64/per-trial(seed,trial)"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 1.0 / 9007199254740992.0  # 2**-53


@numba.njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@numba.njit(inline="always")
def _trial_state(seed, trial):
    return _mix64(_mix64(seed) + np.uint64(trial + 1) * _GOLDEN)


@numba.njit(inline="always")
def _uniform(state):
    state = state + _GOLDEN
    return state, float(_mix64(state) >> np.uint64(11)) * _TO_UNIT


@numba.njit
def _draw(n, p, state, order, left):
    """Arrival order (Fisher-Yates over seats) then one preference per seat."""
    for i in range(n):
        order[i] = i
    for i in range(n - 1, 0, -1):
        state, u = _uniform(state)
        j = int(u * (i + 1))
        order[i], order[j] = order[j], order[i]
    for i in range(n):
        state, u = _uniform(state)
        left[i] = u < p
    return state


@numba.njit
def sample_arrays(n, p, seed, trial):
    order = np.empty(n, np.int64)
    left = np.empty(n, np.bool_)
    _draw(n, p, _trial_state(np.uint64(seed), trial), order, left)
    return order, left


@numba.njit(parallel=True)
def _run(n, p, seed, trials, out_o, out_m):
    useed = np.uint64(seed)
    for t in numba.prange(trials):
        order = np.empty(n, np.int64)
        left = np.empty(n, np.bool_)
        taken = np.zeros(n, np.bool_)
        _draw(n, p, _trial_state(useed, t), order, left)
        o = 0
        m = 0
        for k in range(n):
            s = order[k]
            lft = s
            rgt = s + 1
            if rgt == n:
                rgt = 0
            if left[s]:
                want, other = lft, rgt
            else:
                want, other = rgt, lft
            if not taken[want]:
                taken[want] = True
            elif not taken[other]:
                taken[other] = True
                m += 1
            else:
                o += 1
        out_o[t] = o
        out_m[t] = m


def _seed64(seed: int) -> int:
    return int(seed) & 0xFFFFFFFFFFFFFFFF


def sample_trial(n: int, params, seed: int, trial: int) -> SignedPermutation:
    """The signed permutation simulated as trial ``trial`` of ``montecarlo``."""
    params = params if isinstance(params, Params) else Params(params)
    order, left = sample_arrays(n, float(params.p), _seed64(seed), trial)
    entries = [0] * n
    for rank, seat in enumerate(order, start=1):
        entries[seat] = -rank if left[seat] else rank
    return SignedPermutation(entries)


@dataclass(frozen=True)
class MonteCarloResult:
    n: int
    p: Fraction
    trials: int
    seed: int
    sum_o: int
    sum_m: int
    sum_oo: int
    sum_mm: int
    sum_om: int
    algorithm: str = RNG_ALGORITHM

    def _mean_se(self, s: int, ss: int) -> tuple[float, float]:
        t = self.trials
        mean = s / t
        if t < 2:
            return mean / self.n, float("nan")
        var = (ss - s * s / t) / (t - 1)
        return mean / self.n, math.sqrt(max(var, 0.0) / t) / self.n

    @property
    def napkinless(self) -> tuple[float, float]:
        """(mean fraction, standard error)."""
        return self._mean_se(self.sum_o, self.sum_oo)

    @property
    def frustrated(self) -> tuple[float, float]:
        return self._mean_se(self.sum_m, self.sum_mm)

    @property
    def happy(self) -> tuple[float, float]:
        t, n = self.trials, self.n
        s = n * t - self.sum_o - self.sum_m
        # sum of (n - o - m)^2
        ss = (n * n * t - 2 * n * (self.sum_o + self.sum_m)
              + self.sum_oo + self.sum_mm + 2 * self.sum_om)
        return self._mean_se(s, ss)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "p": f"{self.p.numerator}/{self.p.denominator}",
            "trials": self.trials,
            "seed": self.seed,
            "rng": self.algorithm,
            "sums": {"o": self.sum_o, "m": self.sum_m, "oo": self.sum_oo,
                     "mm": self.sum_mm, "om": self.sum_om},
        }
        for name in ("napkinless", "frustrated", "happy"):
            mean, se = getattr(self, name)
            out[name] = {"mean_fraction": mean, "std_error": se}
        return out


def montecarlo(n: int, params, trials: int, seed: int = 0) -> MonteCarloResult:
    params = params if isinstance(params, Params) else Params(params)
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    out_o = np.empty(trials, np.int64)
    out_m = np.empty(trials, np.int64)
    with warnings.catch_warnings():
        # numba probes for TBB on first use and warns when it is too old; it
        # falls back to another threading layer, which is fine here
        warnings.filterwarnings("ignore", message="The TBB threading layer")
        _run(n, float(params.p), _seed64(seed), trials, out_o, out_m)
    if n * n * trials < 2**62:
        # int64 arithmetic is exact below this bound
        so, sm = int(out_o.sum()), int(out_m.sum())
        soo, smm, som = (int(np.dot(a, b)) for a, b in ((out_o, out_o), (out_m, out_m), (out_o, out_m)))
    else:
        o, m = out_o.tolist(), out_m.tolist()
        so, sm = sum(o), sum(m)
        soo = sum(v * v for v in o)
        smm = sum(v * v for v in m)
        som = sum(a * b for a, b in zip(o, m))
    return MonteCarloResult(n, params.p, trials, seed, so, sm, soo, smm, som)
