from fractions import Fraction

import numpy as np
import pytest

from napkin.genfun import build_full
from napkin.model import Params, replay_circular
from napkin.montecarlo import RNG_ALGORITHM, _run, montecarlo, sample_trial
from napkin.stats import expected_napkinless_exact, moments


def per_trial(n, p, seed, trials):
    o = np.empty(trials, np.int64)
    m = np.empty(trials, np.int64)
    _run(n, float(p), seed, trials, o, m)
    return o, m


def test_kernel_agrees_with_replay():
    o, m = per_trial(9, Fraction(1, 3), 5, 200)
    for t in range(200):
        out = replay_circular(sample_trial(9, "1/3", 5, t))
        assert (out.o, out.m) == (o[t], m[t])


def test_trials_do_not_depend_on_batch_size():
    a, _ = per_trial(50, 0.5, 11, 100)
    b, _ = per_trial(50, 0.5, 11, 300)
    assert (a == b[:100]).all()


def test_rerun_is_identical():
    a = montecarlo(200, "1/2", 3000, seed=42)
    b = montecarlo(200, "1/2", 3000, seed=42)
    assert a == b
    assert a != montecarlo(200, "1/2", 3000, seed=43)
    assert a.to_json()["rng"] == RNG_ALGORITHM


def test_n3_million_trials():
    r = montecarlo(3, "1/2", 10**6, seed=42)
    mean, se = r.napkinless
    target = float(expected_napkinless_exact(3, "1/2")) / 3
    assert abs(mean - target) < 4 * se


@pytest.mark.parametrize("n, p", [(5, "1/3"), (7, "69/100")])
def test_small_n_matches_exact(n, p):
    rep = moments(build_full(p, n), n)
    r = montecarlo(n, p, 200_000, seed=7)
    for name, exact in (("napkinless", rep.E_napkinless), ("frustrated", rep.E_frustrated),
                        ("happy", rep.E_happy)):
        mean, se = getattr(r, name)
        assert abs(mean - float(exact) / n) < 5 * se, name


def test_fractions_add_up():
    r = montecarlo(40, "1/2", 1000, seed=1)
    total = r.napkinless[0] + r.frustrated[0] + r.happy[0]
    assert total == pytest.approx(1.0, abs=1e-12)


def test_degenerate_p_has_no_napkinless():
    r = montecarlo(30, Params(1), 500, seed=3)
    assert r.sum_o == 0 and r.sum_m == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        montecarlo(0, "1/2", 10)
    with pytest.raises(ValueError):
        montecarlo(5, "1/2", 0)
