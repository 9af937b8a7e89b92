"""Exact distribution of napkinless and frustrated guests at banquet tables."""

from .model import (
    Params,
    SignedPermutation,
    Status,
    TableOutcome,
    Weight,
    mirror,
    parse_rational,
    replay_circular,
    replay_linear,
    rotate,
    weight_of,
)
from .series import XYPoly, ZSeries, eval_x1, eval_y1, solve_ode_quadratic
from .genfun import (
    GFSet,
    IdentityReport,
    build_everyone_served,
    build_full,
    build_H,
    build_L0,
    verify_identities,
)
from .bipartition import (
    Block,
    CyclicBipartition,
    OrderedBipartition,
    decode_circular,
    decode_linear,
    encode_circular,
    encode_linear,
    is_valid_image,
    join_pair,
    napkinless_rotation,
    split_marked,
)
from .oracle import JointDistribution, enumerate_napkinless_seat1, enumerate_table
from .stats import (
    StatReport,
    asymptotic_slopes,
    expected_napkinless_exact,
    expected_napkinless_recurrence,
    expected_napkinless_series,
    moments,
)

__version__ = "0.1.0"


def montecarlo(n, params, trials, seed=0):
    """Seeded simulation of round tables; see :mod:`napkin.montecarlo`.

    Imported lazily so that numba is only loaded when simulating.
    """
    from .montecarlo import montecarlo as _mc

    return _mc(n, params, trials, seed)
