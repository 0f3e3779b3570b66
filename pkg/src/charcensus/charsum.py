"""Character sums S(F) = sum_x chi(F(x)) and exhaustive censuses over V_d.

The census kernel visits polynomials in odometer order (constant
coefficient innermost) and keeps the length-q vector of values F(x) in
step with the cursor: a constant-coefficient step adds the difference of
consecutive constants to every entry (literally +1 in a prime field), and
a carry into higher coefficients triggers a fresh Horner recomputation.
Square-freeness is a gcd(F, F') descent per polynomial.  The hot loop is
numba-compiled and releases the GIL, so shards run on plain threads.

A pure-Python reference census (fresh Horner evaluation and scalar gcd per
polynomial) is kept alongside as the independent oracle; the two must
agree exactly, and the test suite enforces that.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import CensusBudgetExceeded, HistogramOverflow
from .fields import FieldSpec
from .polyring import (
    DEFAULT_CENSUS_BUDGET,
    MonicPoly,
    enumerate_monic,
    evaluate,
    is_squarefree,
)

MAX_CENSUS_CELLS = 1 << 22  # bound on pattern/value histogram size
COUNTER_LIMIT = 2**62  # headroom guard for the int64 histogram cells

NO_SAMPLE = int(_kernels.NO_SAMPLE)  # sentinel from batch_char_sums

_MODE_CHAR_SUM = 0
_MODE_PATTERNS = 1
_MODE_VALUES = 2


def char_sum(field: FieldSpec, poly: MonicPoly) -> int:
    """S(F) = sum over x in F_q of chi(F(x)); an integer in [-q, q]."""
    return sum(field.quad_char(evaluate(field, poly, x)) for x in range(field.q))


def point_count(field: FieldSpec, poly: MonicPoly) -> int:
    """q + 1 + S(F).

    For square-free F of degree >= 3 this is the number of projective
    points on Y^2 = F(X) over F_q; the formula is computed for any F.
    """
    return field.q + 1 + char_sum(field, poly)


def make_shards(q: int, d: int, n_shards: int) -> list[tuple[int, int]]:
    """Split the odometer index range [0, q^d) into contiguous shards.

    Boundaries are multiples of q, so every shard is a union of
    constant-coefficient groups (equivalently: fixes a prefix of
    high-order coefficients).  Shard histograms merge by integer addition
    to the serial result.
    """
    total = q**d
    if d == 0 or n_shards <= 1:
        return [(0, total)]
    groups = q ** (d - 1)
    n_shards = min(n_shards, groups)
    edges = [round(i * groups / n_shards) * q for i in range(n_shards + 1)]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if a < b]


def _resolve_range(field, d, shard, budget):
    total = field.q**d
    if shard is None:
        shard = (0, total)
    start, stop = shard
    if not 0 <= start <= stop <= total:
        raise ValueError(f"invalid shard {shard} for q^d = {total}")
    if total > COUNTER_LIMIT:
        raise HistogramOverflow(f"q^d = {total} cannot be counted in 64-bit cells")
    limit = DEFAULT_CENSUS_BUDGET if budget is None else budget
    if stop - start > limit:
        raise CensusBudgetExceeded(
            f"census over {stop - start} polynomials exceeds budget {limit}"
        )
    return start, stop


def _run_kernel(field, d, start, stop, squarefree_only, mode, points, weights, hist):
    if stop <= start:
        return hist
    chi, log_t, exp_t, inv_t, neg_t, add_t = field.kernel_tables()
    _kernels.census_kernel(
        field.p, field.k, field.q, d, start, stop, squarefree_only,
        chi, log_t, exp_t, inv_t, neg_t, add_t,
        mode, points, weights, hist,
    )
    return hist


def census_char_sums(
    field: FieldSpec,
    d: int,
    shard: tuple[int, int] | None = None,
    squarefree_only: bool = True,
    budget: int | None = None,
) -> dict[int, int]:
    """Exact histogram {s: #F with S(F) = s} over a shard of V_d (or F_d)."""
    start, stop = _resolve_range(field, d, shard, budget)
    q = field.q
    hist = np.zeros(2 * q + 1, dtype=np.int64)
    empty = np.empty(0, dtype=np.int64)
    _run_kernel(field, d, start, stop, squarefree_only, _MODE_CHAR_SUM, empty, empty, hist)
    return {int(s - q): int(c) for s, c in enumerate(hist) if c}


def census_value_patterns(
    field: FieldSpec,
    d: int,
    points,
    shard: tuple[int, int] | None = None,
    squarefree_only: bool = True,
    budget: int | None = None,
) -> dict[tuple[int, ...], int]:
    """Exact counts of the sign pattern (chi(F(x_1)), ..., chi(F(x_n))) over F_d."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ValueError("pattern points must be pairwise distinct")
    if any(not 0 <= x < field.q for x in points):
        raise ValueError("points must be canonical indices in [0, q)")
    n = len(points)
    if 3**n > MAX_CENSUS_CELLS:
        raise CensusBudgetExceeded(f"3^{n} pattern cells exceed the histogram bound")
    start, stop = _resolve_range(field, d, shard, budget)
    pts = np.asarray(points, dtype=np.int64)
    weights = 3 ** np.arange(n, dtype=np.int64)
    hist = np.zeros(3**n, dtype=np.int64)
    _run_kernel(field, d, start, stop, squarefree_only, _MODE_PATTERNS, pts, weights, hist)
    out = {}
    for cell, count in enumerate(hist):
        if count:
            eps = tuple(int((cell // 3**i) % 3) - 1 for i in range(n))
            out[eps] = int(count)
    return out


def census_point_values(
    field: FieldSpec,
    d: int,
    points,
    shard: tuple[int, int] | None = None,
    squarefree_only: bool = False,
    budget: int | None = None,
) -> dict[tuple[int, ...], int]:
    """Exact counts of the raw value tuple (F(x_1), ..., F(x_n)) over V_d or F_d."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ValueError("census points must be pairwise distinct")
    if any(not 0 <= x < field.q for x in points):
        raise ValueError("points must be canonical indices in [0, q)")
    n = len(points)
    q = field.q
    if q**n > MAX_CENSUS_CELLS:
        raise CensusBudgetExceeded(f"q^{n} value cells exceed the histogram bound")
    start, stop = _resolve_range(field, d, shard, budget)
    pts = np.asarray(points, dtype=np.int64)
    weights = q ** np.arange(n, dtype=np.int64)
    hist = np.zeros(q**n, dtype=np.int64)
    _run_kernel(field, d, start, stop, squarefree_only, _MODE_VALUES, pts, weights, hist)
    out = {}
    for cell, count in enumerate(hist):
        if count:
            tup = tuple(int((cell // q**i) % q) for i in range(n))
            out[tup] = int(count)
    return out


def batch_char_sums(field: FieldSpec, coeffs, squarefree_only: bool = True) -> np.ndarray:
    """S(F) per row of a full coefficient matrix (leading column = 1).

    Rows failing the square-free filter come back as _kernels.NO_SAMPLE.
    """
    chi, log_t, exp_t, inv_t, neg_t, add_t = field.kernel_tables()
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    out = np.empty(coeffs.shape[0], dtype=np.int64)
    _kernels.batch_char_sums(
        coeffs, field.p, field.k, field.q, squarefree_only,
        chi, log_t, exp_t, inv_t, neg_t, add_t, out,
    )
    return out


def batch_squarefree(field: FieldSpec, coeffs) -> np.ndarray:
    """Square-freeness per row of a full coefficient matrix (monic rows)."""
    chi, log_t, exp_t, inv_t, neg_t, add_t = field.kernel_tables()
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    out = np.empty(coeffs.shape[0], dtype=np.bool_)
    _kernels.batch_squarefree(
        coeffs, field.p, field.k, log_t, exp_t, inv_t, neg_t, add_t, out
    )
    return out


# ---------------------------------------------------------------------------
# Reference implementation (independent oracle)


def census_char_sums_reference(
    field: FieldSpec,
    d: int,
    squarefree_only: bool = True,
    budget: int | None = None,
) -> dict[int, int]:
    """Slow census: fresh Horner evaluation and scalar gcd per polynomial."""
    limit = DEFAULT_CENSUS_BUDGET if budget is None else budget
    if field.q**d > limit:
        raise CensusBudgetExceeded(f"reference census over q^{d} exceeds budget {limit}")
    hist: dict[int, int] = {}
    for poly in enumerate_monic(field, d):
        if squarefree_only and not is_squarefree(field, poly):
            continue
        s = char_sum(field, poly)
        hist[s] = hist.get(s, 0) + 1
    return hist


def merge_histograms(parts) -> dict:
    """Merge shard histograms by integer addition (schedule-independent)."""
    out: dict = {}
    for part in parts:
        for key, count in part.items():
            out[key] = out.get(key, 0) + count
    return out
