"""Exact-rational predictions: the trinomial sum law, prescribed-value and
sign-pattern probabilities, moments, and the power-decay error bounds.

Everything here is computed with fractions.Fraction; floating point enters
only in the error-bound helpers (which are magnitudes, not identities).
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .polyring import count_squarefree


def _is_odd_prime_power(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            while q % f == 0:
                q //= f
            return q == 1
        f += 2
    return True  # q itself is prime


@dataclass(frozen=True)
class TrinomialModel:
    """Law of one +1/0/-1 trinomial variable and of the sum of q i.i.d. copies.

    A single variable takes -1, 0, +1 with probabilities q/(2(q+1)),
    1/(q+1), q/(2(q+1)); sum_dist[s + q] is the exact probability that the
    q-fold sum equals s.
    """

    q: int
    p_zero: Fraction
    p_plus: Fraction
    p_minus: Fraction
    sum_dist: tuple[Fraction, ...]

    def prob(self, s: int) -> Fraction:
        if -self.q <= s <= self.q:
            return self.sum_dist[s + self.q]
        return Fraction(0)


@functools.lru_cache(maxsize=None)
def build_trinomial(q: int) -> TrinomialModel:
    """Exact q-fold convolution of the trinomial law (integer-weight DP).

    The formulas are defined for any q >= 1, but the distribution models a
    field census only when q is an odd prime power >= 3; other q warn.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if not _is_odd_prime_power(q):
        warnings.warn(f"q={q} is not an odd prime power >= 3; model is formal only")
    p_zero = Fraction(1, q + 1)
    p_plus = Fraction(q, 2 * (q + 1))
    # integer weights (q, 2, q) over the common denominator 2(q+1) per step
    weights = (q, 2, q)
    cur = [1]  # support [-i, i] after i steps
    for _ in range(q):
        nxt = [0] * (len(cur) + 2)
        for j, c in enumerate(cur):
            if c:
                for t, wt in enumerate(weights):
                    nxt[j + t] += c * wt
        cur = nxt
    denom = (2 * (q + 1)) ** q
    dist = tuple(Fraction(c, denom) for c in cur)
    assert sum(dist) == 1 and dist == dist[::-1]
    return TrinomialModel(q=q, p_zero=p_zero, p_plus=p_plus, p_minus=p_plus, sum_dist=dist)


def pattern_probability(q: int, m: int) -> Fraction:
    """Probability of one fixed sign pattern with exactly m zeros:
    2^-(q-m) * q^-m / (1 + 1/q)^q, exactly."""
    if not 0 <= m <= q:
        raise ValueError(f"need 0 <= m <= q, got m={m}")
    return Fraction(1, 2 ** (q - m)) * Fraction(1, q**m) / (1 + Fraction(1, q)) ** q


def lemma_nonzero_main_term(q: int, l: int) -> Fraction:
    """Main term q^-l / (1 - q^-2)^l for l prescribed nonzero values."""
    if l < 0:
        raise ValueError("l must be >= 0")
    return Fraction(1, q**l) / (1 - Fraction(1, q**2)) ** l


def prop_main_term(q: int, l: int, m: int) -> Fraction:
    """Main term (1 - 1/q)^m q^-(m+l) / (1 - q^-2)^(m+l) for l nonzero and
    m zero prescribed values; reduces to lemma_nonzero_main_term at m=0."""
    if l < 0 or m < 0:
        raise ValueError("l and m must be >= 0")
    return (
        (1 - Fraction(1, q)) ** m
        * Fraction(1, q ** (m + l))
        / (1 - Fraction(1, q**2)) ** (m + l)
    )


def model_moment(q: int, k: int) -> Fraction:
    """E[(sum of q trinomials / sqrt(q))^k], exact; 0 for odd k.

    For even k the normalization q^(k/2) is an integer, so the value is an
    exact rational; odd moments vanish by symmetry.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    model = build_trinomial(q)
    raw = sum(p * Fraction(s - q) ** k for s, p in enumerate(model.sum_dist))
    if k % 2 == 1:
        assert raw == 0
        return Fraction(0)
    return raw / q ** (k // 2)


def gaussian_moment(k: int) -> int:
    """Standard Gaussian moments: (k-1)!! for even k, 0 for odd k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k % 2 == 1:
        return 0
    return math.prod(range(1, k, 2))


def _power_bound(q: int, exponent2: int) -> float:
    """q^(exponent2 / 2) as a float, inf on overflow."""
    try:
        return float(math.pow(q, exponent2 / 2))
    except OverflowError:
        return math.inf


def error_bound_theorem1(q: int, d: int) -> float:
    """Decay rate q^((3q - d)/2) of the distribution comparison.

    Informative only for d > 3q; callers scale by their check constant C.
    """
    return _power_bound(q, 3 * q - d)


def error_bound_moment(q: int, d: int, k: int) -> float:
    """Decay rate q^((3k - d)/2) of the k-th moment comparison."""
    return _power_bound(q, 3 * k - d)


def error_bound_values(q: int, d: int, l: int, m: int) -> float:
    """Decay rate q^((3m + 2l - d)/2) of the prescribed-value comparison."""
    return _power_bound(q, 3 * m + 2 * l - d)


def zeta_series_check(q: int, max_degree: int, squarefree_counts=None) -> bool:
    """Formal power-series identity test in u = q^-s up to the given degree.

    The series 1/(1 - q u) must equal 1/(1 - q u^2) times the generating
    series of the square-free counts; coefficients are compared as exact
    integers.  A counts override exists so tests can falsify mutants.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if squarefree_counts is None:
        squarefree_counts = [count_squarefree(q, n) for n in range(max_degree + 1)]
    for n in range(max_degree + 1):
        rhs = sum(q**j * squarefree_counts[n - 2 * j] for j in range(n // 2 + 1))
        if rhs != q**n:
            return False
    return True
