"""Monic polynomials over F_q: evaluation, gcd, square-free tests,
exhaustive enumeration in odometer order, and uniform square-free sampling.

A monic polynomial of degree d is a tuple of d coefficient indices
(coefficient of X^i at position i); the leading coefficient 1 is implicit.
Non-monic intermediates (derivatives, gcd remainders) are plain "raw"
tuples, lowest degree first, trimmed of trailing zeros; () is the zero
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CensusBudgetExceeded, SamplingStalled
from .fields import FieldSpec

DEFAULT_CENSUS_BUDGET = 10**8
SAMPLING_TRIAL_CAP = 10**4


@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial X^d + coeffs[d-1] X^{d-1} + ... + coeffs[0]."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class ValueConstraint:
    """Prescription F(points[i]) = values[i] at pairwise distinct points."""

    points: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError("points and values must have the same length")
        if len(set(self.points)) != len(self.points):
            raise ValueError("constraint points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)


def full_coeffs(poly: MonicPoly) -> tuple[int, ...]:
    """Coefficients including the leading 1, lowest degree first."""
    return poly.coeffs + (1,)


def evaluate(field: FieldSpec, poly: MonicPoly, x: int) -> int:
    """F(x) by Horner's rule, including the implicit leading term."""
    acc = 1
    for c in reversed(poly.coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def raw_evaluate(field: FieldSpec, raw: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in reversed(raw):
        acc = field.add(field.mul(acc, x), c)
    return acc


def derivative(field: FieldSpec, poly: MonicPoly) -> tuple[int, ...]:
    """Formal derivative as a raw tuple; the leading term gives (d mod p) X^{d-1}."""
    d = poly.degree
    coeffs = full_coeffs(poly)
    out = [field.mul(i % field.p, coeffs[i]) for i in range(1, d + 1)]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def raw_degree(raw: tuple[int, ...]) -> int:
    """Degree of a trimmed raw tuple; -1 for the zero polynomial."""
    return len(raw) - 1


def poly_gcd(field: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Monic gcd of two raw polynomials (gcd(0, 0) = 0)."""
    a, b = list(a), list(b)
    while b:
        # a mod b
        inv_lead = field.inv(b[-1])
        for i in range(len(a) - 1, len(b) - 2, -1):
            c = a[i]
            if c:
                f = field.mul(c, inv_lead)
                for j in range(len(b)):
                    a[i - len(b) + 1 + j] = field.sub(a[i - len(b) + 1 + j], field.mul(f, b[j]))
        del a[len(b) - 1 :]
        while a and a[-1] == 0:
            a.pop()
        a, b = b, a
    if a:
        inv_lead = field.inv(a[-1])
        a = [field.mul(c, inv_lead) for c in a]
    return tuple(a)


def is_squarefree(field: FieldSpec, poly: MonicPoly) -> bool:
    """True iff F has no repeated irreducible factor.

    Decided by gcd(F, F') being a nonzero constant; a zero derivative with
    d >= 1 means F is a p-th power, hence not square-free.
    """
    d = poly.degree
    if d == 0:
        return True
    deriv = derivative(field, poly)
    if not deriv:
        return False
    g = poly_gcd(field, full_coeffs(poly), deriv)
    return raw_degree(g) == 0


def count_squarefree(q: int, d: int) -> int:
    """Number of square-free monic degree-d polynomials over F_q, exactly."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    if d <= 1:
        return q**d
    return q**d - q ** (d - 1)


def check_budget(q: int, d: int, budget: int | None = None) -> int:
    """Raise CensusBudgetExceeded unless q^d fits the budget; returns q^d."""
    if budget is None:
        budget = DEFAULT_CENSUS_BUDGET
    total = q**d
    if total > budget:
        raise CensusBudgetExceeded(f"census over q^d = {q}^{d} = {total} exceeds budget {budget}")
    return total


def poly_from_index(field: FieldSpec, d: int, n: int) -> MonicPoly:
    """The n-th monic degree-d polynomial in odometer order.

    The constant coefficient varies fastest: coefficient of X^i is digit i
    of n in base q.
    """
    q = field.q
    return MonicPoly(tuple((n // q**i) % q for i in range(d)))


def poly_to_index(field: FieldSpec, poly: MonicPoly) -> int:
    return sum(c * field.q**i for i, c in enumerate(poly.coeffs))


def enumerate_monic(field: FieldSpec, d: int, start: int = 0, stop: int | None = None):
    """Yield monic degree-d polynomials in odometer order, indices [start, stop).

    Contiguous index ranges aligned to powers of q are exactly the shards
    that fix a prefix of high-order coefficients, so disjoint ranges may be
    consumed concurrently and merged.
    """
    total = field.q**d
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise ValueError(f"invalid enumeration range [{start}, {stop}) for q^d = {total}")
    coeffs = [(start // field.q**i) % field.q for i in range(d)]
    for _ in range(start, stop):
        yield MonicPoly(tuple(coeffs))
        for i in range(d):
            coeffs[i] += 1
            if coeffs[i] < field.q:
                break
            coeffs[i] = 0


def sample_squarefree(field: FieldSpec, d: int, rng: np.random.Generator) -> MonicPoly:
    """Uniform square-free monic polynomial of degree d >= 1 by rejection.

    Coefficients are drawn uniformly and redrawn until square-free; the
    acceptance rate is 1 - 1/q for d >= 2, so a trial cap of 10^4 is purely
    defensive.
    """
    if d < 1:
        raise ValueError("sampling needs d >= 1")
    for _ in range(SAMPLING_TRIAL_CAP):
        poly = MonicPoly(tuple(int(c) for c in rng.integers(0, field.q, size=d)))
        if is_squarefree(field, poly):
            return poly
    raise SamplingStalled(f"no square-free draw in {SAMPLING_TRIAL_CAP} trials (q={field.q}, d={d})")


def count_with_values(
    field: FieldSpec,
    d: int,
    constraint: ValueConstraint,
    squarefree_only: bool = False,
    budget: int | None = None,
) -> int:
    """Exact count of monic degree-d F with F(x_i) = a_i for all i, by brute force.

    Enumerates all of V_d; this is the small-scale oracle against which the
    vectorized censuses are checked.
    """
    check_budget(field.q, d, budget)
    hits = 0
    for poly in enumerate_monic(field, d):
        if all(evaluate(field, poly, x) == a for x, a in zip(constraint.points, constraint.values)):
            if not squarefree_only or is_squarefree(field, poly):
                hits += 1
    return hits


def format_poly(field: FieldSpec, poly: MonicPoly) -> str:
    """Render X^d + ... with coefficients in canonical form."""
    d = poly.degree
    parts = ["X" if d == 1 else f"X^{d}"] if d >= 1 else []
    for i in range(d - 1, -1, -1):
        c = poly.coeffs[i]
        if c == 0:
            continue
        name = field.format_element(c)
        if i == 0:
            parts.append(f"({name})" if field.k > 1 else name)
        else:
            x = "X" if i == 1 else f"X^{i}"
            if c == 1:
                parts.append(x)
            else:
                parts.append(f"({name})*{x}" if field.k > 1 else f"{name}*{x}")
    return " + ".join(parts) if parts else "1"
