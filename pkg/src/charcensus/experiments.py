"""Census and Monte Carlo orchestration plus model comparisons.

Exhaustive runs shard the odometer range and merge integer histograms,
so results are independent of worker count and scheduling.  Monte Carlo
runs draw from one PRNG stream per fixed-size chunk of the sample index
range (stream i is PCG64 seeded with SeedSequence(seed, spawn_key=(i,))),
which makes histograms reproducible for a given seed regardless of the
number of workers.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import charsum, models
from .errors import CharCensusError, InvalidMode, ModelMismatch
from .fields import FieldSpec
from .polyring import (
    ValueConstraint,
    check_budget,
    count_squarefree,
    count_with_values,
)

MC_CHUNK = 1 << 16  # samples per derived PRNG stream (fixed: see module docstring)
MC_BATCH_ROWS = 1 << 15  # candidate rows drawn per rejection round
STREAM_SCHEME = f"pcg64-seedseq-spawnkey-chunk{MC_CHUNK}"
DEFAULT_CHECK_CONSTANT = 10.0
REL_ERR_MODEL_FLOOR = Fraction(1, 10**6)  # report rel. errors only above this model mass

EXHAUSTIVE = "exhaustive"
MONTECARLO = "montecarlo"


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Histogram of S(F) with full provenance.

    total is |F_d| for exhaustive mode and the sample count N for Monte
    Carlo; counts maps s to a nonnegative integer and sums to total.
    """

    q: int
    d: int
    mode: str
    counts: dict[int, int]
    total: int
    seed: int | None = None

    def probability(self, s: int) -> Fraction:
        return Fraction(self.counts.get(s, 0), self.total)

    def raw_moment(self, k: int) -> Fraction:
        """E[S^k] over the empirical data, exact."""
        return Fraction(sum(c * s**k for s, c in self.counts.items()), self.total)

    def normalized_moment(self, k: int) -> float:
        """E[(S/sqrt(q))^k] over the empirical data."""
        return float(self.raw_moment(k)) / math.pow(self.q, k / 2)


@dataclass(frozen=True)
class ComparisonRow:
    s: int
    count: int
    empirical: Fraction
    model: Fraction
    abs_err: Fraction
    rel_err: Fraction | None  # None where the model mass is below the floor


@dataclass(frozen=True)
class ComparisonReport:
    q: int
    d: int
    mode: str
    total: int
    seed: int | None
    check_constant: float
    rows: tuple[ComparisonRow, ...]
    tv_distance: Fraction
    max_rel_err: Fraction | None
    bound: float
    bound_informative: bool  # the comparison rate is informative only for d > 3q
    verdict: bool


@dataclass(frozen=True)
class MomentRow:
    k: int
    raw: Fraction  # E[S^k], exact
    empirical: float  # E[(S/sqrt q)^k]
    model: Fraction
    gaussian: int
    bound: float
    stderr: float | None  # Monte Carlo only
    within_bound: bool


@dataclass(frozen=True)
class MomentReport:
    q: int
    d: int
    mode: str
    total: int
    seed: int | None
    check_constant: float
    rows: tuple[MomentRow, ...]
    verdict: bool


@dataclass(frozen=True)
class SurjectivityReport:
    q: int
    d: int
    l: int
    expected: int  # q^(d-l), the exact prescribed-value count
    checked: int
    violations: tuple
    mode: str  # "all" or "sampled"
    ok: bool


@dataclass(frozen=True)
class ValueProbReport:
    q: int
    d: int
    l: int
    m: int
    points: tuple[int, ...]
    values: tuple[int, ...]
    count: int
    frequency: Fraction
    model: Fraction
    rel_err: Fraction
    bound: float
    check_constant: float
    verdict: bool


@dataclass(frozen=True)
class PatternRow:
    pattern: tuple[int, ...]
    zeros: int
    count: int
    empirical: Fraction
    model: Fraction
    rel_err: Fraction


@dataclass(frozen=True)
class PatternReport:
    q: int
    d: int
    total: int
    check_constant: float
    rows: tuple[PatternRow, ...]
    max_rel_err: Fraction
    bound: float
    verdict: bool


# ---------------------------------------------------------------------------
# Parallel census plumbing (kernels release the GIL, so threads suffice)


def _parallel_census(field, d, kind, points, squarefree_only, threads, budget):
    check_budget(field.q, d, budget)
    shards = charsum.make_shards(field.q, d, max(1, threads) * 4)

    def job(shard):
        if kind == "charsum":
            return charsum.census_char_sums(
                field, d, shard=shard, squarefree_only=squarefree_only, budget=budget
            )
        if kind == "patterns":
            return charsum.census_value_patterns(
                field, d, points, shard=shard, squarefree_only=squarefree_only, budget=budget
            )
        if kind == "values":
            return charsum.census_point_values(
                field, d, points, shard=shard, squarefree_only=squarefree_only, budget=budget
            )
        raise AssertionError(f"unknown census kind {kind!r}")

    if threads <= 1 or len(shards) == 1:
        parts = [job(s) for s in shards]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, shards))
    return charsum.merge_histograms(parts)


# ---------------------------------------------------------------------------
# Monte Carlo sampling


def _mc_chunk_histogram(field, d, seed, chunk_index, n_samples):
    """Histogram of n_samples square-free draws from this chunk's own stream."""
    q = field.q
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))
    )
    hist = np.zeros(2 * q + 1, dtype=np.int64)
    got = 0
    while got < n_samples:
        need = n_samples - got
        rows = min(MC_BATCH_ROWS, max(64, need + need // 8 + 16))
        coeffs = np.empty((rows, d + 1), dtype=np.int64)
        coeffs[:, :d] = rng.integers(0, q, size=(rows, d), dtype=np.int64)
        coeffs[:, d] = 1
        s = charsum.batch_char_sums(field, coeffs, squarefree_only=True)
        s = s[s != charsum.NO_SAMPLE][:need]
        hist += np.bincount(s + q, minlength=2 * q + 1)
        got += s.size
    return {int(s - q): int(c) for s, c in enumerate(hist) if c}


def _run_montecarlo(field, d, samples, seed, threads):
    if d < 1:
        raise ValueError("Monte Carlo sampling needs d >= 1")
    if samples < 1:
        raise ValueError("Monte Carlo mode needs a positive sample count")
    n_chunks = -(-samples // MC_CHUNK)
    sizes = [min(MC_CHUNK, samples - i * MC_CHUNK) for i in range(n_chunks)]

    def job(i):
        return _mc_chunk_histogram(field, d, seed, i, sizes[i])

    if threads <= 1 or n_chunks == 1:
        parts = [job(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(n_chunks)))
    return charsum.merge_histograms(parts)


# ---------------------------------------------------------------------------
# Top-level runs


def run_distribution(
    field: FieldSpec,
    d: int,
    mode: str = EXHAUSTIVE,
    samples: int | None = None,
    seed: int = 0,
    threads: int = 1,
    budget: int | None = None,
) -> EmpiricalDistribution:
    """Histogram of S(F) over F_d: exact census or seeded Monte Carlo."""
    if mode == EXHAUSTIVE:
        counts = _parallel_census(field, d, "charsum", None, True, threads, budget)
        expected = count_squarefree(field.q, d)
        total = sum(counts.values())
        if total != expected:
            raise CharCensusError(
                f"census mass {total} != |F_d| = {expected}; kernel defect"
            )
        return EmpiricalDistribution(field.q, d, mode, counts, expected, None)
    if mode == MONTECARLO:
        if samples is None:
            raise ValueError("Monte Carlo mode needs samples=N")
        counts = _run_montecarlo(field, d, samples, seed, threads)
        if sum(counts.values()) != samples:
            raise CharCensusError("Monte Carlo histogram mass does not match N")
        return EmpiricalDistribution(field.q, d, mode, counts, samples, seed)
    raise InvalidMode(f"unknown mode {mode!r}; expected '{EXHAUSTIVE}' or '{MONTECARLO}'")


def compare_to_trinomial(
    emp: EmpiricalDistribution,
    model: models.TrinomialModel,
    check_constant: float = DEFAULT_CHECK_CONSTANT,
) -> ComparisonReport:
    """Per-value and aggregate discrepancies against the trinomial sum law."""
    if emp.q != model.q:
        raise ModelMismatch(f"empirical q={emp.q} vs model q={model.q}")
    q = emp.q
    rows = []
    tv = Fraction(0)
    max_rel: Fraction | None = None
    for s in range(-q, q + 1):
        count = emp.counts.get(s, 0)
        e = emp.probability(s)
        mprob = model.prob(s)
        abs_err = abs(e - mprob)
        tv += abs_err
        rel = None
        if mprob >= REL_ERR_MODEL_FLOOR:
            rel = abs(e / mprob - 1)
            if max_rel is None or rel > max_rel:
                max_rel = rel
        rows.append(ComparisonRow(s, count, e, mprob, abs_err, rel))
    bound = check_constant * models.error_bound_theorem1(q, emp.d)
    informative = emp.d > 3 * q
    verdict = True if not informative else (max_rel is None or max_rel <= bound)
    return ComparisonReport(
        q=q,
        d=emp.d,
        mode=emp.mode,
        total=emp.total,
        seed=emp.seed,
        check_constant=check_constant,
        rows=tuple(rows),
        tv_distance=tv / 2,
        max_rel_err=max_rel,
        bound=bound,
        bound_informative=informative,
        verdict=verdict,
    )


def run_moments(
    field: FieldSpec,
    d: int,
    mode: str = EXHAUSTIVE,
    samples: int | None = None,
    seed: int = 0,
    k_max: int = 8,
    threads: int = 1,
    budget: int | None = None,
    check_constant: float = DEFAULT_CHECK_CONSTANT,
    distribution: EmpiricalDistribution | None = None,
) -> MomentReport:
    """Empirical moments M_k = E[(S/sqrt q)^k] against model and Gaussian values.

    Pass a precomputed distribution to reuse an existing census.
    """
    emp = distribution
    if emp is None:
        emp = run_distribution(field, d, mode, samples, seed, threads, budget)
    q = field.q
    rows = []
    verdict = True
    for k in range(1, k_max + 1):
        raw = emp.raw_moment(k)
        empirical = float(raw) / math.pow(q, k / 2)
        model = models.model_moment(q, k)
        bound = check_constant * models.error_bound_moment(q, d, k)
        stderr = None
        if emp.mode == MONTECARLO:
            m2k = emp.normalized_moment(2 * k)
            stderr = math.sqrt(max(m2k - empirical**2, 0.0) / emp.total)
        tolerance = bound if stderr is None else bound + 5 * stderr
        within = abs(empirical - float(model)) <= tolerance
        if 3 * k < d:  # the rate is informative for this k
            verdict &= within
        rows.append(
            MomentRow(k, raw, empirical, model, models.gaussian_moment(k), bound, stderr, within)
        )
    return MomentReport(
        q=q,
        d=d,
        mode=emp.mode,
        total=emp.total,
        seed=emp.seed,
        check_constant=check_constant,
        rows=tuple(rows),
        verdict=verdict,
    )


def check_lemma_surjectivity(
    field: FieldSpec,
    d: int,
    l: int,
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
) -> SurjectivityReport:
    """Verify that prescribed-value counts over V_d equal q^(d-l) exactly.

    With trials=None every choice of l points and l values is checked via
    exhaustive value censuses; otherwise `trials` random constraints are
    counted one by one with the brute-force oracle.
    """
    q = field.q
    if not 0 <= l <= min(d, q):
        raise ValueError(f"need 0 <= l <= min(d, q), got l={l}")
    expected = q ** (d - l)
    violations = []
    checked = 0
    if trials is None:
        for pts in itertools.combinations(range(q), l):
            cells = charsum.census_point_values(field, d, pts, squarefree_only=False, budget=budget)
            for values in itertools.product(range(q), repeat=l):
                got = cells.get(values, 0)
                checked += 1
                if got != expected:
                    violations.append({"points": pts, "values": values, "count": got})
        mode = "all"
    else:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed)))
        for _ in range(trials):
            pts = tuple(int(x) for x in rng.choice(q, size=l, replace=False))
            values = tuple(int(a) for a in rng.integers(0, q, size=l))
            got = count_with_values(field, d, ValueConstraint(pts, values), budget=budget)
            checked += 1
            if got != expected:
                violations.append({"points": pts, "values": values, "count": got})
        mode = "sampled"
    return SurjectivityReport(
        q=q, d=d, l=l, expected=expected, checked=checked,
        violations=tuple(violations), mode=mode, ok=not violations,
    )


def check_value_probabilities(
    field: FieldSpec,
    d: int,
    constraint: ValueConstraint,
    check_constant: float = DEFAULT_CHECK_CONSTANT,
    threads: int = 1,
    budget: int | None = None,
) -> ValueProbReport:
    """Frequency of a prescribed-value event over F_d versus its main term.

    The constraint splits into l nonzero and m zero prescribed values; the
    comparison rate is q^((3m + 2l - d)/2).
    """
    q = field.q
    m = sum(1 for a in constraint.values if a == 0)
    l = len(constraint) - m
    cells = _parallel_census(field, d, "values", constraint.points, True, threads, budget)
    count = cells.get(tuple(constraint.values), 0)
    total = count_squarefree(q, d)
    freq = Fraction(count, total)
    model = models.prop_main_term(q, l, m)
    rel = abs(freq / model - 1)
    bound = check_constant * models.error_bound_values(q, d, l, m)
    return ValueProbReport(
        q=q, d=d, l=l, m=m,
        points=tuple(constraint.points), values=tuple(constraint.values),
        count=count, frequency=freq, model=model, rel_err=rel,
        bound=bound, check_constant=check_constant, verdict=bool(rel <= bound),
    )


def check_sign_patterns(
    field: FieldSpec,
    d: int,
    check_constant: float = DEFAULT_CHECK_CONSTANT,
    threads: int = 1,
    budget: int | None = None,
) -> PatternReport:
    """All 3^q sign patterns over the full point set versus the model law."""
    q = field.q
    counts = _parallel_census(field, d, "patterns", tuple(range(q)), True, threads, budget)
    total = count_squarefree(q, d)
    rows = []
    max_rel = Fraction(0)
    for pattern in itertools.product((-1, 0, 1), repeat=q):
        m = pattern.count(0)
        count = counts.get(pattern, 0)
        empirical = Fraction(count, total)
        model = models.pattern_probability(q, m)
        rel = abs(empirical / model - 1)
        max_rel = max(max_rel, rel)
        rows.append(PatternRow(pattern, m, count, empirical, model, rel))
    bound = check_constant * models.error_bound_theorem1(q, d)
    return PatternReport(
        q=q, d=d, total=total, check_constant=check_constant,
        rows=tuple(rows), max_rel_err=max_rel, bound=bound,
        verdict=bool(max_rel <= bound),
    )
