"""Acceptance suite: one test per numbered criterion, each printing a
PASS/FAIL line with the raw numbers next to its stated tolerance.

Heavy artifacts (the q=3 censuses at d = 10..16, the d=15 pattern census,
the q=101 Monte Carlo run) are session fixtures shared across criteria.
Run with `pytest tests/test_acceptance.py -v -s` to watch the lines.
"""

import itertools
import math
import time
from fractions import Fraction

import pytest

from charcensus import (
    build_field,
    build_trinomial,
    census_char_sums,
    census_point_values,
    check_lemma_surjectivity,
    compare_to_trinomial,
    count_squarefree,
    model_moment,
    pattern_probability,
    prop_main_term,
    run_distribution,
    zeta_series_check,
)
from charcensus.charsum import census_char_sums_reference, make_shards, merge_histograms
from charcensus.experiments import MC_CHUNK, check_sign_patterns
from charcensus.models import error_bound_values

THREADS = 2
MC_SEED = 20260810

pytestmark = pytest.mark.slow


def _line(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


@pytest.fixture(scope="session")
def dist3():
    field = build_field(3)
    return {d: run_distribution(field, d, threads=THREADS) for d in (10, 12, 14, 16)}


@pytest.fixture(scope="session")
def patterns15():
    return check_sign_patterns(build_field(3), 15, threads=THREADS)


@pytest.fixture(scope="session")
def mc101():
    field = build_field(101)
    return run_distribution(
        field, 60, mode="montecarlo", samples=2_000_000, seed=MC_SEED, threads=THREADS
    )


def test_criterion_1_exact_identities():
    t0 = time.perf_counter()
    failures = []

    # (a) exhaustive square-free counts equal q^d - q^(d-1)
    for p, k in ((3, 1), (5, 1), (3, 2)):
        field = build_field(p, k)
        for d in range(2, 8):
            got = census_point_values(field, d, (), squarefree_only=True).get((), 0)
            if got != count_squarefree(field.q, d):
                failures.append(f"1a q={field.q} d={d}: {got}")

    # (b) prescribed-value counts equal q^(d-l) for every constraint
    for p in (3, 5):
        field = build_field(p)
        for d in range(1, 5):
            for l in range(0, min(d, field.q) + 1):
                report = check_lemma_surjectivity(field, d, l)
                if not report.ok:
                    failures.append(f"1b q={p} d={d} l={l}: {len(report.violations)} violations")

    # (c) zeta series coefficients match to degree 30
    for q in (3, 5, 7):
        if not zeta_series_check(q, 30):
            failures.append(f"1c q={q}")

    # (d) pattern probability equals the i.i.d. product for q <= 13
    for q in (3, 5, 7, 9, 11, 13):
        model = build_trinomial(q)
        for m in range(q + 1):
            if pattern_probability(q, m) != model.p_zero**m * model.p_plus ** (q - m):
                failures.append(f"1d q={q} m={m}")

    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60.0
    assert _line(1, ok, f"exact identities, {elapsed:.1f}s (< 60s); failures={failures}")


def test_criterion_2_distribution_convergence(dist3):
    model = build_trinomial(3)
    reports = {d: compare_to_trinomial(emp, model) for d, emp in dist3.items()}
    details = []
    ok = True
    for d, report in sorted(reports.items()):
        bound = 10 * 3.0 ** ((9 - d) / 2)
        rels = [float(r.rel_err) for r in report.rows if r.rel_err is not None]
        assert len(rels) == 7  # every |s| <= 3 has model mass well above the floor
        worst = max(rels)
        ok &= worst <= bound
        details.append(f"d={d}: max|emp/model-1|={worst:.2e} vs {bound:.3f}")
    tvs = [reports[d].tv_distance for d in (10, 12, 14, 16)]
    tv_monotone = all(a > b for a, b in zip(tvs, tvs[1:]))
    ok &= tv_monotone
    details.append("tv=" + ",".join(f"{float(t):.2e}" for t in tvs))
    assert _line(2, ok, "; ".join(details) + f"; tv strictly decreasing={tv_monotone}")


def test_criterion_3_sign_patterns(patterns15):
    report = patterns15
    bound = 10 * 3.0**-3
    worst = float(report.max_rel_err)
    ok = len(report.rows) == 27 and worst <= bound
    assert _line(3, ok, f"27 patterns at d=15, worst rel err {worst:.4f} vs {bound:.4f}")


def test_criterion_4_moments(dist3, patterns15):
    emp16 = dist3[16]
    m2 = float(emp16.raw_moment(2)) / 3
    m4 = float(emp16.raw_moment(4)) / 9
    gap2 = abs(m2 - 0.75)
    gap4 = abs(m4 - float(model_moment(3, 4)))
    ok = gap2 <= 10 * 3.0**-5 and gap4 <= 10 * 3.0**-2

    # odd moments vanish exactly at odd degree (sign-symmetry bijection)
    field = build_field(3)
    odd_ok = True
    counts15 = {}
    for row in patterns15.rows:
        s = sum(row.pattern)
        counts15[s] = counts15.get(s, 0) + row.count
    for counts in (counts15, census_char_sums(field, 11), census_char_sums(field, 13)):
        for k in (1, 3, 5):
            odd_ok &= sum(c * s**k for s, c in counts.items()) == 0
    ok &= odd_ok
    assert _line(
        4,
        ok,
        f"|M2-3/4|={gap2:.2e} (<= {10 * 3.0**-5:.2e}); "
        f"|M4-model|={gap4:.2e} (<= {10 * 3.0**-2:.2e}); odd moments exactly 0: {odd_ok}",
    )


def _mc_moment_and_se(emp, k):
    mk = emp.normalized_moment(k)
    m2k = emp.normalized_moment(2 * k)
    se = math.sqrt(max(m2k - mk * mk, 0.0) / emp.total)
    return mk, se


def test_criterion_5_gaussian_moments(mc101):
    """As stated: m1, m3 within 5 SE of 0; m2 of 1; m4 of 3.

    The odd moments pass.  The even-moment checks are expected to fail for
    a *correct* implementation: the model second moment is q/(q+1), so m2
    concentrates 1/102 = 9.8e-3 below 1 while 5 SE at N = 2e6 is about
    4.9e-3 (and m4 concentrates near 2.9221, about 11 SE below 3).  The
    companion test next to this one shows the same run is within noise of
    the exact finite-q model, which is the substance of the limit theorem.
    """
    checks = []
    ok = True
    for k, target in ((1, 0.0), (2, 1.0), (3, 0.0), (4, 3.0)):
        mk, se = _mc_moment_and_se(mc101, k)
        z = (mk - target) / se
        passed = abs(mk - target) <= 5 * se
        ok &= passed
        checks.append(f"m{k}={mk:+.6f} target={target} z={z:+.1f} {'ok' if passed else 'MISS'}")
    _line(5, ok, "; ".join(checks))
    assert ok


def test_criterion_5_companion_model_centered(mc101):
    """Bias-aware variant: the same run against exact model moments."""
    ok = True
    details = []
    for k in (1, 2, 3, 4):
        mk, se = _mc_moment_and_se(mc101, k)
        target = float(model_moment(101, k))
        z = (mk - target) / se
        ok &= abs(z) <= 5
        details.append(f"m{k}: z={z:+.2f}")
    gauss_gap = abs(float(model_moment(101, 2)) - 1.0)
    details.append(f"model-vs-gaussian gap at k=2: {gauss_gap:.4f} = 1/(q+1)")
    assert _line("5-companion", ok, "; ".join(details))


REFERENCE_GRID_LARGE = [
    (3, 1, 12),
    (5, 1, 8),
    (7, 1, 6),
    (11, 1, 4),
    (13, 1, 4),
    (101, 1, 2),
    (3, 2, 6),
    (5, 2, 3),
    (3, 3, 3),
    (7, 2, 2),
    (11, 2, 2),
    (3, 5, 2),
]


def test_criterion_6_oracle_equivalences(f3):
    # (a) compiled kernel == fresh-Horner reference across the q^d <= 10^6 grid
    mismatch = []
    for p, k, d in REFERENCE_GRID_LARGE:
        field = build_field(p, k)
        assert field.q**d <= 10**6
        if census_char_sums(field, d) != census_char_sums_reference(field, d):
            mismatch.append((p, k, d))

    # (b) sharded runs merge to the serial result, bit for bit
    serial = census_char_sums(f3, 10)
    shard_ok = True
    for n in (2, 3, 5, 8):
        parts = [census_char_sums(f3, 10, shard=s) for s in make_shards(3, 10, n)]
        shard_ok &= merge_histograms(parts) == serial
    emp1 = run_distribution(f3, 10, threads=1)
    emp2 = run_distribution(f3, 10, threads=2)
    shard_ok &= emp1.counts == emp2.counts

    # (c) Monte Carlo reproducibility across thread counts
    n = 2 * MC_CHUNK + 7777
    mc_a = run_distribution(f3, 12, mode="montecarlo", samples=n, seed=77, threads=1)
    mc_b = run_distribution(f3, 12, mode="montecarlo", samples=n, seed=77, threads=2)
    mc_ok = mc_a.counts == mc_b.counts

    ok = not mismatch and shard_ok and mc_ok
    assert _line(
        6,
        ok,
        f"kernel==reference on {len(REFERENCE_GRID_LARGE)} grid points "
        f"(mismatches={mismatch}); shard merges bit-for-bit: {shard_ok}; "
        f"MC thread-invariant: {mc_ok}",
    )


def test_criterion_7_value_probabilities():
    field = build_field(3)
    d = 12
    cells = census_point_values(field, d, (0, 1, 2), squarefree_only=True)
    total = count_squarefree(3, d)

    def frequency(points, values):
        hits = sum(
            c for tup, c in cells.items()
            if all(tup[x] == v for x, v in zip(points, values))
        )
        return Fraction(hits, total)

    ok = True
    details = []
    for l, m in ((1, 0), (0, 1), (1, 1), (2, 0)):
        worst = Fraction(0)
        model = prop_main_term(3, l, m)
        for points in itertools.permutations(range(3), l + m):
            for nonzero in itertools.product((1, 2), repeat=l):
                values = list(nonzero) + [0] * m
                rel = abs(frequency(points, values) / model - 1)
                worst = max(worst, rel)
        bound = 10 * error_bound_values(3, d, l, m)
        ok &= float(worst) <= bound
        details.append(f"(l={l},m={m}): worst={float(worst):.2e} vs {bound:.3f}")
    assert _line(7, ok, "; ".join(details))
