"""Command-line entry point: runs, verifications, and report serialization.

Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on
usage, validation, or budget errors.  Reports embed full provenance (the
config, seed, version, and timings); re-running the printed config
reproduces the report apart from the timestamp/timing fields.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__, charsum, experiments, models
from .errors import CharCensusError
from .fields import build_field
from .polyring import (
    ValueConstraint,
    count_squarefree,
    format_poly,
    sample_squarefree,
)

BUDGET_ENV_VAR = "CHARCENSUS_BUDGET"


@dataclass
class RunConfig:
    command: str
    p: int = 3
    k: int = 1
    d: int = 2
    mode: str = experiments.EXHAUSTIVE
    samples: int | None = None
    seed: int = 0
    threads: int = 1
    budget: int | None = None
    check_constant: float = experiments.DEFAULT_CHECK_CONSTANT
    out_format: str | None = None  # None = human text, else "json" or "csv"
    out_path: str | None = None  # None = stdout


def _dec(x) -> float:
    """Decimal rendering of an exact value (17 significant digits via repr)."""
    return float(x)


def _ratio(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _meta(cfg: RunConfig, q: int, elapsed: float) -> dict:
    return {
        "p": cfg.p,
        "k": cfg.k,
        "q": q,
        "d": cfg.d,
        "mode": cfg.mode,
        "N": cfg.samples,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "C": cfg.check_constant,
        "stream_scheme": experiments.STREAM_SCHEME if cfg.mode == experiments.MONTECARLO else None,
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "elapsed_s": round(elapsed, 3),
    }


def _comparison_payload(report: experiments.ComparisonReport, meta: dict) -> dict:
    histogram = [
        {
            "s": row.s,
            "count": row.count,
            "empirical": _dec(row.empirical),
            "model": _dec(row.model),
            "rel_err": None if row.rel_err is None else _dec(row.rel_err),
            "abs_err": _dec(row.abs_err),
            "empirical_ratio": _ratio(row.empirical),
            "model_ratio": _ratio(row.model),
        }
        for row in report.rows
    ]
    aggregates = {
        "tv_distance": _dec(report.tv_distance),
        "tv_distance_ratio": _ratio(report.tv_distance),
        "max_rel_err": None if report.max_rel_err is None else _dec(report.max_rel_err),
        "bound": report.bound,
        "bound_informative": report.bound_informative,
        "verdict": report.verdict,
    }
    return {"meta": meta, "histogram": histogram, "aggregates": aggregates}


def _comparison_csv(payload: dict) -> str:
    out = io.StringIO()
    out.write("s,count,empirical_prob,model_prob,rel_err,abs_err\n")
    for row in payload["histogram"]:
        rel = "" if row["rel_err"] is None else repr(row["rel_err"])
        out.write(
            f"{row['s']},{row['count']},{row['empirical']!r},{row['model']!r},"
            f"{rel},{row['abs_err']!r}\n"
        )
    for key, value in payload["aggregates"].items():
        out.write(f"# {key}={value}\n")
    for key, value in payload["meta"].items():
        out.write(f"# meta.{key}={value}\n")
    return out.getvalue()


def _moment_payload(report: experiments.MomentReport, meta: dict) -> dict:
    rows = [
        {
            "k": row.k,
            "empirical": row.empirical,
            "model": _dec(row.model),
            "model_ratio": _ratio(row.model),
            "gaussian": row.gaussian,
            "bound": row.bound,
            "stderr": row.stderr,
            "within_bound": row.within_bound,
        }
        for row in report.rows
    ]
    return {"meta": meta, "moments": rows, "aggregates": {"verdict": report.verdict}}


def _moment_csv(payload: dict) -> str:
    out = io.StringIO()
    out.write("k,empirical,model,gaussian,bound,stderr,within_bound\n")
    for row in payload["moments"]:
        stderr = "" if row["stderr"] is None else repr(row["stderr"])
        out.write(
            f"{row['k']},{row['empirical']!r},{row['model']!r},{row['gaussian']},"
            f"{row['bound']!r},{stderr},{row['within_bound']}\n"
        )
    for key, value in payload["aggregates"].items():
        out.write(f"# {key}={value}\n")
    for key, value in payload["meta"].items():
        out.write(f"# meta.{key}={value}\n")
    return out.getvalue()


def _emit(cfg: RunConfig, payload: dict, csv_renderer, human: str) -> None:
    if cfg.out_format == "json":
        text = json.dumps(payload, indent=2)
    elif cfg.out_format == "csv":
        text = csv_renderer(payload)
    else:
        text = human
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(f"wrote {cfg.out_path}")
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommand handlers (return process exit codes)


def _cmd_field_info(cfg: RunConfig) -> int:
    field = build_field(cfg.p, cfg.k)
    info = {
        "p": field.p,
        "k": field.k,
        "q": field.q,
        "squares": (field.q - 1) // 2,
        "non_squares": (field.q - 1) // 2,
    }
    if field.k > 1:
        info["modulus"] = list(field.modulus)
        info["modulus_text"] = format_poly_modulus(field)
        info["generator"] = field.generator
        info["generator_text"] = field.format_element(field.generator)
    if cfg.out_format == "json":
        print(json.dumps(info, indent=2))
    else:
        for key, value in info.items():
            print(f"{key}: {value}")
    return 0


def format_poly_modulus(field) -> str:
    terms = [f"X^{field.k}"]
    for i in range(field.k - 1, -1, -1):
        c = field.modulus[i]
        if c:
            if i == 0:
                terms.append(str(c))
            else:
                x = "X" if i == 1 else f"X^{i}"
                terms.append(x if c == 1 else f"{c}*{x}")
    return " + ".join(terms)


def _cmd_dist(cfg: RunConfig) -> int:
    field = build_field(cfg.p, cfg.k)
    t0 = time.perf_counter()
    emp = experiments.run_distribution(
        field, cfg.d, cfg.mode, samples=cfg.samples, seed=cfg.seed,
        threads=cfg.threads, budget=cfg.budget,
    )
    model = models.build_trinomial(field.q)
    report = experiments.compare_to_trinomial(emp, model, cfg.check_constant)
    payload = _comparison_payload(report, _meta(cfg, field.q, time.perf_counter() - t0))
    lines = [
        f"S(F) distribution: q={field.q} d={cfg.d} mode={cfg.mode} total={emp.total}",
        f"  tv_distance    = {float(report.tv_distance):.6g}",
        f"  max_rel_err    = "
        + ("n/a" if report.max_rel_err is None else f"{float(report.max_rel_err):.6g}"),
        f"  bound (C*rate) = {report.bound:.6g}"
        + ("" if report.bound_informative else "  [uninformative: d <= 3q]"),
        f"  verdict        = {'PASS' if report.verdict else 'FAIL'}",
    ]
    _emit(cfg, payload, _comparison_csv, "\n".join(lines))
    return 0 if report.verdict else 1


def _cmd_moments(cfg: RunConfig, k_max: int) -> int:
    field = build_field(cfg.p, cfg.k)
    t0 = time.perf_counter()
    report = experiments.run_moments(
        field, cfg.d, cfg.mode, samples=cfg.samples, seed=cfg.seed,
        k_max=k_max, threads=cfg.threads, budget=cfg.budget,
        check_constant=cfg.check_constant,
    )
    payload = _moment_payload(report, _meta(cfg, field.q, time.perf_counter() - t0))
    lines = [f"moments of S(F)/sqrt(q): q={field.q} d={cfg.d} mode={cfg.mode} total={report.total}"]
    for row in report.rows:
        se = "" if row.stderr is None else f" stderr={row.stderr:.3g}"
        lines.append(
            f"  k={row.k}: empirical={row.empirical:.8g} model={float(row.model):.8g} "
            f"gaussian={row.gaussian} bound={row.bound:.3g}{se} "
            f"{'ok' if row.within_bound else 'MISS'}"
        )
    lines.append(f"  verdict = {'PASS' if report.verdict else 'FAIL'}")
    _emit(cfg, payload, _moment_csv, "\n".join(lines))
    return 0 if report.verdict else 1


def _cmd_sample(cfg: RunConfig, count: int) -> int:
    import numpy as np

    field = build_field(cfg.p, cfg.k)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=cfg.seed)))
    samples = []
    for _ in range(count):
        poly = sample_squarefree(field, cfg.d, rng)
        samples.append(poly)
    if cfg.out_format == "json":
        payload = {
            "meta": _meta(cfg, field.q, 0.0),
            "samples": [
                {
                    "coeffs": list(poly.coeffs),
                    "text": format_poly(field, poly),
                    "char_sum": charsum.char_sum(field, poly),
                }
                for poly in samples
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for poly in samples:
            print(f"{format_poly(field, poly)}   S = {charsum.char_sum(field, poly)}")
    return 0


def _cmd_verify(cfg: RunConfig, args) -> int:
    field = build_field(cfg.p, cfg.k)
    q = field.q
    check = args.check
    t0 = time.perf_counter()
    if check == "lemma-surjectivity":
        report = experiments.check_lemma_surjectivity(
            field, cfg.d, args.l, trials=args.trials, seed=cfg.seed, budget=cfg.budget
        )
        ok = report.ok
        detail = {
            "check": check,
            "ok": ok,
            "expected": report.expected,
            "checked": report.checked,
            "violations": list(report.violations[:20]),
            "constraint_mode": report.mode,
        }
        human = (
            f"prescribed-value counts over V_{cfg.d} (l={args.l}): expected {report.expected}, "
            f"checked {report.checked} constraints, {len(report.violations)} violations -> "
            f"{'PASS' if ok else 'FAIL'}"
        )
    elif check == "values":
        constraint = _build_constraint(field, args)
        report = experiments.check_value_probabilities(
            field, cfg.d, constraint, cfg.check_constant, threads=cfg.threads, budget=cfg.budget
        )
        ok = report.verdict
        detail = {
            "check": check,
            "ok": ok,
            "l": report.l,
            "m": report.m,
            "points": list(report.points),
            "values": list(report.values),
            "count": report.count,
            "frequency": _dec(report.frequency),
            "frequency_ratio": _ratio(report.frequency),
            "model": _dec(report.model),
            "model_ratio": _ratio(report.model),
            "rel_err": _dec(report.rel_err),
            "bound": report.bound,
        }
        human = (
            f"value event F(x)=a (l={report.l}, m={report.m}) on F_{cfg.d}: freq="
            f"{float(report.frequency):.8g} model={float(report.model):.8g} "
            f"rel_err={float(report.rel_err):.3g} bound={report.bound:.3g} -> "
            f"{'PASS' if ok else 'FAIL'}"
        )
    elif check == "patterns":
        report = experiments.check_sign_patterns(
            field, cfg.d, cfg.check_constant, threads=cfg.threads, budget=cfg.budget
        )
        ok = report.verdict
        detail = {
            "check": check,
            "ok": ok,
            "patterns": len(report.rows),
            "max_rel_err": _dec(report.max_rel_err),
            "bound": report.bound,
            "rows": [
                {
                    "pattern": list(row.pattern),
                    "zeros": row.zeros,
                    "count": row.count,
                    "empirical": _dec(row.empirical),
                    "model": _dec(row.model),
                    "rel_err": _dec(row.rel_err),
                }
                for row in report.rows
            ],
        }
        human = (
            f"sign patterns on F_{cfg.d} (q={q}): {len(report.rows)} patterns, "
            f"max rel err {float(report.max_rel_err):.4g} vs bound {report.bound:.4g} -> "
            f"{'PASS' if ok else 'FAIL'}"
        )
    elif check == "zeta":
        ok = models.zeta_series_check(q, args.max_degree)
        detail = {"check": check, "ok": ok, "max_degree": args.max_degree}
        human = (
            f"zeta series identity up to degree {args.max_degree} over F_{q}: "
            f"{'PASS' if ok else 'FAIL'}"
        )
    elif check == "squarefree-count":
        mismatches = []
        for d in range(0, args.d_max + 1):
            cells = charsum.census_point_values(
                field, d, (), squarefree_only=True, budget=cfg.budget
            )
            enumerated = cells.get((), 0)
            formula = count_squarefree(q, d)
            if enumerated != formula:
                mismatches.append({"d": d, "enumerated": enumerated, "formula": formula})
        ok = not mismatches
        detail = {"check": check, "ok": ok, "d_max": args.d_max, "mismatches": mismatches}
        human = (
            f"square-free counts vs q^d - q^(d-1) for d <= {args.d_max} over F_{q}: "
            f"{'PASS' if ok else 'FAIL'}"
        )
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(check)
    detail["meta"] = _meta(cfg, q, time.perf_counter() - t0)
    if cfg.out_format == "json":
        text = json.dumps(detail, indent=2)
        if cfg.out_path:
            with open(cfg.out_path, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        print(human)
    return 0 if ok else 1


def _build_constraint(field, args) -> ValueConstraint:
    if args.points is not None or args.values is not None:
        if args.points is None or args.values is None:
            raise ValueError("--points and --values must be given together")
        points = tuple(int(x) for x in args.points.split(","))
        values = tuple(int(a) for a in args.values.split(","))
        return ValueConstraint(points, values)
    l, m = args.l, args.m
    if l + m > field.q:
        raise ValueError("l + m cannot exceed q")
    points = tuple(range(l + m))
    values = tuple([1] * l + [0] * m)
    return ValueConstraint(points, values)


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(sub, d_default=None):
    sub.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    sub.add_argument("--k", type=int, default=1, help="field exponent, q = p^k")
    if d_default is not None:
        sub.add_argument("--d", type=int, default=d_default, help="polynomial degree")
    sub.add_argument("--seed", type=int, default=0, help="PRNG seed")
    sub.add_argument("--threads", type=int, default=1, help="worker processes")
    sub.add_argument("--budget", type=int, default=None, help="census budget (polynomials)")
    sub.add_argument(
        "--constant", type=float, default=experiments.DEFAULT_CHECK_CONSTANT,
        help="check constant C multiplying every error rate",
    )
    sub.add_argument("--out", choices=("json", "csv"), default=None, help="report format")
    sub.add_argument("--out-file", default=None, help="write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charcensus",
        description=(
            "Censuses and Monte Carlo statistics of the quadratic character sum "
            "S(F) = sum_x chi(F(x)) over square-free monic polynomial families, "
            "compared against exact-rational model predictions."
        ),
    )
    parser.add_argument("--version", action="version", version=f"charcensus {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("field-info", help="describe a field F_{p^k}")
    _add_common(sub)

    sub = commands.add_parser("dist", help="S(F) histogram vs the trinomial sum law")
    _add_common(sub, d_default=None)
    sub.add_argument("--d", type=int, required=True, help="polynomial degree")
    sub.add_argument(
        "--mode", choices=(experiments.EXHAUSTIVE, experiments.MONTECARLO),
        default=experiments.EXHAUSTIVE,
    )
    sub.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")

    sub = commands.add_parser("moments", help="moments of S(F)/sqrt(q)")
    _add_common(sub)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument(
        "--mode", choices=(experiments.EXHAUSTIVE, experiments.MONTECARLO),
        default=experiments.EXHAUSTIVE,
    )
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--k-max", type=int, default=8, dest="k_max")

    sub = commands.add_parser("sample", help="draw uniform square-free polynomials")
    _add_common(sub)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--count", type=int, default=1)

    sub = commands.add_parser("verify", help="exact and bounded verification checks")
    verify = sub.add_subparsers(dest="check", required=True)

    v = verify.add_parser("lemma-surjectivity", help="prescribed-value counts are q^(d-l)")
    _add_common(v)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--l", type=int, required=True, help="number of prescribed points")
    v.add_argument("--trials", type=int, default=None, help="random constraints (default: all)")

    v = verify.add_parser("values", help="prescribed-value frequency vs main term")
    _add_common(v)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--l", type=int, default=1, help="number of nonzero prescribed values")
    v.add_argument("--m", type=int, default=0, help="number of zero prescribed values")
    v.add_argument("--points", default=None, help="comma-separated point indices")
    v.add_argument("--values", default=None, help="comma-separated value indices")

    v = verify.add_parser("patterns", help="sign-pattern frequencies vs the model law")
    _add_common(v)
    v.add_argument("--d", type=int, required=True)

    v = verify.add_parser("zeta", help="zeta power-series identity, exact coefficients")
    _add_common(v)
    v.add_argument("--max-degree", type=int, default=30, dest="max_degree")

    v = verify.add_parser("squarefree-count", help="enumerated counts vs q^d - q^(d-1)")
    _add_common(v)
    v.add_argument("--d-max", type=int, default=7, dest="d_max")

    return parser


def _config_from_args(args) -> RunConfig:
    budget = args.budget
    if budget is None and os.environ.get(BUDGET_ENV_VAR):
        budget = int(os.environ[BUDGET_ENV_VAR])
    return RunConfig(
        command=args.command,
        p=args.p,
        k=args.k,
        d=getattr(args, "d", 0),
        mode=getattr(args, "mode", experiments.EXHAUSTIVE),
        samples=getattr(args, "samples", None),
        seed=args.seed,
        threads=args.threads,
        budget=budget,
        check_constant=args.constant,
        out_format=args.out,
        out_path=args.out_file,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        if args.command == "field-info":
            return _cmd_field_info(cfg)
        if args.command == "dist":
            return _cmd_dist(cfg)
        if args.command == "moments":
            return _cmd_moments(cfg, args.k_max)
        if args.command == "sample":
            return _cmd_sample(cfg, args.count)
        if args.command == "verify":
            return _cmd_verify(cfg, args)
        raise AssertionError(args.command)  # pragma: no cover
    except (CharCensusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
