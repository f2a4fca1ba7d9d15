"""Command-line interface.

Subcommands:

* ``compute``     indices of a data file (one value per line, or CSV)
* ``population``  closed-form population values for gamma parameters
* ``expect``      exact finite-sample expectation, population value, bias
* ``simulate``    one seeded Monte Carlo check of a chosen estimator
* ``verify``      the full verification grid; exit 0 only if it passes

JSON (the default format) is canonical and byte-stable for a fixed
command line; ``table`` and ``csv`` carry the same numbers rounded to
7 significant digits.  Exit codes: 0 success/pass, 1 verification
failure, 2 usage error, 3 data error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DataError, DomainError, GammadexError, NumericError, SizeError
from .gamma_forms import GammaParams, alpha_plug_in, debias, expectation, population_value
from .indices import IndexKind, Sample, compute_index
from .rng import RngStream
from .verify import (
    DEFAULT_SEED,
    MIN_REPS,
    VerifyConfig,
    format_report_table,
    mc_expectation,
    reports_to_json_obj,
    run_verification,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_ALL_KINDS = tuple(IndexKind)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        print(f"USAGE_ERROR: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class UsageError(GammadexError):
    pass


def _parse_kinds(label: str) -> tuple[IndexKind, ...]:
    if label.strip().lower() == "all":
        return _ALL_KINDS
    return (IndexKind.parse(label),)


def _params_from_flags(alpha: float, lam: float | None) -> GammaParams:
    """Gamma parameters from CLI flags; bad flag values are usage errors."""
    try:
        return GammaParams(alpha, lam if lam is not None else 1.0)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def read_sample(path: str, column: str | None = None) -> Sample:
    """Load a sample from a plain column of numbers or a headered CSV.

    CSV mode is selected by the ``--column`` flag, a comma in the first
    line, or a non-numeric first line (a lone header); the default
    column name is ``y``.  Any missing, non-numeric, or non-positive
    value aborts the run with the offending line number.
    """
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DataError(f"cannot read input file {path!r}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise DataError(f"input file {path!r} is empty")

    def _is_number(token: str) -> bool:
        try:
            float(token)
            return True
        except ValueError:
            return False

    is_csv = column is not None or "," in lines[0] or not _is_number(lines[0].strip())
    values: list[float] = []
    if is_csv:
        column = column or "y"
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise DataError(f"CSV file {path!r} has no column named {column!r}")
        for lineno, row in enumerate(reader, start=2):
            raw = (row.get(column) or "").strip()
            values.append(_parse_value(raw, path, lineno))
    else:
        for lineno, raw in enumerate(lines, start=1):
            raw = raw.strip()
            if not raw:
                continue
            values.append(_parse_value(raw, path, lineno))
    if not values:
        raise DataError(f"input file {path!r} contains no values")
    return Sample(np.array(values))


def _parse_value(raw: str, path: str, lineno: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise DataError(f"{path}:{lineno}: not a number: {raw!r}") from None
    if not np.isfinite(value):
        raise DataError(f"{path}:{lineno}: non-finite value {raw!r}")
    if value <= 0.0:
        raise DataError(f"{path}:{lineno}: values must be strictly positive, got {raw}")
    return value


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, float):
        return f"{v:.7g}"
    return "" if v is None else str(v)


def _print_rows(rows: list[dict], fmt: str) -> None:
    headers = list(rows[0].keys())
    cells = [[_fmt_cell(r.get(h)) for h in headers] for r in rows]
    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(cells)
        return
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
    print("  ".join("-" * w for w in widths))
    for c in cells:
        print("  ".join(c[i].ljust(widths[i]) for i in range(len(headers))))


def cmd_compute(args) -> int:
    kinds = _parse_kinds(args.index)
    sample = read_sample(args.input, args.column)
    for kind in kinds:
        if sample.n < kind.min_n:
            raise SizeError(
                f"index {kind.value!r} needs at least {kind.min_n} observations, "
                f"got {sample.n}"
            )
    indices = {k.value: compute_index(k, sample) for k in kinds}

    result = {"command": "compute", "input": args.input, "n": sample.n, "indices": indices}
    if args.debias:
        if args.alpha is not None:
            alpha, source = args.alpha, "given"
        else:
            alpha, source = alpha_plug_in(sample), "plug_in"
        params = GammaParams(alpha)
        result["alpha"] = alpha
        result["alpha_source"] = source
        result["debiased"] = {
            k.value: debias(k, params, sample.n, indices[k.value]) for k in kinds
        }

    if args.format == "json":
        print(json.dumps(result, indent=2))
    else:
        rows = [
            {
                "index": name,
                "value": value,
                **({"debiased": result["debiased"][name]} if args.debias else {}),
            }
            for name, value in indices.items()
        ]
        _print_rows(rows, args.format)
    return EXIT_OK


def cmd_population(args) -> int:
    kinds = _parse_kinds(args.index)
    if IndexKind.VMR in kinds and args.lam is None:
        raise UsageError("population value of vmr needs --lambda")
    params = _params_from_flags(args.alpha, args.lam)
    values = {k.value: population_value(k, params) for k in kinds}
    obj = {
        "command": "population",
        "alpha": params.alpha,
        "lambda": params.rate,
        "values": values,
    }
    if args.format == "json":
        print(json.dumps(obj, indent=2))
    else:
        _print_rows([{"index": k, "population": v} for k, v in values.items()], args.format)
    return EXIT_OK


def cmd_expect(args) -> int:
    kinds = _parse_kinds(args.index)
    if IndexKind.VMR in kinds and args.lam is None:
        raise UsageError("expectation of vmr needs --lambda")
    params = _params_from_flags(args.alpha, args.lam)
    results = []
    for kind in kinds:
        if args.n < kind.min_n:
            raise UsageError(f"{kind.value} expectation needs --n >= {kind.min_n}")
        r = expectation(kind, params, args.n)
        results.append(
            {
                "kind": kind.value,
                "expectation": r.expectation,
                "population": r.population,
                "bias": r.bias,
            }
        )
    obj = {
        "command": "expect",
        "alpha": params.alpha,
        "lambda": params.rate,
        "n": args.n,
        "results": results,
    }
    if args.format == "json":
        print(json.dumps(obj, indent=2))
    else:
        _print_rows(results, args.format)
    return EXIT_OK


def cmd_simulate(args) -> int:
    kind = IndexKind.parse(args.index)
    if args.reps < MIN_REPS:
        raise UsageError(f"--reps must be at least {MIN_REPS}, got {args.reps}")
    if args.n < kind.min_n:
        raise UsageError(f"{kind.value} needs --n >= {kind.min_n}")
    params = _params_from_flags(args.alpha, args.lam)
    try:
        rng = RngStream(args.seed, args.stream_id)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    report = mc_expectation(
        kind,
        params,
        args.n,
        args.reps,
        rng,
        z_max=args.z_max,
        debias_values=args.debias,
        workers=args.workers,
    )
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        _print_rows([report.to_dict()], args.format)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def _parse_grid(tokens: list[str]) -> dict:
    """Parse --grid tokens like ``alpha=0.5,1`` ``n=2,5`` into subsets."""
    subsets: dict = {}
    for token in tokens:
        if "=" not in token:
            raise UsageError(f"--grid expects key=v1,v2 tokens, got {token!r}")
        key, _, raw = token.partition("=")
        key = key.strip().lower()
        if key not in ("alpha", "lambda", "n"):
            raise UsageError(f"--grid key must be alpha, lambda, or n, got {key!r}")
        try:
            values = [float(v) for v in raw.split(",") if v]
        except ValueError:
            raise UsageError(f"--grid values for {key} must be numbers, got {raw!r}") from None
        if not values:
            raise UsageError(f"--grid {key} needs at least one value")
        subsets[key] = [int(v) for v in values] if key == "n" else values
    return subsets


def cmd_verify(args) -> int:
    if args.reps < MIN_REPS:
        raise UsageError(f"--reps must be at least {MIN_REPS}, got {args.reps}")
    cfg = VerifyConfig(
        reps=args.reps,
        lukacs_reps=min(args.reps, 100_000),
        dirichlet_reps=args.reps,
        seed=args.seed,
        z_max=args.z_max,
        workers=args.workers,
    )
    subsets = _parse_grid(args.grid or [])
    cfg = cfg.restrict(
        alphas=subsets.get("alpha"), lambdas=subsets.get("lambda"), ns=subsets.get("n")
    )
    outcome = run_verification(cfg)
    if args.format == "json":
        print(json.dumps(reports_to_json_obj(outcome.reports), indent=2))
    elif args.format == "table":
        print(format_report_table(outcome.reports))
    else:
        _print_rows([r.to_dict() for r in outcome.reports], args.format)
    summary = (
        f"verify: {len(outcome.reports)} checks, {outcome.n_failed} beyond z_max; "
        + ("PASS" if outcome.passed else f"FAIL (families: {', '.join(outcome.failed_families)})")
    )
    print(summary, file=sys.stderr)
    return EXIT_OK if outcome.passed else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gammadex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, index_default="all"):
        p.add_argument("--index", default=index_default,
                       help="gini, theil, atkinson, vmr, or all")
        p.add_argument("--format", choices=("json", "table", "csv"), default="json")

    p = sub.add_parser("compute", help="compute indices from a data file")
    add_common(p)
    p.add_argument("--input", required=True, help="data file (plain column or CSV)")
    p.add_argument("--column", default=None, help="CSV column name (default y)")
    p.add_argument("--debias", action="store_true",
                   help="also report debiased values (--alpha or plug-in estimate)")
    p.add_argument("--alpha", type=float, default=None, help="gamma shape for --debias")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("population", help="closed-form population index values")
    add_common(p)
    p.add_argument("--alpha", type=float, required=True, help="gamma shape")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="gamma rate")
    p.set_defaults(func=cmd_population)

    p = sub.add_parser("expect", help="exact finite-sample expectation and bias")
    add_common(p)
    p.add_argument("--alpha", type=float, required=True, help="gamma shape")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="gamma rate")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("simulate", help="seeded Monte Carlo check of one estimator")
    add_common(p, index_default=None)
    p.add_argument("--alpha", type=float, required=True, help="gamma shape")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="gamma rate")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--reps", type=int, default=200_000, help="Monte Carlo replicates")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--stream-id", type=int, default=0,
                   help="base stream id; replicate blocks use consecutive ids above it")
    p.add_argument("--z-max", type=float, default=4.0)
    p.add_argument("--debias", action="store_true", help="check the debiased estimator")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the full verification grid")
    p.add_argument("--format", choices=("json", "table", "csv"), default="json")
    p.add_argument("--reps", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--z-max", type=float, default=4.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--grid", nargs="*", default=None,
                   help="subset the grid, e.g. --grid alpha=0.5,1 n=2")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "index", "all") is None:
        print("USAGE_ERROR: --index is required for this command", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"USAGE_ERROR: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, SizeError, DomainError) as exc:
        print(f"DATA_ERROR: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"NUMERIC_ERROR: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
