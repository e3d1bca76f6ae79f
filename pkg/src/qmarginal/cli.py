"""Command line entry point: ``qmarginal {check,reduce,sample,scan}``.

Exit status is 0 when everything checked is compatible, 1 when any
inequality is violated, and 2 for any input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import conditions as cond
from . import verify
from .linalg import TRACE_TOL, ZERO_TOL, PSDViolationError, Spectrum
from .qstate import RANK_TOL, DensityMatrix, numerical_rank, partial_trace, spectrum

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

SUITES = ("two-qubit", "bipartite", "tripartite", "pure-multi", "qutrit-polytope")


class InputError(Exception):
    """Bad file, bad flag value or missing entry; maps to exit status 2."""


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError(
            f"{path}: schema_version must be {SCHEMA_VERSION!r}, got {doc.get('schema_version')!r}"
        )
    return doc


def _dims(raw, where: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or not raw or not all(
        isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in raw
    ):
        raise InputError(f"{where}: dims must be a non-empty list of positive integers")
    return tuple(raw)


def _int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"{flag}: expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"{flag}: expected comma-separated numbers, got {text!r}") from exc


# --- matrix files -----------------------------------------------------------


def read_matrix_file(path: str) -> DensityMatrix:
    doc = _load_json(path)
    dims = _dims(doc.get("dims"), path)
    try:
        arr = np.asarray(doc["matrix"], dtype=float)
    except KeyError as exc:
        raise InputError(f"{path}: missing 'matrix'") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: matrix must be nested [re, im] pairs") from exc
    total = int(np.prod(dims))
    if arr.shape != (total, total, 2):
        raise InputError(
            f"{path}: matrix shape {arr.shape[:-1] if arr.ndim else ()} does not match dims {list(dims)}"
        )
    try:
        return DensityMatrix(dims, arr[..., 0] + 1j * arr[..., 1])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def matrix_document(rho: DensityMatrix, with_spectrum: bool = False) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in rho.mat],
    }
    if with_spectrum:
        doc["spectrum"] = spectrum(rho).tolist()
    return doc


# --- spectra files ----------------------------------------------------------


def _required_entries(suite: str, dims: tuple[int, ...]) -> tuple[str, ...]:
    if suite in ("two-qubit", "bipartite"):
        if len(dims) != 2:
            raise InputError(f"suite {suite} needs two dims, got {list(dims)}")
        if suite == "two-qubit" and dims != (2, 2):
            raise InputError(f"suite two-qubit needs dims [2, 2], got {list(dims)}")
        return ("A", "B", "AB")
    if suite == "tripartite":
        if len(dims) != 3:
            raise InputError(f"suite tripartite needs three dims, got {list(dims)}")
        return ("AB", "BC", "B", "ABC")
    if suite == "qutrit-polytope":
        if dims != (3, 3, 3):
            raise InputError(f"suite qutrit-polytope needs dims [3, 3, 3], got {list(dims)}")
        return ("A", "B", "C")
    if len(dims) < 2 or len(set(dims)) != 1:
        raise InputError(f"suite pure-multi needs >= 2 equal dims, got {list(dims)}")
    if len(dims) > 26:
        raise InputError("suite pure-multi supports at most 26 parties")
    return tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ"[: len(dims)])


def _expected_length(name: str, suite: str, dims: tuple[int, ...]) -> int:
    if suite == "pure-multi":
        return dims[0]
    index = {"A": [0], "B": [1], "C": [2], "AB": [0, 1], "BC": [1, 2], "ABC": [0, 1, 2]}
    return int(np.prod([dims[i] for i in index[name]]))


def read_spectra_file(path: str, suite: str, trace_tol: float = TRACE_TOL):
    """Parsed dims, the named spectra the suite needs, and the names that were re-sorted."""
    doc = _load_json(path)
    dims = _dims(doc.get("dims"), path)
    entries = doc.get("spectra")
    if not isinstance(entries, dict):
        raise InputError(f"{path}: 'spectra' must be an object of named lists")
    names = _required_entries(suite, dims)
    missing = [n for n in names if n not in entries]
    if missing:
        raise InputError(f"{path}: suite {suite} needs spectra {missing} (missing)")
    spectra, resorted = {}, []
    for name in names:
        raw = entries[name]
        if not isinstance(raw, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
        ):
            raise InputError(f"{path}: spectrum {name!r} must be a list of numbers")
        want = _expected_length(name, suite, dims)
        if len(raw) != want:
            raise InputError(f"{path}: spectrum {name!r} has {len(raw)} entries, expected {want}")
        try:
            spectra[name] = Spectrum(raw, trace_tol=trace_tol)
        except ValueError as exc:
            raise InputError(f"{path}: spectrum {name!r}: {exc}") from exc
        if any(b < a for a, b in zip(raw, raw[1:])):
            resorted.append(name)
    return dims, spectra, resorted


# --- subcommands ------------------------------------------------------------


def cmd_check(args) -> int:
    dims, sp, resorted = read_spectra_file(args.input, args.suite, args.trace_tol)
    tol = args.tol
    rank = None
    if args.suite == "two-qubit":
        report = cond.check_two_qubit(sp["A"], sp["B"], sp["AB"], tol)
    elif args.suite == "bipartite":
        report = cond.check_bipartite(sp["A"], sp["B"], sp["AB"], tol)
    elif args.suite == "tripartite":
        report = cond.check_tripartite(sp["AB"], sp["BC"], sp["B"], sp["ABC"], dims, tol)
        ranks = [numerical_rank(sp[n], args.rank_tol) for n in ("ABC", "BC", "AB", "B")]
        rank = cond.check_rank_deficiency(*ranks, dims, floor=args.floor)
    elif args.suite == "qutrit-polytope":
        report = cond.check_three_qutrit_polytope(sp["A"], sp["B"], sp["C"], tol)
    else:
        report = cond.check_pure_multipartite([sp[n] for n in sorted(sp)], tol)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "suite": args.suite,
        "dims": list(dims),
        "tolerances": {
            "slack": tol,
            "zero_clamp": ZERO_TOL,
            "trace": args.trace_tol,
            "rank": args.rank_tol,
        },
        "resorted": resorted,
        **report.as_dict(),
    }
    if rank is not None:
        doc["rank_check"] = {"floor": args.floor, **rank.as_dict()}
    _write(_dump(doc), args.output)
    bad = not report.compatible or (rank is not None and rank.status == "violated")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_reduce(args) -> int:
    rho = read_matrix_file(args.input)
    keep = _int_list(args.keep, "--keep")
    try:
        red = partial_trace(rho, keep)
    except ValueError as exc:
        raise InputError(f"--keep: {exc}") from exc
    _write(_dump(matrix_document(red, with_spectrum=True)), args.output)
    return EXIT_OK


def _campaign_kind(args, dims: tuple[int, ...]) -> str:
    if args.campaign != "auto":
        return args.campaign
    if args.mode == "haar-pure" and len(dims) >= 3 and len(set(dims)) == 1:
        return "pure-multipartite"
    if len(dims) == 2:
        return "bipartite"
    if len(dims) == 3:
        return "tripartite"
    if args.mode == "haar-pure" and len(set(dims)) == 1:
        return "pure-multipartite"
    raise InputError(f"no campaign for dims {list(dims)} in mode {args.mode}")


def cmd_sample(args) -> int:
    dims = _int_list(args.dims, "--dims")
    if args.spectrum is not None:
        if args.mode not in (None, "fixed-spectrum"):
            raise InputError("--spectrum implies --mode fixed-spectrum")
        args.mode = "fixed-spectrum"
    elif args.pure:
        args.mode = "haar-pure"
    elif args.mode is None:
        args.mode = "dirichlet"
    kind = _campaign_kind(args, dims)
    try:
        cfg = verify.CampaignConfig(
            dims,
            args.n,
            args.seed,
            mode=args.mode,
            spectrum=None if args.spectrum is None else _float_list(args.spectrum, "--spectrum"),
            tol=args.tol,
            rank_tol=args.rank_tol,
            floor=args.floor,
            workers=args.workers,
            measure_global=args.measure_global,
        )
        run = {
            "bipartite": verify.run_bipartite_campaign,
            "tripartite": verify.run_tripartite_campaign,
            "pure-multipartite": verify.run_pure_multipartite_campaign,
        }[kind]
        result = run(cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc = {"schema_version": SCHEMA_VERSION, **result.as_dict(include_timing=args.timing)}
    _write(_dump(doc), args.output)
    return EXIT_VIOLATION if result.total_violations else EXIT_OK


def scan_csv(table: verify.ScanTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for _, coords, verdict, slack in table.rows:
        writer.writerow([repr(c) for c in coords] + [verdict, repr(slack)])
    return buf.getvalue()


def cmd_scan(args) -> int:
    try:
        table = verify.scan_polytope(args.resolution, args.checker, args.parties, args.dim)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(scan_csv(table), args.output)
    if not args.samples:
        return EXIT_OK
    bins = verify.achievable_bins(
        args.resolution, args.checker, table.parties, table.dim, args.samples, args.seed
    )
    report = verify.check_containment(table, bins)
    sys.stdout.write(_dump({"schema_version": SCHEMA_VERSION, "containment": report.as_dict()}))
    return EXIT_OK if report.contained else EXIT_VIOLATION


# --- argument parsing -------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmarginal",
        description="Check spectra of quantum marginals against necessary compatibility inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def tolerances(p, rank=True):
        p.add_argument("--tol", type=float, default=cond.SLACK_TOL, help="slack tolerance")
        if rank:
            p.add_argument("--rank-tol", type=float, default=RANK_TOL,
                           help="relative eigenvalue threshold for numerical rank")
            p.add_argument("--floor", choices=("strict", "standard"), default="strict",
                           help="floor convention in the rank implication")

    p = sub.add_parser("check", help="check a spectra file against one suite")
    p.add_argument("input", help="SpectraFile JSON path ('-' for stdin)")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trace-tol", type=float, default=TRACE_TOL,
                   help="allowed deviation of each spectrum's sum from 1")
    p.add_argument("-o", "--output", help="report path (default stdout)")
    tolerances(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="partial trace of a matrix file")
    p.add_argument("input", help="MatrixFile JSON path ('-' for stdin)")
    p.add_argument("--keep", required=True, help="comma-separated subsystem indices, increasing")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sample", help="run a Monte Carlo campaign on random states")
    p.add_argument("--dims", required=True, help="comma-separated local dimensions")
    p.add_argument("--n", type=_positive_int, default=10_000, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=verify.MODES)
    p.add_argument("--pure", action="store_true", help="shorthand for --mode haar-pure")
    p.add_argument("--spectrum", help="fixed global spectrum, comma-separated")
    p.add_argument("--campaign", default="auto",
                   choices=("auto", "bipartite", "tripartite", "pure-multipartite"))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--measure-global", action="store_true",
                   help="diagonalize the global state instead of using its constructed spectrum")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.add_argument("-o", "--output", help="report path (default stdout)")
    tolerances(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("scan", help="tabulate verdicts over a grid of spectra")
    p.add_argument("--checker", choices=("three-qutrit", "pure-multipartite"),
                   default="three-qutrit")
    p.add_argument("--parties", type=int, default=3, help="parties (pure-multipartite only)")
    p.add_argument("--dim", type=int, default=2, help="local dimension (pure-multipartite only)")
    p.add_argument("--resolution", type=int, default=6)
    p.add_argument("--samples", type=int, default=0,
                   help="also bin this many random pure states and check containment")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, PSDViolationError, ValueError) as exc:
        print(f"qmarginal: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # exit-code contract is total
        print(f"qmarginal: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
