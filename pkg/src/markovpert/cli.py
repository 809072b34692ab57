"""Command-line front end.

    markovpert --input chain.csv --algorithm all --precision both --output json

Exit status: 0 on success, 1 if the input matrix is invalid, 2 if an
algorithm broke down numerically, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .algorithms import AlgorithmId, RunSet, run_all
from .chain import PrecisionMode, StochasticMatrix, load_matrix
from .errors import NumericalError, ValidationError
from .ginverse import verify_group_axioms
from .gth import gth_stationary
from .metrics import build_tables

log = logging.getLogger("markovpert")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

SIGNIFICANT = {PrecisionMode.DOUBLE: 15, PrecisionMode.SINGLE: 8}
ALGORITHM_CHOICES = [a.value for a in AlgorithmId] + ["gth", "all"]


def _round(x, precision: PrecisionMode):
    digits = SIGNIFICANT[precision]
    arr = np.asarray(x, dtype=np.float64)
    flat = [float(f"{v:.{digits}g}") for v in arr.ravel()]
    return np.array(flat).reshape(arr.shape).tolist()


def _round_stat(v):
    return None if v is None else float(f"{v:.15g}")


def build_report(runs: dict[PrecisionMode, RunSet], matrices: dict[PrecisionMode, StochasticMatrix],
                 reference=None, tolerance=None, source=None, timestamp=False) -> dict:
    """Assemble the JSON-ready report document.

    ``runs`` maps each precision that was run to its :class:`RunSet`.
    Results are listed by algorithm, then precision (single before double),
    with GTH last.
    """
    if not any(rs.results or rs.gth is not None for rs in runs.values()):
        raise ValueError("nothing to report: no algorithm produced a result")
    order = [p for p in (PrecisionMode.SINGLE, PrecisionMode.DOUBLE) if p in runs]
    P_double = matrices.get(PrecisionMode.DOUBLE)
    m = next(iter(matrices.values())).m

    entries = []
    for alg in AlgorithmId:
        for prec in order:
            r = runs[prec].get(alg)
            if r is None:
                continue
            check = verify_group_axioms(r.a_sharp, matrices[prec].entries, r.pi, tolerance)
            entries.append({
                "id": alg.label,
                "precision": prec.value,
                "pi": _round(r.pi, prec),
                "mfpt": _round(r.mfpt, prec),
                "group_inverse": _round(r.a_sharp, prec),
                "trace": [
                    {"step": t.step, "denominator": _round(t.denominator, prec),
                     "max_norm": _round(t.max_norm, prec)}
                    for t in r.trace
                ],
                "verification": {
                    "passed": check.passed,
                    "tolerance": _round_stat(check.tol),
                    "residuals": {k: _round_stat(v) for k, v in check.residuals.items()},
                },
            })
    for prec in order:
        if runs[prec].gth is not None:
            entries.append({"id": "GTH", "precision": prec.value,
                            "pi": _round(runs[prec].gth, prec),
                            "mfpt": None, "group_inverse": None, "trace": []})

    tables = build_tables(
        matrices.get(PrecisionMode.SINGLE), P_double,
        runs.get(PrecisionMode.SINGLE), runs.get(PrecisionMode.DOUBLE),
        reference=reference,
    )
    stats = {name: {row: {col: _round_stat(v) for col, v in cols.items()}
                    for row, cols in table.items()}
             for name, table in tables.items()}
    input_matrix = P_double if P_double is not None else matrices[order[0]]
    doc = {
        "input": {
            "source": None if source is None else str(source),
            "matrix": _round(input_matrix.entries, input_matrix.precision),
        },
        "m": m,
        "algorithms": entries,
        "statistics": stats,
        "failures": {
            f"{name}/{prec.value}": str(exc)
            for prec in order for name, exc in runs[prec].failures.items()
        },
    }
    if reference is not None:
        doc["reference"] = {"id": "GTH", "precision": "double",
                            "pi": _round(reference, PrecisionMode.DOUBLE)}
    if timestamp:
        doc["timestamp"] = dt.datetime.now(dt.timezone.utc).isoformat()
    return doc


def _format_matrix(rows, indent="  "):
    rows = rows if isinstance(rows[0], list) else [rows]
    cells = [[repr(v) for v in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + "  ".join(c.rjust(width) for c in row) for row in cells)


def _format_table(name, table):
    columns = []
    for cols in table.values():
        columns += [c for c in cols if c not in columns]
    label_w = max([len(r) for r in table] + [len(name)])
    body = {row: ["" if cols.get(c) is None else repr(cols[c]) for c in columns]
            for row, cols in table.items()}
    width = max([len(c) for c in columns] + [len(v) for vals in body.values() for v in vals])
    out = [f"{name.ljust(label_w)}  " + "  ".join(c.rjust(width) for c in columns)]
    for row, vals in body.items():
        out.append(f"{row.ljust(label_w)}  " + "  ".join(v.rjust(width) for v in vals))
    return "\n".join(out)


_TABLE_TITLES = {
    "stationary": "Errors for stationary distributions",
    "mfpt": "Errors for mean first passage times",
    "group_inverse": "Errors for the group inverse",
}


def render_table(doc) -> str:
    parts = [f"m = {doc['m']}"]
    for entry in doc["algorithms"]:
        parts.append(f"\n[{entry['id']} / {entry['precision']}]")
        parts.append("pi =\n" + _format_matrix(entry["pi"]))
        if entry["mfpt"] is not None:
            parts.append("M =\n" + _format_matrix(entry["mfpt"]))
            parts.append("A# =\n" + _format_matrix(entry["group_inverse"]))
    for name, table in doc["statistics"].items():
        if table:
            parts.append(f"\n{_TABLE_TITLES[name]}\n" + _format_table("statistic", table))
    if doc["failures"]:
        parts.append("\nfailures:")
        parts += [f"  {k}: {v}" for k, v in doc["failures"].items()]
    return "\n".join(parts) + "\n"


def _stat_precision(label):
    if "(S, D)" in label or label.startswith("Accurate"):
        return "mixed"
    if "(S)" in label or ", S)" in label:
        return "single"
    return "double"


def render_csv(doc) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["statistic", "algorithm", "precision", "value"])
    for table in doc["statistics"].values():
        for row, cols in table.items():
            for col, v in cols.items():
                writer.writerow([row, col, _stat_precision(row), repr(v)])
    return buf.getvalue()


def emit_report(doc, fmt="json", dest=None) -> None:
    """Write ``doc`` as ``json``, ``table`` or ``csv`` to ``dest`` (a path, a
    text stream, or standard output when ``None``)."""
    if fmt == "json":
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "table":
        text = render_table(doc)
    elif fmt == "csv":
        text = render_csv(doc)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if dest is None:
        sys.stdout.write(text)
    elif hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovpert",
        description="Stationary distribution, group inverse and mean first passage "
                    "times of a Markov chain by row-perturbation algorithms.",
    )
    parser.add_argument("--input", required=True, type=Path,
                        help="transition matrix as CSV or JSON {\"m\": .., \"rows\": [..]}")
    parser.add_argument("--algorithm", default="all", choices=ALGORITHM_CHOICES)
    parser.add_argument("--precision", default="double", choices=["single", "double", "both"])
    parser.add_argument("--output", default="table", choices=["json", "table", "csv"])
    parser.add_argument("--report", type=Path, default=None,
                        help="write the report here instead of standard output")
    parser.add_argument("--reference", default="gth", choices=["gth", "none"],
                        help="benchmark for pairwise statistics (default: GTH in double)")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="tolerance for the group inverse verification")
    parser.add_argument("--timestamp", action="store_true",
                        help="include a generation timestamp in JSON output")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run_cli(args: argparse.Namespace) -> int:
    precisions = {
        "single": [PrecisionMode.SINGLE],
        "double": [PrecisionMode.DOUBLE],
        "both": [PrecisionMode.SINGLE, PrecisionMode.DOUBLE],
    }[args.precision]
    if args.algorithm == "all":
        algorithms, want_gth = list(AlgorithmId), True
    elif args.algorithm == "gth":
        algorithms, want_gth = [], True
    else:
        algorithms, want_gth = [AlgorithmId(args.algorithm)], False

    try:
        matrices = {p: load_matrix(args.input, p) for p in precisions}
    except ValidationError as exc:
        print(f"markovpert: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"markovpert: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        runs = {p: run_all(matrices[p], algorithms=algorithms, include_gth=want_gth)
                for p in precisions}
        reference = None
        if args.reference == "gth":
            if PrecisionMode.DOUBLE in runs and runs[PrecisionMode.DOUBLE].gth is not None:
                reference = runs[PrecisionMode.DOUBLE].gth
            else:
                reference = gth_stationary(load_matrix(args.input, PrecisionMode.DOUBLE))
        doc = build_report(runs, matrices, reference=reference, tolerance=args.tolerance,
                           source=args.input, timestamp=args.timestamp)
    except NumericalError as exc:
        print(f"markovpert: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"markovpert: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        emit_report(doc, args.output, args.report)
    except OSError as exc:
        print(f"markovpert: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO

    if doc["failures"]:
        for k, v in doc["failures"].items():
            print(f"markovpert: {k} failed: {v}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run_cli(args)


if __name__ == "__main__":
    sys.exit(main())
