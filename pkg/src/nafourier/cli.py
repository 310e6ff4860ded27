"""Command-line front end: ``nafourier <command> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for bad
arguments or unusable configuration (including corrupted golden data).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .affine import parse_diagram
from .chars import char_table
from .elliptic import ReductiveDescriptor, parse_descriptor, y_ell
from .errors import GoldenDataError, NafourierError
from .fourier import ft_matrix, verify_flip_group
from .groups import parse_group, partitions
from .padic import SP4_TABLE1, SP4_TABLE2, compact_basis_sl, load_golden, smax, verify_pgl, verify_sl, verify_sp4, verify_steinberg
from .padic import oracle_checks
from .report import Report, serialize
from .suite import DEFAULT_CAPS, SECTIONS, Caps, regression_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

GOLDEN_TABLES = {"sp4-table1": SP4_TABLE1, "sp4-table2": SP4_TABLE2}


class UsageError(Exception):
    pass


def _dumps(data: Any) -> str:
    return json.dumps(serialize(data), indent=2, sort_keys=True)


def _csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


# ---- report rendering ---------------------------------------------------------------------


def render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    checks = report.sorted_checks()
    if fmt == "csv":
        rows = [["check_id", "status", "topic", "description", "lhs", "rhs", "scalar"]]
        for c in checks:
            d = c.to_dict()
            rows.append([c.check_id, c.status, c.topic, c.description] + [json.dumps(d[k], sort_keys=True) for k in ("lhs", "rhs", "scalar")])
        return _csv(rows)
    width = max((len(c.check_id) for c in checks), default=8)
    lines = []
    for c in checks:
        line = f"{c.status.upper():<7} {c.check_id:<{width}}  {c.description}"
        if c.scalar is not None:
            line += f"  [scalar={serialize(c.scalar)}]"
        lines.append(line)
    summary = report.to_dict()["summary"]
    lines.append(f"{summary['pass']} passed, {summary['fail']} failed, {summary['skipped']} skipped")
    if "timing_seconds" in report.extra:
        for name, secs in sorted(report.extra["timing_seconds"].items()):
            lines.append(f"  {name}: {secs:.3f}s")
    return "\n".join(lines) + "\n"


# ---- data commands ------------------------------------------------------------------------


def cmd_ft(args: argparse.Namespace) -> tuple[Any, str, bool]:
    group = parse_group(args.group)
    ft = ft_matrix(group)
    labels = [ft.domain.label(p) for p in ft.domain.params]
    square, unitary = ft.squared_is_identity(), ft.is_unitary()
    data = {"group": group.descriptor, "labels": labels, "matrix": ft.to_rows(), "involution": square, "unitary": unitary}
    if args.format == "csv":
        text = _csv([[""] + labels] + [[lab] + row for lab, row in zip(labels, ft.to_rows())])
    elif args.format == "json":
        text = _dumps(data) + "\n"
    else:
        width = max(len(v) for row in ft.to_rows() for v in row + [""])
        lines = [f"Fourier matrix of {group.descriptor} on {len(labels)} pairs"]
        for lab, row in zip(labels, ft.to_rows()):
            lines.append(" ".join(f"{v:>{width}}" for v in row) + f"   {lab}")
        lines.append(f"involution: {square}  unitary: {unitary}")
        text = "\n".join(lines) + "\n"
    return data, text, square and unitary


def _pairs_dict(pairs) -> dict:
    d = pairs.to_dict()
    d["count"] = len(pairs.classes)
    return d


def cmd_elliptic_pairs(args: argparse.Namespace) -> tuple[Any, str, bool]:
    kind = args.group.upper()
    if kind in ("PGL", "SL"):
        if args.rank is None:
            raise UsageError(f"--rank is required for {kind}")
        n = args.rank
        if not 1 <= n <= 12:
            raise UsageError("--rank must lie in 1..12")
        strata_kind = "PGL_centralizer" if kind == "PGL" else "SL_dual"
        strata = {lam: y_ell(ReductiveDescriptor(strata_kind, n, lam)) for lam in partitions(n)}
        trivial_u = (1,) * n
        data: dict[str, Any] = {
            "group": f"{kind}({n})",
            "regular_s": _pairs_dict(strata[trivial_u]),
            "per_unipotent": {"-".join(map(str, lam)): len(p.classes) for lam, p in strata.items()},
        }
        data["total"] = sum(data["per_unipotent"].values())
        if args.per_unipotent:
            data["strata"] = {"-".join(map(str, lam)): _pairs_dict(p) for lam, p in strata.items()}
        ok = all(p.flip_is_involution() for p in strata.values())
    else:
        desc = f"CENTER({args.rank})" if kind == "CENTER" else args.group
        pairs = y_ell(parse_descriptor(desc))
        data = {"group": str(pairs.descriptor), "regular_s": _pairs_dict(pairs)}
        ok = pairs.flip_is_involution()
    data["flip_involution"] = ok
    if args.format == "json":
        text = _dumps(data) + "\n"
    elif args.format == "csv":
        rows = [["stratum", "s", "h", "flip_s", "flip_h"]]
        strata_out = data.get("strata") or {"regular_s": data["regular_s"]}
        for name, block in strata_out.items():
            for s, h in block["classes"]:
                fs, fh = block["flip"][f"({s},{h})"].strip("()").split(",", 1)
                rows.append([name, s, h, fs, fh])
        text = _csv(rows)
    else:
        lines = [f"{data['group']}: {data['regular_s']['count']} elliptic pair classes with u = 1"]
        for s, h in data["regular_s"]["classes"]:
            lines.append(f"  ({s}, {h}) -> {data['regular_s']['flip'][f'({s},{h})']}")
        if "per_unipotent" in data:
            lines.append("per unipotent class:")
            for lam, count in data["per_unipotent"].items():
                lines.append(f"  {lam}: {count}")
            lines.append(f"total: {data['total']}")
        text = "\n".join(lines) + "\n"
    return data, text, ok


def cmd_max_compact(args: argparse.Namespace) -> tuple[Any, str, bool]:
    diagram = parse_diagram(args.type, args.rank, args.isogeny)
    classes = smax(diagram)
    data = []
    for c in classes:
        d = c.to_dict()
        d["label"] = c.label
        data.append(d)
    if args.format == "json":
        text = _dumps(data) + "\n"
    elif args.format == "csv":
        rows = [["label", "A_order", "orbit", "quotient_type", "action"]]
        rows += [[d["label"], d["A_order"], " ".join(map(str, d["orbit"])), " ".join(d["quotient_type"]), "; ".join(d["action"])] for d in data]
        text = _csv(rows)
    else:
        lines = [f"{diagram.label}: {len(data)} classes of maximal compact subgroups"]
        for d in data:
            quotient = " x ".join(d["quotient_type"]) or "torus"
            lines.append(f"  {d['label']:<8} |A|={d['A_order']}  {quotient}  ({'; '.join(d['action'])})")
        text = "\n".join(lines) + "\n"
    return data, text, True


def cmd_compact_basis(args: argparse.Namespace) -> tuple[Any, str, bool]:
    basis = compact_basis_sl(args.n)
    data = basis.to_dict()
    ok = basis.flip_is_involution()
    if args.format == "json":
        text = _dumps(data) + "\n"
    elif args.format == "csv":
        text = _csv([["label", "elliptic", "flip"]] + [[str(l), l.elliptic, str(basis.flip[l])] for l in basis.labels])
    else:
        lines = [f"SL({args.n}) compact basis: dimension {data['dimension']}, {data['elliptic']} elliptic (marked *)"]
        lines += [f"  {l} -> {basis.flip[l]}" for l in basis.labels]
        text = "\n".join(lines) + "\n"
    return data, text, ok


def cmd_dump_table(args: argparse.Namespace) -> tuple[Any, str, bool]:
    if args.golden:
        rows = load_golden(GOLDEN_TABLES[args.golden], _golden_path(args))
        data = {rep: v.to_dict() for rep, v in rows.items()}
        if args.format == "json":
            return data, _dumps(data) + "\n", True
        out = [["rep_label", "compact_class", "member_label", "coefficient"]]
        for rep in rows:
            for label, coeff in sorted(rows[rep].terms.items()):
                out.append([rep, label[0], label[1], str(coeff)])
        return data, _csv(out), True
    if not args.group:
        raise UsageError("dump-table needs --group or --golden")
    group = parse_group(args.group)
    table = char_table(group)
    reps = [group.format_element(r) for r in group.class_reps]
    labels = [str(l) for l in table.labels]
    values = [[str(v) for v in row.values] for row in table.rows]
    data = {"group": group.descriptor, "classes": reps, "class_sizes": list(group.class_sizes), "labels": labels, "values": values}
    if args.format == "json":
        text = _dumps(data) + "\n"
    elif args.format == "csv":
        text = _csv([["character"] + reps] + [[lab] + row for lab, row in zip(labels, values)])
    else:
        width = max(len(v) for row in values + [reps] for v in row)
        lines = [f"character table of {group.descriptor}", " " * 12 + " ".join(f"{r:>{width}}" for r in reps)]
        lines += [f"{lab[:12]:<12}" + " ".join(f"{v:>{width}}" for v in row) for lab, row in zip(labels, values)]
        text = "\n".join(lines) + "\n"
    return data, text, True


# ---- verify -------------------------------------------------------------------------------


def _golden_path(args: argparse.Namespace) -> Path | None:
    return Path(args.golden_dir) if getattr(args, "golden_dir", None) else None


def _need_n(args: argparse.Namespace) -> int:
    if args.n is None:
        raise UsageError(f"verify {args.target} needs --n")
    if args.n < 1:
        raise UsageError("--n must be positive")
    return args.n


def cmd_verify(args: argparse.Namespace) -> Report:
    target = args.target
    if target == "sl":
        report = verify_sl(_need_n(args))
        if args.oracle:
            report.add(oracle_checks(args.n))
        return report
    if target == "pgl":
        return verify_pgl(_need_n(args))
    if target == "steinberg":
        return verify_steinberg(_need_n(args), args.cls)
    if target == "sp4":
        return verify_sp4(directory=_golden_path(args))
    if target == "flip":
        if not args.group:
            raise UsageError("verify flip needs --group")
        report = Report()
        report.add(verify_flip_group(parse_group(args.group)))
        return report
    caps = Caps(**{k: getattr(args, f"max_{k}") for k in DEFAULT_CAPS.__dataclass_fields__})
    if args.section:
        unknown = [s for s in args.section if s not in SECTIONS]
        if unknown:
            raise UsageError(f"unknown section(s): {', '.join(unknown)}")
    return regression_suite(caps, args.seed, args.workers, args.golden_dir, args.timing, args.section)


COMMANDS = {
    "ft": cmd_ft,
    "elliptic-pairs": cmd_elliptic_pairs,
    "max-compact": cmd_max_compact,
    "compact-basis": cmd_compact_basis,
    "dump-table": cmd_dump_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text", help="output format")
    common.add_argument("--output", help="write the output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    common.add_argument("--golden-dir", help="directory with the golden CSV files and SHA256SUMS")

    parser = argparse.ArgumentParser(prog="nafourier", description="Exact Fourier transforms, elliptic pairs and restriction checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ft", parents=[common], help="Fourier matrix of a finite group")
    p.add_argument("--group", required=True, help="group descriptor, e.g. Z2, S4, Z2^3, flip(Z3)")

    p = sub.add_parser("elliptic-pairs", parents=[common], help="elliptic pairs and the flip")
    p.add_argument("--group", required=True, help="PGL, SL, CENTER or O2")
    p.add_argument("--rank", type=int)
    p.add_argument("--per-unipotent", action="store_true", help="list the classes of every unipotent stratum")

    p = sub.add_parser("max-compact", parents=[common], help="classes of maximal compact subgroups")
    p.add_argument("--type", required=True, help="affine diagram type A..G")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--isogeny", choices=("adjoint", "sc"))

    p = sub.add_parser("compact-basis", parents=[common], help="formal compact basis for SL_n with its flip")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("dump-table", parents=[common], help="character table of a group or a golden table")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--group")
    g.add_argument("--golden", choices=sorted(GOLDEN_TABLES))

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("target", choices=("sl", "pgl", "sp4", "flip", "steinberg", "all"))
    p.add_argument("--n", type=int)
    p.add_argument("--group")
    p.add_argument("--class", dest="cls", help="restrict verify steinberg to one class label such as K01")
    p.add_argument("--oracle", action="store_true", help="verify sl: also compare with the affine induction oracle")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add per-section timing to the report")
    p.add_argument("--section", action="append", help=f"verify all: run only this section ({', '.join(SECTIONS)})")
    for name, default in DEFAULT_CAPS.__dict__.items():
        p.add_argument(f"--max-{name.replace('_', '-')}", dest=f"max_{name}", type=int, default=default)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str | None]:
    """Parse, execute and render; returns (exit code, text, output path)."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.workers < 1:
                raise UsageError("--workers must be positive")
            report = cmd_verify(args)
            return (EXIT_OK if report.ok else EXIT_FAIL), render_report(report, args.format), args.output
        _, text, ok = COMMANDS[args.command](args)
        return (EXIT_OK if ok else EXIT_FAIL), text, args.output
    except GoldenDataError as exc:
        return EXIT_USAGE, f"golden data error: {exc}\n", None
    except (UsageError, NafourierError, ValueError) as exc:
        return EXIT_USAGE, f"error: {exc}\n", None


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, text, output = run(argv)
    except SystemExit as exc:  # argparse usage errors and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if output:
        Path(output).write_text(text)
    else:
        (sys.stderr if code == EXIT_USAGE else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
