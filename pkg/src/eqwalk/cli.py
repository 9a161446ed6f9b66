"""Command-line front end.

Subcommands: code-analyze, group-analyze, graph-analyze, audit, mixing.
Exit codes: 0 success, 2 input error, 3 soundness violation.  All
randomness flows from a single 64-bit seed through numpy's PCG64
(numpy.random.default_rng), so audit runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .abelian import (
    Distribution,
    GroupSpec,
    bernoulli_distribution,
    delta_distribution,
    distribution_from_json,
    fixed_weight_distribution,
    parse_group_spec,
    subgroup_generate,
    uniform_distribution,
)
from .bounds import (
    BoundReport,
    SoundnessError,
    analyze_code,
    analyze_graph_walk,
    analyze_group_walk,
    instance_report,
    random_graph_instance,
    random_group_instance,
    soundness_audit,
)
from .codes import load_generator_file
from .walk import Partition, load_edge_list, transition_from_graph


def parse_noise_spec(spec: str, group: GroupSpec) -> Distribution:
    """Parse a noise spec string into a distribution on the group.

    Grammar: ``uniform``, ``delta:<coords>``, ``bernoulli:p=<float>``,
    ``weight:t=<int>``, or ``file:<path>`` (distribution JSON).
    """
    spec = spec.strip()
    if spec == "uniform":
        return uniform_distribution(group)
    if spec.startswith("delta:"):
        coords = _parse_coords(spec[len("delta:") :], group)
        return delta_distribution(group, coords)
    if spec.startswith("bernoulli:"):
        body = spec[len("bernoulli:") :]
        if not body.startswith("p="):
            raise ValueError(f"expected bernoulli:p=<float>, got {spec!r}")
        return bernoulli_distribution(group, float(body[2:]))
    if spec.startswith("weight:"):
        body = spec[len("weight:") :]
        if not body.startswith("t="):
            raise ValueError(f"expected weight:t=<int>, got {spec!r}")
        return fixed_weight_distribution(group, int(body[2:]))
    if spec.startswith("file:"):
        path = Path(spec[len("file:") :])
        dist = distribution_from_json(path.read_text())
        if dist.group.moduli != group.moduli:
            raise ValueError(
                f"distribution file is on {dist.group}, expected {group}"
            )
        return dist
    raise ValueError(f"unrecognized noise spec {spec!r}")


def _parse_coords(text: str, group: GroupSpec) -> tuple[int, ...]:
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != group.rank:
        raise ValueError(
            f"expected {group.rank} comma-separated coordinates, got {text!r}"
        )
    coords = tuple(int(p) for p in parts)
    group.flat_index(coords)  # range check
    return coords


def _parse_subgroup(text: str | None, group: GroupSpec):
    """Semicolon-separated coordinate tuples; empty means the trivial subgroup."""
    gens = []
    if text:
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if chunk:
                gens.append(_parse_coords(chunk, group))
    return subgroup_generate(group, gens)


def _load_partition_file(path: str, n_states: int) -> Partition:
    """One block per line: space-separated 0-indexed states, # comments."""
    blocks = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        blocks.append([int(x) for x in line.split()])
    if not blocks:
        raise ValueError(f"partition file {path} has no blocks")
    return Partition.from_blocks(blocks, n_states)


def _emit(report: BoundReport, args) -> None:
    if args.format == "json":
        text = json.dumps(report.to_json_dict(), indent=2) + "\n"
    else:
        text = report.to_csv()
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _check_audit_flag(report: BoundReport, args) -> None:
    if getattr(args, "audit", False):
        problems = report.violations()
        if problems:
            raise SoundnessError("; ".join(problems))


def cmd_code_analyze(args) -> int:
    code = load_generator_file(Path(args.code).read_text())
    group = GroupSpec((code.q,) * code.n)
    noise = parse_noise_spec(args.noise, group)
    report = analyze_code(
        code, noise, args.lmax, normalization=args.normalization, with_exact=args.exact
    )
    _check_audit_flag(report, args)
    _emit(report, args)
    return 0


def cmd_group_analyze(args) -> int:
    group = parse_group_spec(args.group)
    noise = parse_noise_spec(args.noise, group)
    subgroup = _parse_subgroup(args.subgroup, group)
    coset = _parse_coords(args.coset, group) if args.coset else 0
    report = analyze_group_walk(
        group, subgroup, noise, args.lmax, coset_rep=coset, with_exact=args.exact
    )
    _check_audit_flag(report, args)
    _emit(report, args)
    return 0


def cmd_graph_analyze(args) -> int:
    edges, n = load_edge_list(Path(args.graph).read_text())
    T = transition_from_graph(edges, n)
    partition = _load_partition_file(args.partition, n) if args.partition else None
    report = analyze_graph_walk(
        T,
        args.lmax,
        partition=partition,
        start=args.start,
        with_exact=args.exact,
        equitable_tol=args.tol,
    )
    _check_audit_flag(report, args)
    _emit(report, args)
    return 0


def cmd_audit(args) -> int:
    rng = np.random.default_rng(args.seed)
    passed = 0
    for i in range(args.instances):
        if i % 4 == 3:
            instance = random_graph_instance(rng, max_vertices=64)
        else:
            instance = random_group_instance(rng, max_order=args.max_order)
        if args.inject_error:
            report = instance_report(instance, args.lmax)
            for row in report.rows:
                row.bound_general = 0.0
                if row.bound_flat is not None:
                    row.bound_flat = 0.0
            problems = report.violations()
            if problems:
                raise SoundnessError(
                    f"instance {i} ({instance.describe()}): " + "; ".join(problems)
                )
        else:
            soundness_audit(instance, args.lmax)
        passed += 1
    print(f"{passed}/{args.instances} pass")
    return 0


def cmd_mixing(args) -> int:
    families = [bool(args.group), bool(args.code), bool(args.graph)]
    if sum(families) != 1:
        raise ValueError("mixing needs exactly one of --group, --code, --graph")
    if args.group:
        group = parse_group_spec(args.group)
        noise = parse_noise_spec(args.noise, group)
        subgroup = _parse_subgroup(args.subgroup, group)
        coset = _parse_coords(args.coset, group) if args.coset else 0
        report = analyze_group_walk(
            group, subgroup, noise, args.lmax, coset_rep=coset, with_exact=args.exact
        )
    elif args.code:
        code = load_generator_file(Path(args.code).read_text())
        group = GroupSpec((code.q,) * code.n)
        noise = parse_noise_spec(args.noise, group)
        report = analyze_code(code, noise, args.lmax, with_exact=args.exact)
    else:
        edges, n = load_edge_list(Path(args.graph).read_text())
        T = transition_from_graph(edges, n)
        report = analyze_graph_walk(T, args.lmax, start=args.start, with_exact=args.exact)

    def applicable(row):
        return row.bound_flat if row.bound_flat is not None else row.bound_general

    bound_ell = next(
        (row.ell for row in report.rows if applicable(row) <= args.eps), None
    )
    if bound_ell is None:
        print("bound: not reached (lmax)")
    else:
        print(f"bound: ell={bound_ell}")
    if report.rows and report.rows[0].exact_tv is not None:
        exact_ell = report.first_ell_at_most(args.eps, "exact_tv")
        if exact_ell is None:
            print("exact: not reached (lmax)")
        else:
            print(f"exact: ell={exact_ell}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lmax", type=int, default=10, help="largest step count")
    parser.add_argument(
        "--exact",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force exact TV on/off (default: on up to 8192 states)",
    )
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", help="write the table here instead of stdout")
    parser.add_argument(
        "--audit",
        action="store_true",
        help="exit 3 if any exact TV value exceeds a bound",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqwalk",
        description=(
            "Total-variation mixing bounds for random walks from equitable "
            "partitions and quotient spectra"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("code-analyze", help="smoothing bounds for a binary linear code")
    p.add_argument("--code", required=True, help="generator matrix file")
    p.add_argument("--noise", required=True, help="noise spec, e.g. bernoulli:p=0.1")
    p.add_argument(
        "--normalization", choices=("canonical", "literal", "both"), default="canonical"
    )
    _add_common(p)
    p.set_defaults(func=cmd_code_analyze)

    p = sub.add_parser("group-analyze", help="smoothing bounds for a coset walk")
    p.add_argument("--group", required=True, help="group spec, e.g. Z2^7 or Z4xZ6")
    p.add_argument("--noise", required=True)
    p.add_argument(
        "--subgroup",
        default="",
        help="semicolon-separated generator coordinate tuples; empty = {0}",
    )
    p.add_argument("--coset", help="coset representative coordinates")
    _add_common(p)
    p.set_defaults(func=cmd_group_analyze)

    p = sub.add_parser("graph-analyze", help="mixing bounds for a regular graph walk")
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--partition", help="equitable partition file (one block per line)")
    p.add_argument("--start", type=int, default=0, help="start vertex")
    p.add_argument("--tol", type=float, default=1e-9, help="equitability tolerance")
    _add_common(p)
    p.set_defaults(func=cmd_graph_analyze)

    p = sub.add_parser("audit", help="random-instance soundness audit")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-order", type=int, default=512)
    p.add_argument("--lmax", type=int, default=16)
    p.add_argument(
        "--inject-error",
        action="store_true",
        help="test hook: corrupt the bounds so the audit must fail",
    )
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("mixing", help="smallest step count with bound <= eps")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--group")
    p.add_argument("--code")
    p.add_argument("--graph")
    p.add_argument("--noise")
    p.add_argument("--subgroup", default="")
    p.add_argument("--coset")
    p.add_argument("--start", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_mixing)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SoundnessError as exc:
        print(f"soundness violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
