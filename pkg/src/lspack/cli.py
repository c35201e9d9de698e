"""``lspack`` command line.

Exit codes: 0 optimal / ok, 1 suboptimal / no, 2 invalid input, 3 budget-limited.
"""

from __future__ import annotations

import argparse
import sys

from .circuit import CircuitError, format_circuit, parse_circuit, to_boxes
from .estimator import (
    CLOCK_RATE_HZ,
    config_count,
    distillation_case_study,
    distillation_circuit,
    estimate_enumeration_time,
    seconds_to_hours,
)
from .placement import (
    LayoutError,
    bounding_box,
    canonical_row_placement,
    is_theoretically_optimal,
    optimal_patch_count,
    parse_layout,
    validate,
    worst_case_patch_count,
)
from .reduction import (
    InstanceError,
    LayoutNotOptimal,
    format_instance,
    instance_to_circuit,
    parse_instance,
    partition_from_layout,
)
from .render import RenderOptions, render
from .solver import SolverBudget, default_seed, solve_anneal, solve_exact, solve_greedy
from .solver.base import SolveResult

EXIT_OK, EXIT_NO, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_boxes(path: str, include_idle: bool):
    c = parse_circuit(_read(path))
    return c, to_boxes(c, include_idle=include_idle)


def cmd_translate(args) -> int:
    c, b = _load_boxes(args.circuit, args.include_idle)
    lines = [f"{len(b)} boxes"]
    lines += [f"box {box.box_id}: " + " ".join(map(str, box.members)) for box in b.boxes]
    lines.append(f"eq1_patches={optimal_patch_count(b)}")
    lines.append(f"eq2_patches={worst_case_patch_count(b, c.qubit_count)}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_solve(args) -> int:
    c, b = _load_boxes(args.circuit, args.include_idle)
    if not b.boxes:
        raise _Usage("circuit has no CNOTs to place")
    budget = SolverBudget(args.max_nodes, args.max_seconds, args.seed)
    if args.method == "exact":
        result = solve_exact(b, budget, max_width=args.max_width)
    elif args.method == "greedy":
        result = solve_greedy(b)
    elif args.method == "anneal":
        result = solve_anneal(b, budget)
    else:
        lay = canonical_row_placement(b, c.qubit_count).normalized()
        a = bounding_box(lay).area
        result = SolveResult(lay, a, a == optimal_patch_count(b), 0, 0.0, "canonical")
    _write(args.output, result.to_text())
    return EXIT_OK if result.proven_optimal else EXIT_BUDGET


def cmd_verify(args) -> int:
    layout = parse_layout(_read(args.layout))
    _, b = _load_boxes(args.circuit, args.include_idle)
    report = validate(layout, b)
    print(report)
    if not report.valid:
        return EXIT_INVALID
    a = bounding_box(layout).area
    n = optimal_patch_count(b)
    optimal = is_theoretically_optimal(layout, b)
    print(f"area={a} eq1_patches={n} theoretically_optimal={int(optimal)}")
    return EXIT_OK if optimal else EXIT_NO


def cmd_reduce(args) -> int:
    inst = parse_instance(_read(args.instance))
    g = instance_to_circuit(inst)
    _write(args.output, format_circuit(g.circuit))
    if args.output not in (None, "-"):
        print(f"qubits={g.circuit.qubit_count} boxes={len(g.boxes)} eq1_patches={optimal_patch_count(g.boxes)}")
    return EXIT_OK


def cmd_extract(args) -> int:
    layout = parse_layout(_read(args.layout))
    inst = parse_instance(_read(args.instance))
    g = instance_to_circuit(inst)
    try:
        part = partition_from_layout(layout, g)
    except LayoutNotOptimal:
        print("NO (layout not optimal)")
        return EXIT_NO
    for grp in part.sets:
        vals = [inst.a[i - 1] for i in grp]
        print("{" + ",".join(map(str, grp)) + "} values=" + "+".join(map(str, vals)) + f"={sum(vals)}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.what == "configs":
        cc = config_count(args.n, unlabeled=args.unlabeled)
        print(f"n_sets={cc.n_sets}")
        print(f"count={cc.count}")
        print(f"count_sci={float(cc.count):.3e}")
    elif args.what == "time":
        cc = config_count(args.n, unlabeled=args.unlabeled)
        secs = estimate_enumeration_time(cc, args.rate_hz)
        print(f"n_sets={cc.n_sets}")
        print(f"count={cc.count}")
        print(f"rate_hz={args.rate_hz:g}")
        print(f"seconds={float(secs):.3e}")
        print(f"hours={float(seconds_to_hours(secs)):.3e}")
    else:
        if args.write_circuit:
            _write(args.write_circuit, format_circuit(distillation_circuit()))
        rep = distillation_case_study()
        print(f"n_qubits={rep.n_qubits}")
        print(f"eq1_patches={rep.eq1_patches}")
        print(f"extra_injection_patches={rep.extra_injection_patches}")
        print(f"total_optimal={rep.total_optimal}")
        print(f"eq2_patches={rep.eq2_patches}")
        print(f"ratio={rep.ratio:.4f}")
    return EXIT_OK


def cmd_render(args) -> int:
    layout = parse_layout(_read(args.layout))
    opts = RenderOptions(args.format, args.cell_size, args.show_box_ids)
    _write(args.output, render(layout, opts))
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lspack", description="Lattice-surgery patch placement toolkit")
    sp = p.add_subparsers(dest="cmd", required=True)

    def idle_flag(q):
        q.add_argument("--include-idle", action="store_true",
                       help="give every CNOT-free qubit a one-patch box")

    q = sp.add_parser("translate", help="merge CNOTs and list boxes with patch bounds")
    q.add_argument("circuit")
    idle_flag(q)
    q.set_defaults(func=cmd_translate)

    q = sp.add_parser("solve", help="find a low-area layout")
    q.add_argument("circuit")
    q.add_argument("--method", choices=["exact", "greedy", "anneal", "canonical"], default="exact")
    q.add_argument("--seed", type=int, default=None, help="default: $LSPACK_SEED or 0")
    q.add_argument("--max-nodes", type=_positive_int, default=SolverBudget.max_nodes)
    q.add_argument("--max-seconds", type=float, default=SolverBudget.max_seconds)
    q.add_argument("--max-width", type=_positive_int, default=None, help="exact method only")
    q.add_argument("-o", "--output")
    idle_flag(q)
    q.set_defaults(func=cmd_solve)

    q = sp.add_parser("verify", help="validate a layout against a circuit")
    q.add_argument("layout")
    q.add_argument("circuit")
    idle_flag(q)
    q.set_defaults(func=cmd_verify)

    q = sp.add_parser("reduce", help="3-partition instance to gadget circuit")
    q.add_argument("instance")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_reduce)

    q = sp.add_parser("extract", help="read a partition off an optimal gadget layout")
    q.add_argument("layout")
    q.add_argument("instance")
    q.set_defaults(func=cmd_extract)

    q = sp.add_parser("estimate", help="resource arithmetic")
    esp = q.add_subparsers(dest="what", required=True)
    e = esp.add_parser("configs")
    e.add_argument("n", type=_positive_int)
    e.add_argument("--unlabeled", action="store_true")
    e.set_defaults(func=cmd_estimate)
    e = esp.add_parser("time")
    e.add_argument("n", type=_positive_int)
    e.add_argument("--rate-hz", type=float, default=CLOCK_RATE_HZ)
    e.add_argument("--unlabeled", action="store_true")
    e.set_defaults(func=cmd_estimate)
    e = esp.add_parser("distillation")
    e.add_argument("--write-circuit", metavar="PATH")
    e.set_defaults(func=cmd_estimate)

    q = sp.add_parser("render", help="draw a layout as ascii or svg")
    q.add_argument("layout")
    q.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    q.add_argument("--cell-size", type=int, default=24)
    q.add_argument("--show-box-ids", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = default_seed()
    try:
        return int(args.func(args))
    except (CircuitError, LayoutError, InstanceError, _Usage, ValueError) as exc:
        print(f"lspack: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
