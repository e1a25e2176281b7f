"""Command-line interface: problem file I/O, solving, partitioning,
lifting and consistency checks.

Problem files are JSON documents:

    {
      "name": "...",
      "blocks": [{"cone": "orthant"|"lorentz", "dim": m} |
                 {"cone": "psd", "order": p}],
      "A": [per-block data],
      "b": [per-block data],
      "c": [real vector]
    }

Orthant and Lorentz blocks give A as an m-by-n row-major matrix and b as a
length-m vector.  PSD blocks give A as a list of n full p-by-p matrices
(one per variable) and b as a full p-by-p matrix; both are symmetrized on
load and stored internally in scaled-triangle coordinates.

Exit codes: 0 success, 1 a relation or hypothesis check failed, 2 input
error, 3 solver failure.  The environment variable CONPART_TOL overrides
the default solver tolerance; --tol overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .cones import ConeKind, ConeSpec, smat, svec, sym
from .homogeneous import UnsupportedConeError, check_r0_inclusion, classify_six_dual
from .lifting import LiftKind, LiftMap, arrow_lift, compare_partitions, lift_problem
from .model import ConicProblem, PrimalDualPair, residuals
from .partition import PartitionReport, classify, strict_complementarity
from .solver import SolveOptions, SolveStatus, SolverError, polish_pair, solve


class InputError(ValueError):
    """Malformed or inconsistent input file."""


# ---------------------------------------------------------------- file I/O


def _parse_block(spec: dict) -> ConeSpec:
    kind = spec.get("cone")
    if kind == "orthant":
        return ConeSpec.orthant(int(spec["dim"]))
    if kind == "lorentz":
        return ConeSpec.lorentz(int(spec["dim"]))
    if kind == "psd":
        return ConeSpec.psd(int(spec["order"]))
    raise InputError(f"unknown cone kind: {kind!r}")


def _block_spec(cone: ConeSpec) -> dict:
    if cone.kind is ConeKind.PSD:
        return {"cone": "psd", "order": cone.order}
    return {"cone": cone.kind.value, "dim": cone.dim}


def _load_psd_matrix(data, order: int) -> np.ndarray:
    M = np.asarray(data, dtype=float)
    if M.shape != (order, order):
        raise InputError(f"PSD entry must be a {order}x{order} matrix")
    return svec(sym(M))


def load_problem(path: str) -> ConicProblem:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        blocks = [_parse_block(b) for b in doc["blocks"]]
        c = np.asarray(doc["c"], dtype=float)
        A_blocks, b_blocks = [], []
        for cone, A_doc, b_doc in zip(blocks, doc["A"], doc["b"], strict=True):
            if cone.kind is ConeKind.PSD:
                cols = [_load_psd_matrix(m, cone.order) for m in A_doc]
                if len(cols) != c.size:
                    raise InputError("PSD block needs one matrix per variable")
                A_blocks.append(np.column_stack(cols))
                b_blocks.append(_load_psd_matrix(b_doc, cone.order))
            else:
                A_blocks.append(np.asarray(A_doc, dtype=float))
                b_blocks.append(np.asarray(b_doc, dtype=float))
        return ConicProblem(blocks, A_blocks, b_blocks, c, doc.get("name", ""))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed problem file {path}: {exc}") from exc


def problem_to_doc(problem: ConicProblem) -> dict:
    A_doc, b_doc = [], []
    for cone, A, b in zip(problem.blocks, problem.A_blocks, problem.b_blocks):
        if cone.kind is ConeKind.PSD:
            A_doc.append([smat(A[:, k]).tolist() for k in range(problem.n)])
            b_doc.append(smat(b).tolist())
        else:
            A_doc.append(A.tolist())
            b_doc.append(b.tolist())
    return {
        "name": problem.name,
        "blocks": [_block_spec(cone) for cone in problem.blocks],
        "A": A_doc,
        "b": b_doc,
        "c": problem.c.tolist(),
    }


def save_problem(problem: ConicProblem, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_doc(problem), fh, indent=2)
        fh.write("\n")


def load_pair(problem: ConicProblem, path: str) -> PrimalDualPair:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        x = np.asarray(doc["x"], dtype=float)
        y_blocks = []
        for cone, y_doc in zip(problem.blocks, doc["y"], strict=True):
            y = np.asarray(y_doc, dtype=float)
            if cone.kind is ConeKind.PSD and y.ndim == 2:
                y = svec(sym(y))
            y_blocks.append(y)
        return PrimalDualPair.create(problem, x, y_blocks)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pair file {path}: {exc}") from exc


def save_pair(problem: ConicProblem, pair: PrimalDualPair, path: str) -> None:
    y_doc = []
    for cone, y in zip(problem.blocks, pair.y_blocks):
        y_doc.append(smat(y).tolist() if cone.kind is ConeKind.PSD else list(y))
    with open(path, "w") as fh:
        json.dump({"x": list(pair.x), "y": y_doc}, fh, indent=2)
        fh.write("\n")


def load_lift_map(path: str) -> LiftMap:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return LiftMap(
            [_parse_block(b) for b in doc["sources"]],
            [_parse_block(b) for b in doc["targets"]],
            [np.asarray(M, dtype=float) for M in doc["mats"]],
            LiftKind(doc.get("kind", "general")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed lift-map file {path}: {exc}") from exc


# ------------------------------------------------------------- rendering


def _set(s) -> list[int]:
    return sorted(s)


def partition_report_doc(rep: PartitionReport) -> dict:
    rel = rep.relations
    return {
        "optimal_value": rep.optimal_value,
        "four": {
            "B": _set(rep.four.B),
            "N": _set(rep.four.N),
            "R": _set(rep.four.R),
            "T": _set(rep.four.T),
        },
        "six": {
            "B": _set(rep.six.B),
            "N": _set(rep.six.N),
            "B'": _set(rep.six.Bprime),
            "N'": _set(rep.six.Nprime),
            "O": _set(rep.six.O),
            "C": _set(rep.six.C),
        },
        "evidence": {
            f"{j}:{side.value}": sv.value for (j, side), sv in rep.evidence.items()
        },
        "uncertain": _set(rep.uncertain),
        "strict_complementarity": strict_complementarity(rep),
        "relations": {
            "passed": rel.passed if rel else None,
            "offending": {k: _set(v) for k, v in (rel.offending if rel else {}).items()},
        },
    }


def _print_partition_text(rep: PartitionReport, out) -> None:
    doc = partition_report_doc(rep)
    print(f"optimal value: {doc['optimal_value']:.12g}", file=out)
    four, six = doc["four"], doc["six"]
    print(
        "four-partition: B={B} N={N} R={R} T={T}".format(**four), file=out
    )
    print(
        "six-partition:  B={B} N={N} B'={bp} N'={np} O={O} C={C}".format(
            B=six["B"], N=six["N"], bp=six["B'"], np=six["N'"], O=six["O"], C=six["C"]
        ),
        file=out,
    )
    print(f"strict complementarity: {doc['strict_complementarity']}", file=out)
    if doc["uncertain"]:
        print(f"uncertain blocks: {doc['uncertain']}", file=out)
    print(f"relations: {'pass' if doc['relations']['passed'] else 'FAIL'}", file=out)


# --------------------------------------------------------------- commands


def _options(args) -> SolveOptions:
    tol = args.tol
    if tol is None:
        tol = float(os.environ.get("CONPART_TOL", 1e-8))
    return SolveOptions(tol=tol)


def cmd_solve(args) -> int:
    problem = load_problem(args.file)
    opts = _options(args)
    result = solve(problem, opts)
    if result.status is not SolveStatus.OPTIMAL:
        print(f"solve failed: {result.status.value}", file=sys.stderr)
        return 3
    pair = polish_pair(problem, result.optimal_value, opts) or result.pair
    if args.format == "json":
        doc = {
            "status": result.status.value,
            "optimal_value": result.optimal_value,
            "x": list(pair.x),
        }
        json.dump(doc, sys.stdout, indent=2)
        print()
    else:
        print(f"status: {result.status.value}")
        print(f"optimal value: {result.optimal_value:.12g}")
        print(f"x: {np.array2string(pair.x, precision=9)}")
    if args.emit_pair:
        save_pair(problem, pair, args.emit_pair)
        print(f"pair written to {args.emit_pair}", file=sys.stderr)
    return 0


def cmd_partition(args) -> int:
    problem = load_problem(args.file)
    opts = _options(args)
    extra = load_pair(problem, args.pair) if args.pair else None
    if extra is not None and not residuals(problem, extra).is_solution(
        np.sqrt(opts.tol)
    ):
        raise InputError("supplied pair is not a solution of the problem")
    rep = classify(problem, opts, extra_pair=extra)
    if args.format == "json":
        json.dump(partition_report_doc(rep), sys.stdout, indent=2)
        print()
    else:
        _print_partition_text(rep, sys.stdout)
    return 0


def _build_lift(problem, spec: str) -> LiftMap:
    if spec == "arrow":
        try:
            return arrow_lift(problem.blocks)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return load_lift_map(spec)


def cmd_lift(args) -> int:
    problem = load_problem(args.file)
    lift = _build_lift(problem, args.map)
    lifted = lift_problem(problem, lift)
    out = args.output or (os.path.splitext(args.file)[0] + "-lifted.json")
    save_problem(lifted, out)
    print(f"lifted problem written to {out}")
    return 0


def cmd_check(args) -> int:
    problem = load_problem(args.file)
    opts = _options(args)
    if args.homogeneous_dual:
        return _check_homogeneous(problem, opts, args)
    if args.lift:
        return _check_lift(problem, opts, args)
    rep = classify(problem, opts)
    doc = partition_report_doc(rep)
    ok = bool(doc["relations"]["passed"])
    if args.format == "json":
        json.dump(doc, sys.stdout, indent=2)
        print()
    else:
        _print_partition_text(rep, sys.stdout)
        if rep.four.R == rep.six.C:
            print("R = C: pass")
    return 0 if ok else 1


def _check_homogeneous(problem, opts, args) -> int:
    rep = classify(problem, opts)
    dual_six = classify_six_dual(problem)
    agree = (
        dual_six.B == rep.six.B
        and dual_six.N == rep.six.N
        and dual_six.Bprime == rep.six.Bprime
        and dual_six.Nprime == rep.six.Nprime
        and dual_six.O == rep.six.O
        and dual_six.C == rep.six.C
    )
    inclusion = check_r0_inclusion(problem, rep.four)
    doc = {
        "dual_six": {
            "B": _set(dual_six.B),
            "N": _set(dual_six.N),
            "O": _set(dual_six.O),
            "C": _set(dual_six.C),
        },
        "support_six": partition_report_doc(rep)["six"],
        "agree": agree,
        "r0_inclusion": inclusion,
    }
    if args.format == "json":
        json.dump(doc, sys.stdout, indent=2)
        print()
    else:
        print(
            "dual characterization "
            + ("agrees" if agree else "DISAGREES with the support route")
        )
        print(f"r0 inclusion: {'pass' if inclusion else 'FAIL'}")
    return 0 if agree and inclusion else 1


def _check_lift(problem, opts, args) -> int:
    lift = _build_lift(problem, args.lift)
    cr = compare_partitions(problem, lift, opts)
    hyp = cr.hypotheses
    doc = {
        "hypotheses": {
            "injective": hyp.injective,
            "adjoint_image_closed_via_coercivity": hyp.adjoint_image_closed_via_coercivity,
            "boundary_preserving": hyp.boundary_preserving,
            "kernel_trivial_on_polar": hyp.kernel_trivial_on_polar,
            "kernel_witnesses": {
                str(j): list(z) for j, z in hyp.kernel_witnesses.items()
            },
        },
        "assertions": cr.assertions,
        "original": partition_report_doc(cr.original),
        "lifted": partition_report_doc(cr.lifted),
        "passed": cr.passed,
    }
    if args.format == "json":
        json.dump(doc, sys.stdout, indent=2)
        print()
    else:
        if hyp.kernel_trivial_on_polar:
            print("kernel condition: pass")
        else:
            for j, z in hyp.kernel_witnesses.items():
                witness = ", ".join(f"{v:g}" for v in z)
                print(f"kernel condition FAILED, witness ({witness}) at block {j}")
        for name, value in cr.assertions.items():
            state = "not applicable" if value is None else ("pass" if value else "FAIL")
            print(f"{name}: {state}")
        diff = sorted(
            set(_diff_blocks(cr.original, cr.lifted))
        )
        if diff:
            print(f"six-partitions differ at blocks {diff}")
        else:
            print("six-partitions agree")
    hypotheses_ok = (
        hyp.injective
        and hyp.adjoint_image_closed_via_coercivity
        and hyp.boundary_preserving
        and hyp.kernel_trivial_on_polar
    )
    return 0 if cr.passed and hypotheses_ok else 1


def _diff_blocks(rep_a: PartitionReport, rep_b: PartitionReport):
    def label(six, j):
        for name in ("B", "N", "Bprime", "Nprime", "O", "C"):
            if j in getattr(six, name):
                return name
        return "?"

    r = len(rep_a.six.B | rep_a.six.N | rep_a.six.Bprime | rep_a.six.Nprime
            | rep_a.six.O | rep_a.six.C)
    for j in range(r):
        if label(rep_a.six, j) != label(rep_b.six, j):
            yield j


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conpart",
        description="complementarity partitions of multifold conic programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file (JSON)")
        p.add_argument("--tol", type=float, default=None, help="solver tolerance")
        p.add_argument(
            "--format", choices=("text", "json"), default="text", help="output format"
        )

    p = sub.add_parser("solve", help="solve a problem and print the solution")
    common(p)
    p.add_argument("--emit-pair", metavar="OUT", help="write the solution pair")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("partition", help="compute both complementarity partitions")
    common(p)
    p.add_argument("--pair", metavar="FILE", help="extra solution-pair witness")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("lift", help="lift a problem through a block map")
    common(p)
    p.add_argument("--map", default="arrow", help="'arrow' or a lift-map file")
    p.add_argument("-o", "--output", help="output problem file")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check", help="verify partition relations and hypotheses")
    common(p)
    p.add_argument(
        "--lift",
        nargs="?",
        const="arrow",
        default=None,
        help="compare against the lifted problem ('arrow' or a map file)",
    )
    p.add_argument(
        "--homogeneous-dual",
        action="store_true",
        help="cross-check the dual lineality-space characterization",
    )
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UnsupportedConeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
