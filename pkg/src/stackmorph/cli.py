"""Command-line interface.

Exit codes: 0 on success, 1 on data or verification failure, 2 on usage
errors. STACKMORPH_SEED overrides any --seed flag.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .builtins import BUILTIN_NAMES, builtin, window_from_spec
from .errors import DataError, StackmorphError
from .noise import salt_pepper
from .operators import (
    BorderPolicy,
    DEFAULT_BORDER,
    SetOperator,
    StackOperator,
    apply_set,
    apply_stack,
)
from .pgm import read_pgm, write_pgm
from .pipeline import load_pipeline, run_figure, run_pipeline
from .properties import check_stack_filter, check_structural, verify_stack_inheritance
from .representations import (
    basis_of,
    kernel_of,
    operator_from_basis,
    stack_basis_level,
)
from .serialization import (
    format_basis,
    format_operator,
    format_stack_basis,
    parse_basis,
    parse_operator,
)
from .threshold import BinaryImage, GreyImage, binary_from_grey, cross_section, scale_binary
from .train import train_majority
from .verify import run_all

_BORDERS = [b.value for b in BorderPolicy]


def _seed(args) -> int:
    env = os.environ.get("STACKMORPH_SEED")
    return int(env) if env is not None else args.seed


def _read_operator_file(path: str) -> tuple[SetOperator, int]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_operator(fh.read())


def _resolve_stages(args) -> tuple[list[SetOperator], int | None]:
    """Operator stages plus the m recorded in an operator file, if any."""
    if args.builtin is not None:
        window = window_from_spec(args.window)
        return builtin(args.builtin, window, asf_order=args.asf_order), None
    op, m = _read_operator_file(args.operator)
    return [op], m


def _add_operator_source(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", choices=BUILTIN_NAMES, help="stock operator")
    group.add_argument("--operator", metavar="FILE", help="operator file")
    p.add_argument("--window", default="3x3", help="builtin window size, e.g. 3x3")
    p.add_argument("--asf-order", choices=("oc", "co"), default="oc")


def cmd_apply(args) -> int:
    stages, file_m = _resolve_stages(args)
    img = read_pgm(args.input)
    m = img.max_level
    if args.m is not None and args.m != m:
        raise DataError(f"--m {args.m} differs from image maxval {m}")
    if file_m is not None and file_m != m:
        raise DataError(f"operator file has m={file_m}, image maxval is {m}")
    border = BorderPolicy(args.border)
    if args.mode == "set":
        x = binary_from_grey(img)
        for op in stages:
            x = apply_set(op, x, border)
        out = scale_binary(x, m)
    else:
        out = img
        for op in stages:
            out = apply_stack(StackOperator(op, m), out, border)
    if args.threshold is not None:
        out = scale_binary(cross_section(out, args.threshold), m)
    write_pgm(out, args.output, args.format)
    return 0


def cmd_props(args) -> int:
    stages, file_m = _resolve_stages(args)
    if len(stages) != 1:
        raise DataError("props reports on a single-stage operator")
    op = stages[0]
    report = check_structural(op)
    print(report.render())
    if args.verify_stack is not None:
        rep = verify_stack_inheritance(op, args.verify_stack)
        print()
        print(rep.render())
        if not rep.all_match:
            return 1
    return 0


def cmd_basis(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    if args.from_basis:
        parsed = parse_basis(text)
        if parsed.kind != "binary":
            raise DataError("only a binary basis file inverts to an operator file")
        op = operator_from_basis(parsed.binary)
        m = args.m if args.m is not None else (parsed.m or 1)
        out_text = format_operator(op, m)
    else:
        op, m = parse_operator(text)
        out_text = format_basis(basis_of(kernel_of(op)))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(out_text)
    return 0


def cmd_stack_basis(args) -> int:
    op, file_m = _read_operator_file(args.input)
    m = args.m if args.m is not None else file_m
    basis = basis_of(kernel_of(op))
    per_level = {t: stack_basis_level(basis, m, t) for t in args.t}
    text = format_stack_basis(per_level, m)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_filter_check(args) -> int:
    op, file_m = _read_operator_file(args.input)
    m = args.m if args.m is not None else file_m
    is_filter, witness = check_stack_filter(op, m, seed=_seed(args))
    if is_filter:
        print(f"stack filter: yes (thresholding commutes at every level, m={m})")
        return 0
    print(f"stack filter: no (m={m})")
    print(f"witness patch: {tuple(witness.pattern.levels)} at level {witness.level}")
    return 1


def cmd_noise(args) -> int:
    img = read_pgm(args.input)
    out = salt_pepper(img, args.p, _seed(args))
    write_pgm(out, args.output, args.format)
    return 0


def cmd_compose(args) -> int:
    cfg = load_pipeline(args.config)
    env = os.environ.get("STACKMORPH_SEED")
    if env is not None:
        from dataclasses import replace

        cfg = replace(cfg, seed=int(env))
    img = read_pgm(args.input)
    out = run_pipeline(cfg, img)
    write_pgm(out, args.output, args.format)
    return 0


def cmd_train(args) -> int:
    if len(args.images) < 2 or len(args.images) % 2 != 0:
        raise DataError("train needs an even number of images: input target ...")
    window = window_from_spec(args.window)
    pairs = []
    for i in range(0, len(args.images), 2):
        src = binary_from_grey(read_pgm(args.images[i]))
        tgt = binary_from_grey(read_pgm(args.images[i + 1]))
        pairs.append((src, tgt))
    op = train_majority(pairs, window)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(format_operator(op, args.m))
    return 0


def cmd_verify(args) -> int:
    results = run_all()
    failed = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<26} {mark}  ({r.seconds:6.2f}s)  {r.detail}")
        if not r.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return 0 if failed == 0 else 1


def cmd_figure1(args) -> int:
    result = run_figure(args.outdir, seed=_seed(args), noise_p=args.p, m=args.m)
    print(f"l1 noisy vs clean:    {result.l1_noisy}")
    print(f"l1 denoised vs clean: {result.l1_denoised}")
    print(f"l1 reduction:         {result.reduction:.1%}")
    print(
        "boundary extension exact: "
        + ("yes" if result.boundary_extension_exact else "no")
    )
    print(f"report: {result.paths['report']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stackmorph",
        description="Grey-scale morphology via threshold decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="run an operator over an image")
    _add_operator_source(p)
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--mode", choices=("set", "stack"), default="stack")
    p.add_argument("--border", choices=_BORDERS, default=DEFAULT_BORDER.value)
    p.add_argument("--m", type=int, default=None, help="assert the image maxval")
    p.add_argument("--threshold", type=int, default=None, help="binarize output at t")
    p.add_argument("--format", choices=("P2", "P5"), default="P5")
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("props", help="report lattice properties of an operator")
    _add_operator_source(p)
    p.add_argument(
        "--verify-stack",
        type=int,
        metavar="M",
        default=None,
        help="also compare against grey-side brute force at this max level",
    )
    p.set_defaults(fn=cmd_props)

    p = sub.add_parser("basis", help="operator file to basis file, or back")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument(
        "--from",
        dest="from_basis",
        action="store_true",
        help="input is a basis file; write an operator file",
    )
    p.add_argument("--m", type=int, default=None, help="m for the operator file")
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("stack-basis", help="grey basis of the stack extension")
    p.add_argument("input", help="operator file")
    p.add_argument("output", nargs="?", default=None, help="basis file (default stdout)")
    p.add_argument("--t", type=int, action="append", required=True, help="level(s)")
    p.add_argument("--m", type=int, default=None, help="max level (default from file)")
    p.set_defaults(fn=cmd_stack_basis)

    p = sub.add_parser("filter-check", help="does thresholding commute at all levels")
    p.add_argument("input", help="operator file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_filter_check)

    p = sub.add_parser("noise", help="salt-and-pepper corruption")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("P2", "P5"), default="P5")
    p.set_defaults(fn=cmd_noise)

    p = sub.add_parser("compose", help="run a JSON pipeline over an image")
    p.add_argument("config")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--format", choices=("P2", "P5"), default="P5")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("train", help="fit an operator by per-pattern majority vote")
    p.add_argument("output", help="operator file to write")
    p.add_argument("images", nargs="+", help="alternating input and target PGMs")
    p.add_argument("--window", default="3x3")
    p.add_argument("--m", type=int, default=1, help="m recorded in the operator file")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("verify", help="run the verification suites")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("figure1", help="boundary and denoising demo pipeline")
    p.add_argument("outdir")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--p", type=float, default=0.025)
    p.add_argument("--m", type=int, default=255)
    p.set_defaults(fn=cmd_figure1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except StackmorphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
