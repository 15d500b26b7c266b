"""Command line front end.

Exit codes are a stable contract: 0 success, 1 a verification or growth
check failed, 2 usage or input errors (including underpowered statistics).
Standard output carries data only; seeds and diagnostics go to standard
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import DarygrowError, SizeGuardError, UnderpoweredTestError
from .marks import edge_marked_from_obj
from .bijections import enlarge_trace
from . import oracle
from .sampler import make_kernel
from .tree import format_word

SEED_ENV = "DARY_SEED"


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} is negative")
    return value


def _arity(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"arity must be >= 2, got {value}")
    return value


def _effective_seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
    elif os.environ.get(SEED_ENV):
        raw = os.environ[SEED_ENV]
        try:
            seed = int(raw)
        except ValueError:
            raise DarygrowError(f"{SEED_ENV} must be an integer, got {raw!r}")
    else:
        seed = int.from_bytes(os.urandom(8), "little")
    print(f"effective seed: {seed}", file=sys.stderr)
    return seed


# ----------------------------------------------------------------------
# output formats


def _paren_from_code(d, code):
    out = []
    stack = []
    for sym in code:
        if sym:
            out.append("(")
            stack.append(d)
        else:
            out.append("o")
            while stack:
                stack[-1] -= 1
                if stack[-1] == 0:
                    stack.pop()
                    out.append(")")
                else:
                    break
    return "".join(out)


def _words_of_code(d, code):
    """Pair each preorder symbol with its node word."""
    stack = []  # [word, children seen]
    for sym in code:
        if stack:
            parent_word, used = stack[-1]
            word = parent_word + (used + 1,)
            stack[-1][1] += 1
        else:
            word = ()
        yield word, sym
        if sym:
            stack.append([word, 0])
        else:
            while stack and stack[-1][1] == d:
                stack.pop()


def _dot_from_code(d, code):
    def name(w):
        return format_word(w) if w else "e"

    nodes = []
    edges = []
    for word, sym in _words_of_code(d, code):
        if sym:
            nodes.append(f'  "{name(word)}";')
        else:
            nodes.append(f'  "{name(word)}" [shape=point];')
        if word:
            edges.append(f'  "{name(word[:-1])}" -> "{name(word)}";')
    return "\n".join(["digraph tree {"] + nodes + edges + ["}"])


def _emit(kernel, fmt, out=None):
    out = out if out is not None else sys.stdout
    code = kernel.preorder_code()
    if fmt == "code":
        out.write(" ".join(str(s) for s in code) + "\n")
    elif fmt == "paren":
        out.write(_paren_from_code(kernel.d, code) + "\n")
    elif fmt == "dot":
        out.write(_dot_from_code(kernel.d, code) + "\n")
    else:
        out.write(
            json.dumps(
                {"d": kernel.d, "n": kernel.n, "code": " ".join(str(s) for s in code)}
            )
            + "\n"
        )


# ----------------------------------------------------------------------
# commands


def cmd_grow(args) -> int:
    seed = _effective_seed(args)
    kernel = make_kernel(args.d, seed, args.kernel)
    if args.emit_every:
        done = 0
        while done + args.emit_every < args.n:
            kernel.steps(args.emit_every)
            done += args.emit_every
            _emit(kernel, args.format)
        kernel.steps(args.n - done)
    else:
        kernel.steps(args.n)
    _emit(kernel, args.format)
    if args.counters:
        summary = {
            "kernel": kernel.name,
            "node_allocations": kernel.node_allocations,
            "link_redirections": kernel.link_redirections,
            "rng_draws": kernel.rng_draws,
            "lex_letters_compared": kernel.lex_letters_compared,
            "lex_seconds": kernel.lex_seconds,
            "max_step_redirections": kernel.max_step_redirections,
        }
        print(json.dumps(summary), file=sys.stderr)
    return 0


def _print_report(report) -> int:
    print(json.dumps(report))
    return 0 if report["pass"] else 1


def cmd_verify_bijection(args) -> int:
    status = 0
    for n in range(args.max_n + 1):
        report = oracle.verify_enlarge_bijection(args.d, n, force=args.force)
        status |= _print_report(report)
    return status


def cmd_verify_rotation(args) -> int:
    status = 0
    for m in range(1, args.m + 1):
        report = oracle.verify_rotation_lemma(m, args.max_inc)
        status |= _print_report(report)
    return status


def cmd_verify_variants(args) -> int:
    status = 0
    for n in range(args.max_n + 1):
        report = oracle.verify_binary_variants(n, force=args.force)
        status |= _print_report(report)
    return status


def cmd_verify_counts(args) -> int:
    count = oracle.count_trees(args.d, args.n)
    report = {
        "check": "counts",
        "params": {"d": args.d, "n": args.n},
        "count": str(count),
        "identity_ok": oracle.growth_identity_holds(args.d, args.n),
        "pass": False,
    }
    try:
        report["enumerated"] = len(oracle.enumerate_trees(args.d, args.n, force=args.force))
        report["pass"] = report["identity_ok"] and report["enumerated"] == count
    except SizeGuardError:
        report["enumerated"] = None
        report["pass"] = report["identity_ok"]
    return _print_report(report)


def cmd_uniform(args) -> int:
    seed = _effective_seed(args)
    report = oracle.chi_square_uniformity(
        args.d, args.n, args.samples, seed, kernel=args.kernel
    )
    obj = report.to_obj()
    obj["alpha"] = args.alpha
    obj["pass"] = report.p_value >= args.alpha
    print(json.dumps(obj))
    return 0 if obj["pass"] else 1


def cmd_trace(args) -> int:
    try:
        with open(args.input, "r", encoding="ascii") as fh:
            obj = json.load(fh)
        marked = edge_marked_from_obj(obj)
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read marked tree: {exc}", file=sys.stderr)
        return 2
    if args.d is not None and args.d != marked.d:
        print(f"--d {args.d} does not match input arity {marked.d}", file=sys.stderr)
        return 2
    _, frames = enlarge_trace(marked, args.letter)
    print(json.dumps(frames, indent=2))
    return 0


def cmd_export(args) -> int:
    try:
        with open(args.input, "r", encoding="ascii") as fh:
            code = [int(tok) for tok in fh.read().split()]
    except (OSError, ValueError) as exc:
        print(f"cannot read preorder code: {exc}", file=sys.stderr)
        return 2
    d = args.d if args.d is not None else max(code, default=0)
    if d == 0:
        d = 2  # a single leaf renders the same for every arity
    try:
        from .tree import DaryTree

        DaryTree.from_preorder_code(d, code)  # validation only
    except DarygrowError as exc:
        print(f"invalid code: {exc}", file=sys.stderr)
        return 2
    print(_dot_from_code(d, code))
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darygrow",
        description="Grow, verify and export uniform random d-ary trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    grow = sub.add_parser("grow", help="grow a uniform random tree")
    grow.add_argument("--d", type=_arity, required=True)
    grow.add_argument("--n", type=_nonneg, required=True)
    grow.add_argument("--seed", type=int, default=None)
    grow.add_argument(
        "--format", choices=("code", "paren", "dot", "json"), default="code"
    )
    grow.add_argument("--emit-every", type=int, default=0, metavar="K")
    grow.add_argument("--counters", action="store_true")
    grow.add_argument("--kernel", choices=("python", "cython"), default=None)
    grow.set_defaults(func=cmd_grow)

    verify = sub.add_parser("verify", help="run an exhaustive verifier")
    vsub = verify.add_subparsers(dest="verifier", required=True)

    bij = vsub.add_parser("bijection")
    bij.add_argument("--d", type=_arity, required=True)
    bij.add_argument("--max-n", type=_nonneg, required=True)
    bij.add_argument("--force", action="store_true")
    bij.set_defaults(func=cmd_verify_bijection)

    rot = vsub.add_parser("rotation")
    rot.add_argument("--m", type=int, required=True)
    rot.add_argument("--max-inc", type=int, default=3)
    rot.set_defaults(func=cmd_verify_rotation)

    var = vsub.add_parser("variants")
    var.add_argument("--max-n", type=_nonneg, required=True)
    var.add_argument("--force", action="store_true")
    var.set_defaults(func=cmd_verify_variants)

    cnt = vsub.add_parser("counts")
    cnt.add_argument("--d", type=_arity, required=True)
    cnt.add_argument("--n", type=_nonneg, required=True)
    cnt.add_argument("--force", action="store_true")
    cnt.set_defaults(func=cmd_verify_counts)

    uni = sub.add_parser("uniform", help="chi-square uniformity run")
    uni.add_argument("--d", type=_arity, required=True)
    uni.add_argument("--n", type=_nonneg, required=True)
    uni.add_argument("--samples", type=_nonneg, required=True)
    uni.add_argument("--seed", type=int, default=None)
    uni.add_argument("--alpha", type=float, default=0.001)
    uni.add_argument("--kernel", choices=("python", "cython"), default=None)
    uni.set_defaults(func=cmd_uniform)

    trace = sub.add_parser("trace", help="frame-by-frame growth of one input")
    trace.add_argument("--d", type=_arity, default=None)
    trace.add_argument("--input", required=True)
    trace.add_argument("--letter", type=int, required=True)
    trace.set_defaults(func=cmd_trace)

    export = sub.add_parser("export", help="render a preorder code file")
    export.add_argument("--input", required=True)
    export.add_argument("--d", type=_arity, default=None)
    export.add_argument("--format", choices=("dot",), default="dot")
    export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnderpoweredTestError as exc:
        print(f"underpowered: {exc}", file=sys.stderr)
        return 2
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 1
    except DarygrowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
