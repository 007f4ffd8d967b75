"""``padic`` command-line front end.

Exit codes: 0 for a certificate verdict, 2 when a search bound was exceeded,
1 for malformed input or an internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import selfcheck
from .christol import (
    DEFAULT_MARGIN,
    AlgebraicRelation,
    Holds,
    NotFoundWithinBounds,
    find_relation,
    series_from_dfao,
    series_from_values,
    tau_embed,
    verify_relation,
)
from .finiteness import (
    DEFAULT_VALUE_BOUND,
    EXIT_BOUND,
    EXIT_CERTIFIED,
    EXIT_ERROR,
    InconsistencyError,
    check_finiteness,
    cross_check,
)
from .formats import (
    DslError,
    dumps,
    load_machine,
    load_vdp,
    parse_coefficients,
    parse_presentation,
    read_json,
)
from .kernel import (
    DEFAULT_MAX_ELEMS,
    CoefficientStream,
    Dfao,
    DfaoBacked,
    KernelBoundExceeded,
    TableBacked,
    automatic_eval,
    dfao_from_kernel,
    p_kernel,
)
from .padic import format_rational, parse_rational, reduce_mod, require_prime
from .presentation import Affine, AutomatonBacked, Polynomial, Presentation, check_lipschitz_depth
from .synthesis import DEFAULT_MAX_STATES, Finite, naive_automaton, synthesize_minimal
from .vdp import NotIntegral, extract


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for bound-exceeded
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _base(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"base p must be >= 2, got {text}")
    return v


def _add_presentation(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("function presentation (choose one)")
    g.add_argument("--poly", metavar="C0,C1,...", help="polynomial coefficients, constant first")
    g.add_argument("--affine", metavar="A,B", help="a + b x")
    g.add_argument("--automaton", metavar="FILE", help="transducer JSON file")
    g.add_argument("--vdp", metavar="FILE", help="van der Put series JSON file")
    g.add_argument("--tail", choices=("zero", "truncated"), default="zero",
                   help="how a --vdp table extends past its depth")
    g.add_argument("--fn", metavar="DSL", help='presentation in the text DSL, e.g. "poly p=2 [1, 3]"')
    ap.add_argument("-p", type=_base, help="prime base (for --poly and --affine)")


def _presentation(args) -> Presentation:
    chosen = [k for k in ("poly", "affine", "automaton", "vdp", "fn") if getattr(args, k)]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --poly, --affine, --automaton, --vdp, --fn")
    kind = chosen[0]
    if kind == "fn":
        return parse_presentation(args.fn, Path.cwd())
    if kind == "automaton":
        return AutomatonBacked(load_machine(args.automaton))
    if kind == "vdp":
        return load_vdp(args.vdp).as_presentation(args.tail)
    if args.p is None:
        raise UsageError(f"--{kind} needs -p")
    coeffs = parse_coefficients(getattr(args, kind))
    if kind == "poly":
        return Polynomial(args.p, tuple(coeffs))
    if len(coeffs) != 2:
        raise UsageError("--affine expects exactly two numbers a,b")
    return Affine(args.p, coeffs[0], coeffs[1])


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("PADIC_THREADS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise UsageError(f"PADIC_THREADS must be a positive integer, got {env!r}") from None
    if n < 1:
        raise UsageError(f"PADIC_THREADS must be a positive integer, got {env!r}")
    return n


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, dumps(payload))


def _emit_machine(args, machine) -> None:
    if args.format == "dot":
        _emit(args, machine.to_dot())
    else:
        _emit_json(args, machine.to_dict())


# subcommands -------------------------------------------------------------


def cmd_eval(args) -> int:
    f = _presentation(args)
    x = parse_rational(args.x)
    if args.n is None:
        value = f.exact(x)
        _emit(args, format_rational(value) + "\n")
    else:
        value = reduce_mod(f.exact(x), f.p, args.n)
        _emit(args, f"{value}\n")
    return EXIT_CERTIFIED


def cmd_lipschitz(args) -> int:
    f = _presentation(args)
    v = check_lipschitz_depth(f, args.depth)
    if v is None:
        payload = {"verdict": "LipschitzToDepth", "depth": args.depth}
    else:
        payload = {"verdict": "Violation", "x": v.x, "y": v.y, "n": v.n}
    _emit_json(args, payload)
    return EXIT_CERTIFIED


def cmd_vdp(args) -> int:
    f = _presentation(args)
    try:
        series = extract(f, args.K, threads=_threads(args))
    except NotIntegral as exc:
        _emit_json(args, {"verdict": "NotIntegral", "witness_m": exc.m,
                          "B_m": format_rational(exc.B)})
        return EXIT_CERTIFIED
    _emit_json(args, series.to_dict())
    return EXIT_CERTIFIED


def cmd_synth(args) -> int:
    f = _presentation(args)
    if args.method == "naive":
        _emit_machine(args, naive_automaton(f, args.depth))
        return EXIT_CERTIFIED
    result = synthesize_minimal(f, args.max_states)
    if isinstance(result, Finite):
        if args.format == "dot":
            _emit(args, result.machine.to_dot())
        else:
            _emit_json(args, result.to_dict())
        return EXIT_CERTIFIED
    _emit_json(args, result.to_dict())
    return EXIT_BOUND


def cmd_minimize(args) -> int:
    _emit_machine(args, load_machine(args.machine).minimize())
    return EXIT_CERTIFIED


def _sequence(args):
    """Sequence for ``kernel``: a DFAO file, an explicit table, or the
    coefficient sequence of a function presentation."""
    if args.dfao:
        return DfaoBacked(Dfao.from_dict(read_json(args.dfao)))
    if args.values:
        if args.p is None:
            raise UsageError("--values needs -p")
        values = tuple(Fraction(v) for v in parse_coefficients(args.values))
        K = 0
        while args.p ** (K + 1) <= len(values):
            K += 1
        return TableBacked(args.p, K, values[: args.p**K])
    series = extract(_presentation(args), args.K, threads=_threads(args))
    return CoefficientStream(series)


def cmd_kernel(args) -> int:
    seq = _sequence(args)
    kernel = p_kernel(seq, args.kernel_bound, args.window)
    if isinstance(kernel, KernelBoundExceeded):
        _emit_json(args, kernel.to_dict())
        return EXIT_BOUND
    if args.format == "dot":
        _emit(args, dfao_from_kernel(kernel).to_dot())
        return EXIT_CERTIFIED
    payload = kernel.to_dict()
    payload["dfao"] = dfao_from_kernel(kernel).to_dict()
    _emit_json(args, payload)
    return EXIT_CERTIFIED if kernel.closed else EXIT_BOUND


def cmd_dfao_eval(args) -> int:
    dfao = Dfao.from_dict(read_json(args.dfao))
    values = [automatic_eval(dfao, n) for n in args.n]
    _emit(args, "".join(
        (format_rational(v) if isinstance(v, Fraction) else str(v)) + "\n" for v in values))
    return EXIT_CERTIFIED


def cmd_finiteness(args) -> int:
    f = _presentation(args)
    verdict = check_finiteness(f, args.K, args.value_bound, args.kernel_bound,
                               threads=_threads(args))
    _emit_json(args, verdict.to_dict())
    return verdict.exit_code


def cmd_cross_check(args) -> int:
    f = _presentation(args)
    report = cross_check(f, args.K, args.value_bound, args.kernel_bound, args.max_states,
                         threads=_threads(args))
    _emit_json(args, report.to_dict())
    return report.exit_code


def _series(args, N: int):
    p = require_prime(args.p) if args.p is not None else None
    if args.dfao:
        dfao = Dfao.from_dict(read_json(args.dfao))
        p = require_prime(dfao.p if p is None else p)
        tau = tau_embed(dfao.output, p, args.l)
        return series_from_dfao(dfao, tau, N)
    if args.values:
        if p is None:
            raise UsageError("--values needs -p")
        values = [Fraction(v) for v in parse_coefficients(args.values)]
        if len(values) < N:
            raise UsageError(f"need at least {N} values, got {len(values)}")
        return series_from_values(values[:N], tau_embed(values, p, args.l))
    raise UsageError("give --dfao or --values")


def cmd_christol(args) -> int:
    if args.action == "find":
        needed = 2 * ((args.max_d + 1) * (args.max_H + 1) + DEFAULT_MARGIN)
        N = args.N if args.N is not None else needed
        series = _series(args, N)
        rel = find_relation(series, args.max_d, args.max_H)
        if isinstance(rel, NotFoundWithinBounds):
            _emit_json(args, {"verdict": "NotFoundWithinBounds", "max_d": rel.max_d,
                              "max_H": rel.max_H, "precision": rel.precision})
            return EXIT_BOUND
        _emit_json(args, rel.to_dict())
        return EXIT_CERTIFIED
    if not args.relation:
        raise UsageError("christol verify needs --relation FILE")
    rel = AlgebraicRelation.from_dict(read_json(args.relation))
    N = args.N if args.N is not None else 128
    series = _series(args, N)
    if series.field != rel.field:
        raise UsageError("relation and series live in different fields")
    result = verify_relation(series, rel, N)
    if isinstance(result, Holds):
        _emit_json(args, {"verdict": "Holds", "precision": result.precision})
        return EXIT_CERTIFIED
    _emit_json(args, {"verdict": "FailsAt", "index": result.index})
    return EXIT_ERROR


def cmd_export_dot(args) -> int:
    data = read_json(args.file)
    if "output" in data and data.get("alphabet") is not None:
        obj = Dfao.from_dict(data)
    else:
        obj = load_machine(args.file)
    _emit(args, obj.to_dot())
    return EXIT_CERTIFIED


def cmd_verify_paper(args) -> int:
    results = selfcheck.run_all(_threads(args), args.seed)
    selfcheck.write_artifacts(results, Path(args.out))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return EXIT_CERTIFIED if all(r.passed for r in results) else EXIT_ERROR


# parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padic",
                                 description="Transducers and 1-Lipschitz p-adic maps.")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, handler, help_text, presentation=False, threads=False, fmt=None):
        sp = sub.add_parser(name, help=help_text)
        if presentation:
            _add_presentation(sp)
        if threads:
            sp.add_argument("--threads", type=_positive, default=None,
                            help="worker threads (default: $PADIC_THREADS or 1)")
        if fmt:
            sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        sp.set_defaults(handler=handler)
        return sp

    sp = command("eval", cmd_eval, "evaluate f(x), exactly or modulo p^n", presentation=True)
    sp.add_argument("-x", required=True, help="input: integer or rational a/b")
    sp.add_argument("-n", type=_nonnegative, help="reduce modulo p^n")

    sp = command("lipschitz-check", cmd_lipschitz, "search for a 1-Lipschitz violation",
                 presentation=True)
    sp.add_argument("-D", "--depth", type=_positive, default=8)

    sp = command("vdp", cmd_vdp, "van der Put coefficients up to depth K",
                 presentation=True, threads=True)
    sp.add_argument("-K", type=_positive, default=8)

    sp = command("synth", cmd_synth, "build a transducer for f", presentation=True,
                 fmt=("json", "dot"))
    sp.add_argument("--method", choices=("minimal", "naive"), default="minimal")
    sp.add_argument("-D", "--depth", type=_positive, default=6, help="depth of the naive tree")
    sp.add_argument("--max-states", type=_positive, default=DEFAULT_MAX_STATES)

    sp = command("minimize", cmd_minimize, "minimize a transducer file", fmt=("json", "dot"))
    sp.add_argument("machine", metavar="FILE")

    sp = command("kernel", cmd_kernel, "p-kernel of a sequence", presentation=True,
                 threads=True, fmt=("json", "dot"))
    sp.add_argument("--dfao", metavar="FILE", help="sequence given by a DFAO file")
    sp.add_argument("--values", metavar="V0,V1,...", help="explicit sequence prefix")
    sp.add_argument("-K", type=_positive, default=8,
                    help="depth for the coefficient sequence of a presentation")
    sp.add_argument("--kernel-bound", type=_positive, default=DEFAULT_MAX_ELEMS)
    sp.add_argument("--window", type=_positive, default=None)

    sp = command("dfao-eval", cmd_dfao_eval, "evaluate a DFAO on integers")
    sp.add_argument("dfao", metavar="FILE")
    sp.add_argument("-n", type=_nonnegative, nargs="+", required=True)

    for name, handler, text in (
        ("finiteness", cmd_finiteness, "finiteness criterion on van der Put coefficients"),
        ("cross-check", cmd_cross_check, "finiteness criterion against residual synthesis"),
    ):
        sp = command(name, handler, text, presentation=True, threads=True)
        sp.add_argument("-K", type=_positive, default=10)
        sp.add_argument("--value-bound", type=_positive, default=DEFAULT_VALUE_BOUND)
        sp.add_argument("--kernel-bound", type=_positive, default=DEFAULT_MAX_ELEMS)
        if name == "cross-check":
            sp.add_argument("--max-states", type=_positive, default=DEFAULT_MAX_STATES)

    sp = command("christol", cmd_christol, "algebraic relations over GF(p^l)")
    sp.add_argument("action", choices=("find", "verify"))
    sp.add_argument("--dfao", metavar="FILE")
    sp.add_argument("--values", metavar="V0,V1,...")
    sp.add_argument("-p", type=_base)
    sp.add_argument("-l", type=_positive, default=None, help="field degree (default: least)")
    sp.add_argument("--max-d", type=_positive, default=2)
    sp.add_argument("--max-H", type=_nonnegative, default=3)
    sp.add_argument("-N", type=_positive, default=None, help="series precision")
    sp.add_argument("--relation", metavar="FILE", help="relation to verify")

    sp = command("export-dot", cmd_export_dot, "Graphviz source for a transducer or DFAO")
    sp.add_argument("file", metavar="FILE")

    sp = command("verify-paper", cmd_verify_paper, "run the acceptance corpus", threads=True)
    sp.set_defaults(out="verify-paper-out")
    sp.add_argument("--seed", type=int, default=selfcheck.SEED)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DslError as exc:
        print(f"padic: DSL error at {exc}", file=sys.stderr)
    except InconsistencyError as exc:
        print(f"padic: inconsistency: {exc}", file=sys.stderr)
    except (ValueError, ArithmeticError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"padic: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
