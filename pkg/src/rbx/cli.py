"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 usage/domain/parse error,
3 guard exceeded.  Results go to stdout, diagnostics and traces to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .base import Algebra, BaseOperator, BaseRB, OpKind, format_fraction, scalar, verify_rb_axiom
from .errors import DomainError, GuardError, InternalError
from .expressions import evaluate
from .free_rb import DEFAULT_MAX_WORD_LEN, FreeRB
from .localize import LocalizedRB, Variant
from .parsing import parse_element, parse_expression
from .presented import (
    DEFAULT_MAX_STEPS,
    STRATEGIES,
    LocalizationTensorInstance,
    Localization,
    TensorProduct,
    check_localization_tensor,
    cross_check_localization,
    equal_mod_ideal,
    normalize,
)
from . import sampling

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
DEFAULT_SEED = 0


@dataclass
class Session:
    algebra: Algebra
    operator: Optional[BaseOperator]
    weight: Fraction
    variant: Optional[Variant]
    max_word_len: int
    max_steps: int
    as_json: bool
    trace: bool

    def localized(self) -> LocalizedRB:
        if self.algebra.denominator is None:
            raise DomainError("this command needs --localize")
        return LocalizedRB.build(self.algebra, self.require_operator(), self.variant, self.max_word_len)

    def require_operator(self) -> BaseOperator:
        if self.operator is None:
            return BaseOperator.zero(self.weight)
        return self.operator

    def ring(self):
        """The explicit localized carrier under --localize, otherwise the free algebra."""
        if self.algebra.denominator is not None:
            return self.localized()
        return FreeRB(self.algebra, self.weight, self.max_word_len)

    def parse(self, text: str, ring=None):
        ring = ring or self.ring()
        return evaluate(parse_expression(text, self.algebra), ring)


def parse_operator(text: str, default_var: str) -> BaseOperator:
    name, _, var = text.partition(":")
    if name == "zero":
        return BaseOperator.zero(0)
    if name == "id":
        return BaseOperator.identity()
    if name == "negid":
        return BaseOperator.neg_identity()
    if name == "integral":
        return BaseOperator.integral(var or default_var)
    raise DomainError(f"unknown operator {text!r}; choose zero, id, negid or integral[:var]")


def parse_denominator(text: str, variables: list[str]) -> tuple[str, list[Fraction]]:
    var, _, poly = text.partition(":")
    if var not in variables:
        variables.append(var)
    if not poly:
        return var, [Fraction(0), Fraction(1)]
    ring = Algebra.polynomial(var)
    s = parse_element(poly, ring)
    coeffs = [Fraction(0)] * (max((k.exponents[0] for k in s.terms), default=0) + 1)
    for k, c in s.terms.items():
        coeffs[k.exponents[0]] = c
    return var, coeffs


def build_algebra(vars_text: Optional[str], localize: Optional[str]) -> Algebra:
    variables = [v for v in (vars_text or "").replace(" ", "").split(",") if v]
    if localize:
        var, coeffs = parse_denominator(localize, variables)
        return Algebra.localized(variables, var, coeffs)
    return Algebra.polynomial(*(variables or ["x"]))


def resolve_operator(op_text: Optional[str], weight_text: Optional[str], algebra: Algebra):
    default_var = algebra.denominator.variable if algebra.denominator else algebra.variables[0]
    weight = scalar(weight_text) if weight_text is not None else None
    op = None
    if op_text:
        op = parse_operator(op_text, default_var)
        if op.kind is OpKind.ZERO and weight is not None:
            op = BaseOperator.zero(weight)
        if weight is not None and op.weight != weight:
            raise DomainError(f"operator {op} has weight {format_fraction(op.weight)}, "
                              f"not {format_fraction(weight)}")
        weight = op.weight
    return op, weight if weight is not None else Fraction(0)


def session_from(args) -> Session:
    algebra = build_algebra(args.vars, args.localize)
    op, weight = resolve_operator(args.op, args.weight, algebra)
    variant = Variant(args.variant) if args.variant else None
    return Session(algebra, op, weight, variant, args.max_word_len, args.max_steps, args.json, args.trace)


def emit(session: Session, value, header: Optional[str] = None):
    if session.as_json:
        payload = value.to_json()
        if header:
            payload = {"header": header, **payload}
        print(json.dumps(payload))
    else:
        if header:
            print(header)
        print(value)


# -- subcommands --------------------------------------------------------------

def cmd_mul(args, session: Session) -> int:
    ring = session.ring()
    u, v = session.parse(args.left, ring), session.parse(args.right, ring)
    emit(session, ring.mul(u, v), getattr(ring, "header", None))
    return EXIT_OK


def cmd_applyp(args, session: Session) -> int:
    ring = session.ring()
    emit(session, ring.op(session.parse(args.expr, ring)), getattr(ring, "header", None))
    return EXIT_OK


def _rbcheck_target(session: Session):
    if session.algebra.denominator is not None:
        return session.localized()
    if session.operator is not None:
        return BaseRB(session.algebra, session.operator)
    return FreeRB(session.algebra, session.weight, session.max_word_len)


def _random_sample(target, rng):
    if isinstance(target, LocalizedRB):
        return sampling.random_localized_element(target, rng)
    if isinstance(target, FreeRB):
        return sampling.random_shuffle_element(target, rng)
    return sampling.random_polynomial(target.algebra, rng, max_terms=3, max_exp=3)


def cmd_rbcheck(args, session: Session) -> int:
    target = _rbcheck_target(session)
    if args.random is not None:
        rng = random.Random(args.seed)
        pairs = [(_random_sample(target, rng), _random_sample(target, rng)) for _ in range(args.random)]
    else:
        if len(args.exprs) != 2:
            raise DomainError("rbcheck needs two expressions or --random N")
        x, y = (evaluate(parse_expression(t, session.algebra), target) for t in args.exprs)
        pairs = [(x, y)]
    failed = [(x, y) for x, y in pairs if not verify_rb_axiom(target, session.weight, x, y)]
    if session.as_json:
        print(json.dumps({"checked": len(pairs), "failed": len(failed),
                          "weight": format_fraction(session.weight)}))
    else:
        print(f"rb axiom, weight {format_fraction(session.weight)}: {len(pairs) - len(failed)}/{len(pairs)} pairs hold")
        for x, y in failed[:5]:
            print(f"counterexample: x = {x} ; y = {y}")
    return EXIT_OK if not failed else EXIT_FAILED


def cmd_localize(args, session: Session) -> int:
    ring = session.localized()
    value = session.parse(args.expr, ring)
    image = ring.op(value)
    if session.as_json:
        print(json.dumps({"header": ring.header, "value": value.to_json(), "p": image.to_json()}))
    else:
        print(ring.header)
        print(f"value: {value}")
        print(f"P(value): {image}")
    return EXIT_OK


def _print_trace(nf):
    for line in nf.trace:
        print(line, file=sys.stderr)


def _localization(session: Session) -> Localization:
    if session.algebra.denominator is None:
        raise DomainError("this command needs --localize")
    return Localization(session.algebra, session.require_operator())


def cmd_normalize(args, session: Session) -> int:
    pres = _localization(session)
    e = parse_expression(args.expr, session.algebra)
    nf = normalize(e, pres, args.strategy, session.trace, session.max_steps, session.max_word_len)
    _print_trace(nf)
    emit(session, nf.element)
    return EXIT_OK


def _verdict(session: Session, verdict) -> int:
    if session.trace:
        _print_trace(verdict.left)
        _print_trace(verdict.right)
    if session.as_json:
        print(json.dumps({"status": verdict.status.value, "left": verdict.left.to_json(),
                          "right": verdict.right.to_json()}))
    else:
        print(verdict)
    return EXIT_OK if verdict.proven else EXIT_FAILED


def cmd_equal(args, session: Session) -> int:
    pres = _localization(session)
    e1 = parse_expression(args.left, session.algebra)
    e2 = parse_expression(args.right, session.algebra)
    verdict = equal_mod_ideal(e1, e2, pres, strategy=args.strategy, trace=session.trace,
                              max_steps=session.max_steps, max_word_len=session.max_word_len)
    return _verdict(session, verdict)


def _tensor_presentation(args) -> TensorProduct:
    r1 = build_algebra(args.r1, args.r1_localize)
    r2 = build_algebra(args.r2, None)
    op1, w1 = resolve_operator(args.r1_op or "zero", args.weight, r1)
    op2, w2 = resolve_operator(args.r2_op or "zero", args.weight, r2)
    r0 = tuple(v for v in (args.r0 or "").replace(" ", "").split(",") if v)
    return TensorProduct(r0, r1, op1, r2, op2)


def cmd_tensor(args, session: Session) -> int:
    pres = _tensor_presentation(args)
    exprs = [parse_expression(t, pres.carrier) for t in args.exprs]
    kw = dict(strategy=args.strategy, max_steps=session.max_steps, max_word_len=session.max_word_len)
    if len(exprs) == 1:
        nf = normalize(exprs[0], pres, trace=session.trace, **kw)
        _print_trace(nf)
        emit(session, nf.element, None if session.as_json else f"carrier={pres.carrier}")
        return EXIT_OK
    if len(exprs) == 2:
        return _verdict(session, equal_mod_ideal(exprs[0], exprs[1], pres, trace=session.trace, **kw))
    raise DomainError("tensor takes one expression to normalize or two to compare")


def cmd_crosscheck(args, session: Session) -> int:
    ring = session.localized()
    if args.random is not None:
        rng = random.Random(args.seed)
        samples = [sampling.random_localized_element(ring, rng) for _ in range(args.random)]
    elif args.expr is not None:
        samples = [session.parse(args.expr, ring)]
    else:
        raise DomainError("crosscheck needs an expression or --random N")
    kw = dict(strategy=args.strategy, max_steps=session.max_steps)
    verdicts = [cross_check_localization(u, **kw) for u in samples]
    bad = [(u, v) for u, v in zip(samples, verdicts) if not v.proven]
    if session.as_json:
        print(json.dumps({"checked": len(samples), "failed": len(bad)}))
    else:
        print(ring.header)
        if len(samples) == 1:
            print(verdicts[0])
        else:
            print(f"cross-check: {len(samples) - len(bad)}/{len(samples)} ProvenEqual")
        for u, v in bad[:5]:
            print(f"counterexample: {u} ; normal form {v.left}")
    return EXIT_OK if not bad else EXIT_FAILED


def cmd_isomorphism(args, session: Session) -> int:
    inst = LocalizationTensorInstance(max_word_len=session.max_word_len)
    report = check_localization_tensor(args.samples, args.samples, args.seed, inst)
    if session.as_json:
        print(json.dumps({"forward": [report.forward_passed, report.forward_total],
                          "backward": [report.backward_passed, report.backward_total],
                          "failures": report.failures}))
    else:
        print(f"tensor={inst.presentation.carrier} target={inst.target.algebra} {inst.target.header}")
        for line in report.lines():
            print(line)
    return EXIT_OK if report.passed else EXIT_FAILED


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vars", help="comma-separated variable names (default x)")
    common.add_argument("--localize", metavar="VAR[:POLY]", help="invert powers of POLY (default VAR)")
    common.add_argument("--op", help="base operator: zero, id, negid or integral[:var]")
    common.add_argument("--weight", help="weight as p/q (default: implied by --op, else 0)")
    common.add_argument("--variant", choices=[v.value for v in Variant])
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--trace", action="store_true", help="rewrite trace on stderr")
    common.add_argument("--max-word-len", type=int, default=DEFAULT_MAX_WORD_LEN)
    common.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    common.add_argument("--strategy", choices=STRATEGIES, default="innermost")

    randomized = argparse.ArgumentParser(add_help=False)
    randomized.add_argument("--random", type=int, metavar="N", help="check N seeded random samples")
    randomized.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="rbx", description="Exact computation in free and localized "
                                                               "Rota-Baxter algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common], help="product of two elements")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("applyp", parents=[common], help="apply the operator")
    p.add_argument("expr")
    p.set_defaults(func=cmd_applyp)

    p = sub.add_parser("rbcheck", parents=[common, randomized], help="check the Rota-Baxter axiom")
    p.add_argument("exprs", nargs="*")
    p.set_defaults(func=cmd_rbcheck)

    p = sub.add_parser("localize", parents=[common], help="an element of the localized carrier and its image")
    p.add_argument("expr")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("normalize", parents=[common], help="normal form under the localization relations")
    p.add_argument("expr")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("equal", parents=[common], help="compare two expressions modulo the relations")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("tensor", parents=[common], help="normalize or compare in a tensor presentation")
    p.add_argument("exprs", nargs="+")
    p.add_argument("--r0", help="shared variables")
    p.add_argument("--r1", required=True, help="variables of the first factor")
    p.add_argument("--r1-localize", metavar="VAR[:POLY]")
    p.add_argument("--r1-op")
    p.add_argument("--r2", required=True, help="variables of the second factor")
    p.add_argument("--r2-op")
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("crosscheck", parents=[common, randomized],
                       help="explicit localized operator against the presentation")
    p.add_argument("expr", nargs="?")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("lemma44", parents=[common], help="round-trip the localization/tensor isomorphism")
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_isomorphism)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        session = session_from(args)
        return args.func(args, session)
    except GuardError as exc:
        for line in exc.trace:
            print(line, file=sys.stderr)
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InternalError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
