"""Acceptance criteria A1 to A10.

Each criterion is one test. Its verdict, sample counts and wall time are
recorded in ``RESULTS`` and printed as one line per criterion at the end of
the session (see ``pytest_terminal_summary`` in conftest).
"""

import contextlib
import functools
import io
import itertools
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from rbx.base import Algebra, AlgebraMap, BaseOperator, BaseRB, BasisKey, transfer, verify_rb_axiom
from rbx.cli import main
from rbx.expressions import PNode, evaluate
from rbx.free_rb import FreeRB, collapse_phi, reconstruct
from rbx.localize import LocalizedRB, Variant, extend_to_localization, structure_map
from rbx.parsing import parse_element, parse_expression
from rbx.presented import (
    Localization,
    LocalizationTensorInstance,
    check_localization_tensor,
    equal_mod_ideal,
    normalize,
    reset_normalizers,
    tensor_injections,
    universal_map,
)
from rbx.sampling import (
    random_element,
    random_expression,
    random_localized_element,
    random_polynomial,
    random_shuffle_element,
)

RESULTS: dict[str, tuple[bool, str]] = {}

QX = Algebra.polynomial("x")
QXY = Algebra.polynomial("x", "y")
LAURENT = Algebra.laurent("x")
LAURENT_XY = Algebra.laurent("x", "y")
QUADRATIC = Algebra.localized(("x",), "x", (1, 0, 1))
WEIGHTS = [0, 1, -1, 2]
GOLDEN = Path(__file__).parent / "golden"


def criterion(cid, title, limit):
    """Time the wrapped check and record one verdict line for it."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            reset_normalizers()
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[cid] = (False, f"{title}: {type(exc).__name__}: {str(exc)[:160]}")
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < limit
            RESULTS[cid] = (ok, f"{title}: {detail} in {elapsed:.2f}s (limit {limit:g}s)")
            assert ok, f"{cid} took {elapsed:.2f}s, limit {limit}s"
        return run
    return wrap


def tally(checks):
    checks = list(checks)
    assert all(checks), f"{checks.count(False)} of {len(checks)} checks failed"
    return len(checks)


@criterion("A1", "free RB axiom", 5)
def test_a1_free_rb_axiom():
    rng = random.Random(1)
    n = 0
    for weight in WEIGHTS:
        ring = FreeRB(QX, weight)
        n += tally(verify_rb_axiom(ring, weight,
                                   random_shuffle_element(ring, rng, max_len=3, bound=5),
                                   random_shuffle_element(ring, rng, max_len=3, bound=5))
                   for _ in range(200))
    return f"{n} pairs over weights {WEIGHTS}"


@criterion("A2", "mixable shuffle ring laws", 5)
def test_a2_ring_laws():
    rng = random.Random(2)
    n = 0
    for weight in WEIGHTS:
        ring = FreeRB(QX, weight)

        def laws():
            u, v, w = (random_shuffle_element(ring, rng, max_len=3) for _ in range(3))
            return (ring.mul(u, v) == ring.mul(v, u)
                    and ring.mul(ring.mul(u, v), w) == ring.mul(u, ring.mul(v, w))
                    and ring.mul(u, ring.one()) == u)

        n += tally(laws() for _ in range(100))
    return f"{n} triples"


LOCALIZED_CONFIGS = [
    (LAURENT, BaseOperator.integral("x"), Variant.WEIGHT_ZERO, 0),
    (LAURENT, BaseOperator.identity(), Variant.GENERAL, -1),
    (LAURENT, BaseOperator.neg_identity(), Variant.GENERAL, 1),
    (QUADRATIC, BaseOperator.integral("x"), Variant.WEIGHT_ZERO, 0),
    (LAURENT, BaseOperator.zero(), Variant.ZERO_OPERATOR, 0),
]


@criterion("A3", "localized RB axiom", 10)
def test_a3_localized_operators():
    rng = random.Random(3)
    n = 0
    for alg, op, variant, weight in LOCALIZED_CONFIGS:
        ring = LocalizedRB(alg, weight, variant, op)
        n += tally(verify_rb_axiom(ring, weight,
                                   random_localized_element(ring, rng, max_len=3),
                                   random_localized_element(ring, rng, max_len=3))
                   for _ in range(100))
    return f"{n} pairs over {len(LOCALIZED_CONFIGS)} configurations"


@criterion("A4", "collapse morphism", 5)
def test_a4_collapse():
    rng = random.Random(4)
    n = 0
    for target in (BaseRB(QX, BaseOperator.integral("x")), BaseRB(QX, BaseOperator.identity())):
        ring = FreeRB(QX, target.weight)
        phi = lambda u: collapse_phi(u, target)

        def sample():
            u, v = random_shuffle_element(ring, rng), random_shuffle_element(ring, rng)
            a = random_polynomial(QX, rng)
            return (phi(ring.embed(a)) == a
                    and phi(ring.mul(u, v)) == phi(u) * phi(v)
                    and phi(ring.op(u)) == target.op(phi(u)))

        n += tally(sample() for _ in range(100))
    return f"{n} samples over Integral and Identity"


def fraction_keys(alg):
    if alg.denominator.degree == 1:
        return [BasisKey((0,), k) for k in (1, 2, 3)]
    return [BasisKey((0,), 1), BasisKey((1,), 1), BasisKey((1,), 2)]


@criterion("A5", "reconstruction and generation", 10)
def test_a5_reconstruction():
    slots = [BasisKey((e,), 0) for e in range(3)]
    n = 0
    for weight in WEIGHTS:
        ring = FreeRB(QX, weight)
        n += tally(reconstruct(ring, word) == ring.element({word: 1})
                   for length in range(1, 5) for word in itertools.product(slots, repeat=length))
    for alg, op, variant, weight in LOCALIZED_CONFIGS:
        ring = LocalizedRB(alg, weight, variant, op)
        tails = fraction_keys(alg)
        heads = slots + tails
        n += tally(reconstruct(ring, (head, *tail)) == ring.element({(head, *tail): 1})
                   for head in heads for length in range(4) for tail in itertools.product(tails, repeat=length))
    return f"{n} basis words"


@criterion("A6", "presentation soundness and strategy agreement", 30)
def test_a6_presentation():
    op = BaseOperator.integral("x")
    pres = Localization(LAURENT, op)
    model = LocalizedRB.build(LAURENT, op)
    rng = random.Random(6)

    def sample():
        e = random_expression(LAURENT, rng, max_depth=4)
        inner = normalize(e, pres, "innermost").element
        first = normalize(e, pres, "rb-first").element
        return inner.terms == evaluate(e, model).terms and inner == first

    return f"{tally(sample() for _ in range(200))} expressions of depth <= 4"


@criterion("A7", "zero-operator quotient", 5)
def test_a7_zero_quotient():
    ring = LocalizedRB.build(LAURENT, BaseOperator.zero(), Variant.ZERO_OPERATOR)
    rng = random.Random(7)
    axiom = tally(verify_rb_axiom(ring, 0, random_localized_element(ring, rng), random_localized_element(ring, rng))
                  for _ in range(100))
    kills = tally(not ring.op(structure_map(ring, random_polynomial(LAURENT, rng))) for _ in range(50))
    return f"{axiom} RB pairs, {kills} polynomials sent to 0"


def extension_setups():
    """(source, target, f on polynomials, image of 1/s) for two RB morphisms."""
    integral = BaseOperator.integral("x")
    src = LocalizedRB.build(LAURENT, integral)
    tgt = LocalizedRB.build(LAURENT_XY, integral)
    yield src, tgt, lambda a: tgt.embed(transfer(a, LAURENT_XY)), tgt.embed(LAURENT_XY.var("x").inverse())

    src = LocalizedRB.build(LAURENT, BaseOperator.identity())
    tgt = LocalizedRB.build(LAURENT_XY, BaseOperator.identity())
    doubling = AlgebraMap(QX, QXY, {"x": QXY.var("x") * 2})
    yield (src, tgt, lambda a: tgt.embed(transfer(doubling(transfer(a, QX)), LAURENT_XY)),
           tgt.embed(LAURENT_XY.var("x").inverse() * Fraction(1, 2)))


@criterion("A8", "universal properties", 10)
def test_a8_universal_properties():
    rng = random.Random(8)
    n_ext = 0
    for src, tgt, f, s_inv in extension_setups():
        ext = lambda u: extend_to_localization(f, s_inv, u, tgt)

        def sample():
            a = random_polynomial(LAURENT, rng)
            u, v = random_localized_element(src, rng), random_localized_element(src, rng)
            return (ext(structure_map(src, a)) == f(a)
                    and ext(src.mul(u, v)) == tgt.mul(ext(u), ext(v))
                    and ext(src.op(u)) == tgt.op(ext(u)))

        n_ext += tally(sample() for _ in range(50))

    inst = LocalizationTensorInstance()
    pres, tgt = inst.presentation, inst.target

    def injections_agree():
        r0 = random_polynomial(QX, rng)
        k1 = tensor_injections(pres, 1, transfer(r0, pres.r1))
        k2 = tensor_injections(pres, 2, transfer(r0, pres.r2))
        return equal_mod_ideal(k1, k2, pres).proven and equal_mod_ideal(PNode(k1), PNode(k2), pres).proven

    n_square = tally(injections_agree() for _ in range(25))

    psi1 = lambda a: tgt.embed(transfer(a, tgt.algebra))
    psi2 = lambda b: structure_map(tgt, b)

    def restricts():
        a = random_element(pres.r1, rng)
        b = random_polynomial(pres.r2, rng)
        return (universal_map(tensor_injections(pres, 1, a), pres, psi1, psi2, tgt) == psi1(a)
                and universal_map(tensor_injections(pres, 2, b), pres, psi1, psi2, tgt) == psi2(b))

    n_psi = tally(restricts() for _ in range(25))
    return f"{n_ext} extension samples, {n_square} square samples, {n_psi} restriction samples"


@criterion("A9", "localization and tensor isomorphism", 30)
def test_a9_isomorphism():
    report = check_localization_tensor(25, 25, seed=9, max_depth=3, max_len=2)
    assert report.passed, "\n".join(report.failures)
    return (f"g(h(t)) = t on {report.forward_passed}/{report.forward_total}, "
            f"h(g(e)) = e on {report.backward_passed}/{report.backward_total}")


def run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(args)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def canonical_values(rng):
    """Yield (text, parsed-back value, original value) for printable canonical values."""
    algebras = [QX, QXY, LAURENT, LAURENT_XY, QUADRATIC]
    for i in itertools.count():
        alg = algebras[i % len(algebras)]
        kind = i % 3
        if kind == 0:
            a = random_element(alg, rng, max_terms=4)
            yield parse_element(str(a), alg), a
        elif kind == 1:
            ring = FreeRB(alg, rng.choice(WEIGHTS))
            u = random_shuffle_element(ring, rng, max_len=4)
            yield evaluate(parse_expression(str(u), alg), ring), u
        elif alg.denominator is not None:
            ring = LocalizedRB.build(alg, BaseOperator.integral("x"))
            u = random_localized_element(ring, rng, max_len=4)
            yield evaluate(parse_expression(str(u), alg), ring), u


@criterion("A10", "CLI golden corpus and round trips", 5)
def test_a10_cli():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    assert len(cases) >= 20

    def matches(case):
        expected = tuple((GOLDEN / f"{case['name']}.{ext}").read_text() for ext in ("exit", "out", "err"))
        code, out, err = run_cli(case["args"])
        return (f"{code}\n", out, err) == expected

    golden = tally(matches(c) for c in cases)
    trips = tally(back == value for back, value in itertools.islice(canonical_values(random.Random(10)), 200))
    return f"{golden} golden invocations, {trips} round trips"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
