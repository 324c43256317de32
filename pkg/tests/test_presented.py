import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import LAURENT, LAURENT_XY, QUADRATIC, QX, QXY, elements
from rbx.base import Algebra, BaseOperator, BaseRB, BasisKey, transfer
from rbx.errors import DomainError, GuardError
from rbx.expressions import Leaf, P, PNode, Product, Sum, evaluate, lift
from rbx.free_rb import FreeRB
from rbx.localize import LocalizedRB, Variant, p_localized, structure_map
from rbx.presented import (
    Localization,
    LocalizationTensorInstance,
    Normalizer,
    Status,
    TensorProduct,
    check_localization_tensor,
    cross_check_localization,
    equal_mod_ideal,
    normalize,
    tensor_base,
    tensor_injections,
    universal_map,
)
from rbx.sampling import random_expression, random_localized_element

x = LAURENT.var("x")
xi = x.inverse()
INTEGRAL = BaseOperator.integral("x")
LOC = Localization(LAURENT, INTEGRAL)
ring_laurent = LocalizedRB.build(LAURENT, INTEGRAL)

LOCALIZATIONS = {
    "laurent-integral": (LAURENT, INTEGRAL),
    "laurent-identity": (LAURENT, BaseOperator.identity()),
    "laurent-negidentity": (LAURENT, BaseOperator.neg_identity()),
    "quadratic-integral": (QUADRATIC, INTEGRAL),
    "laurent-xy-integral": (LAURENT_XY, INTEGRAL),
    "laurent-zero": (LAURENT, BaseOperator.zero()),
}


def L(a):
    return Leaf(a)


class TestNormalizeLocalization:
    def test_evaluation_rule(self):
        assert str(normalize(P(L(x)), LOC)) == "1/2*x^2"

    def test_split_argument(self):
        nf = normalize(P(L(x + xi)), LOC)
        assert str(nf) == "1/2*x^2 + T[1, x^-1]"

    @pytest.mark.parametrize("strategy", ["innermost", "rb-first"])
    def test_two_reduction_orders(self, strategy):
        nf = normalize(Product((P(L(x)), P(L(x)))), LOC, strategy)
        assert nf.element == FreeRB(LAURENT).embed(x ** 4 * Fraction(1, 4))

    def test_comb_rule(self):
        nf = normalize(P(Product((L(x), P(L(xi))))), LOC)
        assert nf.element.terms == p_localized(ring_laurent.element({(BasisKey((1,), 0), BasisKey((0,), 1)): 1})).terms

    def test_trace_format(self):
        nf = normalize(P(Product((L(x), P(L(xi))))), LOC, trace=True)
        assert nf.trace == (
            "step 1: eval-local-comb: P(x*P(x^-1)) => -1/2*P(x) + 1/2*x^2*P(x^-1)",
            "step 2: eval-local: P(x) => 1/2*x^2",
        )

    def test_step_guard(self):
        e = Product((P(L(x)), P(L(x)), P(L(x)), P(L(xi))))
        with pytest.raises(GuardError) as info:
            normalize(e, LOC, "rb-first", trace=True, max_steps=2)
        assert len(info.value.trace) == 3

    def test_word_guard(self):
        e = Product((P(L(xi)), P(P(L(xi)))))
        with pytest.raises(GuardError):
            normalize(e, LOC, max_word_len=2)

    def test_leaf_over_wrong_carrier(self):
        with pytest.raises(DomainError):
            normalize(P(L(QX.var("x"))), LOC)

    def test_unknown_strategy(self):
        with pytest.raises(DomainError):
            Normalizer(LOC, "outermost")


class TestEquality:
    def test_examples(self):
        assert equal_mod_ideal(P(L(x)), L(x * x * Fraction(1, 2)), LOC).status is Status.PROVEN_EQUAL
        assert equal_mod_ideal(P(L(xi)), lift(FreeRB(LAURENT).word(LAURENT.one(), xi)), LOC).proven
        verdict = equal_mod_ideal(L(x), L(xi), LOC)
        assert verdict.status is Status.NOT_PROVEN
        assert verdict.difference == FreeRB(LAURENT).embed(x - xi)

    @given(seed=st.integers(0, 10 ** 6))
    def test_reflexive_symmetric_congruent(self, seed):
        rng = random.Random(seed)
        e1 = random_expression(LAURENT, rng, 2)
        e2 = lift(normalize(e1, LOC).element)
        f = random_expression(LAURENT, rng, 1)
        assert equal_mod_ideal(e1, e1, LOC).proven
        assert equal_mod_ideal(e1, e2, LOC).proven and equal_mod_ideal(e2, e1, LOC).proven
        assert equal_mod_ideal(Sum((e1, f)), Sum((e2, f)), LOC).proven
        assert equal_mod_ideal(Product((e1, f)), Product((f, e2)), LOC).proven
        assert equal_mod_ideal(PNode(e1), PNode(e2), LOC).proven


@pytest.mark.parametrize("name", list(LOCALIZATIONS))
class TestLocalizationProperties:
    @given(seed=st.integers(0, 10 ** 6))
    def test_sound_against_explicit_model(self, name, seed):
        alg, op = LOCALIZATIONS[name]
        pres = Localization(alg, op)
        model = LocalizedRB.build(alg, op)
        e = random_expression(alg, random.Random(seed), 3)
        assert normalize(e, pres).element.terms == evaluate(e, model).terms

    @given(seed=st.integers(0, 10 ** 6))
    def test_strategies_agree(self, name, seed):
        pres = Localization(*LOCALIZATIONS[name])
        e = random_expression(pres.carrier, random.Random(seed), 3)
        assert normalize(e, pres, "innermost").element == normalize(e, pres, "rb-first").element

    @given(seed=st.integers(0, 10 ** 6))
    def test_idempotent(self, name, seed):
        pres = Localization(*LOCALIZATIONS[name])
        nf = normalize(random_expression(pres.carrier, random.Random(seed), 3), pres)
        assert normalize(nf.lift(), pres).element == nf.element

    @given(seed=st.integers(0, 10 ** 6))
    def test_cross_check(self, name, seed):
        alg, op = LOCALIZATIONS[name]
        ring = LocalizedRB.build(alg, op)
        u = random_localized_element(ring, random.Random(seed))
        assert cross_check_localization(u).proven
        assert cross_check_localization(ring.op(u), strategy="rb-first").proven


class TestCrossCheckExamples:
    def test_examples(self):
        r = ring_laurent
        fraction_word = r.element({(r.algebra.one_key, BasisKey((0,), 1)): 1})
        assert cross_check_localization(fraction_word).proven
        u = p_localized(r.element({(BasisKey((1,), 0), BasisKey((0,), 1)): 1}))
        verdict = cross_check_localization(u)
        assert verdict.proven
        assert verdict.left.element == normalize(P(Product((L(x), P(L(xi))))), LOC).element
        assert cross_check_localization(structure_map(r, QX.var("x"))).proven

    def test_zero_variant_rejected(self):
        ring = LocalizedRB(LAURENT, 0, Variant.ZERO_OPERATOR, BaseOperator.zero())
        with pytest.raises(DomainError):
            cross_check_localization(ring.one())


class TestTensorBase:
    def test_shared_variable(self):
        pres = TensorProduct(("x",), QX, INTEGRAL, QXY, INTEGRAL)
        assert tensor_base(pres) == QXY

    def test_disjoint(self):
        pres = TensorProduct((), QX, INTEGRAL, Algebra.polynomial("y"), BaseOperator.zero())
        assert tensor_base(pres) == QXY

    def test_laurent_factor(self):
        pres = TensorProduct(("x",), LAURENT, INTEGRAL, QXY, INTEGRAL)
        carrier = tensor_base(pres)
        assert carrier == LAURENT_XY
        # basis of the truncation |i| <= 2 in x, y-degree <= 2: pairs of an R1 key and y^m
        keys = {BasisKey((i, m), 0) for i in range(3) for m in range(3)} | \
               {BasisKey((0, m), k) for k in range(1, 3) for m in range(3)}
        assert len(keys) == 5 * 3
        assert all(carrier.is_valid_key(k) for k in keys)

    def test_collision(self):
        with pytest.raises(DomainError):
            TensorProduct((), QX, INTEGRAL, QXY, BaseOperator.integral("y"))

    def test_incompatible_operators(self):
        with pytest.raises(DomainError):
            TensorProduct(("x",), QX, INTEGRAL, QXY, BaseOperator.zero())

    def test_weights_must_match(self):
        with pytest.raises(DomainError):
            TensorProduct((), QX, INTEGRAL, Algebra.polynomial("y"), BaseOperator.identity())

    def test_second_factor_polynomial(self):
        with pytest.raises(DomainError):
            TensorProduct(("x",), QXY, INTEGRAL, LAURENT, INTEGRAL)


class TestInjections:
    pres = TensorProduct(("x",), QX, INTEGRAL, QXY, INTEGRAL)

    def test_leaf(self):
        assert tensor_injections(self.pres, 1, QX.var("x")) == Leaf(QXY.var("x"))

    def test_bad_side(self):
        with pytest.raises(DomainError):
            tensor_injections(self.pres, 3, QX.var("x"))
        with pytest.raises(DomainError):
            tensor_injections(self.pres, 2, QX.var("x"))

    def test_constants_agree(self):
        pres = TensorProduct((), QX, INTEGRAL, Algebra.polynomial("y"), BaseOperator.zero())
        c = Fraction(7, 3)
        k1 = tensor_injections(pres, 1, QX.const(c))
        k2 = tensor_injections(pres, 2, pres.r2.const(c))
        assert equal_mod_ideal(k1, k2, pres).proven

    @given(data=st.data())
    def test_shared_variable_identified(self, data):
        a = data.draw(elements(QX))
        k1 = tensor_injections(self.pres, 1, a)
        k2 = tensor_injections(self.pres, 2, transfer(a, QXY))
        assert equal_mod_ideal(PNode(k1), PNode(k2), self.pres).proven


class TestUniversalMap:
    def test_into_base_ring(self):
        q = Algebra(())
        pres = TensorProduct((), QX, INTEGRAL, q, BaseOperator.zero())
        target = BaseRB(QX, INTEGRAL)
        psi2 = lambda b: QX.const(b.coefficient(q.one_key))
        e = P(tensor_injections(pres, 1, QX.var("x")))
        assert universal_map(e, pres, lambda a: a, psi2, target) == QX.monomial(x=2) * Fraction(1, 2)
        assert universal_map(tensor_injections(pres, 1, QX.var("x")), pres, lambda a: a, psi2, target) == QX.var("x")

    def test_disagreeing_maps_rejected(self):
        pres = TensorProduct(("x",), QX, INTEGRAL, QXY, INTEGRAL)
        target = BaseRB(QXY, INTEGRAL)
        with pytest.raises(DomainError):
            universal_map(Leaf(QXY.one()), pres, lambda a: transfer(a, QXY) * 2, lambda b: b, target)

    @given(seed=st.integers(0, 10 ** 6))
    def test_injections_into_quotient_give_normalize(self, seed):
        inst = LocalizationTensorInstance()
        pres, target = inst.presentation, inst.presented
        e = random_expression(pres.carrier, random.Random(seed), 3, max_exp=1, max_dp=1)
        got = universal_map(e, pres, target.embed, target.embed, target)
        assert got == normalize(e, pres).element

    @given(data=st.data())
    def test_restricts_to_psi(self, data):
        inst = LocalizationTensorInstance()
        tgt = inst.target
        psi1 = lambda a: tgt.embed(transfer(a, tgt.algebra))
        psi2 = lambda b: tgt.structure_map(b)
        a = data.draw(elements(LAURENT))
        b = data.draw(elements(QXY))
        pres = inst.presentation
        assert universal_map(tensor_injections(pres, 1, a), pres, psi1, psi2, tgt) == psi1(a)
        assert universal_map(tensor_injections(pres, 2, b), pres, psi1, psi2, tgt) == psi2(b)


class TestTensorNormalization:
    def test_fraction_key_irreducible(self):
        pres = LocalizationTensorInstance().presentation
        y = pres.carrier.var("y")
        xinv = pres.carrier.var("x").inverse()
        nf = normalize(P(Product((L(y), P(L(xinv))))), pres)
        assert str(nf) == "-x*y + T[x*y, x^-1]"

    def test_strategies_can_disagree_without_shared_operator_data(self):
        # P(x)P(y) with P2 = 0: evaluating first gives 0, orienting first leaves P(x^2 y)/2,
        # a key neither operator is prescribed on. The presentation is not confluent here.
        pres = TensorProduct((), QX, INTEGRAL, Algebra.polynomial("y"), BaseOperator.zero())
        xx, yy = pres.carrier.var("x"), pres.carrier.var("y")
        e = Product((P(L(xx)), P(L(yy))))
        inner = normalize(e, pres, "innermost").element
        first = normalize(e, pres, "rb-first").element
        assert not inner
        assert str(first) == "1/2*T[1, x^2*y]"
        assert not equal_mod_ideal(e, Leaf(pres.carrier.zero()), pres, strategy="rb-first").proven

    @given(seed=st.integers(0, 10 ** 6))
    def test_shipped_instance_strategies_agree(self, seed):
        pres = LocalizationTensorInstance().presentation
        e = random_expression(pres.carrier, random.Random(seed), 3, max_exp=1, max_dp=1)
        assert normalize(e, pres, "innermost").element == normalize(e, pres, "rb-first").element


class TestIsomorphismInstance:
    inst = LocalizationTensorInstance()

    def roundtrip(self, t):
        return self.inst.g(lift(self.inst.h(t)))

    def test_inverse_variable(self):
        t = self.inst.target.embed(LAURENT_XY.var("x").inverse())
        assert self.roundtrip(t) == t

    def test_polynomial(self):
        t = structure_map(self.inst.target, QXY.var("y"))
        assert self.roundtrip(t) == t

    def test_nontrivial_word(self):
        tgt = self.inst.target
        t = tgt.op(tgt.element({(BasisKey((0, 1), 0), BasisKey((0, 0), 1)): 1}))
        assert self.roundtrip(t) == t

    def test_presented_algebra_is_rb(self):
        from rbx.base import verify_rb_axiom

        pr = self.inst.presented
        u = pr.reduce(P(Product((L(pr.algebra.var("y")), P(L(pr.algebra.var("x").inverse()))))))
        v = pr.embed(pr.algebra.var("x").inverse() + pr.algebra.var("y"))
        assert verify_rb_axiom(pr, 0, u, v)

    def test_sampled_report(self):
        report = check_localization_tensor(8, 8, seed=11, instance=self.inst)
        assert report.passed, report.lines()
        assert report.forward_passed == report.backward_passed == 8
