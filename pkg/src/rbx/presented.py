"""Rota-Baxter algebras given by generators and relations, decided by rewriting.

A presentation is the free Rota-Baxter algebra on a monomial algebra ``R``
modulo the ideal generated by ``P(a) - P_R(a)`` for the elements ``a`` on
which some known operator ``P_R`` is prescribed.  Two presentations are
supported: the localization ``S^-1 A`` with the relations of ``A``, and the
tensor product of two Rota-Baxter algebras over a common subalgebra.

Terms are nested products ``a * P(t1) * P(t2) * ...`` with a basis key ``a``;
linear combinations and distributivity are expanded eagerly.  The rules are

* ``rb-orient``: ``P(x)P(y) -> P(x P(y)) + P(P(x) y) + w P(x y)``;
* ``eval-*``:    ``P(a) -> P_R(a)`` for a key with a prescribed value;
* ``eval-*-comb``: ``P(a P(u)) -> P_R(a) P(u) - P(P_R(a) u) - w P(a u)``.

Every rule strictly lowers the number of P-factors or trades an evaluable
head for shorter ones, so rewriting terminates; the normal forms are
combs ``a0 P(a1 P(... P(ak)))`` with no evaluable key below the top, which
are read off as tensor words.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, NamedTuple, Optional

from .base import (
    ONE,
    Algebra,
    AlgebraElement,
    BaseOperator,
    BasisKey,
    OpKind,
    RBAlgebra,
    apply_base_operator,
    format_key,
    join_signed,
    key_product,
    scalar,
    transfer,
)
from .errors import DomainError, GuardError, InternalError
from .expressions import Leaf, PNode, Product, RBExpression, Scale, Sum, evaluate, lift
from .free_rb import DEFAULT_MAX_WORD_LEN, FreeRB, ShuffleElement, Terms, _acc
from .localize import LocalizedElement, LocalizedRB, Variant, extend_to_localization

DEFAULT_MAX_STEPS = 100_000
STRATEGIES = ("innermost", "rb-first")


# -- presentations -----------------------------------------------------------

class Presentation:
    carrier: Algebra
    weight: Fraction

    def key_image(self, key: BasisKey) -> Optional[tuple[str, AlgebraElement]]:
        """``(rule id, P_R(key))`` if the operator is prescribed on ``key``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Localization(Presentation):
    """``S^-1 A`` with ``P(a) = P_A(a)`` imposed for ``a`` in ``A``."""

    algebra: Algebra
    operator: BaseOperator

    def __post_init__(self):
        if self.algebra.denominator is None:
            raise DomainError("a localization presentation needs a denominator")
        if self.operator.kind is OpKind.INTEGRAL:
            self.algebra.index(self.operator.variable)

    @classmethod
    def from_ring(cls, ring: LocalizedRB) -> "Localization":
        return cls(ring.algebra, ring.operator)

    @property
    def carrier(self) -> Algebra:
        return self.algebra

    @property
    def weight(self) -> Fraction:
        return self.operator.weight

    def key_image(self, key):
        if key.denom_power:
            return None
        return "eval-local", apply_base_operator(self.operator, self.algebra.key_element(key))


def _r0_monomials(names: tuple[str, ...], max_degree: int):
    for exps in cartesian(range(max_degree + 1), repeat=len(names)):
        if sum(exps) <= max_degree:
            yield dict(zip(names, exps))


@dataclass(frozen=True)
class TensorProduct(Presentation):
    """``R1 (x)_R0 R2`` with both operators imposed.

    ``R0`` is the polynomial ring on ``r0`` (shared variable names).  When
    ``R1`` carries a denominator it stands for the Rota-Baxter localization of
    its polynomial part, so its operator is imposed on polynomial keys only.
    ``R2`` must be a polynomial ring.
    """

    r0: tuple[str, ...]
    r1: Algebra
    op1: BaseOperator
    r2: Algebra
    op2: BaseOperator
    check_degree: int = 3
    _carrier: Algebra = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "r0", tuple(self.r0))
        if self.r2.denominator is not None:
            raise DomainError("the second factor must be a polynomial ring")
        if self.op1.weight != self.op2.weight:
            raise DomainError(f"operator weights differ: {self.op1.weight} vs {self.op2.weight}")
        for v in self.r0:
            if v not in self.r1.variables or v not in self.r2.variables:
                raise DomainError(f"shared variable {v!r} must belong to both factors")
        clash = set(self.r1.variables) & set(self.r2.variables) - set(self.r0)
        if clash:
            raise DomainError(f"variables {sorted(clash)} occur in both factors but not in the base")
        for alg, op in ((self.r1, self.op1), (self.r2, self.op2)):
            if op.kind is OpKind.INTEGRAL:
                alg.index(op.variable)
        extra = tuple(v for v in self.r2.variables if v not in self.r1.variables)
        object.__setattr__(self, "_carrier", Algebra(self.r1.variables + extra, self.r1.denominator))
        self._check_compatible()

    def _check_compatible(self):
        if not self.r0:
            return
        carrier = self._carrier
        for powers in _r0_monomials(self.r0, self.check_degree):
            i1 = apply_base_operator(self.op1, self.r1.monomial(**powers))
            i2 = apply_base_operator(self.op2, self.r2.monomial(**powers))
            t1, t2 = transfer(i1, carrier), transfer(i2, carrier)
            if t1 != t2:
                raise DomainError(f"operators disagree on the base: {i1} vs {i2}")
            for (exps, dp) in t1.terms:
                if dp or any(e and v not in self.r0 for v, e in zip(carrier.variables, exps)):
                    raise DomainError(f"operator image {i1} leaves the base ring")

    @property
    def carrier(self) -> Algebra:
        return self._carrier

    @property
    def weight(self) -> Fraction:
        return self.op1.weight

    def _restrict(self, key: BasisKey, target: Algebra) -> Optional[BasisKey]:
        carrier = self._carrier
        exps = [0] * target.nvars
        for v, e in zip(carrier.variables, key.exponents):
            if e:
                if v not in target.variables:
                    return None
                exps[target.index(v)] = e
        return BasisKey(tuple(exps), key.denom_power)

    def key_image(self, key):
        left = self._restrict(key, self.r1)
        if left is not None and (key.denom_power == 0 or self.r1.denominator is None):
            img = apply_base_operator(self.op1, self.r1.key_element(left))
            return "eval-left", transfer(img, self._carrier)
        if key.denom_power == 0:
            right = self._restrict(key, self.r2)
            if right is not None:
                img = apply_base_operator(self.op2, self.r2.key_element(right))
                return "eval-right", transfer(img, self._carrier)
        return None

    def factor_keys(self, key: BasisKey) -> tuple[BasisKey, BasisKey]:
        """Split a carrier key as (left key over ``r1``) * (right key over ``r2``)."""
        carrier = self._carrier
        lx = [0] * self.r1.nvars
        rx = [0] * self.r2.nvars
        for v, e in zip(carrier.variables, key.exponents):
            if v in self.r1.variables:
                lx[self.r1.index(v)] = e
            else:
                rx[self.r2.index(v)] = e
        return BasisKey(tuple(lx), key.denom_power), BasisKey(tuple(rx), 0)


def tensor_base(pres: TensorProduct) -> Algebra:
    return pres.carrier


def tensor_injections(pres: TensorProduct, side: int, r: AlgebraElement) -> Leaf:
    """``r (x) 1`` for side 1 or ``1 (x) r`` for side 2, as a leaf over the combined carrier."""
    if side not in (1, 2):
        raise DomainError(f"side must be 1 or 2, not {side!r}")
    allowed = (pres.r1, pres.r1.polynomial_part) if side == 1 else (pres.r2,)
    if r.algebra not in allowed:
        raise DomainError(f"{r} is not in {allowed[0]}")
    return Leaf(transfer(r, pres.carrier))


# -- rewriting ---------------------------------------------------------------

class Term(NamedTuple):
    key: BasisKey
    args: tuple  # sorted tuple of Term; each stands for a factor P(arg)


Lin = dict


def _add(out: Lin, items, scale: Fraction = ONE):
    for t, c in (items.items() if isinstance(items, dict) else items):
        v = out.get(t, 0) + scale * c
        if v:
            out[t] = v
        else:
            out.pop(t, None)


class Normalizer:
    """Rewrites trees to comb normal form under one presentation and strategy."""

    def __init__(self, pres: Presentation, strategy: str = "innermost", max_steps: int = DEFAULT_MAX_STEPS,
                 max_word_len: int = DEFAULT_MAX_WORD_LEN, trace: bool = False):
        if strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
        self.pres = pres
        self.carrier = pres.carrier
        self.weight = scalar(pres.weight)
        self.strategy = strategy
        self.max_steps = max_steps
        self.ring = FreeRB(self.carrier, self.weight, max_word_len)
        self.tracing = trace
        self.trace: list[str] = []
        self.steps = 0
        self._cache: dict[Term, Lin] = {}
        self._one = self.carrier.one_key

    # bookkeeping
    def _step(self, rule: str, before, after):
        self.steps += 1
        if self.tracing:
            self.trace.append(f"step {self.steps}: {rule}: {before} => {after}")
        if self.steps > self.max_steps:
            raise GuardError(f"rewrite step limit {self.max_steps} exceeded", self.trace)

    def fmt_term(self, t: Term) -> str:
        parts = []
        k = format_key(self.carrier, t.key)
        if k != "1" or not t.args:
            parts.append(k if "/" not in k or not t.args else f"({k})")
        parts.extend(f"P({self.fmt_term(a)})" for a in t.args)
        return "*".join(parts)

    def fmt_lin(self, lin: Lin) -> str:
        return join_signed((c, self.fmt_term(t) if abs(c) == 1 else f"{abs(c)}*{self.fmt_term(t)}")
                           for t, c in sorted(lin.items(), key=lambda tc: repr(tc[0])))

    # linear algebra on terms
    def from_expression(self, e: RBExpression) -> Lin:
        if isinstance(e, Leaf):
            if e.element.algebra != self.carrier:
                raise DomainError(f"leaf {e.element} is not in {self.carrier}")
            return {Term(k, ()): c for k, c in e.element.terms.items()}
        if isinstance(e, Sum):
            out: Lin = {}
            for item in e.items:
                _add(out, self.from_expression(item))
            return out
        if isinstance(e, Scale):
            c = scalar(e.coeff)
            return {t: c * v for t, v in self.from_expression(e.expr).items()} if c else {}
        if isinstance(e, Product):
            out = {Term(self._one, ()): ONE}
            for item in e.items:
                out = self.mul(out, self.from_expression(item))
            return out
        if isinstance(e, PNode):
            return self.p(self.from_expression(e.expr))
        raise TypeError(f"not an expression: {e!r}")

    def mul(self, a: Lin, b: Lin) -> Lin:
        out: Lin = {}
        for t1, c1 in a.items():
            for t2, c2 in b.items():
                args = tuple(sorted(t1.args + t2.args))
                for k, d in key_product(self.carrier, t1.key, t2.key):
                    _add(out, [(Term(k, args), c1 * c2 * d)])
        return out

    def p(self, lin: Lin) -> Lin:
        return {Term(self._one, (t,)): c for t, c in lin.items()}

    # rules
    def norm_lin(self, lin: Lin) -> Lin:
        out: Lin = {}
        for t, c in lin.items():
            _add(out, self.norm(t), c)
        return out

    def norm(self, t: Term) -> Lin:
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        if not t.args:
            res = {t: ONE}
        elif self.strategy == "rb-first" and len(t.args) >= 2:
            res = self.norm_lin(self._rb(t))
        else:
            partial = {Term(t.key, ()): ONE}
            if len(t.args) == 1:
                partial = self.mul(partial, self.p(self.norm(t.args[0])))
            else:
                # each factor P(a) is normalized on its own before factors meet
                for a in t.args:
                    partial = self.mul(partial, self.norm(Term(self._one, (a,))))
            res = {}
            for u, c in partial.items():
                _add(res, self._top(u), c)
        self._cache[t] = res
        return res

    def _top(self, u: Term) -> Lin:
        if len(u.args) >= 2:
            return self.norm_lin(self._rb(u))
        if len(u.args) == 1:
            repl = self._evaluate(u.args[0])
            if repl is not None:
                return self.norm_lin(self.mul({Term(u.key, ()): ONE}, repl))
        return {u: ONE}

    def _rb(self, t: Term) -> Lin:
        x, y, rest = t.args[0], t.args[1], t.args[2:]
        inner: Lin = {}
        _add(inner, [(Term(x.key, tuple(sorted(x.args + (y,)))), ONE)])
        _add(inner, [(Term(y.key, tuple(sorted(y.args + (x,)))), ONE)])
        if self.weight:
            _add(inner, self.mul({x: ONE}, {y: ONE}), self.weight)
        if self.tracing:
            self._step("rb-orient", f"P({self.fmt_term(x)})*P({self.fmt_term(y)})",
                       f"P({self.fmt_lin(inner)})")
        else:
            self._step("rb-orient", None, None)
        return self.mul({Term(t.key, rest): ONE}, self.p(inner))

    def _evaluate(self, arg: Term) -> Optional[Lin]:
        hit = self.pres.key_image(arg.key)
        if hit is None:
            return None
        rule, img = hit
        img_lin = {Term(k, ()): c for k, c in img.terms.items()}
        if not arg.args:
            repl = img_lin
        else:
            if len(arg.args) != 1:
                raise InternalError(f"argument is not in comb form: {self.fmt_term(arg)}")
            u = {arg.args[0]: ONE}
            repl = self.mul(img_lin, self.p(u))
            _add(repl, self.p(self.mul(img_lin, u)), -ONE)
            if self.weight:
                _add(repl, self.p(self.mul({Term(arg.key, ()): ONE}, u)), -self.weight)
            rule += "-comb"
        if self.tracing:
            self._step(rule, f"P({self.fmt_term(arg)})", self.fmt_lin(repl))
        else:
            self._step(rule, None, None)
        return repl

    # entry points
    def to_words(self, lin: Lin) -> ShuffleElement:
        out: Terms = {}
        for t, c in lin.items():
            w = []
            cur = t
            while True:
                w.append(cur.key)
                if not cur.args:
                    break
                if len(cur.args) > 1:
                    raise InternalError(f"term is not a comb: {self.fmt_term(t)}")
                cur = cur.args[0]
            self.ring._guard(len(w))
            for k in w[1:]:
                if self.pres.key_image(k) is not None:
                    raise InternalError(f"normal form is still reducible: {self.fmt_term(t)}")
            _acc(out, [(tuple(w), c)])
        return ShuffleElement(self.ring, out)

    def normalize(self, e: RBExpression) -> "NormalForm":
        self.steps = 0
        self.trace = []
        if self.tracing:
            self._cache = {}
        element = self.to_words(self.norm_lin(self.from_expression(e)))
        return NormalForm(element, self.pres, tuple(self.trace))


@dataclass(frozen=True)
class NormalForm:
    element: ShuffleElement
    presentation: Presentation
    trace: tuple[str, ...] = field(default=(), compare=False)

    def __str__(self):
        return str(self.element)

    def to_json(self) -> dict:
        return self.element.to_json()

    def lift(self) -> RBExpression:
        return lift(self.element)


_shared: dict = {}


def reset_normalizers() -> None:
    """Drop the shared normalizers and their memo tables."""
    _shared.clear()


def normalize(e: RBExpression, pres: Presentation, strategy: str = "innermost", trace: bool = False,
              max_steps: int = DEFAULT_MAX_STEPS, max_word_len: int = DEFAULT_MAX_WORD_LEN) -> NormalForm:
    """Rewrite ``e`` to its normal form modulo the presentation's relations."""
    if trace:
        return Normalizer(pres, strategy, max_steps, max_word_len, trace=True).normalize(e)
    key = (pres, strategy, max_steps, max_word_len)
    norm = _shared.get(key)
    if norm is None:
        norm = _shared[key] = Normalizer(pres, strategy, max_steps, max_word_len)
    return norm.normalize(e)


class Status(enum.Enum):
    PROVEN_EQUAL = "ProvenEqual"
    NOT_PROVEN = "NotProven"


@dataclass(frozen=True)
class EqualityVerdict:
    status: Status
    left: NormalForm
    right: NormalForm

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN_EQUAL

    @property
    def difference(self) -> ShuffleElement:
        return self.left.element - self.right.element

    def __str__(self):
        if self.proven:
            return f"{self.status.value}\nnormal form: {self.left}"
        return f"{self.status.value}\nleft:  {self.left}\nright: {self.right}"


def equal_mod_ideal(e1: RBExpression, e2: RBExpression, pres: Presentation, **kw) -> EqualityVerdict:
    """Compare normal forms; a mismatch is reported as not proven, never as disproven."""
    n1 = normalize(e1, pres, **kw)
    n2 = normalize(e2, pres, **kw)
    status = Status.PROVEN_EQUAL if n1.element == n2.element else Status.NOT_PROVEN
    return EqualityVerdict(status, n1, n2)


@dataclass(frozen=True)
class PresentedRB(RBAlgebra):
    """The quotient algebra itself; elements are normal forms."""

    presentation: Presentation
    strategy: str = "innermost"
    max_word_len: int = field(default=DEFAULT_MAX_WORD_LEN, compare=False)

    @property
    def algebra(self) -> Algebra:
        return self.presentation.carrier

    @property
    def weight(self) -> Fraction:
        return scalar(self.presentation.weight)

    @property
    def ring(self) -> FreeRB:
        return FreeRB(self.algebra, self.weight, self.max_word_len)

    def reduce(self, e: RBExpression) -> ShuffleElement:
        return normalize(e, self.presentation, self.strategy, max_word_len=self.max_word_len).element

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def embed(self, a: AlgebraElement):
        return self.reduce(Leaf(transfer(a, self.algebra)))

    def mul(self, u, v):
        return self.reduce(Product((lift(u), lift(v))))

    def op(self, u):
        return self.reduce(PNode(lift(u)))


def universal_map(e: RBExpression, pres: TensorProduct, psi1: Callable, psi2: Callable, target: RBAlgebra,
                  check: bool = True):
    """The morphism out of the tensor product induced by ``psi1`` and ``psi2``."""
    if scalar(target.weight) != scalar(pres.weight):
        raise DomainError(f"weight mismatch: {pres.weight} vs {target.weight}")
    if check and pres.r0:
        for powers in _r0_monomials(pres.r0, pres.check_degree):
            if psi1(pres.r1.monomial(**powers)) != psi2(pres.r2.monomial(**powers)):
                raise DomainError(f"maps disagree on the base monomial {powers}")
    carrier = pres.carrier
    cache: dict[BasisKey, object] = {}

    def key_value(k):
        if k not in cache:
            lk, rk = pres.factor_keys(k)
            cache[k] = target.mul(psi1(pres.r1.key_element(lk)), psi2(pres.r2.key_element(rk)))
        return cache[k]

    def leaf(a):
        if a.algebra != carrier:
            raise DomainError(f"leaf {a} is not in {carrier}")
        out = target.zero()
        for k, c in a.terms.items():
            out = out + key_value(k) * c
        return out

    return evaluate(e, target, leaf)


def cross_check_localization(u: LocalizedElement, strategy: str = "innermost", **kw) -> EqualityVerdict:
    """Normalize the lift of an explicit element and compare with the element itself.

    Only meaningful for the general and weight-zero variants.
    """
    ring = u.parent
    if ring.variant is Variant.ZERO_OPERATOR:
        raise DomainError("the zero-operator variant is a further quotient; no cross-check")
    pres = Localization.from_ring(ring)
    left = normalize(lift(u), pres, strategy, max_word_len=ring.max_word_len, **kw)
    right = NormalForm(ShuffleElement(left.element.parent, u.terms), pres)
    status = Status.PROVEN_EQUAL if left.element == right.element else Status.NOT_PROVEN
    return EqualityVerdict(status, left, right)


# -- the localization/tensor isomorphism for Q[x], s = x -------------------------

@dataclass
class LocalizationTensorInstance:
    """``S^-1_RB A (x)_A B`` against ``T^-1_RB B`` for ``A = Q[x]``, ``B = Q[x,y]``, ``s = x``.

    Both sides carry the integral operator in ``x`` at weight zero.
    """

    max_word_len: int = DEFAULT_MAX_WORD_LEN
    presentation: TensorProduct = field(init=False)
    target: LocalizedRB = field(init=False)
    presented: PresentedRB = field(init=False)

    def __post_init__(self):
        integral = BaseOperator.integral("x")
        self.presentation = TensorProduct(("x",), Algebra.laurent("x"), integral,
                                          Algebra.polynomial("x", "y"), integral)
        self.target = LocalizedRB.build(Algebra.laurent("x", "y"), integral, Variant.WEIGHT_ZERO,
                                        self.max_word_len)
        self.presented = PresentedRB(self.presentation, max_word_len=self.max_word_len)
        self._s_inv = self.presented.embed(self.presented.algebra.s_inverse(1))

    def g(self, e: RBExpression) -> LocalizedElement:
        """Tensor side to localized side, induced by the two structure maps."""
        tgt = self.target
        return universal_map(e, self.presentation,
                             lambda a: tgt.embed(transfer(a, tgt.algebra)),
                             lambda b: tgt.structure_map(b), tgt)

    def h(self, t: LocalizedElement) -> ShuffleElement:
        """Localized side to tensor side, the extension of ``B -> tensor`` to ``T^-1 B``."""
        pr = self.presented
        return extend_to_localization(lambda a: pr.embed(a), self._s_inv, t, pr)


@dataclass
class IsomorphismReport:
    forward_total: int = 0
    forward_passed: int = 0
    backward_total: int = 0
    backward_passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        return [f"g(h(t)) == t: {self.forward_passed}/{self.forward_total}",
                f"h(g(e)) == e mod ideal: {self.backward_passed}/{self.backward_total}",
                *self.failures]


def check_localization_tensor(n_forward: int = 25, n_backward: int = 25, seed: int = 0,
                              instance: Optional[LocalizationTensorInstance] = None,
                              max_depth: int = 3, max_len: int = 2) -> IsomorphismReport:
    """Round-trip both maps of the isomorphism on seeded random samples."""
    from .sampling import random_expression, random_localized_element

    inst = instance or LocalizationTensorInstance()
    rng = random.Random(seed)
    report = IsomorphismReport()
    for _ in range(n_forward):
        t = random_localized_element(inst.target, rng, max_len=max_len, max_terms=3, max_exp=2, max_dp=2)
        report.forward_total += 1
        back = inst.g(lift(inst.h(t)))
        if back == t:
            report.forward_passed += 1
        else:
            report.failures.append(f"g(h(t)) != t for t = {t}: got {back}")
    for _ in range(n_backward):
        e = random_expression(inst.presentation.carrier, rng, max_depth=max_depth, max_exp=1, max_dp=1)
        report.backward_total += 1
        verdict = equal_mod_ideal(lift(inst.h(inst.g(e))), e, inst.presentation)
        if verdict.proven:
            report.backward_passed += 1
        else:
            report.failures.append(f"h(g(e)) not proven equal to e = {e}")
    return report
