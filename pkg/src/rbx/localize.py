"""Explicit Rota-Baxter localization at the powers of a single polynomial.

The carrier is ``S^-1 A + sum_k S^-1 A (x) V^(x)k``: tensor words whose slot 0
is any key of ``S^-1 A`` and whose later slots are fractional keys
(``denom_power >= 1``).  Three regimes share it:

* ``GENERAL``       -- any weight, mixable shuffle product, operator defined by
                       ``P(a (x) u) = P_A(a) (x) u - P(P_A(a) u) - w P(a u)``;
* ``WEIGHT_ZERO``   -- the same formulas with ``w = 0``;
* ``ZERO_OPERATOR`` -- base operator zero: prepend the unit, then drop every
                       word that picked up a polynomial key after slot 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .base import (
    Algebra,
    AlgebraElement,
    BaseOperator,
    BasisKey,
    OpKind,
    RBAlgebra,
    apply_base_operator,
    format_fraction,
    key_product,
    scalar,
)
from .errors import DomainError, InternalError
from .free_rb import DEFAULT_MAX_WORD_LEN, FreeRB, Terms, Word, WordCombination, _acc, evaluate_words


class Variant(enum.Enum):
    GENERAL = "general"
    WEIGHT_ZERO = "weight-zero"
    ZERO_OPERATOR = "zero-op"


class LocalizedElement(WordCombination):
    __slots__ = ()


@dataclass(frozen=True)
class LocalizedRB(RBAlgebra):
    algebra: Algebra
    weight: Fraction
    variant: Variant
    operator: BaseOperator
    max_word_len: int = field(default=DEFAULT_MAX_WORD_LEN, compare=False)
    _free: FreeRB = field(init=False, compare=False, hash=False, repr=False)
    _pmemo: dict = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weight", scalar(self.weight))
        if self.algebra.denominator is None:
            raise DomainError("localization needs an algebra with a denominator")
        if self.operator.weight != self.weight:
            raise DomainError(f"operator {self.operator} has weight {self.operator.weight}, "
                              f"carrier has weight {self.weight}")
        if self.operator.kind is OpKind.INTEGRAL:
            self.algebra.index(self.operator.variable)
        if self.variant is not Variant.GENERAL and self.weight != 0:
            raise DomainError(f"variant {self.variant.value} requires weight 0")
        if self.variant is Variant.ZERO_OPERATOR and self.operator.kind is not OpKind.ZERO:
            raise DomainError("the zero-operator variant requires the zero base operator")
        object.__setattr__(self, "_free", FreeRB(self.algebra, self.weight, self.max_word_len))
        object.__setattr__(self, "_pmemo", {})

    @classmethod
    def build(cls, algebra: Algebra, operator: BaseOperator, variant: Variant | None = None,
              max_word_len: int = DEFAULT_MAX_WORD_LEN) -> "LocalizedRB":
        if variant is None:
            variant = Variant.WEIGHT_ZERO if operator.weight == 0 else Variant.GENERAL
        return cls(algebra, operator.weight, variant, operator, max_word_len)

    @property
    def header(self) -> str:
        return f"variant={self.variant.value} weight={format_fraction(self.weight)}"

    # constructors
    def element(self, terms) -> LocalizedElement:
        out: Terms = {}
        for w, c in terms.items():
            w = tuple(BasisKey(tuple(k[0]), k[1]) for k in w)
            self._check_word(w)
            _acc(out, [(w, scalar(c))])
        return LocalizedElement(self, out)

    def _check_word(self, w: Word):
        if not w or not all(self.algebra.is_valid_key(k) for k in w):
            raise DomainError(f"invalid word {w} over {self.algebra}")
        if any(k.denom_power == 0 for k in w[1:]):
            raise DomainError(f"slots after the first must be fractional in {w}")

    def zero(self) -> LocalizedElement:
        return LocalizedElement(self, {})

    def one(self) -> LocalizedElement:
        return LocalizedElement(self, {(self.algebra.one_key,): Fraction(1)})

    def embed(self, a: AlgebraElement) -> LocalizedElement:
        """Any element of ``S^-1 A`` as a sum of length-one words."""
        if a.algebra != self.algebra:
            raise DomainError(f"{a} is not in {self.algebra}")
        return LocalizedElement(self, {(k,): c for k, c in a.terms.items()})

    def structure_map(self, a: AlgebraElement) -> LocalizedElement:
        return structure_map(self, a)

    def invert_image(self, k: int) -> LocalizedElement:
        return invert_image(self, k)

    def mul(self, u, v):
        return b_product(u, v)

    def op(self, u):
        return p_localized(u)

    # word-level operator
    def p_word(self, w: Word) -> Terms:
        hit = self._pmemo.get(w)
        if hit is not None:
            return hit
        alg = self.algebra
        head = w[0]
        if head.denom_power > 0:
            self._free._guard(len(w) + 1)
            res = {(alg.one_key,) + w: Fraction(1)}
        elif self.variant is Variant.ZERO_OPERATOR:
            res = {}
        else:
            pa = apply_base_operator(self.operator, alg.key_element(head))
            if len(w) == 1:
                res = {(k,): c for k, c in pa.terms.items()}
            else:
                rest = w[1:]
                res = {}
                _acc(res, (((k,) + rest, c) for k, c in pa.terms.items()))
                _acc(res, self._p_terms(self._absorb(pa.terms.items(), rest)), Fraction(-1))
                if self.weight:
                    _acc(res, self._p_terms(self._absorb([(head, Fraction(1))], rest)), -self.weight)
        self._pmemo[w] = res
        return res

    def _absorb(self, coeffs, rest: Word) -> Terms:
        """Multiply a combination of keys into slot 0 of ``rest``."""
        out: Terms = {}
        for k, c in coeffs:
            for kk, d in key_product(self.algebra, k, rest[0]):
                _acc(out, [((kk,) + rest[1:], c * d)])
        return out

    def _p_terms(self, terms: Terms) -> Terms:
        out: Terms = {}
        for w, c in terms.items():
            _acc(out, self.p_word(w), c)
        return out

    def __str__(self) -> str:
        return f"B({self.algebra}, {self.operator}, {self.header})"


def _same_parent(u: WordCombination, v: WordCombination) -> LocalizedRB:
    if not isinstance(u, LocalizedElement) or not isinstance(v, LocalizedElement):
        raise DomainError("expected elements of a localized carrier")
    if u.parent != v.parent:
        raise DomainError(f"descriptor/variant/weight mismatch: {u.parent} vs {v.parent}")
    return u.parent


def b_product(u: LocalizedElement, v: LocalizedElement) -> LocalizedElement:
    ring = _same_parent(u, v)
    out: Terms = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            _acc(out, ring._free.msh_words(a, b), ca * cb)
    if ring.variant is Variant.ZERO_OPERATOR:
        out = {w: c for w, c in out.items() if all(k.denom_power > 0 for k in w[1:])}
    else:
        for w in out:
            if any(k.denom_power == 0 for k in w[1:]):
                raise InternalError(f"product left the carrier: {w}")
    return LocalizedElement(ring, out)


def p_localized(u: LocalizedElement) -> LocalizedElement:
    if not isinstance(u, LocalizedElement):
        raise DomainError("expected an element of a localized carrier")
    ring = u.parent
    return LocalizedElement(ring, ring._p_terms(u.terms))


def structure_map(ring: LocalizedRB, a: AlgebraElement) -> LocalizedElement:
    """``i_S: A -> S^-1_RB A``; ``a`` may be given over ``A`` or over ``S^-1 A``."""
    if a.algebra == ring.algebra.polynomial_part:
        a = AlgebraElement(ring.algebra, a.terms)
    if a.algebra != ring.algebra:
        raise DomainError(f"{a} is not in {ring.algebra.polynomial_part}")
    if not a.is_polynomial():
        raise DomainError(f"structure_map needs a polynomial, got {a}")
    return ring.embed(a)


def invert_image(ring: LocalizedRB, k: int) -> LocalizedElement:
    if k < 1:
        raise DomainError("invert_image needs k >= 1")
    return ring.embed(ring.algebra.s_inverse(k))


def extend_to_localization(f: Callable[[AlgebraElement], object], s_inverse_image, u: LocalizedElement,
                           target: RBAlgebra):
    """The unique morphism ``f_S`` with ``f_S o i_S = f``, evaluated on ``u``.

    ``f`` takes polynomial elements of the carrier's algebra to ``target``;
    ``s_inverse_image`` must be the inverse of ``f(s)``.
    """
    ring = u.parent
    alg = ring.algebra
    if scalar(target.weight) != ring.weight:
        raise DomainError(f"weight mismatch: {ring.weight} vs {target.weight}")
    if target.mul(f(alg.s()), s_inverse_image) != target.one():
        raise DomainError("s_inverse_image is not an inverse of f(s)")
    powers = [target.one()]

    def inv_power(k):
        while len(powers) <= k:
            powers.append(target.mul(powers[-1], s_inverse_image))
        return powers[k]

    def slot_image(key: BasisKey):
        num = f(alg.key_element(BasisKey(key.exponents, 0)))
        return num if key.denom_power == 0 else target.mul(num, inv_power(key.denom_power))

    return evaluate_words(u, slot_image, target)
