"""Seeded random generators for keys, elements, words and expression trees."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .base import Algebra, AlgebraElement, BasisKey
from .expressions import Leaf, PNode, Product, RBExpression, Scale, Sum
from .free_rb import FreeRB, ShuffleElement, Word
from .localize import LocalizedElement, LocalizedRB


def random_scalar(rng: random.Random, bound: int = 5, denominators: int = 1) -> Fraction:
    """A nonzero rational with numerator in ``[-bound, bound]``."""
    n = 0
    while n == 0:
        n = rng.randint(-bound, bound)
    return Fraction(n, rng.randint(1, denominators))


def random_key(alg: Algebra, rng: random.Random, max_exp: int = 2, max_dp: int = 2,
               fractional: Optional[bool] = None) -> BasisKey:
    """``fractional=None`` picks either kind when the algebra has a denominator."""
    if fractional is None:
        fractional = alg.denominator is not None and rng.random() < 0.5
    exps = [rng.randint(0, max_exp) for _ in alg.variables]
    if not fractional:
        return BasisKey(tuple(exps), 0)
    d = alg.denom_index
    exps[d] = rng.randint(0, alg.denominator.degree - 1)
    return BasisKey(tuple(exps), rng.randint(1, max_dp))


def random_element(alg: Algebra, rng: random.Random, max_terms: int = 3, bound: int = 5,
                   **key_kw) -> AlgebraElement:
    terms: dict[BasisKey, Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        k = random_key(alg, rng, **key_kw)
        terms[k] = terms.get(k, Fraction(0)) + random_scalar(rng, bound)
    return AlgebraElement(alg, terms)


def random_polynomial(alg: Algebra, rng: random.Random, **kw) -> AlgebraElement:
    return random_element(alg, rng, fractional=False, **kw)


def random_word(alg: Algebra, rng: random.Random, max_len: int = 3, fractional_tail: bool = False,
                max_exp: int = 2, max_dp: int = 2) -> Word:
    n = rng.randint(1, max_len)
    head = random_key(alg, rng, max_exp, max_dp)
    tail = tuple(random_key(alg, rng, max_exp, max_dp, fractional=True if fractional_tail else None)
                 for _ in range(n - 1))
    return (head,) + tail


def random_shuffle_element(ring: FreeRB, rng: random.Random, max_len: int = 3, max_terms: int = 3,
                           bound: int = 5, max_exp: int = 2) -> ShuffleElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = random_word(ring.algebra, rng, max_len, max_exp=max_exp)
        terms[w] = terms.get(w, Fraction(0)) + random_scalar(rng, bound)
    return ring.element(terms)


def random_localized_element(ring: LocalizedRB, rng: random.Random, max_len: int = 3, max_terms: int = 3,
                             bound: int = 5, max_exp: int = 2, max_dp: int = 2) -> LocalizedElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = random_word(ring.algebra, rng, max_len, fractional_tail=True, max_exp=max_exp, max_dp=max_dp)
        terms[w] = terms.get(w, Fraction(0)) + random_scalar(rng, bound)
    return ring.element(terms)


def random_expression(alg: Algebra, rng: random.Random, max_depth: int = 3, max_exp: int = 2,
                      max_dp: int = 1, max_terms: int = 2) -> RBExpression:
    """A random tree of depth at most ``max_depth``; P-nodes are favoured."""
    if max_depth == 0 or rng.random() < 0.2:
        return Leaf(random_element(alg, rng, max_terms, 3, max_exp=max_exp, max_dp=max_dp))
    sub = lambda: random_expression(alg, rng, max_depth - 1, max_exp, max_dp, max_terms)
    r = rng.random()
    if r < 0.4:
        return PNode(sub())
    if r < 0.65:
        return Product((sub(), sub()))
    if r < 0.85:
        return Sum((sub(), sub()))
    return Scale(random_scalar(rng, 3, 2), sub())
