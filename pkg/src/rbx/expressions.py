"""Expression trees over a monomial algebra, before any normalization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .base import Algebra, AlgebraElement, RBAlgebra, scalar
from .free_rb import Word, WordCombination


class RBExpression:
    def __add__(self, other):
        return Sum((self, other))

    def __sub__(self, other):
        return Sum((self, Scale(Fraction(-1), other)))

    def __neg__(self):
        return Scale(Fraction(-1), self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scale(scalar(other), self)
        return Product((self, other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scale(scalar(other), self)
        return NotImplemented

    def __str__(self):
        return format_expression(self)


@dataclass(frozen=True, eq=True)
class Leaf(RBExpression):
    element: AlgebraElement


@dataclass(frozen=True, eq=True)
class Sum(RBExpression):
    items: tuple[RBExpression, ...]


@dataclass(frozen=True, eq=True)
class Scale(RBExpression):
    coeff: Fraction
    expr: RBExpression


@dataclass(frozen=True, eq=True)
class Product(RBExpression):
    items: tuple[RBExpression, ...]


@dataclass(frozen=True, eq=True)
class PNode(RBExpression):
    expr: RBExpression


def P(e: RBExpression) -> PNode:
    return PNode(e)


def evaluate(e: RBExpression, target: RBAlgebra, leaf: Optional[Callable[[AlgebraElement], object]] = None):
    """Interpret a tree in a concrete Rota-Baxter algebra."""
    if leaf is None:
        leaf = target.embed
    if isinstance(e, Leaf):
        return leaf(e.element)
    if isinstance(e, Sum):
        out = target.zero()
        for item in e.items:
            out = out + evaluate(item, target, leaf)
        return out
    if isinstance(e, Scale):
        return evaluate(e.expr, target, leaf) * e.coeff
    if isinstance(e, Product):
        out = target.one()
        for item in e.items:
            out = target.mul(out, evaluate(item, target, leaf))
        return out
    if isinstance(e, PNode):
        return target.op(evaluate(e.expr, target, leaf))
    raise TypeError(f"not an expression: {e!r}")


def leaf_value(e: RBExpression) -> Optional[AlgebraElement]:
    """The algebra element of a P-free tree, or None if the tree contains P."""
    if isinstance(e, Leaf):
        return e.element
    if isinstance(e, PNode):
        return None
    if isinstance(e, Scale):
        v = leaf_value(e.expr)
        return None if v is None else v * e.coeff
    parts = [leaf_value(i) for i in e.items]
    if any(p is None for p in parts):
        return None
    out = parts[0]
    for p in parts[1:]:
        out = out + p if isinstance(e, Sum) else out * p
    return out


def word_expression(algebra: Algebra, word: Word) -> RBExpression:
    """``a0 * P(a1 * P(... P(ak)))`` as a tree."""
    expr: RBExpression = Leaf(algebra.key_element(word[-1]))
    for k in reversed(word[:-1]):
        expr = Product((Leaf(algebra.key_element(k)), PNode(expr)))
    return expr


def lift(u: WordCombination, algebra: Optional[Algebra] = None) -> RBExpression:
    """Re-express a word combination as a tree via the reconstruction identity."""
    alg = algebra or u.algebra
    items = tuple(
        word_expression(alg, w) if c == 1 else Scale(c, word_expression(alg, w)) for w, c in u.items())
    if not items:
        return Leaf(alg.zero())
    return items[0] if len(items) == 1 else Sum(items)


def depth(e: RBExpression) -> int:
    if isinstance(e, Leaf):
        return 0
    if isinstance(e, (Scale, PNode)):
        return 1 + depth(e.expr)
    return 1 + max((depth(i) for i in e.items), default=0)


def _atom(e: RBExpression) -> str:
    s = format_expression(e)
    if isinstance(e, (Sum, Scale)) or (isinstance(e, Leaf) and (len(e.element) > 1 or s.startswith("-"))):
        return f"({s})"
    return s


def format_expression(e: RBExpression) -> str:
    """Text in the CLI grammar; parses back to an expression with the same value."""
    if isinstance(e, Leaf):
        return str(e.element)
    if isinstance(e, PNode):
        return f"P({format_expression(e.expr)})"
    if isinstance(e, Scale):
        return f"{e.coeff}*{_atom(e.expr)}" if e.coeff >= 0 else f"({e.coeff})*{_atom(e.expr)}"
    if isinstance(e, Product):
        return "*".join(_atom(i) for i in e.items) if e.items else "1"
    if isinstance(e, Sum):
        if not e.items:
            return "0"
        return " + ".join(_atom(i) if not isinstance(i, Sum) else f"({format_expression(i)})" for i in e.items)
    raise TypeError(f"not an expression: {e!r}")
