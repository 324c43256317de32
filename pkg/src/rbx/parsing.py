"""Text syntax for expressions and tensor words.

Grammar (whitespace insignificant)::

    element := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := atom ['^' ['-'] integer]
    atom    := integer | variable | 'P(' element ')' | 'T[' element (',' element)* ']' | '(' element ')'

Division is allowed by P-free units only (nonzero rationals and ``c*s^k``),
which covers rational coefficients such as ``1/2`` and fractional keys such as
``1/(x^2 + 1)``.  Negative exponents are accepted on a variable that is itself
a unit, i.e. the denominator variable when ``s`` is a power of it.
``T[a0, ..., ak]`` is read as ``a0 * P(a1 * P(... P(ak)))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .base import Algebra, AlgebraElement
from .errors import DomainError, ParseError
from .expressions import Leaf, PNode, Product, RBExpression, Scale, Sum, leaf_value

_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*/^(),\[\]])")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _locate(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _locate(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _negate(e: RBExpression) -> RBExpression:
    if isinstance(e, Leaf):
        return Leaf(-e.element)
    if isinstance(e, Scale):
        return Scale(-e.coeff, e.expr)
    return Scale(Fraction(-1), e)


class Parser:
    def __init__(self, text: str, algebra: Algebra):
        self.text = text
        self.algebra = algebra
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        line, col = _locate(self.text, (tok or self.tok).pos)
        return ParseError(message, line, col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "sym" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    # grammar
    def parse(self) -> RBExpression:
        e = self.element()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def element(self) -> RBExpression:
        negative = False
        if self.accept("-"):
            negative = True
        else:
            self.accept("+")
        items = [self.term()]
        if negative:
            items[0] = _negate(items[0])
        while True:
            if self.accept("+"):
                items.append(self.term())
            elif self.accept("-"):
                items.append(_negate(self.term()))
            else:
                break
        if all(isinstance(e, Leaf) for e in items):
            total = items[0].element
            for e in items[1:]:
                total = total + e.element
            return Leaf(total)
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def term(self) -> RBExpression:
        coeff = Fraction(1)
        factors: list[RBExpression] = []

        def absorb(f):
            nonlocal coeff
            if isinstance(f, Leaf) and f.element.is_constant():
                coeff *= f.element.coefficient(self.algebra.one_key)
            else:
                factors.append(f)

        absorb(self.factor())
        while True:
            if self.accept("*"):
                absorb(self.factor())
            elif self.tok.kind == "sym" and self.tok.text == "/":
                at = self.tokens[self.i + 1]
                self.i += 1
                divisor = leaf_value(self.factor())
                if divisor is None:
                    raise self.error("cannot divide by an expression containing P", at)
                try:
                    inv = divisor.inverse()
                except DomainError:
                    raise self.error(f"{divisor} is not invertible in {self.algebra}", at) from None
                absorb(Leaf(inv))
            else:
                break
        if not factors:
            return Leaf(self.algebra.const(coeff))
        if all(isinstance(f, Leaf) for f in factors):
            value = factors[0].element
            for f in factors[1:]:
                value = value * f.element
            return Leaf(value * coeff)
        core = factors[0] if len(factors) == 1 else Product(tuple(factors))
        if coeff == 1:
            return core
        if isinstance(core, Product) and isinstance(core.items[0], Leaf):
            return Product((Leaf(core.items[0].element * coeff),) + core.items[1:])
        return Scale(coeff, core)

    def factor(self) -> RBExpression:
        start = self.tok
        atom = self.atom()
        if not self.accept("^"):
            return atom
        negative = self.accept("-")
        if self.tok.kind != "int":
            raise self.error("expected an integer exponent")
        n = int(self.tok.text)
        self.i += 1
        if negative:
            value = leaf_value(atom)
            try:
                if value is None:
                    raise DomainError("P-expression")
                inv = value.inverse()
            except DomainError:
                raise self.error(f"exponent out of range for {self.algebra}: "
                                 f"{start.text} is not invertible", start) from None
            return Leaf(inv ** n)
        if isinstance(atom, Leaf):
            return Leaf(atom.element ** n)
        if n == 0:
            return Leaf(self.algebra.one())
        return atom if n == 1 else Product((atom,) * n)

    def atom(self) -> RBExpression:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Leaf(self.algebra.const(int(tok.text)))
        if tok.kind == "name":
            self.i += 1
            if tok.text == "P" and self.accept("("):
                inner = self.element()
                self.expect(")")
                return PNode(inner)
            if tok.text == "T" and self.accept("["):
                return self.word(tok)
            if tok.text not in self.algebra.variables:
                raise self.error(f"unknown variable {tok.text!r}", tok)
            return Leaf(self.algebra.var(tok.text))
        if self.accept("("):
            inner = self.element()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def word(self, start: Token) -> RBExpression:
        slots = []
        while True:
            at = self.tok
            value = leaf_value(self.element())
            if value is None:
                raise self.error("tensor slots must not contain P", at)
            slots.append(value)
            if self.accept("]"):
                break
            self.expect(",")
        return word_from_slots(slots)


def word_from_slots(slots: list[AlgebraElement]) -> RBExpression:
    expr: RBExpression = Leaf(slots[-1])
    for a in reversed(slots[:-1]):
        expr = Product((Leaf(a), PNode(expr)))
    return expr


def parse_expression(text: str, algebra: Algebra) -> RBExpression:
    return Parser(text, algebra).parse()


def parse_element(text: str, algebra: Algebra) -> AlgebraElement:
    """Parse a P-free expression to an element of the algebra."""
    e = parse_expression(text, algebra)
    value = leaf_value(e)
    if value is None:
        raise ParseError("expected an element without P", 1, 1)
    return value
