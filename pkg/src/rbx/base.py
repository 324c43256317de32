"""Monomial algebras over Q, their single-denominator localizations, and base operators.

An :class:`Algebra` is either a polynomial ring ``Q[x, y, ...]`` or its
localization at the powers of one monic univariate polynomial ``s`` in a
designated variable.  Elements are sparse maps from :class:`BasisKey` to
:class:`fractions.Fraction`.  A key with ``denom_power == 0`` is a plain
monomial; a key with ``denom_power == k >= 1`` stands for ``x^j / s^k`` with
``j < deg s`` (times monomials in the other variables).  Every product is
brought back to this form by polynomial division and s-adic expansion, so the
splitting ``S^-1 A = A + V`` can be read off the keys.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .errors import DomainError, OperatorUndefined

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

RESERVED_NAMES = frozenset({"P", "T"})


def scalar(value) -> Fraction:
    """Coerce an int, a ``"p/q"`` string or a Fraction to an exact scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (float, complex)):
        raise TypeError(f"inexact scalar {value!r}")
    return Fraction(value)


def format_fraction(c: Fraction) -> str:
    """Always ``p/q``; used by the JSON encoding and header lines."""
    return f"{c.numerator}/{c.denominator}"


# -- univariate helpers (coefficient lists, low degree first) ----------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pdivmod(p: Sequence[Fraction], s: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # s is monic
    r = list(p)
    ds = len(s) - 1
    if len(r) <= ds:
        return [], _trim(r)
    q = [ZERO] * (len(r) - ds)
    for i in range(len(r) - 1, ds - 1, -1):
        c = r[i]
        if c:
            q[i - ds] = c
            for j in range(ds + 1):
                r[i - ds + j] -= c * s[j]
    return _trim(q), _trim(r[:ds])


def _ppow(p: Sequence[Fraction], k: int) -> list[Fraction]:
    out = [ONE]
    for _ in range(k):
        out = _pmul(out, p)
    return out


@dataclass(frozen=True)
class Denominator:
    """The polynomial ``s`` whose powers are inverted; normalized monic on construction."""

    variable: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = list(scalar(a) for a in self.coeffs)
        _trim(c)
        if len(c) < 2:
            raise DomainError("denominator must be a nonconstant polynomial")
        lead = c[-1]
        object.__setattr__(self, "coeffs", tuple(a / lead for a in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monomial(self) -> bool:
        return all(a == 0 for a in self.coeffs[:-1])

    def __str__(self) -> str:
        parts = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            mono = "" if e == 0 else (self.variable if e == 1 else f"{self.variable}^{e}")
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


class BasisKey(NamedTuple):
    exponents: tuple[int, ...]
    denom_power: int = 0


@dataclass(frozen=True)
class Algebra:
    """Descriptor of ``Q[variables]`` or of its localization at ``{s^k}``."""

    variables: tuple[str, ...]
    denominator: Optional[Denominator] = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise DomainError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not v.isidentifier() or v in RESERVED_NAMES:
                raise DomainError(f"invalid variable name {v!r}")
        if self.denominator is not None and self.denominator.variable not in self.variables:
            raise DomainError(f"denominator variable {self.denominator.variable!r} is not declared")

    # construction shortcuts
    @classmethod
    def polynomial(cls, *names: str) -> "Algebra":
        return cls(tuple(names))

    @classmethod
    def localized(cls, names: Sequence[str], variable: str, coeffs: Sequence = (0, 1)) -> "Algebra":
        """``coeffs`` lists the coefficients of ``s`` from degree 0 upward; default ``s = variable``."""
        return cls(tuple(names), Denominator(variable, tuple(scalar(c) for c in coeffs)))

    @classmethod
    def laurent(cls, variable: str = "x", *others: str) -> "Algebra":
        return cls.localized((variable, *others), variable)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r}") from None

    @property
    def denom_index(self) -> Optional[int]:
        return None if self.denominator is None else self.variables.index(self.denominator.variable)

    @property
    def polynomial_part(self) -> "Algebra":
        return Algebra(self.variables)

    @property
    def one_key(self) -> BasisKey:
        return BasisKey((0,) * self.nvars, 0)

    def is_valid_key(self, key: BasisKey) -> bool:
        exps, dp = key
        if len(exps) != self.nvars or any(e < 0 for e in exps) or dp < 0:
            return False
        if dp == 0:
            return True
        if self.denominator is None:
            return False
        return exps[self.denom_index] < self.denominator.degree

    # element constructors
    def element(self, terms: Mapping[BasisKey, object] | Iterable[tuple[BasisKey, object]]) -> "AlgebraElement":
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[BasisKey, Fraction] = {}
        for k, c in items:
            k = BasisKey(tuple(k[0]), k[1])
            if not self.is_valid_key(k):
                raise DomainError(f"invalid basis key {k} for {self}")
            out[k] = out.get(k, ZERO) + scalar(c)
        return AlgebraElement(self, out)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return self.const(1)

    def const(self, c) -> "AlgebraElement":
        return AlgebraElement(self, {self.one_key: scalar(c)})

    def key_element(self, key: BasisKey, c=1) -> "AlgebraElement":
        return self.element({key: c})

    def monomial(self, **powers: int) -> "AlgebraElement":
        exps = [0] * self.nvars
        for name, e in powers.items():
            exps[self.index(name)] = e
        return self.key_element(BasisKey(tuple(exps), 0))

    def var(self, name: str) -> "AlgebraElement":
        return self.monomial(**{name: 1})

    def s(self) -> "AlgebraElement":
        """The denominator polynomial as an element."""
        den = self._require_denominator()
        d = self.denom_index
        terms = {}
        for e, c in enumerate(den.coeffs):
            if c:
                exps = [0] * self.nvars
                exps[d] = e
                terms[BasisKey(tuple(exps), 0)] = c
        return AlgebraElement(self, terms)

    def s_inverse(self, k: int = 1) -> "AlgebraElement":
        """``1/s^k`` in canonical form."""
        self._require_denominator()
        if k < 0:
            raise DomainError("negative power")
        return AlgebraElement(self, dict(_canonical(self, (0,) * self.nvars, k)))

    def _require_denominator(self) -> Denominator:
        if self.denominator is None:
            raise DomainError(f"{self} has no denominator")
        return self.denominator

    def __str__(self) -> str:
        core = "Q[" + ",".join(self.variables) + "]"
        if self.denominator is not None:
            core += f"[1/({self.denominator})]"
        return core


@lru_cache(maxsize=None)
def _sadic(den: Denominator, e: int, k: int):
    """Canonical form of ``x^e / s^k`` as (plain part, fractional part).

    Plain part: pairs ``(exponent, coeff)``; fractional part: triples
    ``(j, k', coeff)`` standing for ``x^j / s^k'`` with ``j < deg s``.
    """
    m = den.degree
    if den.is_monomial:
        t = e - m * k
        if t >= 0:
            return ((t, ONE),), ()
        kk = -(t // m)  # ceil(-t / m)
        return (), ((m * kk + t, kk, ONE),)
    num = [ZERO] * e + [ONE]
    q, r = _pdivmod(num, _ppow(den.coeffs, k))
    plain = tuple((i, c) for i, c in enumerate(q) if c)
    frac = []
    cur = r
    for power in range(k, 0, -1):
        cur, rem = _pdivmod(cur, den.coeffs)
        frac.extend((j, power, c) for j, c in enumerate(rem) if c)
    assert not cur
    return plain, tuple(frac)


@lru_cache(maxsize=None)
def _canonical(algebra: Algebra, exps: tuple[int, ...], k: int) -> tuple[tuple[BasisKey, Fraction], ...]:
    if k == 0:
        return ((BasisKey(exps, 0), ONE),)
    d = algebra.denom_index
    plain, frac = _sadic(algebra.denominator, exps[d], k)
    out = []
    for t, c in plain:
        out.append((BasisKey(exps[:d] + (t,) + exps[d + 1:], 0), c))
    for j, kk, c in frac:
        out.append((BasisKey(exps[:d] + (j,) + exps[d + 1:], kk), c))
    return tuple(out)


@lru_cache(maxsize=None)
def key_product(algebra: Algebra, a: BasisKey, b: BasisKey) -> tuple[tuple[BasisKey, Fraction], ...]:
    """Product of two basis keys as a canonical linear combination."""
    exps = tuple(x + y for x, y in zip(a[0], b[0]))
    return _canonical(algebra, exps, a[1] + b[1])


def format_key(algebra: Algebra, key: BasisKey) -> str:
    """The monomial ``x^i*y^j/(s)^k`` for a key with coefficient one."""
    exps, dp = key
    den = algebra.denominator
    d = algebra.denom_index
    shift_var = dp > 0 and den.is_monomial
    factors = []
    for i, (name, e) in enumerate(zip(algebra.variables, exps)):
        if shift_var and i == d:
            e -= den.degree * dp
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    num = "*".join(factors)
    if dp > 0 and not den.is_monomial:
        tail = f"/({den})" + (f"^{dp}" if dp > 1 else "")
        return (num or "1") + tail
    return num or "1"


def format_term(algebra: Algebra, key: BasisKey, magnitude: Fraction) -> str:
    mono = format_key(algebra, key)
    if magnitude == 1:
        return mono
    if mono == "1":
        return str(magnitude)
    if mono.startswith("1/("):
        return f"{magnitude}{mono[1:]}"
    return f"{magnitude}*{mono}"


def join_signed(parts: Iterable[tuple[Fraction, str]]) -> str:
    """Join ``(sign-carrying coefficient, body)`` pairs into ``a + b - c`` form."""
    out = []
    for c, body in parts:
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out) if out else "0"


class AlgebraElement:
    """Immutable sparse linear combination of basis keys."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: Algebra, terms: Mapping[BasisKey, Fraction]):
        self.algebra = algebra
        self.terms = {k: c for k, c in terms.items() if c}
        self._hash = None

    # linear structure
    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise DomainError(f"descriptor mismatch: {self.algebra} vs {other.algebra}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return AlgebraElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = scalar(other)
            return AlgebraElement(self.algebra, {k: c * v for k, v in self.terms.items()})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.const(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[BasisKey, Fraction]]:
        """Terms in canonical (lexicographic) key order."""
        return sorted(self.terms.items())

    def __iter__(self) -> Iterator[tuple[BasisKey, Fraction]]:
        return iter(self.items())

    def coefficient(self, key: BasisKey) -> Fraction:
        return self.terms.get(key, ZERO)

    def is_polynomial(self) -> bool:
        return all(k.denom_power == 0 for k in self.terms)

    def is_constant(self) -> bool:
        return all(k == self.algebra.one_key for k in self.terms)

    def split(self) -> tuple["AlgebraElement", "AlgebraElement"]:
        return split(self)

    def inverse(self) -> "AlgebraElement":
        """Inverse of a unit of the form ``c * s^j`` (``j`` any integer).

        When ``s`` is a power of its variable, that variable is a unit too and
        ``c * x^i * s^j`` is also accepted.
        """
        alg = self.algebra
        if not self:
            raise DomainError("zero is not invertible")
        if self.is_constant():
            return alg.const(1 / self.terms[alg.one_key])
        if alg.denominator is None:
            raise DomainError(f"{self} is not invertible in {alg}")
        depth = max(k.denom_power for k in self.terms)
        p = self * alg.s() ** depth
        s_inv = alg.s_inverse(1)
        removed = 0
        while not p.is_constant():
            q = p * s_inv
            if not q.split()[1]:
                p, removed = q, removed + 1
            else:
                break
        x_removed = 0
        if alg.denominator.is_monomial:
            x_inv = alg.var(alg.denominator.variable) ** (alg.denominator.degree - 1) * s_inv
            while not p.is_constant():
                q = p * x_inv
                if not q.split()[1]:
                    p, x_removed = q, x_removed + 1
                else:
                    break
        if not p.is_constant():
            raise DomainError(f"{self} is not invertible in {alg}")
        c = p.terms[alg.one_key]
        net = depth - removed  # the inverse carries s^net
        out = alg.const(1 / c)
        out = out * (alg.s() ** net if net >= 0 else alg.s_inverse(-net))
        if x_removed:
            x_inv = alg.var(alg.denominator.variable) ** (alg.denominator.degree - 1) * s_inv
            out = out * x_inv ** x_removed
        return out

    def __str__(self) -> str:
        return join_signed((c, format_term(self.algebra, k, abs(c))) for k, c in self.items())

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Commutative product in ``S^-1 A``; exponents and denominator powers add, then canonicalize."""
    if a.algebra != b.algebra:
        raise DomainError(f"descriptor mismatch: {a.algebra} vs {b.algebra}")
    alg = a.algebra
    out: dict[BasisKey, Fraction] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            for k, c in key_product(alg, ka, kb):
                out[k] = out.get(k, ZERO) + ca * cb * c
    return AlgebraElement(alg, out)


def split(a: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """``(A-part, V-part)`` of ``a``; unique because keys are canonical."""
    if a.algebra.denominator is None:
        raise DomainError("split needs an algebra with a denominator")
    plain = {k: c for k, c in a.terms.items() if k.denom_power == 0}
    frac = {k: c for k, c in a.terms.items() if k.denom_power > 0}
    return AlgebraElement(a.algebra, plain), AlgebraElement(a.algebra, frac)


# -- base Rota-Baxter operators ----------------------------------------------

class OpKind(enum.Enum):
    ZERO = "zero"
    IDENTITY = "id"
    NEG_IDENTITY = "negid"
    INTEGRAL = "integral"


@dataclass(frozen=True)
class BaseOperator:
    kind: OpKind
    weight: Fraction = ZERO
    variable: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "weight", scalar(self.weight))
        required = {OpKind.INTEGRAL: ZERO, OpKind.IDENTITY: Fraction(-1), OpKind.NEG_IDENTITY: ONE}
        if self.kind in required and self.weight != required[self.kind]:
            raise DomainError(
                f"{self.kind.value} operator has weight {required[self.kind]}, not {self.weight}")
        if self.kind is OpKind.INTEGRAL and not self.variable:
            raise DomainError("integral operator needs a variable")

    @classmethod
    def zero(cls, weight=0) -> "BaseOperator":
        return cls(OpKind.ZERO, scalar(weight))

    @classmethod
    def identity(cls) -> "BaseOperator":
        return cls(OpKind.IDENTITY, Fraction(-1))

    @classmethod
    def neg_identity(cls) -> "BaseOperator":
        return cls(OpKind.NEG_IDENTITY, ONE)

    @classmethod
    def integral(cls, variable: str) -> "BaseOperator":
        return cls(OpKind.INTEGRAL, ZERO, variable)

    def is_defined_on(self, algebra: Algebra, key: BasisKey) -> bool:
        return self.kind is not OpKind.INTEGRAL or key.denom_power == 0

    def __str__(self) -> str:
        if self.kind is OpKind.INTEGRAL:
            return f"integral:{self.variable}"
        return self.kind.value


def apply_base_operator(op: BaseOperator, a: AlgebraElement) -> AlgebraElement:
    alg = a.algebra
    if op.kind is OpKind.ZERO:
        return alg.zero()
    if op.kind is OpKind.IDENTITY:
        return a
    if op.kind is OpKind.NEG_IDENTITY:
        return -a
    i = alg.index(op.variable)
    out = {}
    for (exps, dp), c in a.terms.items():
        if dp:
            raise OperatorUndefined(f"integral operator undefined on fractional part of {a}")
        n = exps[i]
        out[BasisKey(exps[:i] + (n + 1,) + exps[i + 1:], 0)] = c / (n + 1)
    return AlgebraElement(alg, out)


# -- Rota-Baxter algebra interface ------------------------------------------

class RBAlgebra:
    """What the generic checks and evaluators need from a Rota-Baxter algebra.

    Elements must support ``+``, ``-``, scalar ``*`` and ``==``.
    """

    weight: Fraction

    def mul(self, a, b):
        raise NotImplementedError

    def op(self, a):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def embed(self, a: AlgebraElement):
        raise NotImplementedError


@dataclass(frozen=True)
class BaseRB(RBAlgebra):
    """``(A, P_A)`` for a monomial algebra and a base operator."""

    algebra: Algebra
    operator: BaseOperator

    @property
    def weight(self) -> Fraction:
        return self.operator.weight

    def mul(self, a, b):
        return mul(a, b)

    def op(self, a):
        return apply_base_operator(self.operator, a)

    def zero(self):
        return self.algebra.zero()

    def one(self):
        return self.algebra.one()

    def embed(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra != self.algebra:
            raise DomainError(f"descriptor mismatch: {a.algebra} vs {self.algebra}")
        return a


def verify_rb_axiom(alg: RBAlgebra, weight, x, y) -> bool:
    """Whether ``P(x)P(y) == P(xP(y) + P(x)y + weight*xy)`` holds exactly."""
    lam = scalar(weight)
    px, py = alg.op(x), alg.op(y)
    lhs = alg.mul(px, py)
    inner = alg.mul(x, py) + alg.mul(px, y)
    if lam:
        inner = inner + alg.mul(x, y) * lam
    return lhs == alg.op(inner)


class AlgebraMap:
    """A unital algebra map given by the images of the variables.

    Variables without an explicit image go to the same-named variable of the
    target.  If the source has a denominator, ``s`` must map to a unit of the
    target (``s_inverse`` may supply the inverse image explicitly).
    """

    def __init__(self, source: Algebra, target: Algebra,
                 images: Optional[Mapping[str, AlgebraElement]] = None,
                 s_inverse: Optional[AlgebraElement] = None):
        self.source = source
        self.target = target
        imgs = dict(images or {})
        for v in source.variables:
            if v not in imgs:
                imgs[v] = target.var(v)
            elif isinstance(imgs[v], (int, Fraction)):
                imgs[v] = target.const(imgs[v])
            if imgs[v].algebra != target:
                raise DomainError(f"image of {v} does not lie in {target}")
        self.images = imgs
        self._s_inverse = s_inverse
        self._cache: dict[BasisKey, AlgebraElement] = {}

    @property
    def s_inverse(self) -> AlgebraElement:
        if self._s_inverse is None:
            s_img = self._poly_image(self.source.s())
            self._s_inverse = s_img.inverse()
        return self._s_inverse

    def _poly_image(self, a: AlgebraElement) -> AlgebraElement:
        out = self.target.zero()
        for key, c in a.terms.items():
            out = out + self.key_image(BasisKey(key.exponents, 0)) * c
        return out

    def key_image(self, key: BasisKey) -> AlgebraElement:
        hit = self._cache.get(key)
        if hit is None:
            hit = self.target.one()
            for v, e in zip(self.source.variables, key.exponents):
                if e:
                    hit = hit * self.images[v] ** e
            if key.denom_power:
                hit = hit * self.s_inverse ** key.denom_power
            self._cache[key] = hit
        return hit

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra != self.source:
            raise DomainError(f"{a} is not in {self.source}")
        out = self.target.zero()
        for key, c in a.terms.items():
            out = out + self.key_image(key) * c
        return out


def transfer(a: AlgebraElement, target: Algebra) -> AlgebraElement:
    """Re-express ``a`` in ``target`` by variable name (an inclusion of monomial algebras)."""
    if a.algebra == target:
        return a
    src = a.algebra
    out = {}
    for (exps, dp), c in a.terms.items():
        new = [0] * target.nvars
        for name, e in zip(src.variables, exps):
            if e:
                if name not in target.variables:
                    raise DomainError(f"variable {name!r} has no image in {target}")
                new[target.index(name)] = e
        if dp:
            if src.denominator != target.denominator:
                raise DomainError(f"denominators of {src} and {target} differ")
        key = BasisKey(tuple(new), dp)
        if not target.is_valid_key(key):
            raise DomainError(f"{a} has no image in {target}")
        out[key] = c
    return AlgebraElement(target, out)
