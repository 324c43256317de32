"""The free commutative Rota-Baxter algebra on a monomial algebra.

Elements are sparse combinations of tensor words ``a0 (x) a1 (x) ... (x) ak``
whose slots are basis keys; all coefficients live outside the slots.  The
product is the mixable shuffle, computed by its defining recursion on pure
words with memoization; the operator prepends the unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .base import (
    ZERO,
    Algebra,
    AlgebraElement,
    AlgebraMap,
    BasisKey,
    RBAlgebra,
    format_key,
    format_term,
    format_fraction,
    join_signed,
    key_product,
    scalar,
)
from .errors import DomainError, GuardError

Word = tuple[BasisKey, ...]
Terms = dict[Word, Fraction]

DEFAULT_MAX_WORD_LEN = 16


def _acc(out: Terms, items: Mapping[Word, Fraction] | Iterable[tuple[Word, Fraction]], scale: Fraction = Fraction(1)):
    it = items.items() if isinstance(items, Mapping) else items
    for w, c in it:
        v = out.get(w, ZERO) + scale * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)


def word_sort_key(word: Word):
    return (len(word), word)


def format_word(algebra: Algebra, word: Word, magnitude: Fraction) -> str:
    if len(word) == 1:
        return format_term(algebra, word[0], magnitude)
    body = "T[" + ", ".join(format_key(algebra, k) for k in word) + "]"
    return body if magnitude == 1 else f"{magnitude}*{body}"


class WordCombination:
    """Immutable linear combination of tensor words over a parent ring."""

    __slots__ = ("parent", "terms", "_hash")

    def __init__(self, parent, terms: Mapping[Word, Fraction]):
        self.parent = parent
        self.terms = {w: c for w, c in terms.items() if c}
        self._hash = None

    @property
    def algebra(self) -> Algebra:
        return self.parent.algebra

    @property
    def weight(self) -> Fraction:
        return self.parent.weight

    def _new(self, terms) -> "WordCombination":
        return type(self)(self.parent, terms)

    def _check(self, other: "WordCombination"):
        if type(other) is not type(self) or other.parent != self.parent:
            raise DomainError(f"cannot combine elements of {self.parent} and {getattr(other, 'parent', other)}")

    def __add__(self, other):
        if not isinstance(other, WordCombination):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        _acc(out, other.terms)
        return self._new(out)

    def __neg__(self):
        return self._new({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WordCombination):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = scalar(other)
            return self._new({w: c * v for w, v in self.terms.items()})
        if isinstance(other, WordCombination):
            self._check(other)
            return self.parent.mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, WordCombination):
            return NotImplemented
        return self.parent == other.parent and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.parent, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[Word, Fraction]]:
        """Terms sorted length-then-lexicographically."""
        return sorted(self.terms.items(), key=lambda wc: word_sort_key(wc[0]))

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.items())

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self) -> str:
        alg = self.algebra
        return join_signed((c, format_word(alg, w, abs(c))) for w, c in self.items())

    def to_json(self) -> dict:
        alg = self.algebra
        return {"terms": [{"coeff": format_fraction(c), "word": [format_key(alg, k) for k in w]}
                          for w, c in self.items()]}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class ShuffleElement(WordCombination):
    __slots__ = ()


@dataclass(frozen=True)
class FreeRB(RBAlgebra):
    """``Sh(A)`` with the mixable shuffle product of the given weight."""

    algebra: Algebra
    weight: Fraction = ZERO
    max_word_len: int = field(default=DEFAULT_MAX_WORD_LEN, compare=False)
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weight", scalar(self.weight))

    # constructors
    def element(self, terms: Mapping[Word, object]) -> ShuffleElement:
        out: Terms = {}
        for w, c in terms.items():
            w = tuple(BasisKey(tuple(k[0]), k[1]) for k in w)
            if not w or not all(self.algebra.is_valid_key(k) for k in w):
                raise DomainError(f"invalid word {w} over {self.algebra}")
            _acc(out, [(w, scalar(c))])
        return ShuffleElement(self, out)

    def word(self, *slots: AlgebraElement) -> ShuffleElement:
        """The multilinear expansion of ``slots[0] (x) ... (x) slots[-1]``."""
        if not slots:
            raise DomainError("a tensor word needs at least one slot")
        terms: Terms = {(): Fraction(1)}
        for a in slots:
            if a.algebra != self.algebra:
                raise DomainError(f"slot {a} is not in {self.algebra}")
            terms = {w + (k,): c * d for w, c in terms.items() for k, d in a.terms.items()}
        self._guard(len(slots))
        return ShuffleElement(self, terms)

    def zero(self) -> ShuffleElement:
        return ShuffleElement(self, {})

    def one(self) -> ShuffleElement:
        return ShuffleElement(self, {(self.algebra.one_key,): Fraction(1)})

    def embed(self, a: AlgebraElement) -> ShuffleElement:
        return embed(self, a)

    def mul(self, u, v):
        return msh_product(u, v)

    def op(self, u):
        return shuffle_P(u)

    def _guard(self, length: int):
        if length > self.max_word_len:
            raise GuardError(f"word length {length} exceeds the maximum {self.max_word_len}")

    def msh_words(self, a: Word, b: Word) -> Terms:
        """Mixable shuffle of two pure words, by the defining recursion."""
        self._guard(len(a) + len(b) - 1)
        memo_key = (a, b)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        head = key_product(self.algebra, a[0], b[0])
        if len(a) == 1 or len(b) == 1:
            tail = b[1:] if len(a) == 1 else a[1:]
            res = {(k,) + tail: c for k, c in head}
        else:
            ta, tb = a[1:], b[1:]
            one = (self.algebra.one_key,)
            inner: Terms = {}
            _acc(inner, self.msh_words(ta, one + tb))
            _acc(inner, self.msh_words(one + ta, tb))
            if self.weight:
                _acc(inner, self.msh_words(ta, tb), self.weight)
            res = {}
            for k, c in head:
                _acc(res, (((k,) + w, c * d) for w, d in inner.items()))
        self._memo[memo_key] = res
        return res

    def __str__(self) -> str:
        return f"Sh({self.algebra}, weight={self.weight})"


def msh_product(u: WordCombination, v: WordCombination) -> ShuffleElement:
    if not isinstance(u, ShuffleElement) or not isinstance(v, ShuffleElement):
        raise DomainError("msh_product expects elements of a free Rota-Baxter algebra")
    if u.parent != v.parent:
        raise DomainError(f"descriptor/weight mismatch: {u.parent} vs {v.parent}")
    ring = u.parent
    out: Terms = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            _acc(out, ring.msh_words(a, b), ca * cb)
    return ShuffleElement(ring, out)


def shuffle_P(u: ShuffleElement) -> ShuffleElement:
    ring = u.parent
    if u.terms:
        ring._guard(u.max_length() + 1)
    one = (ring.algebra.one_key,)
    return ShuffleElement(ring, {one + w: c for w, c in u.terms.items()})


def embed(ring: FreeRB, a: AlgebraElement) -> ShuffleElement:
    if a.algebra != ring.algebra:
        raise DomainError(f"{a} is not in {ring.algebra}")
    return ShuffleElement(ring, {(k,): c for k, c in a.terms.items()})


def reconstruct(ring: RBAlgebra, word: Word, embed_key: Optional[Callable[[BasisKey], object]] = None):
    """``a0 * P(a1 * P(... P(ak)))`` computed with the ring's own product and operator."""
    if embed_key is None:
        embed_key = lambda k: ring.embed(ring.algebra.key_element(k))
    acc = embed_key(word[-1])
    for k in reversed(word[:-1]):
        acc = ring.mul(embed_key(k), ring.op(acc))
    return acc


def evaluate_words(u: WordCombination, slot_image: Callable[[BasisKey], object], target: RBAlgebra):
    """``sum c * f(a0) P(f(a1) P(... P(f(ak))))`` in ``target``; memoized on word suffixes."""
    images: dict[BasisKey, object] = {}
    suffix: dict[Word, object] = {}

    def img(k):
        if k not in images:
            images[k] = slot_image(k)
        return images[k]

    def value(w: Word):
        hit = suffix.get(w)
        if hit is None:
            if len(w) == 1:
                hit = img(w[0])
            else:
                hit = target.mul(img(w[0]), target.op(value(w[1:])))
            suffix[w] = hit
        return hit

    total = target.zero()
    for w, c in u.items():
        total = total + value(w) * c
    return total


def collapse_phi(u: ShuffleElement, target: RBAlgebra):
    """The Rota-Baxter morphism ``Sh(R) -> R`` induced by the identity of ``R``."""
    if scalar(target.weight) != u.weight:
        raise DomainError(f"weight mismatch: {u.weight} vs {target.weight}")
    alg = u.algebra
    return evaluate_words(u, lambda k: target.embed(alg.key_element(k)), target)


def free_extension(f: Callable[[AlgebraElement], object], u: ShuffleElement, target: RBAlgebra):
    """Unique Rota-Baxter extension of an algebra map ``f: A -> target``."""
    if scalar(target.weight) != u.weight:
        raise DomainError(f"weight mismatch: {u.weight} vs {target.weight}")
    alg = u.algebra
    return evaluate_words(u, lambda k: f(alg.key_element(k)), target)


def map_words(f: AlgebraMap, u: ShuffleElement, target: Optional[FreeRB] = None) -> ShuffleElement:
    """``Sh(f)``: apply ``f`` slot-wise and re-expand multilinearly."""
    if f.source != u.algebra:
        raise DomainError(f"map source {f.source} does not match {u.algebra}")
    if target is None:
        target = FreeRB(f.target, u.weight, u.parent.max_word_len)
    if target.algebra != f.target or target.weight != u.weight:
        raise DomainError("target ring does not match the map")
    out: Terms = {}
    for w, c in u.terms.items():
        partial: Terms = {(): c}
        for k in w:
            img = f.key_image(k)
            partial = {p + (kk,): pc * d for p, pc in partial.items() for kk, d in img.terms.items()}
        _acc(out, partial)
    return ShuffleElement(target, out)
