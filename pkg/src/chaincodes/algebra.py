"""The group algebra F_p G.

Elements are dense coefficient vectors indexed by group element.  For p = 2 a
bit-packed representation is available (bit g holds the coefficient of g);
left multiplication by a group element then becomes a bit permutation, done
through per-byte lookup tables so whole batches of candidates can be squared
at once with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IncompatibleOperands, InvalidParameter
from .groups import FiniteGroup


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def check_prime(p: int) -> int:
    if not _is_prime(p):
        raise InvalidParameter(f"modulus must be prime, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class FAlgebraElement:
    group: FiniteGroup
    p: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64) % self.p
        if c.shape != (self.group.order,):
            raise InvalidParameter(
                f"expected {self.group.order} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # constructors
    @classmethod
    def zero(cls, group, p):
        return cls(group, p, np.zeros(group.order, dtype=np.int64))

    @classmethod
    def one(cls, group, p):
        return cls.basis(group, p, 0)

    @classmethod
    def basis(cls, group, p, g):
        c = np.zeros(group.order, dtype=np.int64)
        c[g] = 1
        return cls(group, p, c)

    @classmethod
    def from_terms(cls, group, p, terms):
        c = np.zeros(group.order, dtype=np.int64)
        for coef, g in terms:
            c[g] += coef
        return cls(group, p, c)

    def terms(self) -> list[tuple[int, int]]:
        return [(int(c), g) for g, c in enumerate(self.coeffs) if c]

    def _check(self, other):
        if not isinstance(other, FAlgebraElement):
            raise IncompatibleOperands(f"cannot combine with {type(other).__name__}")
        if self.p != other.p or self.group != other.group:
            raise IncompatibleOperands(
                f"operands live in F_{self.p}[{self.group.label}] and "
                f"F_{other.p}[{other.group.label}]")

    def __add__(self, other):
        self._check(other)
        return FAlgebraElement(self.group, self.p, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return FAlgebraElement(self.group, self.p, self.coeffs - other.coeffs)

    def __neg__(self):
        return FAlgebraElement(self.group, self.p, -self.coeffs)

    def scale(self, k: int) -> FAlgebraElement:
        return FAlgebraElement(self.group, self.p, self.coeffs * k)

    def __mul__(self, other):
        return alg_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, FAlgebraElement):
            return NotImplemented
        return (self.p == other.p and self.group == other.group
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, self.group.order, self.coeffs.tobytes()))

    def __bool__(self):
        return bool(self.coeffs.any())

    def __repr__(self):
        from .literals import format_element
        return f"FAlgebraElement({format_element(self)!r}, p={self.p}, {self.group.label})"

    def to_json(self) -> dict:
        return {"group": self.group.spec, "p": self.p,
                "terms": [[c, g] for c, g in self.terms()]}

    @classmethod
    def from_json(cls, data: dict) -> FAlgebraElement:
        from .groups import parse_group
        return cls.from_terms(parse_group(data["group"]), int(data["p"]), data["terms"])


def mul_generic(group: FiniteGroup, p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficientwise convolution over the group table, any p."""
    prod = np.outer(a, b).ravel() % p
    out = np.bincount(group.mul.ravel(), weights=prod, minlength=group.order)
    return out.astype(np.int64) % p


def alg_mul(a: FAlgebraElement, b: FAlgebraElement) -> FAlgebraElement:
    a._check(b)
    if a.p == 2:
        pk = packer(a.group)
        word = pk.mul(pk.pack(a.coeffs), pk.pack(b.coeffs))
        return FAlgebraElement(a.group, 2, pk.unpack(word))
    return FAlgebraElement(a.group, a.p, mul_generic(a.group, a.p, a.coeffs, b.coeffs))


def star(a: FAlgebraElement) -> FAlgebraElement:
    """Conjugation g -> g^-1 extended linearly."""
    return FAlgebraElement(a.group, a.p, a.coeffs[a.group.inv])


def bilinear_form(a: FAlgebraElement, b: FAlgebraElement) -> int:
    a._check(b)
    return int(np.dot(a.coeffs, b.coeffs) % a.p)


def is_idempotent(a: FAlgebraElement) -> bool:
    return alg_mul(a, a) == a


def left_translate(a: FAlgebraElement, g: int) -> FAlgebraElement:
    """g * a."""
    c = np.zeros_like(a.coeffs)
    c[a.group.mul[g]] = a.coeffs
    return FAlgebraElement(a.group, a.p, c)


class F2Packer:
    """Bit-packed arithmetic in F_2 G for |G| <= 64.

    ``tables[h, k, v]`` is the packed image under left multiplication by h of
    the byte value v sitting in byte position k.
    """

    def __init__(self, group: FiniteGroup):
        n = group.order
        if n > 64:
            raise InvalidParameter("packed F_2 arithmetic supports |G| <= 64")
        self.group = group
        self.n = n
        self.nbytes = (n + 7) // 8
        self.dtype = np.uint32 if n <= 32 else np.uint64
        tables = np.zeros((n, self.nbytes, 256), dtype=np.uint64)
        vals = np.arange(256, dtype=np.uint64)
        for h in range(n):
            for k in range(self.nbytes):
                acc = np.zeros(256, dtype=np.uint64)
                for bit in range(8):
                    g = 8 * k + bit
                    if g >= n:
                        break
                    target = np.uint64(1) << np.uint64(int(group.mul[h, g]))
                    acc |= np.where((vals >> np.uint64(bit)) & np.uint64(1), target, np.uint64(0))
                tables[h, k] = acc
        self.tables = tables.astype(self.dtype)
        inv_tables = np.zeros((self.nbytes, 256), dtype=np.uint64)
        for k in range(self.nbytes):
            acc = np.zeros(256, dtype=np.uint64)
            for bit in range(8):
                g = 8 * k + bit
                if g >= n:
                    break
                target = np.uint64(1) << np.uint64(int(group.inv[g]))
                acc |= np.where((vals >> np.uint64(bit)) & np.uint64(1), target, np.uint64(0))
            inv_tables[k] = acc
        self.inv_tables = inv_tables.astype(self.dtype)
        self._py_tables = self.tables.astype(object).tolist()
        self._py_inv = self.inv_tables.astype(object).tolist()

    def pack(self, coeffs) -> int:
        word = 0
        for g, c in enumerate(coeffs):
            if int(c) & 1:
                word |= 1 << g
        return word

    def unpack(self, word: int) -> np.ndarray:
        return np.array([(word >> g) & 1 for g in range(self.n)], dtype=np.int64)

    # scalar (python int) path
    def translate(self, h: int, word: int) -> int:
        t = self._py_tables[h]
        out = 0
        for k in range(self.nbytes):
            out |= t[k][(word >> (8 * k)) & 0xFF]
        return out

    def mul(self, a: int, b: int) -> int:
        out = 0
        h = 0
        while a:
            if a & 1:
                out ^= self.translate(h, b)
            a >>= 1
            h += 1
        return out

    def star(self, word: int) -> int:
        out = 0
        for k in range(self.nbytes):
            out |= self._py_inv[k][(word >> (8 * k)) & 0xFF]
        return out

    # batch (numpy) path
    def translate_batch(self, h: int, words: np.ndarray) -> np.ndarray:
        t = self.tables[h]
        out = t[0][words & 0xFF]
        for k in range(1, self.nbytes):
            out |= t[k][(words >> (8 * k)) & 0xFF]
        return out

    def star_batch(self, words: np.ndarray) -> np.ndarray:
        out = self.inv_tables[0][words & 0xFF]
        for k in range(1, self.nbytes):
            out |= self.inv_tables[k][(words >> (8 * k)) & 0xFF]
        return out

    def mul_batch(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(b)
        one = self.dtype(1)
        for h in range(self.n):
            sel = (a >> self.dtype(h)) & one
            # sel * image: all-ones mask where bit h of a is set
            out ^= self.translate_batch(h, b) * sel
        return out

    def square_batch(self, words: np.ndarray) -> np.ndarray:
        return self.mul_batch(words, words)


@lru_cache(maxsize=64)
def packer(group: FiniteGroup) -> F2Packer:
    return F2Packer(group)
