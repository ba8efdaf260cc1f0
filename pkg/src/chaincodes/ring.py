"""Finite chain rings Z/p^l and F_p[u]/(u^l).

Both flavours encode a ring element as an integer ``0 <= x < p^l`` whose base-p
digits are its coordinates: for Z/p^l this is the usual residue, for
F_p[u]/(u^l) digit i is the coefficient of u^i.  Under this encoding the
uniformiser (p resp. u) is the integer p, pi^j is p^j, the valuation is the
number of trailing zero digits and alpha_j reads digit j.  Arithmetic goes
through precomputed q x q tables so both flavours share every code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import check_prime
from .errors import InvalidParameter, NotInLayer

FLAVORS = ("Z", "poly")
MAX_RING_SIZE = 4096


@dataclass(frozen=True)
class ChainRingSpec:
    p: int
    ell: int
    flavor: str = "Z"

    def __post_init__(self):
        check_prime(self.p)
        if self.ell < 1:
            raise InvalidParameter(f"ring length must be >= 1, got {self.ell}")
        if self.flavor not in FLAVORS:
            raise InvalidParameter(f"unknown ring flavour {self.flavor!r}")
        if self.p ** self.ell > MAX_RING_SIZE:
            raise InvalidParameter(f"ring of size {self.p ** self.ell} exceeds {MAX_RING_SIZE}")

    @property
    def q(self) -> int:
        return self.p ** self.ell

    @property
    def spec(self) -> str:
        return f"{self.flavor}:{self.p}^{self.ell}"

    def __str__(self):
        return self.spec

    @property
    def pi(self) -> int:
        return self.p

    def pi_pow(self, j: int) -> int:
        return self.p ** j if j < self.ell else 0

    # -- element encoding helpers ------------------------------------------
    def digits(self, x) -> np.ndarray:
        """Base-p digits of encoded elements, trailing axis of length ell."""
        x = np.asarray(x, dtype=np.int64)
        powers = self.p ** np.arange(self.ell, dtype=np.int64)
        return (x[..., None] // powers) % self.p

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        powers = self.p ** np.arange(self.ell, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ powers

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> R."""
        if self.flavor == "Z":
            return k % self.q
        return k % self.p

    # -- tables ----------------------------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        x = np.arange(self.q)
        if self.flavor == "Z":
            return (x[:, None] + x[None, :]) % self.q
        return self.from_digits(self.digits(x)[:, None, :] + self.digits(x)[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        x = np.arange(self.q)
        if self.flavor == "Z":
            return (-x) % self.q
        return self.from_digits(-self.digits(x))

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def mul_table(self) -> np.ndarray:
        x = np.arange(self.q)
        if self.flavor == "Z":
            return (x[:, None] * x[None, :]) % self.q
        d = self.digits(x)
        out = np.zeros((self.q, self.q, self.ell), dtype=np.int64)
        for i in range(self.ell):
            for j in range(self.ell - i):
                out[:, :, i + j] += d[:, None, i] * d[None, :, j]
        return self.from_digits(out)

    @cached_property
    def list_tables(self) -> tuple:
        """(val, normalizer, quotient, sub, mul) as nested lists for scalar loops."""
        return (self.val_table.tolist(), self.normalizer_table.tolist(),
                self.quotient_table.tolist(), self.sub_table.tolist(), self.mul_table.tolist())

    @cached_property
    def val_table(self) -> np.ndarray:
        x = np.arange(self.q)
        v = np.full(self.q, self.ell, dtype=np.int64)
        for j in range(self.ell - 1, -1, -1):
            v[x % self.p ** (j + 1) != 0] = j
        return v

    @cached_property
    def normalizer_table(self) -> np.ndarray:
        """normalizer_table[x] = smallest unit w with w*x = pi^val(x) (0 for x = 0)."""
        out = np.zeros(self.q, dtype=np.int64)
        units = np.flatnonzero(self.val_table == 0)
        for x in range(1, self.q):
            target = self.pi_pow(int(self.val_table[x]))
            hits = units[self.mul_table[units, x] == target]
            out[x] = hits[0]
        return out

    @cached_property
    def quotient_table(self) -> np.ndarray:
        """quotient_table[v, z] = t with z - pi^v t == z mod pi^v (canonical remainder)."""
        out = np.zeros((self.ell + 1, self.q), dtype=np.int64)
        x = np.arange(self.q)
        for v in range(self.ell + 1):
            if v == self.ell:
                continue  # pi^ell = 0 divides nothing but 0
            pv = self.pi_pow(v)
            mult = self.mul_table[pv]  # mult[t] = pi^v * t
            lookup = {}
            for t in range(self.q - 1, -1, -1):
                lookup[int(mult[t])] = t
            rem = x % (self.p ** v)
            diff = self.sub_table[x, rem]
            out[v] = [lookup[int(d)] for d in diff]
        return out

    # -- vector operations ---------------------------------------------------
    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.sub_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def valuation_of(self, a):
        return self.val_table[a]

    def sum(self, values, axis=-1) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        if self.flavor == "Z":
            return values.sum(axis=axis) % self.q
        return self.from_digits(self.digits(values).sum(axis=axis if axis >= 0 else axis - 1))

    def sum_grouped(self, values: np.ndarray, index: np.ndarray, size: int) -> np.ndarray:
        """out[k] = ring sum of values[i] over i with index[i] == k."""
        values = np.asarray(values, dtype=np.int64).ravel()
        index = np.asarray(index).ravel()
        if self.flavor == "Z":
            return np.bincount(index, weights=values, minlength=size).astype(np.int64) % self.q
        d = self.digits(values)
        cols = [np.bincount(index, weights=d[:, i], minlength=size).astype(np.int64)
                for i in range(self.ell)]
        return self.from_digits(np.stack(cols, axis=-1))

    def matvec_pairing(self, rows: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Row-wise dot products sum_g rows[i, g] * v[g]."""
        return self.sum(self.mul_table[rows, np.asarray(v)[None, :]], axis=-1)

    # -- layer maps --------------------------------------------------------------
    def valuation(self, x) -> int:
        return int(self.val_table[int(getattr(x, "value", x))])

    def alpha(self, x, j: int) -> int:
        """alpha_j: pi^j r + m^(j+1) -> r + m."""
        x = int(getattr(x, "value", x))
        if not 0 <= j < self.ell:
            raise InvalidParameter(f"layer index {j} outside [0, {self.ell})")
        if self.val_table[x] < j:
            raise NotInLayer(f"{x} has valuation {self.val_table[x]} < {j}")
        return (x // self.p ** j) % self.p

    def alpha_up(self, f: int, j: int) -> int:
        """Section of alpha_j: pi^j times the lift of f in {0, ..., p-1}."""
        if not 0 <= j < self.ell:
            raise InvalidParameter(f"layer index {j} outside [0, {self.ell})")
        return (int(f) % self.p) * self.p ** j

    def alpha_array(self, x: np.ndarray, j: int) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if (self.val_table[x] < j).any():
            raise NotInLayer(f"entries of valuation < {j}")
        return (x // self.p ** j) % self.p

    def euclidean_weight_table(self) -> np.ndarray:
        if self.flavor != "Z":
            from .errors import UnsupportedRing
            raise UnsupportedRing("euclidean weight needs an integer residue ring")
        x = np.arange(self.q)
        return np.minimum(x, self.q - x) ** 2

    # -- text --------------------------------------------------------------------
    def format_scalar(self, x: int) -> str:
        x = int(x)
        if self.flavor == "Z":
            return str(x)
        parts = []
        for i, c in enumerate(self.digits(x)):
            if c == 0:
                continue
            mono = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) if parts else "0"

    def parse_scalar(self, text: str) -> int:
        text = text.strip().replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        if self.flavor == "Z":
            return int(text) % self.q
        digits = np.zeros(self.ell, dtype=np.int64)
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("-")
            if "u" in term:
                coef, _, exp = term.partition("u")
                k = int(exp.lstrip("^")) if exp else 1
                c = int(coef.rstrip("*")) if coef.rstrip("*") else 1
            else:
                k, c = 0, int(term)
            if k < self.ell:
                digits[k] += sign * c
        return int(self.from_digits(digits))


def parse_ring(text: str) -> ChainRingSpec:
    """Parse ``Z:p^ell`` or ``poly:p^ell``."""
    flavor, _, rest = text.strip().partition(":")
    base, _, exp = rest.partition("^")
    try:
        p, ell = int(base), int(exp or 1)
    except ValueError:
        raise InvalidParameter(f"bad ring spec {text!r}") from None
    return ChainRingSpec(p, ell, flavor)


@dataclass(frozen=True)
class RScalar:
    """A ring element with its ring attached; arithmetic for callers that want values."""

    ring: ChainRingSpec
    value: int

    def __post_init__(self):
        if self.ring.flavor == "Z":
            object.__setattr__(self, "value", int(self.value) % self.ring.q)
        elif not 0 <= self.value < self.ring.q:
            raise InvalidParameter(f"encoded value {self.value} outside [0, {self.ring.q})")

    def __add__(self, other):
        return RScalar(self.ring, int(self.ring.add_table[self.value, other.value]))

    def __sub__(self, other):
        return RScalar(self.ring, int(self.ring.sub_table[self.value, other.value]))

    def __mul__(self, other):
        return RScalar(self.ring, int(self.ring.mul_table[self.value, other.value]))

    def __neg__(self):
        return RScalar(self.ring, int(self.ring.neg_table[self.value]))

    def valuation(self) -> int:
        return self.ring.valuation(self.value)

    def __str__(self):
        return self.ring.format_scalar(self.value)


def valuation(x: RScalar) -> int:
    return x.ring.valuation(x.value)


def alpha_j(x: RScalar, j: int) -> int:
    return x.ring.alpha(x.value, j)


def alpha_j_up(ring: ChainRingSpec, f: int, j: int) -> RScalar:
    return RScalar(ring, ring.alpha_up(f, j))
