"""Group codes over F_p: left ideals of F_p G kept as reduced echelon bases."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import FAlgebraElement, alg_mul, is_idempotent, left_translate, star
from .errors import BudgetExceeded, IncompatibleOperands, InternalConsistencyError, InvalidGenerator
from .groups import FiniteGroup

DEFAULT_DISTANCE_CUTOFF = 28


# -- linear algebra over F_p -------------------------------------------------------

def rref_mod_p(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.size <= 512:
        return _rref_lists(a, p)
    return _rref_numpy(a, p)


def _rref_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if len(others):
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r].copy(), pivots


def _rref_lists(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    # same elimination on Python lists; numpy call overhead dominates small matrices
    rows, cols = a.shape
    m = a.tolist()
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], -1, p)
        pr = m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            f = m[i][c]
            if f and i != r:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return np.array(m[:r], dtype=np.int64).reshape(r, cols), pivots


def nullspace_mod_p(m, p: int, ncols: int) -> np.ndarray:
    """Basis of {v : m v = 0}, as rows."""
    m = np.asarray(m, dtype=np.int64).reshape(-1, ncols)
    red, pivots = rref_mod_p(m, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = (-red[r, f]) % p
    return basis


def solve_mod_p(a, b, p: int):
    """One solution x of a x = b (free variables set to 0), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    k = a.shape[1]
    red, pivots = rref_mod_p(np.hstack([a, b]), p)
    if k in pivots:
        return None
    x = np.zeros(k, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, k]
    return x


# -- codes ------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupCodeF:
    group: FiniteGroup
    p: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64).reshape(-1, self.group.order)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "_key", b.astype(np.uint8).tobytes() + bytes([b.shape[0]]))

    @property
    def length(self) -> int:
        return self.group.order

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def key(self) -> bytes:
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroupCodeF):
            return NotImplemented
        return self.p == other.p and self._key == other._key and self.group == other.group

    def __hash__(self):
        return hash((self.p, self.group.order, self._key))

    def __repr__(self):
        return f"GroupCodeF({self.group.label}, p={self.p}, dim={self.dim})"

    @functools.cached_property
    def pivots(self) -> np.ndarray:
        return np.argmax(self.basis != 0, axis=1)

    def _residual(self, rows: np.ndarray) -> np.ndarray:
        # basis is reduced echelon with unit pivots, so subtracting the
        # pivot-column combination leaves zero exactly for members
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.length) % self.p
        if self.dim == 0:
            return rows
        return (rows - rows[:, self.pivots] @ self.basis) % self.p

    def contains(self, v) -> bool:
        v = np.asarray(getattr(v, "coeffs", v), dtype=np.int64)
        return not self._residual(v).any()

    def is_subcode_of(self, other: GroupCodeF) -> bool:
        if self.dim == 0:
            return True
        return not other._residual(self.basis).any()

    def rows(self) -> list[FAlgebraElement]:
        return [FAlgebraElement(self.group, self.p, r) for r in self.basis]

    def is_left_ideal(self) -> bool:
        return all(self.contains(left_translate(b, g))
                   for b in self.rows() for g in range(self.group.order))

    def to_json(self, idempotent: FAlgebraElement | None = None) -> dict:
        out = {"group": self.group.spec, "p": self.p,
               "basis": self.basis.tolist()}
        if idempotent is not None:
            out["idempotent"] = [[c, g] for c, g in idempotent.terms()]
        return out

    @classmethod
    def from_json(cls, data: dict) -> GroupCodeF:
        from .groups import parse_group
        group = parse_group(data["group"])
        return span_code(group, int(data["p"]), data["basis"])


def span_code(group: FiniteGroup, p: int, rows) -> GroupCodeF:
    """Code spanned (over F_p) by the given rows."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, group.order)
    red, _ = rref_mod_p(rows, p)
    return GroupCodeF(group, p, red)


def ideal_from_generators(gens: list[FAlgebraElement]) -> GroupCodeF:
    """Left ideal generated by ``gens``: the span of all g * x."""
    if not gens:
        raise IncompatibleOperands("need at least one generator")
    group, p = gens[0].group, gens[0].p
    rows = [left_translate(x, g).coeffs for x in gens for g in range(group.order)]
    return span_code(group, p, rows)


def zero_code(group: FiniteGroup, p: int) -> GroupCodeF:
    return GroupCodeF(group, p, np.zeros((0, group.order), dtype=np.int64))


def full_code(group: FiniteGroup, p: int) -> GroupCodeF:
    return GroupCodeF(group, p, np.eye(group.order, dtype=np.int64))


@functools.lru_cache(maxsize=1 << 14)
def code_from_idempotent(e: FAlgebraElement) -> GroupCodeF:
    if not is_idempotent(e):
        raise InvalidGenerator("generator is not idempotent")
    return ideal_from_generators([e])


def dual_by_nullspace(c: GroupCodeF) -> GroupCodeF:
    n = c.length
    return span_code(c.group, c.p, nullspace_mod_p(c.basis, c.p, n))


@functools.lru_cache(maxsize=1 << 14)
def dual_code_f(c: GroupCodeF, e: FAlgebraElement | None = None) -> GroupCodeF:
    """Dual code; the idempotent formula FG(1 - e*) is cross-checked against the nullspace."""
    direct = dual_by_nullspace(c)
    if e is None:
        e = projectivity_witness(c)
    elif code_from_idempotent(e) != c:
        raise InvalidGenerator("idempotent does not generate the given code")
    if e is not None:
        one = FAlgebraElement.one(c.group, c.p)
        formula = code_from_idempotent(one - star(e))
        if formula != direct:
            raise InternalConsistencyError(
                "dual via FG(1 - e*) disagrees with the nullspace computation")
    if direct.dim + c.dim != c.length:
        raise InternalConsistencyError("dim C + dim C^perp != |G|")
    return direct


@functools.lru_cache(maxsize=1 << 14)
def projectivity_witness(c: GroupCodeF) -> FAlgebraElement | None:
    """An idempotent e in c with b e = b for every basis row, or None."""
    group, p = c.group, c.p
    if c.dim == 0:
        return FAlgebraElement.zero(group, p)
    rows = c.rows()
    # unknowns: lambda_i with e = sum lambda_i b_i; equations: b_k e = b_k
    blocks = []
    rhs = []
    for bk in rows:
        products = [alg_mul(bk, bi).coeffs for bi in rows]
        blocks.append(np.stack(products, axis=1))  # (n, dim)
        rhs.append(bk.coeffs)
    lam = solve_mod_p(np.vstack(blocks), np.concatenate(rhs), p)
    if lam is None:
        return None
    e = FAlgebraElement(group, p, (lam @ c.basis) % p)
    if not is_idempotent(e) or any(alg_mul(b, e) != b for b in rows):
        raise InternalConsistencyError("projectivity witness failed verification")
    return e


def is_self_orthogonal_f(c: GroupCodeF) -> bool:
    if c.dim == 0:
        return True
    return not ((c.basis @ c.basis.T) % c.p).any()


# -- minimum distance ------------------------------------------------------------------

def _pack_rows(basis: np.ndarray) -> np.ndarray:
    weights = np.uint64(1) << np.arange(basis.shape[1], dtype=np.uint64)
    return (basis.astype(np.uint64) * weights).sum(axis=1).astype(np.uint64)


def _span_block(words: np.ndarray) -> np.ndarray:
    block = np.zeros(1, dtype=np.uint64)
    for w in words:
        block = np.concatenate([block, block ^ w])
    return block


def min_weight_packed(words, stop_at: int = 0, block_bits: int = 16) -> int | None:
    """Minimum popcount over the nonzero F_2-span of packed words.

    The span of the first ``block_bits`` words is materialised once; the
    remaining coefficients are walked in Gray-code order, so each step shifts
    the whole block by a single XOR.  Returns early once ``stop_at`` is reached.
    """
    words = np.asarray(words, dtype=np.uint64)
    k = len(words)
    if k == 0:
        return None
    kb = min(k, block_bits)
    block = _span_block(words[:kb])
    rest = words[kb:]
    counts = np.bitwise_count(block[1:])
    best = int(counts.min())
    if best <= stop_at:
        return best
    offset = np.uint64(0)
    for step in range(1, 1 << len(rest)):
        # bit flipped between consecutive Gray codes
        offset ^= rest[(step & -step).bit_length() - 1]
        w = int(np.bitwise_count(block ^ offset).min())
        if w < best:
            best = w
            if best <= stop_at:
                break
    return best


def _min_weight_generic(basis: np.ndarray, p: int, weight: np.ndarray,
                        block_rows: int = 10) -> int | None:
    k = basis.shape[0]
    if k == 0:
        return None
    kb = min(k, block_rows)
    coeffs = np.array(list(itertools.product(range(p), repeat=kb)), dtype=np.int64)
    block = (coeffs @ basis[:kb]) % p
    best = None
    for tail in itertools.product(range(p), repeat=k - kb):
        offset = (np.asarray(tail, dtype=np.int64) @ basis[kb:]) % p if k > kb else 0
        words = (block + offset) % p
        w = weight[words].sum(axis=1)
        if not any(tail):
            w = w[1:]
        m = int(w.min())
        best = m if best is None else min(best, m)
    return best


def _check_budget(c: GroupCodeF, cutoff: int):
    if c.dim > cutoff:
        raise BudgetExceeded(
            f"dimension {c.dim} above exhaustive cutoff {cutoff}",
            required=c.dim, budget=cutoff)


@functools.lru_cache(maxsize=1 << 14)
def min_hamming_distance_f(c: GroupCodeF, cutoff: int = DEFAULT_DISTANCE_CUTOFF,
                           stop_at: int = 0) -> int | None:
    _check_budget(c, cutoff)
    if c.dim == 0:
        return None
    if c.p == 2:
        return min_weight_packed(_pack_rows(c.basis), stop_at=stop_at)
    weight = (np.arange(c.p) != 0).astype(np.int64)
    return _min_weight_generic(c.basis, c.p, weight)


@functools.lru_cache(maxsize=1 << 14)
def min_euclidean_distance_f(c: GroupCodeF, cutoff: int = DEFAULT_DISTANCE_CUTOFF) -> int | None:
    """Euclidean weight with coordinate representatives in (-p/2, p/2]."""
    _check_budget(c, cutoff)
    if c.dim == 0:
        return None
    if c.p == 2:
        return min_weight_packed(_pack_rows(c.basis))
    x = np.arange(c.p)
    return _min_weight_generic(c.basis, c.p, np.minimum(x, c.p - x) ** 2)
