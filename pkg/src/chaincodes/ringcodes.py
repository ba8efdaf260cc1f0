"""Group codes over a finite chain ring R.

A left ideal of RG is stored in Howell form: an echelon generator matrix whose
pivots are exactly pi^a, with every entry above a pivot reduced modulo pi^a,
and closed under the extra rows pi^(l - a) * row.  That form is unique for a
given submodule, so ideals are compared by comparing matrices, and the rows
with pivots in the trailing columns always generate the sub-module of words
vanishing on the leading columns.  Kernels, intersections with m^j RG and
duals are all read off Howell forms of augmented matrices.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from .algebra import FAlgebraElement, is_idempotent
from .errors import (BudgetExceeded, IncompatibleOperands, InternalConsistencyError,
                     InvalidChain, InvalidParameter, LiftingFailure, PreconditionViolation,
                     Unsupported, UnsupportedRing)
from .fieldcodes import (GroupCodeF, code_from_idempotent, min_euclidean_distance_f,
                         min_hamming_distance_f, projectivity_witness, span_code)
from .groups import FiniteGroup
from .ring import ChainRingSpec

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000


# -- RG elements ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RAlgebraElement:
    group: FiniteGroup
    ring: ChainRingSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64)
        if c.shape != (self.group.order,):
            raise InvalidParameter(f"expected {self.group.order} coefficients")
        if c.min(initial=0) < 0 or c.max(initial=0) >= self.ring.q:
            raise InvalidParameter("coefficients must be encoded ring elements")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def _raw(cls, group, ring, coeffs):
        # trusted arithmetic result: skip range validation
        obj = object.__new__(cls)
        c = np.asarray(coeffs, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(obj, "group", group)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "coeffs", c)
        return obj

    @classmethod
    def zero(cls, group, ring):
        return cls(group, ring, np.zeros(group.order, dtype=np.int64))

    @classmethod
    def one(cls, group, ring):
        c = np.zeros(group.order, dtype=np.int64)
        c[0] = 1
        return cls(group, ring, c)

    @classmethod
    def lift(cls, e: FAlgebraElement, ring: ChainRingSpec, j: int = 0) -> RAlgebraElement:
        """alpha_j section applied coefficientwise."""
        if e.p != ring.p:
            raise IncompatibleOperands(f"F_{e.p} is not the residue field of {ring}")
        return cls(e.group, ring, np.array([ring.alpha_up(c, j) for c in e.coeffs],
                                           dtype=np.int64))

    def _check(self, other):
        if not isinstance(other, RAlgebraElement) or other.ring != self.ring \
                or other.group != self.group:
            raise IncompatibleOperands("operands live in different group rings")

    def __add__(self, other):
        self._check(other)
        return RAlgebraElement._raw(self.group, self.ring, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return RAlgebraElement._raw(self.group, self.ring, self.ring.sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        self._check(other)
        if self.ring.flavor == "Z":
            out = (self.coeffs @ other.coeffs[self.group.left_div]) % self.ring.q
            return RAlgebraElement._raw(self.group, self.ring, out)
        prod = self.ring.mul(self.coeffs[:, None], other.coeffs[None, :])
        out = self.ring.sum_grouped(prod, self.group.mul, self.group.order)
        return RAlgebraElement._raw(self.group, self.ring, out)

    def scale(self, r: int) -> RAlgebraElement:
        return RAlgebraElement(self.group, self.ring, self.ring.mul(int(r), self.coeffs))

    def translate(self, g: int) -> RAlgebraElement:
        """g * self."""
        c = np.zeros_like(self.coeffs)
        c[self.group.mul[g]] = self.coeffs
        return RAlgebraElement(self.group, self.ring, c)

    def star(self) -> RAlgebraElement:
        return RAlgebraElement._raw(self.group, self.ring, self.coeffs[self.group.inv])

    def alpha(self, j: int = 0) -> FAlgebraElement:
        return FAlgebraElement(self.group, self.ring.p, self.ring.alpha_array(self.coeffs, j))

    def is_idempotent(self) -> bool:
        return self * self == self

    def __eq__(self, other):
        if not isinstance(other, RAlgebraElement):
            return NotImplemented
        return (self.ring == other.ring and self.group == other.group
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ring, self.group.order, self.coeffs.tobytes()))

    def __bool__(self):
        return bool(self.coeffs.any())

    def __str__(self):
        from .literals import format_element
        return format_element(self)

    def __repr__(self):
        return f"RAlgebraElement({str(self)!r}, {self.ring}, {self.group.label})"


def _refine(eps: RAlgebraElement) -> RAlgebraElement:
    ring = eps.ring
    three, two = ring.from_int(3), ring.from_int(2)
    for _ in range(ring.ell):
        sq = eps * eps
        if sq == eps:
            break
        eps = sq.scale(three) - (sq * eps).scale(two)
    return eps


@functools.lru_cache(maxsize=1 << 14)
def lift_idempotent(e: FAlgebraElement, ring: ChainRingSpec,
                    corner: RAlgebraElement | None = None) -> RAlgebraElement:
    """Idempotent of RG reducing to e, by iterating eps <- 3 eps^2 - 2 eps^3.

    With ``corner`` (an idempotent f whose reduction absorbs e on both sides)
    the start value is f * e * f, so the lift stays in f RG f and satisfies
    eps f = f eps = eps.
    """
    if not is_idempotent(e):
        raise InvalidParameter("cannot lift a non-idempotent")
    eps = RAlgebraElement.lift(e, ring)
    if corner is not None:
        eps = corner * eps * corner
    eps = _refine(eps)
    if eps * eps != eps or eps.alpha(0) != e:
        raise LiftingFailure(f"no idempotent after {ring.ell} iterations")
    if corner is not None and (eps * corner != eps or corner * eps != eps):
        raise LiftingFailure("lift left the corner ring")
    return eps


def compatible_idempotents(idems) -> tuple:
    """Generators e'_j of the same codes with e'_i e'_j = e'_j e'_i = e'_min(i,j).

    Works top down: e'_j = e'_{j+1} e_j is idempotent because e_j e'_{j+1} = e_j
    (e'_{j+1} is a right identity of the larger code) and generates the same
    ideal since e_j e'_j = e_j.
    """
    from .algebra import alg_mul
    out = list(idems)
    for j in range(len(out) - 2, -1, -1):
        out[j] = alg_mul(out[j + 1], out[j])
    return tuple(out)


def compatible_lifts(idems, ring: ChainRingSpec) -> list[RAlgebraElement]:
    """Lifts of a compatible system, each taken in the corner of the next one up."""
    lifts = [None] * len(idems)
    corner = None
    for j in range(len(idems) - 1, -1, -1):
        lifts[j] = lift_idempotent(idems[j], ring, corner)
        corner = lifts[j]
    return lifts


def self_orthogonal_lift(e: FAlgebraElement, ring: ChainRingSpec) -> RAlgebraElement | None:
    """Idempotent lift eps of e with eps * eps^* = 0, for rings of length 2.

    Idempotent lifts are eps + pi*d with d in {d : ed + de = d}; the condition
    on eps * eps^* is linear in d modulo pi, so both reduce to one linear
    system over F_p.  Returns None when e e^* != 0 or the system is unsolvable.
    """
    from .algebra import alg_mul, star
    from .fieldcodes import solve_mod_p
    if ring.ell != 2:
        raise Unsupported("self-orthogonal lifting is implemented for length-2 rings")
    group, p = e.group, e.p
    if alg_mul(e, star(e)):
        return None
    eps = lift_idempotent(e, ring)
    target = (eps * eps.star()).alpha(1)
    es = star(e)
    cols = []
    for g in range(group.order):
        d = FAlgebraElement.basis(group, p, g)
        peirce = alg_mul(e, d) + alg_mul(d, e) - d
        orth = alg_mul(e, star(d)) + alg_mul(d, es)
        cols.append(np.concatenate([peirce.coeffs, orth.coeffs]))
    rhs = np.concatenate([np.zeros(group.order, dtype=np.int64), (-target).coeffs])
    d = solve_mod_p(np.stack(cols, axis=1), rhs, p)
    if d is None:
        return None
    out = eps + RAlgebraElement.lift(FAlgebraElement(group, p, d), ring, 1)
    if out * out != out or out * out.star() or out.alpha(0) != e:
        raise InternalConsistencyError("self-orthogonal lift failed verification")
    return out


# -- Howell form ---------------------------------------------------------------------------

HOWELL_LIST_LIMIT = 1024


def howell_form(ring: ChainRingSpec, rows) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[-1]
    if rows.size <= HOWELL_LIST_LIMIT:
        return _howell_lists(ring, rows.reshape(-1, n))
    return _howell_numpy(ring, rows.reshape(-1, n))


def _howell_lists(ring: ChainRingSpec, rows: np.ndarray) -> np.ndarray:
    # same elimination as _howell_numpy, on lists; much less overhead on small inputs
    n = rows.shape[1]
    val, norm, quot, sub, mul = ring.list_tables
    ell = ring.ell
    work = [r for r in rows.tolist() if any(r)]
    out, piv_info = [], []
    for c in range(n):
        if not work:
            break
        k = min(range(len(work)), key=lambda i: val[work[i][c]])
        v = val[work[k][c]]
        if v == ell:
            continue
        scale = mul[norm[work[k][c]]]
        piv = [scale[x] for x in work[k]]
        del work[k]
        nxt = []
        for r in work:
            if r[c]:
                t = mul[quot[v][r[c]]]
                r = [sub[a][t[b]] for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        shift = mul[ring.pi_pow(ell - v)]
        extra = [shift[x] for x in piv]
        if any(extra):
            nxt.append(extra)
        work = nxt
        out.append(piv)
        piv_info.append((c, v))
    for i, (c, v) in enumerate(piv_info):
        row = out[i]
        for a in range(i):
            t = quot[v][out[a][c]]
            if t:
                t = mul[t]
                out[a] = [sub[x][t[y]] for x, y in zip(out[a], row)]
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def _howell_numpy(ring: ChainRingSpec, rows: np.ndarray) -> np.ndarray:
    n = rows.shape[-1]
    work = rows.copy()
    work = work[work.any(axis=1)]
    val, norm, quot = ring.val_table, ring.normalizer_table, ring.quotient_table
    add, sub, mul = ring.add_table, ring.sub_table, ring.mul_table
    out = []
    piv_info = []
    for c in range(n):
        if not len(work):
            break
        vals = val[work[:, c]]
        k = int(np.argmin(vals))
        v = int(vals[k])
        if v == ring.ell:
            continue
        piv = mul[norm[work[k, c]], work[k]]
        work = work[np.arange(len(work)) != k]
        hit = work[:, c] != 0
        if hit.any():
            t = quot[v, work[hit, c]]
            work[hit] = sub[work[hit], mul[t[:, None], piv[None, :]]]
        extra = mul[ring.pi_pow(ring.ell - v), piv]
        if extra.any():
            work = np.vstack([work, extra[None, :]])
        work = work[work.any(axis=1)]
        out.append(piv)
        piv_info.append((c, v))
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    h = np.array(out, dtype=np.int64)
    for i, (c, v) in enumerate(piv_info):
        if i == 0:
            continue
        above = h[:i]
        t = quot[v, above[:, c]]
        nz = t != 0
        if nz.any():
            h[:i][nz] = sub[above[nz], mul[t[nz, None], h[i][None, :]]]
    return h


def valuation_basis(ring: ChainRingSpec, rows) -> tuple[np.ndarray, np.ndarray]:
    """(a, u) with span(rows) = direct sum of R pi^a_i u_i and the u_i independent mod pi.

    Elimination with full pivoting: the pivot is an entry of least valuation
    among all remaining entries, so its row is pi^v times a vector with a unit
    in the pivot column and it clears its column everywhere below.
    """
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[-1]
    if rows.size <= HOWELL_LIST_LIMIT:
        return _valuation_basis_lists(ring, rows.reshape(-1, n))
    return _valuation_basis_numpy(ring, rows.reshape(-1, n))


def _valuation_basis_lists(ring: ChainRingSpec, rows: np.ndarray):
    n = rows.shape[1]
    val, norm, quot, sub, mul = ring.list_tables
    work = [r for r in rows.tolist() if any(r)]
    exps, vecs = [], []
    while work:
        best = ring.ell + 1
        for i, r in enumerate(work):
            for col, x in enumerate(r):
                if val[x] < best:
                    best, k, c = val[x], i, col
        v = best
        scale = mul[norm[work[k][c]]]
        piv = [scale[x] for x in work[k]]
        del work[k]
        nxt = []
        for r in work:
            if r[c]:
                t = mul[quot[v][r[c]]]
                r = [sub[a][t[b]] for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        work = nxt
        exps.append(v)
        vecs.append([quot[v][x] for x in piv])
    return (np.array(exps, dtype=np.int64),
            np.array(vecs, dtype=np.int64).reshape(-1, n))


def _valuation_basis_numpy(ring: ChainRingSpec, rows: np.ndarray):
    work = rows[rows.any(axis=1)]
    n = rows.shape[1]
    val, norm, quot = ring.val_table, ring.normalizer_table, ring.quotient_table
    sub, mul = ring.sub_table, ring.mul_table
    exps, vecs = [], []
    while len(work):
        vals = val[work]
        k, c = np.unravel_index(int(np.argmin(vals)), vals.shape)
        v = int(vals[k, c])
        piv = mul[norm[work[k, c]], work[k]]
        work = work[np.arange(len(work)) != k]
        hit = work[:, c] != 0
        if hit.any():
            t = quot[v, work[hit, c]]
            work[hit] = sub[work[hit], mul[t[:, None], piv[None, :]]]
        work = work[work.any(axis=1)]
        exps.append(v)
        vecs.append(quot[v, piv])
    return (np.array(exps, dtype=np.int64),
            np.array(vecs, dtype=np.int64).reshape(-1, n))


def pivot_data(ring: ChainRingSpec, h: np.ndarray) -> list[tuple[int, int]]:
    """(pivot column, pivot valuation) for each Howell row."""
    out = []
    for row in h:
        c = int(np.flatnonzero(row)[0])
        out.append((c, int(ring.val_table[row[c]])))
    return out


def _kernel_rows(ring: ChainRingSpec, augmented: np.ndarray, split: int) -> np.ndarray:
    """Trailing parts of Howell rows whose leading ``split`` entries vanish."""
    h = howell_form(ring, augmented)
    keep = ~h[:, :split].any(axis=1) if len(h) else np.zeros(0, dtype=bool)
    return h[keep, split:]


# -- codes over R ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RCode:
    """Left ideal of RG; ``gens`` is its Howell form."""

    group: FiniteGroup
    ring: ChainRingSpec
    gens: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gens, dtype=np.int64).reshape(-1, self.group.order)
        g.setflags(write=False)
        object.__setattr__(self, "gens", g)

    @classmethod
    def from_rows(cls, group, ring, rows) -> RCode:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, group.order)
        return cls(group, ring, howell_form(ring, rows))

    @property
    def length(self) -> int:
        return self.group.order

    @functools.cached_property
    def pivots(self) -> list[tuple[int, int]]:
        return pivot_data(self.ring, self.gens)

    @property
    def pivot_valuations(self) -> list[int]:
        return [v for _, v in self.pivots]

    @property
    def log_size(self) -> int:
        """log_p of the number of codewords."""
        return sum(self.ring.ell - v for v in self.pivot_valuations)

    @property
    def cardinality(self) -> int:
        return self.ring.p ** self.log_size

    def __eq__(self, other):
        if not isinstance(other, RCode):
            return NotImplemented
        return (self.ring == other.ring and self.group == other.group
                and self.gens.shape == other.gens.shape
                and np.array_equal(self.gens, other.gens))

    def __hash__(self):
        return hash((self.ring, self.group.order, self.gens.tobytes()))

    def __repr__(self):
        return (f"RCode({self.group.label}, {self.ring}, rows={len(self.gens)}, "
                f"|C|={self.ring.p}^{self.log_size})")

    def contains(self, v) -> bool:
        v = np.asarray(getattr(v, "coeffs", v), dtype=np.int64)
        return RCode.from_rows(self.group, self.ring, np.vstack([self.gens, v])) == self

    def is_left_ideal(self) -> bool:
        n = self.group.order
        rows = [RAlgebraElement(self.group, self.ring, r).translate(g).coeffs
                for r in self.gens for g in range(n)]
        return not len(rows) or RCode.from_rows(self.group, self.ring,
                                                np.vstack([self.gens, *rows])) == self

    def intersect_layer(self, j: int) -> np.ndarray:
        """Generators of C intersected with m^j RG."""
        if j == 0:
            return self.gens
        n = self.group.order
        scaled = self.ring.mul(self.ring.pi_pow(self.ring.ell - j), self.gens)
        return _kernel_rows(self.ring, np.hstack([scaled, self.gens]), n)

    def layer_code(self, j: int) -> GroupCodeF:
        """alpha_j of (C cap m^j RG) / (C cap m^(j+1) RG), as a code over F_p."""
        rows = self.intersect_layer(j)
        return span_code(self.group, self.ring.p, self.ring.alpha_array(rows, j)
                         if len(rows) else rows)

    def codewords(self, budget: int = 1 << 20) -> np.ndarray:
        """Every element of the ideal, as rows (each exactly once)."""
        if self.cardinality > budget:
            raise BudgetExceeded(f"{self.cardinality} codewords exceed budget {budget}",
                                 required=self.cardinality, budget=budget)
        words = np.zeros((1, self.length), dtype=np.int64)
        for row, (_, v) in zip(self.gens, self.pivots):
            coeffs = np.arange(self.ring.p ** (self.ring.ell - v))
            multiples = self.ring.mul(coeffs[:, None], row[None, :])
            words = self.ring.add(words[:, None, :], multiples[None, :, :]).reshape(-1, self.length)
        return words

    def to_json(self) -> dict:
        fmt = self.ring.format_scalar
        return {"ring": self.ring.spec, "group": self.group.spec,
                "rows": [[fmt(x) for x in row] for row in self.gens],
                "pivot_valuations": self.pivot_valuations}

    @classmethod
    def from_json(cls, data: dict) -> RCode:
        from .groups import parse_group
        from .ring import parse_ring
        ring, group = parse_ring(data["ring"]), parse_group(data["group"])
        rows = [[ring.parse_scalar(x) for x in row] for row in data["rows"]]
        code = cls.from_rows(group, ring, np.array(rows, dtype=np.int64).reshape(-1, group.order))
        if "pivot_valuations" in data and code.pivot_valuations != list(data["pivot_valuations"]):
            raise InternalConsistencyError("stored pivot valuations do not match the rows")
        return code


def translates(group: FiniteGroup, coeffs: np.ndarray) -> np.ndarray:
    """Row g holds the coefficients of g * x."""
    n = group.order
    out = np.empty((n, n), dtype=np.int64)
    out[np.arange(n)[:, None], group.mul] = np.asarray(coeffs)[None, :]
    return out


def ideal_from_generators_r(gens: list[RAlgebraElement]) -> RCode:
    if not gens:
        raise IncompatibleOperands("need at least one generator")
    group, ring = gens[0].group, gens[0].ring
    rows = np.vstack([translates(group, x.coeffs) for x in gens])
    return RCode.from_rows(group, ring, rows)


def zero_code_r(group, ring) -> RCode:
    return RCode(group, ring, np.zeros((0, group.order), dtype=np.int64))


def full_code_r(group, ring) -> RCode:
    return RCode.from_rows(group, ring, np.eye(group.order, dtype=np.int64))


# -- chains -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeChain:
    ring: ChainRingSpec
    codes: tuple
    idems: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "codes", tuple(self.codes))
        object.__setattr__(self, "idems", tuple(self.idems) if self.idems
                           else (None,) * len(self.codes))

    @property
    def group(self) -> FiniteGroup:
        return self.codes[0].group

    def same_codes(self, other: CodeChain) -> bool:
        return self.codes == other.codes

    @property
    def key(self) -> tuple:
        return tuple(c.key for c in self.codes)

    def violations(self) -> list[str]:
        out = []
        if len(self.codes) != self.ring.ell:
            out.append(f"chain has {len(self.codes)} codes, ring length is {self.ring.ell}")
        for j, c in enumerate(self.codes):
            if c.p != self.ring.p:
                out.append(f"C_{j} is over F_{c.p}, residue field is F_{self.ring.p}")
        for j in range(len(self.codes) - 1):
            if not _nested(self.codes[j], self.codes[j + 1]):
                out.append(f"C_{j} is not contained in C_{j + 1}")
        for j, (c, e) in enumerate(zip(self.codes, self.idems)):
            problem = _generator_problem(c, e)
            if problem:
                out.append(f"{problem} (layer {j})")
        return out

    def to_json(self) -> dict:
        return {"ring": self.ring.spec, "group": self.group.spec,
                "codes": [c.to_json(e) for c, e in zip(self.codes, self.idems)]}

    @classmethod
    def from_json(cls, data: dict) -> CodeChain:
        from .ring import parse_ring
        ring = parse_ring(data["ring"])
        codes, idems = [], []
        for item in data["codes"]:
            c = GroupCodeF.from_json(item)
            codes.append(c)
            idems.append(FAlgebraElement.from_terms(c.group, c.p, item["idempotent"])
                         if "idempotent" in item else None)
        return cls(ring, tuple(codes), tuple(idems))


@functools.lru_cache(maxsize=1 << 16)
def _nested(c: GroupCodeF, d: GroupCodeF) -> bool:
    return c.is_subcode_of(d)


@functools.lru_cache(maxsize=1 << 16)
def _generator_problem(c: GroupCodeF, e: FAlgebraElement | None) -> str | None:
    if e is None:
        return "no idempotent generator"
    if not is_idempotent(e):
        return "generator is not idempotent"
    if code_from_idempotent(e) != c:
        return "idempotent does not generate the code"
    if any((b * e) != b for b in c.rows()):
        return "idempotent is not a right identity of the code"
    return None


def chain_from_idempotents(ring: ChainRingSpec, idems) -> CodeChain:
    codes = tuple(code_from_idempotent(e) for e in idems)
    return CodeChain(ring, codes, tuple(idems))


def chain_from_codes(ring: ChainRingSpec, codes) -> CodeChain:
    """Attach right-identity witnesses to a nested list of codes."""
    return CodeChain(ring, tuple(codes), tuple(projectivity_witness(c) for c in codes))


def build_code_from_chain(chain: CodeChain, lifts=None) -> RCode:
    """The ideal RG * sum_j pi^j eps_j, with eps_j lifting the chain idempotents.

    By default the idempotents are first made compatible (e_i e_j = e_min(i,j))
    and lifted compatibly, which makes |C| = prod p^dim C_j.  ``lifts`` pins
    particular idempotent lifts instead (None entries fall back to
    ``lift_idempotent``); each must reduce to a generator of C_j.  In a
    noncommutative RG different lifts can generate different ideals, and
    incompatible ones can give a larger ideal, which is reported as an
    inconsistency.
    """
    bad = chain.violations()
    if bad:
        raise InvalidChain("; ".join(bad))
    if lifts is None:
        return _build_default(chain)
    return _build(chain, lifts)


@functools.lru_cache(maxsize=1 << 12)
def _build_default(chain: CodeChain) -> RCode:
    return _build(chain, compatible_lifts(compatible_idempotents(chain.idems), chain.ring))


def _build(chain: CodeChain, lifts) -> RCode:
    ring = chain.ring
    gen = RAlgebraElement.zero(chain.group, ring)
    for j, (e, eps) in enumerate(zip(chain.idems, lifts)):
        if eps is None:
            eps = lift_idempotent(e, ring)
        elif not eps.is_idempotent() or code_from_idempotent(eps.alpha(0)) != chain.codes[j]:
            raise InvalidChain(f"given lift of e_{j} is not an idempotent lift")
        gen = gen + eps.scale(ring.pi_pow(j))
    code = ideal_from_generators_r([gen])
    expected = sum(c.dim for c in chain.codes)
    if code.log_size != expected:
        raise InternalConsistencyError(
            f"|C| = p^{code.log_size}, chain predicts p^{expected}")
    return code


def chain_extract(c: RCode) -> CodeChain:
    ring = c.ring
    exps, vecs = valuation_basis(ring, c.gens)
    residues = ring.alpha_array(vecs, 0) if len(vecs) else vecs
    codes = tuple(span_code(c.group, ring.p, residues[exps <= j]) for j in range(ring.ell))
    return CodeChain(c.ring, codes, tuple(projectivity_witness(x) for x in codes))


def coordinates(c: RCode, v) -> np.ndarray | None:
    """t with t @ gens = v (ring arithmetic), or None when v is not in c."""
    ring = c.ring
    v = np.array(v, dtype=np.int64)
    t = np.zeros(len(c.gens), dtype=np.int64)
    for i, (col, a) in enumerate(c.pivots):
        if ring.val_table[v[col]] < a:
            return None
        t[i] = ring.quotient_table[a, v[col]]
        v = ring.sub(v, ring.mul(t[i], c.gens[i]))
    return t if not v.any() else None


def solve_linear_r(ring: ChainRingSpec, m: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """Some z with m @ z = rhs over R, or None.

    Howell form of the rows (m[:, u], e_u, 0) and (-rhs, 0, 1): rows whose
    first block vanishes carry (z, t) with m z = t rhs, and the system is
    solvable exactly when one of them has a unit t.
    """
    eqs, unknowns = m.shape
    top = np.hstack([m.T, np.eye(unknowns, dtype=np.int64), np.zeros((unknowns, 1), dtype=np.int64)])
    last = np.concatenate([ring.neg(np.asarray(rhs, dtype=np.int64)),
                           np.zeros(unknowns, dtype=np.int64), [1]])
    tail = _kernel_rows(ring, np.vstack([top, last[None, :]]), eqs)
    for row in tail:
        t = row[-1]
        if ring.val_table[t] == 0:
            return ring.mul(ring.normalizer_table[t], row[:-1])
    return None


def trace_splitting(c: RCode, max_unknowns: int = 1024) -> np.ndarray | None:
    """Matrix Z defining psi(b_i) = sum_jl Z_jl... with sum_g g psi g^-1 = id, or None.

    Higman's criterion for the trivial subgroup: the code is relative
    projective iff such an R-linear psi exists.  psi is encoded by
    psi(b_i) = sum_l Z[i, l] b_l on the Howell rows b_i and must respect
    every R-relation among them.
    """
    ring, group, b = c.ring, c.group, c.gens
    k, n = b.shape
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if k * k > max_unknowns:
        raise BudgetExceeded(f"trace criterion needs {k * k} unknowns", required=k * k,
                             budget=max_unknowns)
    relations = _kernel_rows(ring, np.hstack([b, np.eye(k, dtype=np.int64)]), n)
    # moved[g, l] = g * b_l ;  coords[g, i] = coordinates of g^-1 * b_i
    moved = np.zeros((group.order, k, n), dtype=np.int64)
    coords = np.zeros((group.order, k, k), dtype=np.int64)
    for g in range(group.order):
        moved[g][:, group.mul[g]] = b
        ginv = int(group.inv[g])
        for i in range(k):
            w = np.zeros(n, dtype=np.int64)
            w[group.mul[ginv]] = b[i]
            t = coordinates(c, w)
            if t is None:
                raise InternalConsistencyError("code is not closed under the group action")
            coords[g, i] = t
    # trace equations: coefficient of Z[j, l] in equation i is sum_g coords[g,i,j] * g b_l
    prod = ring.mul(coords[:, :, :, None, None], moved[:, None, None, :, :])  # g,i,j,l,x
    trace = ring.sum(prod, axis=0)                                          # i,j,l,x
    blocks = [trace.transpose(0, 3, 1, 2).reshape(k * n, k * k)]
    rhs = [b.reshape(-1)]
    for r in relations:
        # relation r: sum_j r_j psi(b_j) = sum_jl r_j Z[j, l] b_l = 0
        coef = ring.mul(r[:, None, None], b[None, :, :])                    # j,l,x
        blocks.append(coef.transpose(2, 0, 1).reshape(n, k * k))
        rhs.append(np.zeros(n, dtype=np.int64))
    z = solve_linear_r(ring, np.vstack(blocks), np.concatenate(rhs))
    if z is None:
        return None
    z = z.reshape(k, k)
    if not _check_trace(c, z):
        raise InternalConsistencyError("trace splitting failed verification")
    return z


def _check_trace(c: RCode, z: np.ndarray) -> bool:
    """Evaluate sum_g g psi(g^-1 v) on every Howell row directly."""
    ring, group, b = c.ring, c.group, c.gens
    images = ring.sum(ring.mul(z[:, :, None], b[None, :, :]), axis=1)  # psi(b_i)

    def psi(v):
        t = coordinates(c, v)
        return ring.sum(ring.mul(t[:, None], images), axis=0)

    for i in range(len(b)):
        acc = np.zeros(c.length, dtype=np.int64)
        for g in range(group.order):
            w = np.zeros(c.length, dtype=np.int64)
            w[group.mul[int(group.inv[g])]] = b[i]
            out = np.zeros(c.length, dtype=np.int64)
            out[group.mul[g]] = psi(w)
            acc = ring.add(acc, out)
        if not np.array_equal(acc, b[i]):
            return False
    return True


@dataclass(frozen=True)
class Verdict:
    kind: str  # "yes" | "no" | "indeterminate"
    chain: CodeChain
    reason: str = ""
    rebuilt: RCode | None = None
    trace_map: np.ndarray | None = None

    def __bool__(self):
        return self.kind == "yes"


def decide_relative_projective(c: RCode, hint=None, use_trace: bool = True) -> Verdict:
    """Relative projectivity for the trivial subgroup, with certificates.

    Yes when the extracted chain (right-identity witnesses, default lifts)
    rebuilds c, or when ``hint = (chain, lifts)`` has the same layer codes and
    rebuilds c.  Otherwise the trace criterion decides; without it, or when it
    is over budget, the verdict is indeterminate and carries both forms.
    """
    chain = chain_extract(c)
    for j, e in enumerate(chain.idems):
        if e is None:
            return Verdict("no", chain, f"C_{j} is not projective")
    if sum(x.dim for x in chain.codes) != c.log_size:
        return Verdict("no", chain, "cardinality does not match the layer dimensions")
    rebuilt = build_code_from_chain(chain)
    if rebuilt == c:
        return Verdict("yes", chain, "rebuilt from chain", rebuilt=rebuilt)
    if hint is not None:
        hint_chain, lifts = hint
        if tuple(hint_chain.codes) == tuple(chain.codes):
            if build_code_from_chain(hint_chain, lifts) == c:
                return Verdict("yes", hint_chain, "rebuilt from given lifts", rebuilt=c)
    log.info("rebuild from extracted chain differs: %r vs %r", rebuilt, c)
    if use_trace:
        try:
            z = trace_splitting(c)
        except BudgetExceeded as exc:
            return Verdict("indeterminate", chain, f"rebuilt ideal differs; {exc}", rebuilt)
        if z is not None:
            return Verdict("yes", chain, "trace criterion", rebuilt, z)
        return Verdict("no", chain, "no R-linear map with trace identity", rebuilt)
    log.warning("indeterminate relative projectivity for %r", c)
    return Verdict("indeterminate", chain, "rebuilt ideal differs", rebuilt)


# -- duality -----------------------------------------------------------------------------------

def dual_code_r(c: RCode) -> RCode:
    n, ring = c.length, c.ring
    k = len(c.gens)
    augmented = np.hstack([c.gens.T, np.eye(n, dtype=np.int64)]) if k else np.eye(n, dtype=np.int64)
    rows = _kernel_rows(ring, augmented, k) if k else augmented
    dual = RCode.from_rows(c.group, ring, rows)
    if dual.log_size + c.log_size != ring.ell * n:
        raise InternalConsistencyError("|C| * |C^perp| != |R|^|G|")
    return dual


def pairing_r(ring: ChainRingSpec, a, b) -> int:
    return int(ring.sum(ring.mul(np.asarray(a), np.asarray(b))))


# -- distances -------------------------------------------------------------------------------

BNB_BLOCK = 1 << 8


def _span_table(ring: ChainRingSpec, rows: np.ndarray, choices) -> np.ndarray:
    """All combinations of ``rows``; row 0 of the result is the zero word."""
    words = np.zeros((1, rows.shape[1]), dtype=np.int64)
    for row, ch in zip(rows, choices):
        scaled = ring.mul_table[ch[:, None], row[None, :]]
        words = ring.add_table[scaled[:, None, :], words[None, :, :]].reshape(-1, rows.shape[1])
    return words


def _min_weight_bnb(c: RCode, weight: np.ndarray, node_budget: int) -> int | None:
    """Exact minimum of sum_g weight[c_g] over nonzero codewords.

    Depth-first over the coefficients of the Howell rows; coordinates left of
    the next pivot are final once the current row is fixed, which gives the
    pruning bound.  Once the remaining rows span at most ``BNB_BLOCK`` words
    their whole span is added in one vectorised step.
    """
    rows = c.gens
    if not len(rows):
        return None
    ring, n = c.ring, c.length
    piv = c.pivots
    stops = [col for col, _ in piv[1:]] + [n]
    choices = [np.arange(ring.p ** (ring.ell - v)) for _, v in piv]
    add, mul = ring.add_table, ring.mul_table
    # first index whose suffix span is small enough to tabulate
    size, cut = 1, len(rows)
    while cut > 0 and size * len(choices[cut - 1]) <= BNB_BLOCK:
        cut -= 1
        size *= len(choices[cut])
    block = _span_table(ring, rows[cut:], choices[cut:])
    floor = int(weight[1:].min())  # no nonzero word can beat one nonzero coordinate
    best = [None]
    nodes = [0]

    class Done(Exception):
        pass

    def finish(acc, nonzero):
        w = weight[add[acc[None, :], block]].sum(axis=1)
        if not nonzero:
            w = w[1:]
        if len(w):
            m = int(w.min())
            best[0] = m if best[0] is None else min(best[0], m)
            if best[0] <= floor:
                raise Done

    def visit(i, acc, nonzero):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded(f"branch-and-bound exceeded {node_budget} nodes",
                                 required=None, budget=node_budget)
        if i == cut:
            finish(acc, nonzero)
            return
        cand = add[acc[None, :], mul[choices[i][:, None], rows[i][None, :]]]
        bounds = weight[cand[:, :stops[i]]].sum(axis=1)
        for t in np.argsort(bounds, kind="stable"):
            if best[0] is not None and bounds[t] >= best[0]:
                break
            visit(i + 1, cand[t], nonzero or t != 0)

    try:
        visit(0, np.zeros(n, dtype=np.int64), False)
    except Done:
        pass
    return best[0]


def min_hamming_r(c: RCode, mode: str = "theorem", node_budget: int = DEFAULT_NODE_BUDGET,
                  verdict: Verdict | None = None) -> int | None:
    if mode == "theorem":
        verdict = verdict or decide_relative_projective(c)
        if verdict.kind != "yes":
            raise PreconditionViolation(
                f"theorem mode needs a relative projective code ({verdict.kind}: {verdict.reason})")
        return min_hamming_distance_f(verdict.chain.codes[-1])
    if mode == "exhaustive":
        weight = (np.arange(c.ring.q) != 0).astype(np.int64)
        return _min_weight_bnb(c, weight, node_budget)
    raise InvalidParameter(f"unknown distance mode {mode!r}")


def euclidean_weight(ring: ChainRingSpec, word) -> int:
    return int(ring.euclidean_weight_table()[np.asarray(word)].sum())


@dataclass(frozen=True)
class EuclideanReport:
    d_e: int | None
    gamma_bound: int | None
    layer_distances: tuple

    def __iter__(self):
        return iter((self.d_e, self.gamma_bound))


def euclidean_weights(c: RCode, node_budget: int = DEFAULT_NODE_BUDGET) -> EuclideanReport:
    """Exact minimum euclidean weight and the bound min_j p^(2j) d_E(C_j)."""
    ring = c.ring
    if ring.flavor != "Z":
        raise UnsupportedRing("euclidean weights are defined for Z/p^l only")
    d_e = _min_weight_bnb(c, ring.euclidean_weight_table(), node_budget)
    layers = tuple(min_euclidean_distance_f(code) for code in chain_extract(c).codes)
    bounds = [ring.p ** (2 * j) * d for j, d in enumerate(layers) if d is not None]
    return EuclideanReport(d_e, min(bounds) if bounds else None, layers)
