"""Finite groups given by explicit multiplication tables.

Element 0 is always the identity.  Cyclic groups use index ``i`` for ``x^i``;
dihedral groups of order ``2n`` use index ``i + n*j`` for ``r^i s^j``.
Abelian products use mixed radix (first factor fastest) and the quaternion
group uses ``a + 4b`` for ``x^a y^b`` with x^4 = 1, y^2 = x^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import InvalidParameter


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul: np.ndarray  # (order, order) int table
    inv: np.ndarray  # (order,) int table
    label: str
    identity: int = 0

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.order == other.order and self.label == other.label
                and np.array_equal(self.mul, other.mul))

    def __hash__(self):
        return hash((self.order, self.label))

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"

    @cached_property
    def left_div(self) -> np.ndarray:
        """left_div[g, k] = g^-1 k, so (a b)[k] = sum_g a[g] b[left_div[g, k]]."""
        return self.mul[self.inv[:, None], np.arange(self.order)[None, :]]

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != 0:
            h = int(self.mul[h, g])
            k += 1
        return k

    @property
    def spec(self) -> str:
        """The CLI spec string this group was built from."""
        return self.label


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidParameter(f"cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    inv = (-idx) % n
    return FiniteGroup(n, mul.astype(np.int64), inv.astype(np.int64), f"cyclic:{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` with r^n = s^2 = 1, srs = r^-1."""
    if n < 1:
        raise InvalidParameter(f"dihedral group needs n >= 1, got {n}")
    order = 2 * n
    mul = np.empty((order, order), dtype=np.int64)
    inv = np.empty(order, dtype=np.int64)
    for b, a, d, c in product(range(2), range(n), range(2), range(n)):
        # (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b xor d)
        rot = (a + (c if b == 0 else -c)) % n
        mul[a + n * b, c + n * d] = rot + n * (b ^ d)
    for a in range(n):
        inv[a] = (-a) % n
        inv[a + n] = a + n
    return FiniteGroup(order, mul, inv, f"dihedral:{order}")


def _inverse_from_table(mul: np.ndarray) -> np.ndarray:
    return np.argmax(mul == 0, axis=1).astype(np.int64)


def make_abelian(factors) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders."""
    factors = [int(f) for f in factors]
    if not factors or min(factors) < 1:
        raise InvalidParameter(f"bad abelian factors {factors}")
    digits = np.array(list(product(*[range(f) for f in reversed(factors)])))[:, ::-1]
    radix = np.cumprod([1] + factors[:-1])
    order = int(np.prod(factors))
    summed = (digits[:, None, :] + digits[None, :, :]) % np.array(factors)
    mul = (summed * radix).sum(axis=2).astype(np.int64)
    label = "abelian:" + ",".join(map(str, factors))
    return FiniteGroup(order, mul, _inverse_from_table(mul), label)


def make_quaternion() -> FiniteGroup:
    mul = np.empty((8, 8), dtype=np.int64)
    for b, a, d, c in product(range(2), range(4), range(2), range(4)):
        rot = (a + (c if b == 0 else -c) + 2 * (b & d)) % 4
        mul[a + 4 * b, c + 4 * d] = rot + 4 * (b ^ d)
    return FiniteGroup(8, mul, _inverse_from_table(mul), "quaternion:8")


def small_groups(max_order: int) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order <= 8."""
    if max_order > 8:
        raise InvalidParameter("small_groups only covers orders up to 8")
    out = [make_cyclic(n) for n in range(1, max_order + 1)]
    for order in range(4, max_order + 1, 2):
        if order != 4:
            out.append(make_dihedral(order // 2))
    if max_order >= 4:
        out.append(make_abelian([2, 2]))
    if max_order >= 8:
        out += [make_abelian([4, 2]), make_abelian([2, 2, 2]), make_quaternion()]
    return sorted(out, key=lambda g: (g.order, g.label))


def validate_group(g: FiniteGroup) -> tuple[bool, str | None]:
    """Check the group axioms on the tables.

    Returns ``(True, None)`` or ``(False, report)`` naming the first violation.
    """
    n = g.order
    mul = np.asarray(g.mul)
    inv = np.asarray(g.inv)
    if mul.shape != (n, n) or inv.shape != (n,):
        return False, "shape: table dimensions do not match order"
    if mul.min(initial=0) < 0 or mul.max(initial=0) >= n:
        return False, "range: table entry outside [0, order)"
    for x in range(n):
        if mul[0, x] != x or mul[x, 0] != x:
            return False, f"identity: element {x}"
    # x x = x forces x = 1 in a group
    for x in range(1, n):
        if mul[x, x] == x:
            return False, f"identity: element {x} is idempotent"
    for x in range(n):
        if mul[x, inv[x]] != 0 or mul[inv[x], x] != 0:
            return False, f"inverse: element {x}"
    # (xy)z == x(yz) for all triples, vectorised over (y, z)
    for x in range(n):
        lhs = mul[mul[x]]            # lhs[y, z] = (xy)z
        rhs = mul[x][mul]            # rhs[y, z] = x(yz)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = bad[0]
            return False, f"associativity: triple ({x}, {int(y)}, {int(z)})"
    return True, None


def parse_group(text: str) -> FiniteGroup:
    """Parse ``cyclic:n``, ``dihedral:N`` (N is the group order 2n),
    ``abelian:a,b,...`` or ``quaternion:8``."""
    kind, _, arg = text.strip().partition(":")
    if kind == "abelian":
        try:
            return make_abelian(int(f) for f in arg.split(","))
        except ValueError:
            raise InvalidParameter(f"bad group spec {text!r}") from None
    if kind == "quaternion" and arg == "8":
        return make_quaternion()
    try:
        k = int(arg)
    except ValueError:
        raise InvalidParameter(f"bad group spec {text!r}") from None
    if kind == "cyclic":
        return make_cyclic(k)
    if kind == "dihedral":
        if k < 2 or k % 2:
            raise InvalidParameter(f"dihedral order must be even and >= 2, got {k}")
        return make_dihedral(k // 2)
    raise InvalidParameter(f"unknown group family {kind!r}")
