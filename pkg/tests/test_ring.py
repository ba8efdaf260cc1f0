import itertools

import numpy as np
import pytest

from chaincodes.errors import InvalidParameter, NotInLayer
from chaincodes.ring import (ChainRingSpec, RScalar, alpha_j, alpha_j_up, parse_ring,
                             valuation)

RINGS = [ChainRingSpec(p, ell, fl) for p in (2, 3, 5) for ell in (1, 2, 3)
         for fl in ("Z", "poly") if p ** ell <= 125]


def test_valuation_examples():
    z8 = ChainRingSpec(2, 3, "Z")
    assert valuation(RScalar(z8, 4)) == 2
    assert valuation(RScalar(z8, 0)) == 3
    u2 = ChainRingSpec(2, 2, "poly")
    assert valuation(RScalar(u2, u2.parse_scalar("u"))) == 1


def test_alpha_examples():
    z8 = ChainRingSpec(2, 3, "Z")
    assert alpha_j(RScalar(z8, 6), 1) == 1
    assert alpha_j(RScalar(z8, 5), 0) == 1
    assert alpha_j_up(z8, 1, 2).value == 4
    with pytest.raises(NotInLayer):
        alpha_j(RScalar(z8, 3), 1)


def test_z_flavour_matches_integer_arithmetic():
    r = ChainRingSpec(3, 2, "Z")
    x = np.arange(9)
    assert np.array_equal(r.add_table, (x[:, None] + x[None, :]) % 9)
    assert np.array_equal(r.mul_table, (x[:, None] * x[None, :]) % 9)


def test_poly_flavour_multiplies_truncated_polynomials():
    r = ChainRingSpec(3, 2, "poly")
    for a, b in itertools.product(range(9), repeat=2):
        a0, a1, b0, b1 = a % 3, a // 3, b % 3, b // 3
        want = (a0 * b0) % 3 + 3 * ((a0 * b1 + a1 * b0) % 3)
        assert r.mul_table[a, b] == want


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.spec)
def test_valuation_laws(ring):
    v = ring.val_table
    x = np.arange(ring.q)
    prod = ring.mul_table
    assert np.array_equal(v[prod], np.minimum(v[:, None] + v[None, :], ring.ell))
    assert (v[ring.add_table] >= np.minimum(v[:, None], v[None, :])).all()
    assert v[0] == ring.ell and (v[x[x % ring.p != 0]] == 0).all()


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.spec)
def test_alpha_is_additive_and_alpha0_multiplicative(ring):
    for j in range(ring.ell):
        layer = [x for x in range(ring.q) if ring.val_table[x] >= j]
        for a, b in itertools.product(layer, repeat=2):
            s = int(ring.add_table[a, b])
            assert ring.alpha(s, j) == (ring.alpha(a, j) + ring.alpha(b, j)) % ring.p
        for f in range(ring.p):
            assert ring.alpha(ring.alpha_up(f, j), j) == f
    for a, b in itertools.product(range(ring.q), repeat=2):
        assert ring.alpha(int(ring.mul_table[a, b]), 0) == \
            (ring.alpha(a, 0) * ring.alpha(b, 0)) % ring.p


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.spec)
def test_quotient_and_normalizer_tables(ring):
    for x in range(ring.q):
        v = ring.val_table[x]
        if v == ring.ell:
            continue
        unit = ring.normalizer_table[x]
        assert ring.val_table[unit] == 0
        assert ring.mul_table[unit, x] == ring.pi_pow(v)
        for y in range(ring.q):
            if ring.val_table[y] >= v:
                t = ring.quotient_table[v, y]
                assert ring.mul_table[t, ring.pi_pow(v)] == y


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.spec)
def test_scalar_text_round_trip(ring):
    for x in range(ring.q):
        assert ring.parse_scalar(ring.format_scalar(x)) == x


def test_euclidean_weight_table():
    z4 = ChainRingSpec(2, 2, "Z")
    assert z4.euclidean_weight_table().tolist() == [0, 1, 4, 1]
    assert ChainRingSpec(3, 2, "Z").euclidean_weight_table()[5] == 16


@pytest.mark.parametrize("text,ring", [("Z:2^2", (2, 2, "Z")), ("poly:3^3", (3, 3, "poly")),
                                       ("Z:5", (5, 1, "Z"))])
def test_parse_ring(text, ring):
    r = parse_ring(text)
    assert (r.p, r.ell, r.flavor) == ring
    assert parse_ring(r.spec) == r


@pytest.mark.parametrize("text", ["Z:4^2", "Z:2^0", "galois:2^2", "Z:two"])
def test_parse_ring_rejects(text):
    with pytest.raises(InvalidParameter):
        parse_ring(text)
