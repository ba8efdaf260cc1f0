import numpy as np
import pytest

from chaincodes.algebra import (FAlgebraElement, alg_mul, bilinear_form, is_idempotent,
                                left_translate, mul_generic, packer, star)
from chaincodes.errors import IncompatibleOperands
from chaincodes.groups import make_cyclic, make_dihedral
from conftest import felem


def test_mul_examples(c3):
    assert not alg_mul(felem(c3, "1+x"), felem(c3, "1+x+x^2"))
    e = felem(c3, "x+x^2")
    assert alg_mul(e, e) == e
    b = felem(c3, "1+x^2")
    assert alg_mul(FAlgebraElement.one(c3, 2), b) == b


def test_dihedral_product_follows_relation():
    d6 = make_dihedral(3)
    s, r = FAlgebraElement.basis(d6, 2, 3), FAlgebraElement.basis(d6, 2, 1)
    assert alg_mul(s, r) == felem(d6, "r^2s")


def test_star_examples(c3):
    assert star(felem(c3, "x")) == felem(c3, "x^2")
    assert star(felem(c3, "x+x^2")) == felem(c3, "x+x^2")


def test_bilinear_form_examples(c3):
    assert bilinear_form(felem(c3, "1+x"), felem(c3, "x+x^2")) == 1
    c2 = make_cyclic(2)
    a = felem(c2, "1+x")
    assert bilinear_form(a, a) == 0


def test_idempotent_examples(c3):
    assert is_idempotent(FAlgebraElement.zero(c3, 2))
    assert is_idempotent(FAlgebraElement.one(c3, 2))
    assert is_idempotent(felem(c3, "x+x^2"))
    assert not is_idempotent(felem(make_cyclic(2), "1+x"))


def test_mismatched_operands_are_rejected(c3):
    with pytest.raises(IncompatibleOperands):
        alg_mul(felem(c3, "x"), felem(make_cyclic(4), "x"))
    with pytest.raises(IncompatibleOperands):
        bilinear_form(felem(c3, "x"), felem(c3, "x", p=3))


def test_packed_and_generic_paths_agree():
    rng = np.random.default_rng(1)
    for group in (make_cyclic(7), make_dihedral(5), make_dihedral(12)):
        pk = packer(group)
        for _ in range(50):
            a, b = rng.integers(0, 2, (2, group.order))
            packed = pk.unpack(pk.mul(pk.pack(a), pk.pack(b)))
            assert np.array_equal(packed, mul_generic(group, 2, a, b))


def test_bilinear_form_is_identity_coefficient_of_product_with_star():
    rng = np.random.default_rng(2)
    g = make_dihedral(4)
    for _ in range(30):
        a = FAlgebraElement(g, 3, rng.integers(0, 3, 8))
        b = FAlgebraElement(g, 3, rng.integers(0, 3, 8))
        assert bilinear_form(a, b) == alg_mul(a, star(b)).coeffs[0]


def test_left_translate_is_multiplication_by_basis_element():
    g = make_dihedral(4)
    a = FAlgebraElement(g, 2, np.arange(8) % 2)
    for h in range(8):
        assert left_translate(a, h) == alg_mul(FAlgebraElement.basis(g, 2, h), a)


def test_json_round_trip(c3):
    e = felem(c3, "x+2x^2", p=3)
    assert FAlgebraElement.from_json(e.to_json()) == e
