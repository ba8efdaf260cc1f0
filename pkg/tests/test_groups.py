import numpy as np
import pytest

from chaincodes.errors import InvalidParameter
from chaincodes.groups import (FiniteGroup, make_abelian, make_cyclic, make_dihedral,
                               make_quaternion, parse_group, small_groups, validate_group)


def test_cyclic_examples():
    assert make_cyclic(1).mul.tolist() == [[0]]
    assert make_cyclic(3).mul[1, 2] == 0
    assert make_cyclic(5).inv[2] == 3


def test_dihedral_examples():
    d6 = make_dihedral(3)
    assert d6.mul[3, 1] == 5          # s r = r^2 s
    assert d6.inv[3] == 3
    assert make_dihedral(4).mul[2, 3] == 1


@pytest.mark.parametrize("bad", [0, -2])
def test_constructors_reject_nonpositive(bad):
    with pytest.raises(InvalidParameter):
        make_cyclic(bad)
    with pytest.raises(InvalidParameter):
        make_dihedral(bad)


def test_validate_reports_identity_violation():
    g = FiniteGroup(2, np.array([[0, 1], [1, 1]]), np.array([0, 1]), "broken")
    ok, report = validate_group(g)
    assert not ok and report.startswith("identity")


def test_validate_reports_associativity_violation():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    mul = np.array([[0, 1, 2, 3, 4],
                    [1, 0, 3, 4, 2],
                    [2, 4, 0, 1, 3],
                    [3, 2, 4, 0, 1],
                    [4, 3, 1, 2, 0]])
    ok, report = validate_group(FiniteGroup(5, mul, np.arange(5), "loop"))
    assert not ok and report.startswith("associativity")


def test_all_constructed_groups_up_to_64_validate():
    groups = [make_cyclic(n) for n in range(1, 65)]
    groups += [make_dihedral(n) for n in range(1, 33)]
    groups += [make_abelian(f) for f in ([2, 2], [4, 2], [2, 2, 2], [3, 3], [4, 4], [2, 2, 2, 2])]
    groups.append(make_quaternion())
    for g in groups:
        assert validate_group(g) == (True, None), g.label


def test_dihedral_rotations_form_the_cyclic_group():
    for n in range(1, 20):
        d, c = make_dihedral(n), make_cyclic(n)
        assert np.array_equal(d.mul[:n, :n], c.mul)


def test_dihedral_reflections_have_order_two():
    for n in range(1, 20):
        d = make_dihedral(n)
        assert all(d.element_order(g) == 2 for g in range(n, 2 * n))


def test_quaternion_structure():
    q = make_quaternion()
    orders = sorted(q.element_order(g) for g in range(8))
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    assert not q.is_abelian


def test_small_groups_covers_the_isomorphism_classes():
    specs = [g.spec for g in small_groups(8)]
    assert len(specs) == 14 and len(set(specs)) == 14
    # number of groups of each order 1..8 is 1,1,1,2,1,2,1,5
    counts = {}
    for g in small_groups(8):
        counts[g.order] = counts.get(g.order, 0) + 1
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5}


@pytest.mark.parametrize("spec", ["cyclic:5", "dihedral:10", "abelian:2,2", "quaternion:8"])
def test_parse_group_round_trip(spec):
    assert parse_group(spec).spec == spec


@pytest.mark.parametrize("spec", ["cyclic:x", "dihedral:7", "foo:3", "abelian:", "cyclic"])
def test_parse_group_rejects(spec):
    with pytest.raises(InvalidParameter):
        parse_group(spec)
