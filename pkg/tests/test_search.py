import copy
import json

import numpy as np
import pytest

from chaincodes import search
from chaincodes.algebra import FAlgebraElement, is_idempotent
from chaincodes.errors import BudgetExceeded, Unsupported
from chaincodes.fieldcodes import code_from_idempotent
from chaincodes.groups import make_abelian, make_cyclic, make_dihedral
from chaincodes.polys import factor_xn_minus_1, format_poly
from chaincodes.ring import ChainRingSpec
from chaincodes.search import (enumerate_chains, enumerate_idempotents_cyclic,
                               enumerate_idempotents_exhaustive, idempotent_words_f2,
                               projective_codes, recheck_certificate, recheck_report,
                               reference_table, roundtrip_census,
                               search_selfdual_dihedral_z4, selfdual_chain_search)


def test_idempotent_counts():
    assert len(enumerate_idempotents_exhaustive(make_cyclic(2), 2)) == 2
    assert len(enumerate_idempotents_exhaustive(make_cyclic(3), 2)) == 4
    assert len(enumerate_idempotents_exhaustive(make_dihedral(3), 2)) == 16
    # F_3 C_2 = F_3 x F_3
    assert len(enumerate_idempotents_exhaustive(make_cyclic(2), 3)) == 4


def test_exhaustive_enumeration_returns_only_idempotents():
    g = make_abelian([2, 2])
    found = enumerate_idempotents_exhaustive(g, 3)
    assert len(found) == 16 and all(is_idempotent(e) for e in found)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded) as err:
        enumerate_idempotents_exhaustive(make_dihedral(5), 2, budget=1000)
    assert err.value.required == 1024


def test_factor_examples():
    assert [format_poly(f) for f in factor_xn_minus_1(3, 2)] == ["x+1", "x^2+x+1"]
    assert [format_poly(f) for f in factor_xn_minus_1(7, 2)] == ["x+1", "x^3+x+1", "x^3+x^2+1"]
    assert factor_xn_minus_1(4, 2) == [[1, 1]] * 4


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11, 13, 15])
def test_cyclic_enumerator_matches_exhaustive(n):
    crt = {e.coeffs.tobytes() for e in enumerate_idempotents_cyclic(n, 2)}
    brute = {e.coeffs.tobytes() for e in enumerate_idempotents_exhaustive(make_cyclic(n), 2)}
    assert crt == brute


def test_cyclic_enumerator_rejects_modular_case():
    with pytest.raises(Unsupported):
        enumerate_idempotents_cyclic(6, 2)


def test_projective_codes_are_distinct_and_sorted():
    codes = projective_codes(make_dihedral(3), 2)
    assert len({c.key for c in codes}) == len(codes)
    assert [c.dim for c in codes] == sorted(c.dim for c in codes)


def test_chain_counts_small():
    # F_2 C_3 has four projective codes forming a square lattice: 9 chains of length 2
    assert len(enumerate_chains(make_cyclic(3), ChainRingSpec(2, 2, "Z"))) == 9
    assert len(enumerate_chains(make_cyclic(3), ChainRingSpec(2, 3, "Z"))) == 16


def test_roundtrip_census_small():
    report, pairs = roundtrip_census(make_dihedral(3), ChainRingSpec(2, 2, "Z"))
    assert report.ok and report.chains == len(pairs)
    assert report.verdicts == {"yes": report.chains}


def test_checkpoint_resumes(tmp_path, monkeypatch):
    g = make_dihedral(5)
    monkeypatch.setattr(search, "CHUNK", 128)
    path = tmp_path / "scan.json"
    # a scan that was interrupted after the first 384 candidates
    partial = search._scan_f2_range(g, 0, 384).tolist()
    path.write_text(json.dumps({"group": g.spec, "scanned": 384, "hits": partial}))
    resumed = idempotent_words_f2(g, checkpoint=path)
    assert np.array_equal(resumed, idempotent_words_f2(g))
    assert json.loads(path.read_text())["scanned"] == 1024


def test_checkpoint_for_other_group_is_ignored(tmp_path):
    path = tmp_path / "scan.json"
    path.write_text(json.dumps({"group": "dihedral:12", "scanned": 1024, "hits": []}))
    assert len(idempotent_words_f2(make_dihedral(5), checkpoint=path)) == len(idempotent_words_f2(make_dihedral(5)))
    assert json.loads(path.read_text())["group"] == "dihedral:10"


def test_workers_do_not_change_the_scan():
    g = make_dihedral(6)
    assert np.array_equal(idempotent_words_f2(g, workers=3), idempotent_words_f2(g))


@pytest.fixture(scope="module")
def report10():
    return search_selfdual_dihedral_z4(10)


def test_search_10(report10):
    assert report10.best_distance == 2 and report10.csv_row() == "10,2"
    assert report10.best_self_dual_distance == 1
    assert report10.candidates == 1024
    assert not recheck_report(report10.to_json())


def test_search_16_has_only_the_zero_chain():
    report = search_selfdual_dihedral_z4(16)
    assert len(report.codes) == 1
    assert report.codes[0]["dim"] == 0 and report.best_distance == 1
    assert not recheck_report(report.to_json())


def test_search_json_is_deterministic(report10):
    assert json.dumps(report10.to_json()) == json.dumps(search_selfdual_dihedral_z4(10).to_json())
    assert "wall_time" not in report10.to_json()
    assert "wall_time" in report10.to_json(timing=True)


def test_search_rejects_bad_arguments():
    with pytest.raises(Unsupported):
        search_selfdual_dihedral_z4(9)
    with pytest.raises(Unsupported):
        search_selfdual_dihedral_z4(10, strategy="blockwise")


def test_recheck_catches_tampering(report10):
    good = report10.to_json()
    bad = copy.deepcopy(good)
    bad["best_distance"] = 3
    assert recheck_report(bad)
    bad = copy.deepcopy(good)
    bad["codes"][-1]["distance"] += 1
    assert recheck_report(bad)
    bad = copy.deepcopy(good)
    bad["witnesses"][0]["distance"] += 1
    assert recheck_certificate(bad["witnesses"][0])
    bad = copy.deepcopy(good)
    bad["witnesses"] = []
    assert recheck_report(bad)


def test_reference_table():
    ref = reference_table()
    assert [ref[n]["dihedral"] for n in range(10, 26, 2)] == [2, 2, 3, 1, 4, 4, 6, 3]
    assert ref[10]["bound"] == 2


def test_selfdual_chain_search_parity():
    g = make_cyclic(3)
    assert selfdual_chain_search(g, ChainRingSpec(2, 2, "Z"))
    assert not selfdual_chain_search(g, ChainRingSpec(2, 3, "Z"))


@pytest.mark.slow
def test_d10_has_more_projective_codes_than_chains():
    # brute force over all 4^10 elements of Z/4 D_10: the relative projective
    # ideals RG(eps_0 + 2(eps_1 - eps_0)) outnumber the chains, and the only
    # self-dual one is 2 RG, of Hamming distance 1.
    from chaincodes.ringcodes import build_code_from_chain, dual_code_r, ideal_from_generators_r
    from chaincodes.verify import enumerate_all_idempotents_r
    g, ring = make_dihedral(5), ChainRingSpec(2, 2, "Z")
    idems = enumerate_all_idempotents_r(g, ring)
    assert len(idems) == 644
    codes = set()
    for a in idems:
        for b in idems:
            if a * b == a and b * a == a:
                codes.add(ideal_from_generators_r([a + (b - a).scale(2)]))
    chains = enumerate_chains(g, ring)
    assert (len(codes), len(chains)) == (99, 54)
    assert {build_code_from_chain(ch) for ch in chains} <= codes
    self_dual = [c for c in codes if dual_code_r(c) == c]
    assert len(self_dual) == 1 and self_dual[0].log_size == 10
    from chaincodes.ringcodes import min_hamming_r
    assert min_hamming_r(self_dual[0], "exhaustive") == 1
