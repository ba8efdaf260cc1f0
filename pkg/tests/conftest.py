import numpy as np
import pytest

from chaincodes.groups import make_cyclic, make_dihedral
from chaincodes.literals import parse_f_element, parse_r_element
from chaincodes.ring import ChainRingSpec


@pytest.fixture
def c3():
    return make_cyclic(3)


@pytest.fixture
def z4():
    return ChainRingSpec(2, 2, "Z")


def felem(group, text, p=2):
    return parse_f_element(group, p, text)


def relem(group, ring, text):
    return parse_r_element(group, ring, text)


def brute_span_r(ring, rows):
    """All R-combinations of the rows, as a set of tuples (tiny cases only)."""
    rows = np.asarray(rows, dtype=np.int64)
    words = {tuple([0] * rows.shape[1])}
    for row in rows:
        nxt = set()
        for w in words:
            for a in range(ring.q):
                nxt.add(tuple(ring.add(np.array(w), ring.mul(a, row)).tolist()))
        words = nxt
    return words


def dihedral(n):
    return make_dihedral(n)


# acceptance results, filled by test_acceptance.py and printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
