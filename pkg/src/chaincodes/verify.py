"""Verification suites over families of small groups and chain rings.

Each suite returns plain dataclass reports so the CLI and the tests share one
implementation.  The chain sweep builds every code once and runs the enabled
checks (round trip, distance, duality, euclidean bound) on it.
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import FAlgebraElement, star
from .errors import BudgetExceeded, InvalidParameter
from .fieldcodes import code_from_idempotent, dual_by_nullspace, dual_code_f
from .groups import FiniteGroup, make_abelian, make_cyclic, make_dihedral, make_quaternion, \
    parse_group, small_groups
from .ring import FLAVORS, ChainRingSpec, parse_ring
from .ringcodes import (RAlgebraElement, build_code_from_chain, chain_extract,
                        decide_relative_projective, dual_code_r, euclidean_weights,
                        lift_idempotent, min_hamming_r)
from .search import (enumerate_chains, enumerate_idempotents_cyclic,
                     enumerate_idempotents_exhaustive, selfdual_chain_search)

log = logging.getLogger(__name__)

SWEEP_CHECKS = ("roundtrip", "distance", "duality", "euclidean")
SUITES = SWEEP_CHECKS + ("parity",)


def groups_up_to(max_order: int) -> list[FiniteGroup]:
    """Small groups used by the wider checks.

    Up to order 8 this is one group per isomorphism class.  Beyond that it is
    cyclic, dihedral and abelian groups plus Q_8, not a complete list.
    """
    if max_order <= 8:
        return small_groups(max_order)
    out = {g.spec: g for g in small_groups(8)}
    for n in range(9, max_order + 1):
        out[f"cyclic:{n}"] = make_cyclic(n)
        if n % 2 == 0:
            out[f"dihedral:{n}"] = make_dihedral(n // 2)
    for factors in ([3, 3], [6, 2], [4, 4], [8, 2], [4, 2, 2], [2, 2, 2, 2]):
        if int(np.prod(factors)) <= max_order:
            g = make_abelian(factors)
            out[g.spec] = g
    out["quaternion:8"] = make_quaternion()
    return sorted(out.values(), key=lambda g: (g.order, g.spec))


def default_rings(primes=(2, 3), ells=(2, 3), flavors=FLAVORS) -> list[ChainRingSpec]:
    return [ChainRingSpec(p, ell, fl) for p in primes for ell in ells for fl in flavors]


def resolve_groups(text: str | None) -> list[FiniteGroup]:
    """``None`` or ``all`` means every group of order <= 8."""
    if text in (None, "all"):
        return small_groups(8)
    return [parse_group(t) for t in text.split(";")]


def resolve_rings(text: str | None) -> list[ChainRingSpec]:
    if text in (None, "all"):
        return default_rings()
    return [parse_ring(t) for t in text.split(";")]


# -- the chain sweep -------------------------------------------------------------------------

@dataclass
class SweepReport:
    group: str
    ring: str
    checks: tuple = SWEEP_CHECKS
    chains: int = 0
    distinct_codes: int = 0
    verdicts: dict = field(default_factory=dict)
    checked: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        distinct = "roundtrip" not in self.checks or self.distinct_codes == self.chains
        return not self.failures and distinct

    def to_json(self, timing: bool = False) -> dict:
        out = {"group": self.group, "ring": self.ring, "checks": list(self.checks),
               "chains": self.chains, "distinct_codes": self.distinct_codes,
               "verdicts": dict(sorted(self.verdicts.items())),
               "checked": dict(sorted(self.checked.items())),
               "skipped": dict(sorted(self.skipped.items())),
               "failures": self.failures, "ok": self.ok}
        if timing:
            out["timings"] = {k: round(v, 3) for k, v in sorted(self.timings.items())}
        return out


def _clock(report: SweepReport):
    @contextmanager
    def span(key):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            report.timings[key] = report.timings.get(key, 0.0) + time.perf_counter() - t0
    return span


def sweep(group: FiniteGroup, ring: ChainRingSpec, checks=SWEEP_CHECKS,
          max_failures: int = 20) -> SweepReport:
    """Run the enabled checks on the code of every chain over ``group``.

    roundtrip: the verdict's chain has the codes the code was built from, and
      distinct chains give distinct codes.
    distance: theorem-mode and exhaustive Hamming distances agree.
    duality: the chain of C^perp is (C_{l-1}^perp, ..., C_0^perp).
    euclidean: exhaustive d_E is at least the layer bound (Z flavour only).
    Indeterminate verdicts are counted and logged, never failures.
    """
    unknown = set(checks) - set(SWEEP_CHECKS)
    if unknown:
        raise InvalidParameter(f"unknown checks {sorted(unknown)}")
    report = SweepReport(group.spec, ring.spec, tuple(checks))
    clock = _clock(report)

    def fail(check, msg):
        msg = f"{check}: {msg}"
        if len(report.failures) < max_failures:
            report.failures.append(msg)
        log.error("%s over %s: %s", group.spec, ring.spec, msg)

    def bump(table, key):
        table[key] = table.get(key, 0) + 1

    with clock("roundtrip"):
        chains = enumerate_chains(group, ring)
    seen = set()
    for n, chain in enumerate(chains):
        with clock("roundtrip"):
            code = build_code_from_chain(chain)
            verdict = decide_relative_projective(code)
            bump(report.verdicts, verdict.kind)
            if verdict.kind == "indeterminate":
                log.warning("indeterminate verdict for chain %d on %s over %s",
                            n, group.spec, ring.spec)
            elif verdict.kind == "no":
                fail("roundtrip", f"chain {n}: built code judged not relative projective ({verdict.reason})")
            if "roundtrip" in checks:
                bump(report.checked, "roundtrip")
                if verdict.chain.codes != chain.codes:
                    fail("roundtrip", f"chain {n}: extracted chain differs from the input chain")
                seen.add(code)
        if "distance" in checks:
            with clock("distance"):
                if verdict.kind != "yes":
                    bump(report.skipped, "distance")
                else:
                    bump(report.checked, "distance")
                    d_thm = min_hamming_r(code, "theorem", verdict=verdict)
                    d_exh = min_hamming_r(code, "exhaustive")
                    if d_thm != d_exh:
                        fail("distance", f"chain {n}: theorem distance {d_thm} != exhaustive {d_exh}")
        if "duality" in checks:
            with clock("duality"):
                bump(report.checked, "duality")
                dual = dual_code_r(code)
                expected = tuple(dual_code_f(c) for c in reversed(chain.codes))
                if chain_extract(dual).codes != expected:
                    fail("duality", f"chain {n}: chain of the dual is not the reversed dual chain")
        if "euclidean" in checks:
            with clock("euclidean"):
                if ring.flavor != "Z":
                    bump(report.skipped, "euclidean")
                else:
                    bump(report.checked, "euclidean")
                    rep = euclidean_weights(code)
                    if rep.gamma_bound is not None and (rep.d_e is None
                                                        or rep.d_e < rep.gamma_bound):
                        fail("euclidean", f"chain {n}: d_E = {rep.d_e} below the bound {rep.gamma_bound}")
    report.chains = len(chains)
    report.distinct_codes = len(seen) if "roundtrip" in checks else 0
    return report


def _sweep_task(args):
    spec, ring_spec, checks = args
    return sweep(parse_group(spec), parse_ring(ring_spec), checks)


def sweep_all(groups, rings, checks=SWEEP_CHECKS, workers: int = 1) -> list[SweepReport]:
    """``sweep`` over every (group, ring) pair, optionally in worker processes."""
    tasks = [(g.spec, r.spec, tuple(checks)) for g in groups for r in rings]
    if workers <= 1:
        return [_sweep_task(t) for t in tasks]
    sizes = {g.spec: g.order for g in groups}
    sizes.update({r.spec: r.q for r in rings})
    # the biggest algebras first so the slow tasks start early
    order = sorted(range(len(tasks)), key=lambda i: -sizes[tasks[i][1]] ** sizes[tasks[i][0]])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        done = dict(zip(order, pool.map(_sweep_task, [tasks[i] for i in order])))
    return [done[i] for i in range(len(tasks))]


# -- self-dual parity ------------------------------------------------------------------------

@dataclass
class ParityReport:
    group: str
    ring: str
    self_dual: int
    expected: bool

    @property
    def ok(self) -> bool:
        return (self.self_dual > 0) == self.expected

    @property
    def message(self) -> str:
        if self.self_dual:
            return f"{self.self_dual} self-dual relative projective codes"
        return "no self-dual relative projective codes (ℓ odd)" if not self.expected \
            else "no self-dual relative projective codes"

    def to_json(self) -> dict:
        return {"group": self.group, "ring": self.ring, "self_dual": self.self_dual,
                "ell_even": self.expected, "ok": self.ok, "message": self.message}


def parity_check(group: FiniteGroup, ring: ChainRingSpec) -> ParityReport:
    """Self-dual relative projective codes should exist exactly when l is even."""
    found = selfdual_chain_search(group, ring)
    return ParityReport(group.spec, ring.spec, len(found), ring.ell % 2 == 0)


# -- idempotent checks over F_p G ------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failures": self.failures,
                "ok": self.ok}


def idempotent_dual_check(groups, p: int) -> CheckReport:
    """F_p G (1 - e*) equals the nullspace dual of F_p G e for every idempotent e."""
    report = CheckReport(f"idempotent duals over F_{p}")
    for group in groups:
        one = FAlgebraElement.one(group, p)
        for e in enumerate_idempotents_exhaustive(group, p):
            report.checked += 1
            code = code_from_idempotent(e)
            if code_from_idempotent(one - star(e)) != dual_by_nullspace(code):
                report.failures.append(f"{group.spec}: e = {e.coeffs.tolist()}")
    return report


def lifting_check(groups, ells, flavors=FLAVORS, p: int = 2) -> CheckReport:
    """Every idempotent of F_p G lifts to an idempotent of RG reducing to it."""
    report = CheckReport(f"idempotent lifts over F_{p}")
    for group in groups:
        idems = enumerate_idempotents_exhaustive(group, p)
        for ell, flavor in product(ells, flavors):
            ring = ChainRingSpec(p, ell, flavor)
            for e in idems:
                report.checked += 1
                eps = lift_idempotent(e, ring)
                if eps * eps != eps or eps.alpha(0) != e:
                    report.failures.append(f"{group.spec} over {ring.spec}: {e.coeffs.tolist()}")
    return report


def lift_uniqueness_check(groups, ring: ChainRingSpec, budget: int = 1 << 20) -> CheckReport:
    """For abelian G, exactly one idempotent of RG reduces to each e (exhaustive scan)."""
    report = CheckReport(f"lift uniqueness over {ring.spec}")
    for group in groups:
        if not group.is_abelian:
            raise InvalidParameter(f"{group.spec} is not abelian")
        total = ring.q ** group.order
        if total > budget:
            raise BudgetExceeded(f"{total} elements of RG exceed the budget", total, budget)
        idems = enumerate_all_idempotents_r(group, ring)
        by_residue = {}
        for eps in idems:
            by_residue.setdefault(eps.alpha(0), []).append(eps)
        for e in enumerate_idempotents_exhaustive(group, ring.p):
            report.checked += 1
            hits = by_residue.get(e, [])
            if len(hits) != 1 or hits[0] != lift_idempotent(e, ring):
                report.failures.append(
                    f"{group.spec}: {len(hits)} idempotents reduce to {e.coeffs.tolist()}")
    return report


def enumerate_all_idempotents_r(group: FiniteGroup, ring: ChainRingSpec,
                                chunk: int = 1 << 14) -> list[RAlgebraElement]:
    """Every idempotent of RG, by brute force over all q^|G| elements."""
    n, q = group.order, ring.q
    powers = q ** np.arange(n, dtype=np.int64)
    out = []
    for start in range(0, q ** n, chunk):
        idx = np.arange(start, min(start + chunk, q ** n), dtype=np.int64)
        coeffs = (idx[:, None] // powers) % q
        sq = np.zeros_like(coeffs)
        for g in range(n):
            prod = ring.mul_table[coeffs[:, g][:, None], coeffs]
            for h in range(n):
                k = group.mul[g, h]
                sq[:, k] = ring.add_table[sq[:, k], prod[:, h]]
        hits = (sq == coeffs).all(axis=1)
        out.extend(RAlgebraElement(group, ring, c) for c in coeffs[hits])
    return out


def cyclic_enumerator_check(ns, p: int = 2) -> CheckReport:
    """The CRT enumerator of F_p C_n returns exactly the exhaustive idempotents."""
    report = CheckReport(f"cyclic enumerator over F_{p}")
    for n in ns:
        report.checked += 1
        crt = enumerate_idempotents_cyclic(n, p)
        brute = enumerate_idempotents_exhaustive(make_cyclic(n), p)
        if len(set(crt)) != len(crt) or set(crt) != set(brute):
            report.failures.append(f"n = {n}: {len(set(crt))} vs {len(brute)} idempotents")
    return report
