"""Idempotent enumeration and the self-dual Z/4 dihedral search."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .algebra import FAlgebraElement, alg_mul, check_prime, is_idempotent, packer, star
from .errors import BudgetExceeded, InternalConsistencyError, Unsupported
from .fieldcodes import (GroupCodeF, code_from_idempotent, dual_code_f, is_self_orthogonal_f,
                         min_hamming_distance_f, min_weight_packed)
from .groups import FiniteGroup, make_cyclic, make_dihedral
from .polys import factor_xn_minus_1, poly_divmod, poly_mul, poly_sub, trim, xn_minus_1
from .ring import ChainRingSpec
from .ringcodes import (CodeChain, RCode, build_code_from_chain, chain_extract, chain_from_codes,
                        decide_relative_projective, dual_code_r, min_hamming_r,
                        self_orthogonal_lift)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = int(os.environ.get("CHAINCODES_BUDGET", 1 << 30))
CHUNK = 1 << 20


def _budget_check(group: FiniteGroup, p: int, budget: int):
    need = p ** group.order
    if need > budget:
        raise BudgetExceeded(f"{p}^{group.order} = {need} candidates exceed budget {budget}",
                             required=need, budget=budget)


# -- exhaustive scans ------------------------------------------------------------------------

def _scan_f2_range(group: FiniteGroup, lo: int, hi: int, chunk: int = CHUNK) -> np.ndarray:
    pk = packer(group)
    hits = []
    for start in range(lo, hi, chunk):
        words = np.arange(start, min(start + chunk, hi), dtype=np.uint64).astype(pk.dtype)
        sq = pk.square_batch(words)
        hits.append(words[sq == words])
    return np.concatenate(hits).astype(np.uint64) if hits else np.zeros(0, dtype=np.uint64)


def _partition(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def idempotent_words_f2(group: FiniteGroup, budget: int = DEFAULT_BUDGET, workers: int = 1,
                        checkpoint: str | Path | None = None) -> np.ndarray:
    """Packed words of all idempotents of F_2 G, ascending.

    The candidate range is split statically into ``workers`` slices; when a
    checkpoint path is given the scanned high-water mark and the hits so far
    are persisted after every chunk so an interrupted scan resumes.
    """
    _budget_check(group, 2, budget)
    total = 1 << group.order
    if checkpoint is not None:
        return _scan_with_checkpoint(group, total, Path(checkpoint))
    if workers <= 1:
        return _scan_f2_range(group, 0, total)
    ranges = _partition(total, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan_f2_range, [group] * len(ranges),
                              [lo for lo, _ in ranges], [hi for _, hi in ranges]))
    return np.sort(np.concatenate(parts))


def _scan_with_checkpoint(group: FiniteGroup, total: int, path: Path) -> np.ndarray:
    state = {"group": group.spec, "scanned": 0, "hits": []}
    if path.exists():
        saved = json.loads(path.read_text())
        if saved.get("group") == group.spec:
            state = saved
            log.info("resuming %s scan at %d / %d", group.spec, state["scanned"], total)
    while state["scanned"] < total:
        lo = state["scanned"]
        hi = min(lo + CHUNK, total)
        state["hits"].extend(int(w) for w in _scan_f2_range(group, lo, hi))
        state["scanned"] = hi
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(state))
        tmp.replace(path)
    return np.array(sorted(state["hits"]), dtype=np.uint64)


def _square_generic(group: FiniteGroup, p: int, a: np.ndarray) -> np.ndarray:
    n = group.order
    onehot = np.zeros((n * n, n), dtype=np.int64)
    onehot[np.arange(n * n), group.mul.ravel()] = 1
    prod = (a[:, :, None] * a[:, None, :]).reshape(len(a), n * n) % p
    return (prod @ onehot) % p


def enumerate_idempotents_exhaustive(group: FiniteGroup, p: int, budget: int = DEFAULT_BUDGET,
                                     workers: int = 1) -> list[FAlgebraElement]:
    """All e = e^2 in F_p G by scanning every coefficient vector."""
    check_prime(p)
    _budget_check(group, p, budget)
    n = group.order
    if p == 2:
        pk = packer(group)
        return [FAlgebraElement(group, 2, pk.unpack(int(w)))
                for w in idempotent_words_f2(group, budget, workers)]
    total = p ** n
    powers = p ** np.arange(n, dtype=np.int64)
    out = []
    chunk = max(1, CHUNK // n)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        a = (idx[:, None] // powers) % p
        hit = (_square_generic(group, p, a) == a).all(axis=1)
        out.extend(FAlgebraElement(group, p, row) for row in a[hit])
    return out


# -- cyclic groups via x^n - 1 --------------------------------------------------------------

def enumerate_idempotents_cyclic(n: int, p: int) -> list[FAlgebraElement]:
    """The 2^k idempotents of F_p C_n from the k irreducible factors of x^n - 1.

    For each subset S of factors the idempotent is the element congruent to 1
    modulo the factors in S and to 0 modulo the others.
    """
    if n % p == 0:
        raise Unsupported(f"p = {p} divides n = {n}; use the exhaustive enumerator")
    factors = factor_xn_minus_1(n, p)
    modulus = xn_minus_1(n, p)
    primitive = []
    for f in factors:
        cof = poly_divmod(modulus, f, p)[0]
        inv = _inverse_mod(cof, f, p)
        primitive.append(poly_divmod(poly_mul(cof, inv, p), modulus, p)[1])
    group = make_cyclic(n)
    out = []
    for k in range(len(factors) + 1):
        for subset in combinations(range(len(factors)), k):
            coeffs = np.zeros(n, dtype=np.int64)
            for i in subset:
                coeffs[:len(primitive[i])] += primitive[i]
            out.append(FAlgebraElement(group, p, coeffs))
    return out


def _inverse_mod(a, f, p):
    """Inverse of a modulo f via the extended Euclidean algorithm."""
    r0, r1 = trim(f), poly_divmod(a, f, p)[1]
    s0, s1 = [], [1]
    while len(r1) > 1 or (r1 and r1[0] == 0):
        q, r = poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
    if not r1:
        raise ArithmeticError("not invertible")
    c = pow(r1[0], -1, p)
    return [(x * c) % p for x in s1]


# -- packed code helpers -------------------------------------------------------------------

def packed_rref(words) -> tuple[int, ...]:
    """Reduced echelon basis of the F_2 span of packed rows (pivot = lowest bit)."""
    basis: dict[int, int] = {}
    for w in words:
        w = int(w)
        for piv in sorted(basis):
            if (w >> piv) & 1:
                w ^= basis[piv]
        if not w:
            continue
        piv = (w & -w).bit_length() - 1
        for q in basis:
            if (basis[q] >> piv) & 1:
                basis[q] ^= w
        basis[piv] = w
    return tuple(basis[k] for k in sorted(basis))


def ideal_key(group: FiniteGroup, word: int) -> tuple[int, ...]:
    pk = packer(group)
    return packed_rref(pk.translate(h, word) for h in range(group.order))


def packed_to_code(group: FiniteGroup, key: tuple[int, ...]) -> GroupCodeF:
    pk = packer(group)
    return GroupCodeF(group, 2, np.array([pk.unpack(w) for w in key], dtype=np.int64)
                      .reshape(-1, group.order))


def gram_self_orthogonal(key: tuple[int, ...]) -> bool:
    return all(bin(a & b).count("1") % 2 == 0 for a in key for b in key)


# -- the dihedral search -------------------------------------------------------------------

@dataclass
class SearchReport:
    """Outcome of one dihedral search.

    ``best_distance`` is the maximum of d_H(C_0^perp) over self-orthogonal
    projective C_0, i.e. over the chains C_0 <= C_0^perp.  A chain only yields a
    self-dual ideal over Z/4 when e_0 has an idempotent lift eps with
    eps eps^* = 0; ``best_self_dual_distance`` restricts to those chains.
    """

    group: str
    ring: str
    strategy: str
    candidates: int
    idempotents: int
    codes: list = field(default_factory=list)
    best_distance: int | None = None
    best_self_dual_distance: int | None = None
    witnesses: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def two_n(self) -> int:
        return int(self.group.partition(":")[2])

    def to_json(self, timing: bool = False) -> dict:
        out = {"group": self.group, "ring": self.ring, "strategy": self.strategy,
               "candidates": self.candidates, "idempotents": self.idempotents,
               "codes": self.codes, "best_distance": self.best_distance,
               "best_self_dual_distance": self.best_self_dual_distance,
               "witnesses": self.witnesses}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def csv_row(self) -> str:
        return f"{self.two_n},{self.best_distance}"


def search_selfdual_dihedral_z4(two_n: int, budget: int = DEFAULT_BUDGET, workers: int = 1,
                                strategy: str = "exhaustive",
                                checkpoint: str | Path | None = None) -> SearchReport:
    """Chains C_0 <= C_0^perp of self-orthogonal projective codes in F_2 D_{2n}.

    Every distinct C_0 is recorded with d_H(C_0^perp), which is the Hamming
    distance of the Z/4 code built from the chain.  For each C_0 the search
    also looks for a generating idempotent with a self-orthogonal lift; when
    one exists the Z/4 code is built from it and checked to be self-dual and
    relative projective.
    """
    if strategy != "exhaustive":
        raise Unsupported(f"strategy {strategy!r} is not available; use 'exhaustive'")
    if two_n < 2 or two_n % 2:
        raise Unsupported(f"dihedral order must be even, got {two_n}")
    t0 = time.perf_counter()
    group = make_dihedral(two_n // 2)
    ring = ChainRingSpec(2, 2, "Z")
    pk = packer(group)
    words = idempotent_words_f2(group, budget, workers, checkpoint)
    wd = words.astype(pk.dtype)
    selforth = words[pk.mul_batch(wd, pk.star_batch(wd)) == 0]
    log.info("%s: %d idempotents, %d with e e* = 0", group.spec, len(words), len(selforth))

    classes: dict[tuple, list[int]] = {}
    for w in selforth:
        key = ideal_key(group, int(w))
        if not gram_self_orthogonal(key):
            raise InternalConsistencyError("e e* = 0 but F_2 G e is not self-orthogonal")
        classes.setdefault(key, []).append(int(w))

    codes = []
    for key, members in sorted(classes.items(), key=lambda kv: (len(kv[0]), kv[0])):
        dual_word = 1 ^ pk.star(members[0])  # 1 - e* in char 2
        dual_key = ideal_key(group, dual_word)
        if len(dual_key) + len(key) != group.order:
            raise InternalConsistencyError("dim C_0 + dim C_0^perp != |G|")
        d = min_weight_packed(np.array(dual_key, dtype=np.uint64))
        lift_word, lift = None, None
        for w in members:
            lift = self_orthogonal_lift(FAlgebraElement(group, 2, pk.unpack(w)), ring)
            if lift is not None:
                lift_word = w
                break
        codes.append({"dim": len(key), "distance": d, "members": members,
                      "lift_word": lift_word, "lift": lift})

    best = max(c["distance"] for c in codes)
    sd = [c["distance"] for c in codes if c["lift"] is not None]
    witnesses = []
    for c in codes:
        if c["distance"] == best or (c["lift"] is not None and c["distance"] == max(sd)):
            witnesses.append(_witness(group, ring, c))
    return SearchReport(
        group=group.spec, ring=ring.spec, strategy=strategy, candidates=1 << group.order,
        idempotents=len(words),
        codes=[{"dim": c["dim"], "distance": c["distance"],
                "idempotent": _fmt(group, c["members"][0]),
                "generating_idempotents": len(c["members"]),
                "self_dual_lift": c["lift"] is not None} for c in codes],
        best_distance=best, best_self_dual_distance=max(sd), witnesses=witnesses,
        wall_time=time.perf_counter() - t0)


def _fmt(group, word) -> str:
    from .literals import format_element
    return format_element(FAlgebraElement(group, 2, packer(group).unpack(word)))


def _witness(group, ring, c) -> dict:
    """Certificate for one chain: the chain, the Z/4 code and what it satisfies."""
    pk = packer(group)
    w = c["lift_word"] if c["lift"] is not None else c["members"][0]
    e0 = FAlgebraElement(group, 2, pk.unpack(w))
    e1 = FAlgebraElement(group, 2, pk.unpack(1 ^ pk.star(w)))
    chain = CodeChain(ring, (code_from_idempotent(e0), code_from_idempotent(e1)), (e0, e1))
    lift = c["lift"]
    code = build_code_from_chain(chain, [lift, None])
    verdict = decide_relative_projective(code, hint=(chain, [lift, None]))
    self_dual = dual_code_r(code) == code
    if (lift is not None) != self_dual:
        raise InternalConsistencyError("self-orthogonal lift and self-duality disagree")
    if verdict.kind != "yes":
        raise InternalConsistencyError(f"built code not relative projective ({verdict.kind})")
    if min_hamming_r(code, "theorem", verdict=verdict) != c["distance"]:
        raise InternalConsistencyError("theorem distance differs from d_H(C_0^perp)")
    cert = {"chain": chain.to_json(), "code": code.to_json(), "distance": c["distance"],
            "self_dual": self_dual, "verdict": verdict.kind, "verdict_reason": verdict.reason}
    if lift is not None:
        cert["lift"] = str(lift)
    return cert


def recheck_certificate(cert: dict) -> list[str]:
    """Re-verify a witness certificate from its JSON alone; returns problems found."""
    from .literals import parse_r_element
    chain = CodeChain.from_json(cert["chain"])
    code = RCode.from_json(cert["code"])
    problems = list(chain.violations())
    if problems:
        return problems
    lift = parse_r_element(chain.group, chain.ring, cert["lift"]) if "lift" in cert else None
    lifts = [lift] + [None] * (len(chain.codes) - 1)
    if build_code_from_chain(chain, lifts) != code:
        problems.append("chain does not rebuild the stored code")
    e0 = chain.idems[0]
    if e0 * star(e0):
        problems.append("C_0 generator has e e* != 0")
    if not is_self_orthogonal_f(chain.codes[0]):
        problems.append("C_0 is not self-orthogonal")
    if chain.codes[1] != dual_code_f(chain.codes[0]):
        problems.append("C_1 is not the dual of C_0")
    if cert.get("self_dual") and dual_code_r(code) != code:
        problems.append("code is not self-dual")
    verdict = decide_relative_projective(code, hint=(chain, lifts))
    if verdict.kind != "yes":
        problems.append(f"relative projectivity verdict: {verdict.kind}")
    elif min_hamming_r(code, "theorem", verdict=verdict) != cert["distance"]:
        problems.append("distance does not match")
    return problems


def reference_table() -> dict[int, dict]:
    """Published values keyed by 2n: the self-dual bound and the dihedral optimum."""
    from importlib import resources
    data = json.loads(resources.files(__package__).joinpath("data/reference_table.json")
                      .read_text(encoding="utf-8"))
    return {n: {"bound": b, "dihedral": d}
            for n, b, d in zip(data["columns"], data["self_dual_bound"], data["dihedral_best"])}


def recheck_report(report: dict) -> list[str]:
    """Re-verify a serialized SearchReport without repeating the scan.

    Every listed code is rebuilt from its idempotent (e = e^2, e e* = 0, the
    stated dimension and d_H of F_2 G (1 - e*)), both optima are recomputed
    from the list and every witness certificate is rechecked.
    """
    from .groups import parse_group
    from .literals import parse_f_element
    group = parse_group(report["group"])
    problems = []
    for k, entry in enumerate(report["codes"]):
        e = parse_f_element(group, 2, entry["idempotent"])
        if not is_idempotent(e) or alg_mul(e, star(e)):
            problems.append(f"code {k}: generator is not an idempotent with e e* = 0")
            continue
        c0 = code_from_idempotent(e)
        dual = code_from_idempotent(FAlgebraElement.one(group, 2) - star(e))
        if c0.dim != entry["dim"]:
            problems.append(f"code {k}: dimension {c0.dim} != {entry['dim']}")
        if min_hamming_distance_f(dual) != entry["distance"]:
            problems.append(f"code {k}: distance does not match")
    if not report["codes"]:
        return problems + ["no codes listed"]
    best = max(e["distance"] for e in report["codes"])
    if best != report["best_distance"]:
        problems.append(f"best distance {report['best_distance']} != listed maximum {best}")
    sd = [e["distance"] for e in report["codes"] if e["self_dual_lift"]]
    if (max(sd) if sd else None) != report["best_self_dual_distance"]:
        problems.append("best self-dual distance does not match the listed codes")
    if not report["witnesses"]:
        problems.append("no witness certificates")
    for k, cert in enumerate(report["witnesses"]):
        problems.extend(f"witness {k}: {msg}" for msg in recheck_certificate(cert))
    if not any(w["distance"] == best for w in report["witnesses"]):
        problems.append("no witness attains the best distance")
    return problems


# -- chain census over small groups ----------------------------------------------------------

def projective_codes(group: FiniteGroup, p: int, budget: int = DEFAULT_BUDGET) -> list[GroupCodeF]:
    """Distinct left ideals F_p G e, smallest first (ties broken by key)."""
    seen = {}
    for e in enumerate_idempotents_exhaustive(group, p, budget):
        c = code_from_idempotent(e)
        seen.setdefault(c.key, c)
    return sorted(seen.values(), key=lambda c: (c.dim, c.key))


def enumerate_chains(group: FiniteGroup, ring: ChainRingSpec,
                     budget: int = DEFAULT_BUDGET) -> list[CodeChain]:
    """Every nested sequence C_0 <= ... <= C_{l-1} of projective codes."""
    codes = projective_codes(group, ring.p, budget)
    above = [[k for k, d in enumerate(codes) if c.is_subcode_of(d)] for c in codes]
    seqs = [[k] for k in range(len(codes))]
    for _ in range(ring.ell - 1):
        seqs = [s + [k] for s in seqs for k in above[s[-1]]]
    return [chain_from_codes(ring, [codes[k] for k in s]) for s in seqs]


@dataclass
class CensusReport:
    group: str
    ring: str
    chains: int = 0
    distinct_codes: int = 0
    failures: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and self.distinct_codes == self.chains


def roundtrip_census(group: FiniteGroup, ring: ChainRingSpec) -> tuple[CensusReport, list]:
    """chain -> code -> chain over every chain; returns the report and (chain, code) pairs."""
    report = CensusReport(group.spec, ring.spec)
    pairs, seen = [], set()
    for chain in enumerate_chains(group, ring):
        code = build_code_from_chain(chain)
        verdict = decide_relative_projective(code)
        if verdict.chain.codes != chain.codes:
            report.failures.append(f"chain {chain.key!r} does not survive the round trip")
        report.verdicts[verdict.kind] = report.verdicts.get(verdict.kind, 0) + 1
        if verdict.kind == "indeterminate":
            log.warning("indeterminate verdict on %s over %s", group.spec, ring.spec)
        seen.add(code)
        pairs.append((chain, code))
    report.chains = len(pairs)
    report.distinct_codes = len(seen)
    return report, pairs


def selfdual_chain_search(group: FiniteGroup, ring: ChainRingSpec) -> list[tuple[CodeChain, RCode]]:
    """Relative projective codes with C = C^perp, found by scanning chains.

    A self-dual code has C_j^perp = C_{l-1-j}, so only such chains are built.
    In the noncommutative case the default lift can miss a self-dual ideal,
    so for l = 2 a self-orthogonal lift of e_0 is tried as well.
    """
    ell = ring.ell
    found = []
    for chain in enumerate_chains(group, ring):
        if any(dual_code_f(chain.codes[j]) != chain.codes[ell - 1 - j] for j in range(ell)):
            continue
        candidates = [build_code_from_chain(chain)]
        if ell == 2:
            lift = self_orthogonal_lift(chain.idems[0], ring)
            if lift is not None:
                e1 = FAlgebraElement.one(group, ring.p) - star(chain.idems[0])
                alt = CodeChain(ring, chain.codes, (chain.idems[0], e1))
                if not alt.violations():
                    candidates.append(build_code_from_chain(alt, [lift, None]))
        for code in candidates:
            if dual_code_r(code) == code:
                found.append((chain, code))
                break
    return found


def _census_task(args):
    spec, p, ell, flavor = args
    from .groups import parse_group
    group = parse_group(spec)
    t0 = time.perf_counter()
    report, _ = roundtrip_census(group, ChainRingSpec(p, ell, flavor))
    return report, time.perf_counter() - t0


def census_all(groups, primes=(2, 3), ells=(2, 3), flavors=("Z", "poly"),
               workers: int = 1) -> list[tuple[CensusReport, float]]:
    """roundtrip_census over every combination; tasks spread over worker processes."""
    tasks = [(g.spec, p, ell, fl) for g in groups for p in primes for ell in ells for fl in flavors]
    if workers <= 1:
        return [_census_task(t) for t in tasks]
    # largest algebras first so the long tasks start early
    order = sorted(range(len(tasks)), key=lambda i: -tasks[i][1] ** parse_order(tasks[i][0]))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        done = dict(zip(order, pool.map(_census_task, [tasks[i] for i in order])))
    return [done[i] for i in range(len(tasks))]


def parse_order(spec: str) -> int:
    from .groups import parse_group
    return parse_group(spec).order
