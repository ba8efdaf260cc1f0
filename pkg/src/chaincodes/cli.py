"""Command-line front end.

Every subcommand writes one artifact (text, CSV or JSON) to stdout or to
``--output``.  Failures print a one-line JSON object on stderr and exit with
a status that depends on the error class, see ``EXIT_CODES``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import errors
from .fieldcodes import GroupCodeF, min_euclidean_distance_f, min_hamming_distance_f
from .groups import parse_group
from .literals import format_element, parse_f_element
from .polys import factor_xn_minus_1, format_poly
from .ring import parse_ring
from .ringcodes import (DEFAULT_NODE_BUDGET, RCode, decide_relative_projective,
                        euclidean_weights, lift_idempotent, min_hamming_r)
from .search import (DEFAULT_BUDGET, recheck_report, reference_table,
                     search_selfdual_dihedral_z4)
from .verify import (SUITES, parity_check, resolve_groups, resolve_rings, sweep_all)

log = logging.getLogger("chaincodes")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4
EXIT_UNSUPPORTED = 5

EXIT_CODES = [
    (errors.BudgetExceeded, EXIT_BUDGET),
    (errors.InternalConsistencyError, EXIT_VERIFY),
    (errors.VerificationFailure, EXIT_VERIFY),
    (errors.Unsupported, EXIT_UNSUPPORTED),
    (errors.UnsupportedRing, EXIT_UNSUPPORTED),
    (errors.InvalidParameter, EXIT_PARSE),
]

CERT_SCHEMA = "chaincodes-certificate/1"
FORMATS = ("text", "csv", "json")


@dataclass
class CliConfig:
    command: str
    group: str | None = None
    ring: str | None = None
    strategy: str = "exhaustive"
    budget: int = DEFAULT_BUDGET
    workers: int = 1
    format: str = "text"
    output: str | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise errors.ParseError(f"budget must be >= 1, got {self.budget}")
        if self.workers < 1:
            raise errors.ParseError(f"workers must be >= 1, got {self.workers}")
        if self.format not in FORMATS:
            raise errors.ParseError(f"unknown format {self.format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise errors.ParseError(f"{self.prog}: {message}")


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(cfg: CliConfig, text: str):
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise errors.ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"{path} is not valid JSON: {exc}") from None


# -- search-selfdual and table ---------------------------------------------------------------

def _dihedral_order(spec: str) -> int:
    group = parse_group(spec)
    if not group.label.startswith("dihedral:"):
        raise errors.Unsupported("the self-dual search covers dihedral groups only")
    return group.order


def _check_z4(ring_spec: str):
    ring = parse_ring(ring_spec)
    if (ring.p, ring.ell, ring.flavor) != (2, 2, "Z"):
        raise errors.Unsupported(f"the self-dual search runs over Z:2^2, not {ring.spec}")


def _certificate(report) -> dict:
    return {"schema": CERT_SCHEMA, "report": report.to_json()}


def _write_certificate(report, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_dumps(_certificate(report)), encoding="utf-8")
    return path


def recheck_file(path: str) -> list[str]:
    cert = _load_json(path)
    if cert.get("schema") != CERT_SCHEMA or "report" not in cert:
        raise errors.ParseError(f"{path} is not a {CERT_SCHEMA} certificate")
    return recheck_report(cert["report"])


def _recheck(cfg: CliConfig, paths: list[str]) -> int:
    results = {p: recheck_file(p) for p in paths}
    bad = {p: probs for p, probs in results.items() if probs}
    if cfg.format == "json":
        _emit(cfg, _dumps({"certificates": {p: {"ok": not probs, "problems": probs}
                                            for p, probs in sorted(results.items())}}))
    else:
        lines = [f"{p}: {'ok' if not probs else '; '.join(probs)}" for p, probs in sorted(results.items())]
        _emit(cfg, "\n".join(lines) + "\n")
    if bad:
        raise errors.VerificationFailure(f"{len(bad)} certificate(s) failed the recheck")
    return EXIT_OK


def cmd_search_selfdual(cfg: CliConfig, args) -> int:
    if args.recheck:
        return _recheck(cfg, [args.recheck])
    if not cfg.group:
        raise errors.ParseError("search-selfdual needs --group dihedral:N")
    _check_z4(cfg.ring or "Z:2^2")
    two_n = _dihedral_order(cfg.group)
    report = search_selfdual_dihedral_z4(two_n, cfg.budget, cfg.workers, cfg.strategy,
                                         args.checkpoint)
    cert_path = Path(args.certificate or f"certificate-dihedral-{two_n}.json")
    _write_certificate(report, cert_path)
    log.info("2n = %d done in %.2f s", two_n, report.wall_time)
    if cfg.format == "json":
        _emit(cfg, _dumps(report.to_json()))
    elif cfg.format == "csv":
        _emit(cfg, "2n,d_H\n" + report.csv_row() + "\n")
    else:
        _emit(cfg, "\n".join([
            f"group {report.group} over {report.ring}",
            f"idempotents: {report.idempotents} of {report.candidates} candidates",
            f"self-orthogonal projective C_0: {len(report.codes)}",
            f"best d_H: {report.best_distance}",
            f"best d_H with a self-dual lift: {report.best_self_dual_distance}",
            f"certificate: {cert_path}",
        ]) + "\n")
    return EXIT_OK


def cmd_table(cfg: CliConfig, args) -> int:
    if args.recheck:
        paths = sorted(str(p) for p in Path(args.recheck).glob("*.json"))
        if not paths:
            raise errors.ParseError(f"no certificates in {args.recheck}")
        return _recheck(cfg, paths)
    if args.start is None or args.stop is None:
        raise errors.ParseError("table needs --from and --to")
    _check_z4(cfg.ring or "Z:2^2")
    if args.start % 2 or args.stop % 2 or args.start < 2 or args.start > args.stop:
        raise errors.ParseError("--from and --to must be even with 2 <= from <= to")
    cert_dir = Path(args.cert_dir)
    rows = []
    for two_n in range(args.start, args.stop + 1, 2):
        ckpt = None
        if args.checkpoint_dir:
            Path(args.checkpoint_dir).mkdir(parents=True, exist_ok=True)
            ckpt = Path(args.checkpoint_dir) / f"scan-dihedral-{two_n}.json"
        report = search_selfdual_dihedral_z4(two_n, cfg.budget, cfg.workers, cfg.strategy, ckpt)
        _write_certificate(report, cert_dir / f"dihedral-{two_n}.json")
        log.info("2n = %d: d_H = %s (%.2f s)", two_n, report.best_distance, report.wall_time)
        rows.append(report)
    if cfg.format == "json":
        ref = reference_table()
        _emit(cfg, _dumps({"ring": "Z:2^2", "rows": [
            {"2n": r.two_n, "d_H": r.best_distance,
             "d_H_self_dual": r.best_self_dual_distance,
             "published": ref.get(r.two_n, {}).get("dihedral"),
             "self_dual_bound": ref.get(r.two_n, {}).get("bound"),
             "certificate": str(cert_dir / f"dihedral-{r.two_n}.json")} for r in rows]}))
    else:
        _emit(cfg, "2n,d_H\n" + "".join(r.csv_row() + "\n" for r in rows))
    return EXIT_OK


# -- algebra commands ------------------------------------------------------------------------

def cmd_lift(cfg: CliConfig, args) -> int:
    if not (cfg.group and cfg.ring and args.idempotent):
        raise errors.ParseError("lift needs --group, --ring and --idempotent")
    group, ring = parse_group(cfg.group), parse_ring(cfg.ring)
    e = parse_f_element(group, ring.p, args.idempotent)
    eps = lift_idempotent(e, ring)
    verified = eps * eps == eps and eps.alpha(0) == e
    if cfg.format == "json":
        _emit(cfg, _dumps({"group": group.spec, "ring": ring.spec,
                           "idempotent": format_element(e), "lift": str(eps),
                           "coefficients": [ring.format_scalar(int(c)) for c in eps.coeffs],
                           "verified": verified}))
    else:
        _emit(cfg, f"{eps}\nverified: {str(verified).lower()}\n")
    if not verified:
        raise errors.VerificationFailure("lift failed verification")
    return EXIT_OK


def _load_code(data):
    if "report" in data:
        witnesses = data["report"]["witnesses"]
        if not witnesses:
            raise errors.ParseError("certificate has no witness codes")
        data = witnesses[0]
    if "code" in data:
        data = data["code"]
    try:
        if "ring" in data:
            return RCode.from_json(data)
        return GroupCodeF.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, errors.ChainCodesError):
            raise
        raise errors.ParseError(f"malformed code file: {exc!r}") from None


def cmd_min_distance(cfg: CliConfig, args) -> int:
    code = _load_code(_load_json(args.code))
    out = {"group": code.group.spec}
    node_budget = min(cfg.budget, args.node_budget)
    if isinstance(code, GroupCodeF):
        out.update({"field": f"F_{code.p}", "dim": code.dim,
                    "d_H": min_hamming_distance_f(code)})
        if args.euclidean:
            out["d_E"] = min_euclidean_distance_f(code)
    else:
        out.update({"ring": code.ring.spec, "log_size": code.log_size})
        verdict = decide_relative_projective(code)
        out["relative_projective"] = verdict.kind
        if args.mode in ("theorem", "both"):
            out["d_H_theorem"] = min_hamming_r(code, "theorem", verdict=verdict)
        if args.mode in ("exhaustive", "both"):
            out["d_H_exhaustive"] = min_hamming_r(code, "exhaustive", node_budget)
        if args.mode == "both" and out["d_H_theorem"] != out["d_H_exhaustive"]:
            raise errors.VerificationFailure(
                f"theorem distance {out['d_H_theorem']} != exhaustive {out['d_H_exhaustive']}")
        out["d_H"] = out.get("d_H_exhaustive", out.get("d_H_theorem"))
        if args.euclidean:
            rep = euclidean_weights(code, node_budget)
            out.update({"d_E": rep.d_e, "gamma_bound": rep.gamma_bound})
    if cfg.format == "json":
        _emit(cfg, _dumps(out))
    else:
        _emit(cfg, "".join(f"{k}: {v}\n" for k, v in out.items()))
    return EXIT_OK


def cmd_factor(cfg: CliConfig, args) -> int:
    factors = factor_xn_minus_1(args.n, args.p)
    if cfg.format == "json":
        _emit(cfg, _dumps({"p": args.p, "n": args.n,
                           "factors": [{"poly": format_poly(f), "coeffs": f} for f in factors]}))
    elif cfg.format == "csv":
        _emit(cfg, "degree,factor\n" + "".join(f"{len(f) - 1},{format_poly(f)}\n"
                                               for f in factors))
    else:
        _emit(cfg, "".join(format_poly(f) + "\n" for f in factors))
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------------

def cmd_verify(cfg: CliConfig, args) -> int:
    groups, rings = resolve_groups(cfg.group), resolve_rings(cfg.ring)
    if args.suite == "parity":
        reports = [parity_check(g, r) for g in groups for r in rings]
        lines = [f"{r.group} {r.ring}: {r.message}" for r in reports]
    else:
        reports = sweep_all(groups, rings, (args.suite,), cfg.workers)
        lines = []
        for r in reports:
            status = "ok" if r.ok else "FAILED: " + "; ".join(r.failures[:3])
            extra = ""
            if r.verdicts.get("indeterminate"):
                extra = f", {r.verdicts['indeterminate']} indeterminate"
            lines.append(f"{r.group} {r.ring}: {status} ({r.checked.get(args.suite, 0)} "
                         f"checked, {r.skipped.get(args.suite, 0)} skipped{extra})")
    failed = [r for r in reports if not r.ok]
    if cfg.format == "json":
        _emit(cfg, _dumps({"suite": args.suite, "ok": not failed,
                           "results": [r.to_json() for r in reports]}))
    else:
        _emit(cfg, "\n".join(lines) + "\n")
    if failed:
        raise errors.VerificationFailure(f"suite {args.suite} failed on {len(failed)} case(s)")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", help="cyclic:n, dihedral:N, abelian:a,b,... or quaternion:8")
    common.add_argument("--ring", help="Z:p^l or poly:p^l")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="candidate budget for scans (default from CHAINCODES_BUDGET)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--output", help="write the artifact here instead of stdout")
    common.add_argument("--strategy", default="exhaustive")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="chaincodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("search-selfdual", parents=[common],
                       help="self-dual Z/4 codes in a dihedral group algebra")
    p.add_argument("--certificate", help="certificate path")
    p.add_argument("--checkpoint", help="resumable scan state")
    p.add_argument("--recheck", metavar="CERT", help="re-verify a certificate and exit")
    p.set_defaults(func=cmd_search_selfdual, default_format="text")

    p = sub.add_parser("table", parents=[common], help="best distances for a range of 2n")
    p.add_argument("--from", dest="start", type=int)
    p.add_argument("--to", dest="stop", type=int)
    p.add_argument("--cert-dir", default="certificates")
    p.add_argument("--checkpoint-dir")
    p.add_argument("--recheck", metavar="DIR", help="re-verify every certificate in DIR")
    p.set_defaults(func=cmd_table, default_format="csv")

    p = sub.add_parser("lift", parents=[common], help="lift an idempotent of F_p G to RG")
    p.add_argument("--idempotent")
    p.set_defaults(func=cmd_lift, default_format="text")

    p = sub.add_parser("min-distance", parents=[common], help="minimum distance of a code file")
    p.add_argument("--code", required=True)
    p.add_argument("--mode", choices=("theorem", "exhaustive", "both"), default="both")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--euclidean", action="store_true")
    p.set_defaults(func=cmd_min_distance, default_format="text")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.set_defaults(func=cmd_verify, default_format="text")

    p = sub.add_parser("factor", parents=[common], help="irreducible factors of x^n - 1")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_factor, default_format="text")
    return parser


def exit_code_for(exc: BaseException) -> int:
    for cls, status in EXIT_CODES:
        if isinstance(exc, cls):
            return status
    return EXIT_ERROR


def _report_error(exc: BaseException) -> int:
    status = exit_code_for(exc)
    payload = {"error": getattr(exc, "code", "error"), "message": str(exc), "exit": status}
    if isinstance(exc, errors.BudgetExceeded):
        payload.update({"required": exc.required, "budget": exc.budget})
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return status


def run_command(argv) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        cfg = CliConfig(args.command, args.group, args.ring, args.strategy, args.budget,
                        args.workers, args.format or args.default_format, args.output)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(cfg, args)
    except errors.ChainCodesError as exc:
        return _report_error(exc)


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
