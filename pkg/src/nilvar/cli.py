"""Command-line front end: ``nilvar <subcommand> [options]``.

Exit codes: 0 all checks pass, 1 usage or precondition error, 2 a mathematical
check failed (the certificate is still printed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import ffcount, restricted
from .classical import FormSpec, Partition, PartitionError, WitnessError, build_witness
from .exceptional import SCENARIOS
from .linalg import LinAlgError
from .rootsys import RootSystemError, build_root_system, enumerate_bala_carter_pairs, enumerate_distinguished

SCHEMA = 1
DEFAULT_SEED = 0

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    cartan_type: str | None = None
    partition: Partition | None = None
    kappa: int | None = None
    primes: tuple[int, ...] = ()
    budget: int = ffcount.DEFAULT_BUDGET
    fmt: str = "json"
    seed: int = DEFAULT_SEED
    extra: dict = field(default_factory=dict)


@dataclass
class Result:
    payload: dict
    rows: list[dict] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    ok: bool = True


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"cannot parse primes {text!r}") from None
    if not ps or not all(_is_prime(p) for p in ps):
        raise UsageError(f"expected a comma-separated list of primes, got {text!r}")
    return ps


def _default_budget() -> int:
    env = os.environ.get("NILVAR_BUDGET")
    if env is None:
        return ffcount.DEFAULT_BUDGET
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"NILVAR_BUDGET must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_components(cfg: RunConfig) -> Result:
    system = build_root_system(cfg.cartan_type)
    rows = [
        {"J": ",".join(map(str, sorted(J))) or "-", "diagram": str(d)}
        for J, d in enumerate_distinguished(system)
    ]
    dim = 2 * len(system.positive_roots) + system.rank
    return Result({"type": system.cartan_type, "count": len(rows), "dim": dim}, rows, ["J", "diagram"])


def cmd_bala_carter(cfg: RunConfig) -> Result:
    system = build_root_system(cfg.cartan_type)
    rows = [
        {
            "diagram": str(d),
            "I": ",".join(map(str, sorted(pair.I))) or "-",
            "J": ",".join(map(str, sorted(pair.J))) or "-",
        }
        for pair, d in enumerate_bala_carter_pairs(system)
    ]
    orbits = len({r["diagram"] for r in rows})
    return Result({"type": system.cartan_type, "pairs": len(rows), "orbits": orbits}, rows, ["diagram", "I", "J"])


def cmd_witness(cfg: RunConfig) -> Result:
    lam = cfg.partition
    algebra = "gl" if cfg.kappa is None else FormSpec(cfg.kappa, lam.n)
    p = cfg.primes[0] if cfg.primes else 17
    head = {"partition": str(lam), "algebra": "gl" if cfg.kappa is None else f"kappa={cfg.kappa}", "p": p}
    cert = build_witness(lam, algebra, p)
    if cert is None:
        return Result({**head, "status": "no_witness_required"})
    body = cert.to_dict()
    rows = [{"check": k, "pass": v} for k, v in sorted(cert.checks.items())]
    status = "pass" if cert.passed else "fail"
    return Result({**head, "status": status, "certificate": body}, rows, ["check", "pass"], cert.passed)


def cmd_exceptional(cfg: RunConfig) -> Result:
    name = cfg.extra["scenario"]
    cert = SCENARIOS[name]()
    rows = [{"check": c.name, "pass": c.passed, "detail": c.detail or ""} for c in cert.checks]
    head = {"scenario": name, "p": cert.p, "status": "pass" if cert.passed else "fail"}
    return Result({**head, "certificate": cert.to_dict()}, rows, ["check", "pass", "detail"], cert.passed)


def _count_reports(obj: str, n: int, primes, budget: int, method: str) -> tuple[list, bool]:
    reports, ok = [], True
    for q in primes:
        if obj == "nilpotent":
            reports.append(ffcount.count_nilpotent(n, q, budget))
        elif obj == "pairs":
            if method == "both":
                naive, strat = ffcount.compare_pair_methods(n, q, budget)
                ok &= naive.count == strat.count
                reports.append(strat)
            else:
                reports.append(ffcount.count_commuting_nilpotent_pairs(n, q, method, budget))
        elif obj == "unipotent-pairs":
            reports.append(ffcount.count_unipotent_commuting_pairs(n, q, budget=budget))
        elif obj == "hilbert":
            reports.append(ffcount.hilbert_point_count(n, q, "stratified" if method == "both" else method, budget))
    return reports, ok


def _fit(reports) -> dict:
    if len(reports) < 2:
        return {"exponent": None}
    est = ffcount.dimension_estimate(reports)
    for rep in reports:
        rep.leading_exponent = est.exponent
    return {"exponent": est.exponent, "deviation": round(est.deviation, 6), "conclusive": est.conclusive}


def cmd_count(cfg: RunConfig) -> Result:
    obj, n, method = cfg.extra["object"], cfg.extra["n"], cfg.extra["method"]
    if obj == "hilbert" and method == "naive" and n > 3:
        raise UsageError("naive Hilbert counting is limited to r <= 3")
    reports, ok = _count_reports(obj, n, cfg.primes, cfg.budget, method)
    fit = _fit(reports)
    rows = [
        {"object": r.object_kind, "n_or_r": n, "q": r.params["q"], "count": r.count, "exponent": r.leading_exponent}
        for r in reports
    ]
    payload = {"object": obj, "n_or_r": n, "method": method, **fit}
    if method == "both" and obj == "pairs":
        payload["methods_agree"] = ok
    return Result(payload, rows, ffcount.TSV_HEADER.split("\t"), ok)


def cmd_hilbert(cfg: RunConfig) -> Result:
    r = cfg.extra["n"]
    rows, ok = [], True
    reports = []
    for q in cfg.primes:
        rep = ffcount.hilbert_point_count(r, q, "stratified", cfg.budget)
        fam = ffcount.verify_principal_family(r, q)
        ok &= fam["cyclic"] and fam["distinct"] == q ** (r - 1)
        reports.append(rep)
        rows.append({"r": r, "q": q, "points": rep.count, "U": rep.extra["U"], "GL": rep.extra["GL"],
                     "family_distinct": fam["distinct"]})
    fit = _fit(reports)
    if fit["exponent"] is not None:
        ok &= fit["exponent"] == r - 1
    for row, rep in zip(rows, reports):
        row["exponent"] = rep.leading_exponent
    payload = {"r": r, "expected_exponent": r - 1, **fit, "status": "pass" if ok else "fail"}
    return Result(payload, rows, ["r", "q", "points", "U", "GL", "family_distinct", "exponent"], ok)


def _restricted_row(L: restricted.RestrictedAlgebra, expected_mt: int, cfg: RunConfig) -> dict:
    p, rng = L.p, np.random.default_rng(cfg.seed)
    samples = rng.integers(0, p, size=(cfg.extra["samples"], L.dim))
    jac = all(
        not np.any((restricted.jacobson_p_power(L, x) - L.p_power(x)) % p) for x in samples
    )
    axioms = all(L.check_axioms().values())
    witness = restricted.toral_rank_search(L, seed=cfg.seed)
    mt = witness.size
    small = p**L.dim <= 1 << 16
    pool = restricted.all_elements(L) if small else samples
    e = restricted.semisimple_exponent(L, samples=pool)
    power_span = all(restricted.check_eq12_pointwise(L, mt, e, x) for x in pool)
    row = {
        "q": p, "dim": L.dim, "MT": mt, "expected_MT": expected_mt, "e": e,
        "exhaustive": bool(small), "jacobson": jac, "axioms": axioms, "power_span": power_span,
        "toral_verified": witness.verify(L), "nilpotent_count": None,
    }
    if p**L.dim <= cfg.budget:
        row["nilpotent_count"] = sum(1 for x in restricted.all_elements(L) if restricted.is_nilpotent(L, x))
    return row


def cmd_restricted_check(cfg: RunConfig) -> Result:
    lam = cfg.partition
    n = cfg.extra["n"]
    if lam is None and n is None:
        raise UsageError("restricted-check needs --partition or --n")
    rows, ok = [], True
    for p in cfg.primes:
        if lam is not None:
            L, expected, label = restricted.RestrictedAlgebra.centralizer(lam, p), len(lam), f"z(e_{lam})"
        else:
            L, expected, label = restricted.RestrictedAlgebra.gl(n, p), n, f"gl({n})"
        row = _restricted_row(L, expected, cfg)
        ok &= all(row[k] for k in ("jacobson", "axioms", "power_span", "toral_verified")) and row["MT"] == expected
        rows.append(row)
    payload = {"algebra": label, "samples": cfg.extra["samples"]}
    counts = {r["q"]: r["nilpotent_count"] for r in rows if r["nilpotent_count"]}
    if len(counts) >= 2:
        est = ffcount.dimension_estimate(counts)
        predicted = rows[0]["dim"] - rows[0]["MT"]
        payload.update(nilpotent_exponent=est.exponent, predicted_exponent=predicted)
        ok &= est.exponent == predicted
    payload["status"] = "pass" if ok else "fail"
    cols = ["q", "dim", "MT", "expected_MT", "e", "exhaustive", "jacobson", "axioms", "power_span", "toral_verified",
            "nilpotent_count"]
    return Result(payload, rows, cols, ok)


COMMANDS = {
    "components": cmd_components,
    "bala-carter": cmd_bala_carter,
    "witness": cmd_witness,
    "exceptional": cmd_exceptional,
    "count": cmd_count,
    "restricted-check": cmd_restricted_check,
    "hilbert": cmd_hilbert,
}


# ---------------------------------------------------------------------------
# parsing and output


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (default: NILVAR_BUDGET or 2^26)")

    parser = _Parser(prog="nilvar", description="Nilpotent commuting varieties: checks and counts.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    for name in ("components", "bala-carter"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--type", required=True, dest="cartan_type", help="Cartan type such as E8 or B4")

    sp = sub.add_parser("witness", parents=[common])
    sp.add_argument("--partition", required=True)
    sp.add_argument("--kappa", type=int, choices=(0, 1), default=None, help="0 orthogonal, 1 symplectic; omit for gl")
    sp.add_argument("--prime", "--primes", dest="primes", default="17")

    sp = sub.add_parser("exceptional", parents=[common])
    sp.add_argument("scenario", choices=sorted(SCENARIOS))

    sp = sub.add_parser("count", parents=[common])
    sp.add_argument("object", choices=("nilpotent", "pairs", "unipotent-pairs", "hilbert"))
    sp.add_argument("n", type=int, help="matrix size n, or r for hilbert")
    sp.add_argument("--prime", "--primes", dest="primes", default="2,3")
    sp.add_argument("--method", choices=("naive", "stratified", "both"), default="both")

    sp = sub.add_parser("restricted-check", parents=[common])
    sp.add_argument("--partition", default=None, help="use the centralizer z(e) of this Jordan type")
    sp.add_argument("--n", type=int, default=None, help="use gl(n)")
    sp.add_argument("--prime", "--primes", dest="primes", default="2,3")
    sp.add_argument("--samples", type=int, default=100)

    sp = sub.add_parser("hilbert", parents=[common])
    sp.add_argument("--r", dest="n", type=int, required=True)
    sp.add_argument("--prime", "--primes", dest="primes", default="2,3")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    budget = args.budget if args.budget is not None else _default_budget()
    if budget <= 0:
        raise UsageError("budget must be positive")
    cfg = RunConfig(args.subcommand, fmt=args.format, seed=args.seed, budget=budget)
    cfg.cartan_type = getattr(args, "cartan_type", None)
    if getattr(args, "partition", None) is not None:
        cfg.partition = Partition.parse(args.partition)
    cfg.kappa = getattr(args, "kappa", None)
    if getattr(args, "primes", None) is not None:
        cfg.primes = _primes(args.primes)
    for key in ("scenario", "object", "n", "method", "samples"):
        if hasattr(args, key):
            cfg.extra[key] = getattr(args, key)
    n = cfg.extra.get("n")
    if n is not None and n < 1:
        raise UsageError("size must be positive")
    if cfg.subcommand == "hilbert" and n < 2:
        raise UsageError("hilbert needs r >= 2")
    if cfg.kappa is not None and 2 in cfg.primes:
        raise UsageError("forms need an odd prime")
    return cfg


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(cfg: RunConfig, res: Result) -> str:
    head = {"schema": SCHEMA, "command": cfg.subcommand, "seed": cfg.seed, **res.payload}
    if cfg.fmt == "json":
        if res.rows:
            head["rows"] = res.rows
        return json.dumps(head, sort_keys=True, indent=2)
    lines = [f"# {k}={_cell(v)}" for k, v in head.items() if not isinstance(v, (dict, list))]
    if res.rows:
        lines.append("\t".join(res.columns))
        lines += ["\t".join(_cell(r.get(c)) for c in res.columns) for r in res.rows]
    return "\n".join(lines)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        res = COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"nilvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PartitionError, RootSystemError, WitnessError, ffcount.CountError, restricted.RestrictedError,
            LinAlgError, ValueError) as exc:
        print(f"nilvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(cfg, res))
    return EXIT_OK if res.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
