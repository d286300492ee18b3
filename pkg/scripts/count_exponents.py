"""Point counts over small prime fields and the leading exponent they suggest."""

import argparse
from dataclasses import dataclass

from nilvar.ffcount import (
    TSV_HEADER,
    CountError,
    count_commuting_nilpotent_pairs,
    count_nilpotent,
    dimension_estimate,
    hilbert_point_count,
)


@dataclass
class Config:
    primes: tuple[int, ...] = (2, 3)
    max_n: int = 3
    max_r: int = 3
    budget: int = 1 << 26


EXPECTED = {
    "nilpotent_matrices": lambda n: n * n - n,
    "nilpotent_pairs": lambda n: n * n - 1,
    "hilbert_points": lambda r: r - 1,
}


def _rows(kind, size, reports):
    est = dimension_estimate(reports)
    for rep in reports:
        rep.leading_exponent = est.exponent
        print(rep.tsv_row())
    return est.exponent, EXPECTED[kind](size)


def main(cfg: Config) -> None:
    print(TSV_HEADER)
    summary = []
    jobs = [("nilpotent_matrices", n, lambda n, q: count_nilpotent(n, q, cfg.budget)) for n in range(2, cfg.max_n + 1)]
    jobs += [("nilpotent_pairs", n, lambda n, q: count_commuting_nilpotent_pairs(n, q, "stratified", cfg.budget))
             for n in range(2, cfg.max_n + 1)]
    jobs += [("hilbert_points", r, lambda r, q: hilbert_point_count(r, q, budget=cfg.budget))
             for r in range(2, cfg.max_r + 1)]
    for kind, size, fn in jobs:
        try:
            reports = [fn(size, q) for q in cfg.primes]
        except CountError as exc:
            summary.append(f"# {kind} {size}: skipped ({exc})")
            continue
        got, want = _rows(kind, size, reports)
        summary.append(f"# {kind} {size}: fitted exponent {got}, dimension {want}")
    print("\n".join(summary))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="2,3")
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--max-r", type=int, default=Config.max_r)
    ap.add_argument("--budget", type=int, default=Config.budget)
    a = ap.parse_args()
    main(Config(tuple(int(x) for x in a.primes.split(",")), a.max_n, a.max_r, a.budget))
