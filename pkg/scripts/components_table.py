"""Component counts and dimensions of the nilpotent commuting variety by type."""

import argparse
from dataclasses import dataclass

from nilvar.rootsys import component_count_and_dim, enumerate_distinguished, systems_up_to_rank


@dataclass
class Config:
    max_rank: int = 8
    diagrams: bool = False


def main(cfg: Config) -> None:
    print("type\tcomponents\tdim")
    for S in systems_up_to_rank(cfg.max_rank):
        count, dim = component_count_and_dim(S)
        print(f"{S.cartan_type}\t{count}\t{dim}")
        if cfg.diagrams:
            for J, d in enumerate_distinguished(S):
                print(f"\tJ={sorted(J)}\t{d}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=Config.max_rank)
    ap.add_argument("--diagrams", action="store_true")
    a = ap.parse_args()
    main(Config(a.max_rank, a.diagrams))
