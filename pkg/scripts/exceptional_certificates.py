"""Run the exceptional-type witness computations and write their certificates."""

import argparse
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from nilvar.exceptional import SCENARIOS


@dataclass
class Config:
    out_dir: Path = Path("results")
    scenarios: list[str] = field(default_factory=lambda: sorted(SCENARIOS))


def main(cfg: Config) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in cfg.scenarios:
        t0 = time.perf_counter()
        cert = SCENARIOS[name]()
        elapsed = time.perf_counter() - t0
        path = cfg.out_dir / f"{name}.json"
        path.write_text(json.dumps(cert.to_dict(), indent=2, sort_keys=True) + "\n")
        n_ok = sum(c.passed for c in cert.checks)
        print(f"{name}\tp={cert.p}\t{n_ok}/{len(cert.checks)} checks\t{elapsed:.1f}s\t{path}")
        for c in cert.checks:
            if not c.passed or c.detail:
                print(f"    {'ok ' if c.passed else 'FAIL'} {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
        failed += not cert.passed
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Config.out_dir)
    ap.add_argument("scenarios", nargs="*", help=f"subset of {sorted(SCENARIOS)} (default: all)")
    a = ap.parse_args()
    unknown = set(a.scenarios) - set(SCENARIOS)
    if unknown:
        ap.error(f"unknown scenarios: {sorted(unknown)}")
    cfg = Config(a.out_dir, a.scenarios or sorted(SCENARIOS))
    raise SystemExit(main(cfg))
