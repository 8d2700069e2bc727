"""Time the realizability search on the corpus and on seeded random bowties.

Each instance is run with pruning on and off; the verdicts must agree
whenever both runs finish inside the budget.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from bratteli.diagrams import parse_diagram
from bratteli.search import BUDGET, _Realizer

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from gen import bowtie_corpus  # noqa: E402


@dataclass(frozen=True)
class BenchConfig:
    corpus_dir: Path = ROOT / "corpus"
    bowtie_seed: int = 11
    bowtie_count: int = 40
    max_top: int = 12
    budget: int = 200_000


def timed(d, budget, pruned):
    t0 = time.perf_counter()
    res = _Realizer(d, budget, census=pruned, symmetry=pruned).run()
    return res, time.perf_counter() - t0


def instances(cfg: BenchConfig):
    for path in sorted(cfg.corpus_dir.glob("*.bd")):
        yield path.stem, parse_diagram(path.read_text())
    for i, d in enumerate(bowtie_corpus(seed=cfg.bowtie_seed, count=cfg.bowtie_count, max_top=cfg.max_top)):
        yield f"bowtie{i}", d


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--budget", type=int, default=BenchConfig.budget)
    p.add_argument("--bowties", type=int, default=BenchConfig.bowtie_count)
    p.add_argument("--seed", type=int, default=BenchConfig.bowtie_seed)
    args = p.parse_args(argv)
    cfg = BenchConfig(budget=args.budget, bowtie_count=args.bowties, bowtie_seed=args.seed)

    print(f"{'instance':20s} {'verdict':24s} {'nodes':>9s} {'sec':>7s} {'nodes(off)':>11s} {'sec(off)':>8s}")
    mismatches = 0
    for name, d in instances(cfg):
        on, t_on = timed(d, cfg.budget, True)
        off, t_off = timed(d, cfg.budget, False)
        if BUDGET not in (on.verdict, off.verdict) and on.verdict != off.verdict:
            mismatches += 1
            name += " !"
        print(f"{name:20s} {on.verdict:24s} {on.nodes:9d} {t_on:7.2f} {off.nodes:10d}{"+" if off.verdict == BUDGET else " "} {t_off:8.2f}")
    print(f"verdict mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
