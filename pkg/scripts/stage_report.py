"""Print the stage algebras of the twin and prime constructions.

For every subset the report lists the summand sizes, the dimension and the
exact checks that apply to that stage.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from itertools import combinations

from bratteli.diagrams import is_prime_diagram, point_names, subset_name
from bratteli.prime import (
    PrimeAmbient,
    check_cut_down,
    check_orthogonal_levels,
    check_product_formula,
    check_trichotomy,
    expected_stage_dimension,
    stage_algebra,
    stage_diagram,
)
from bratteli.twin import (
    GroundSet,
    TwinAmbient,
    build_twin_stage,
    check_splitting,
    countable_iso,
    generator_identities,
    quotient_by_commutators,
)


@dataclass(frozen=True)
class ReportConfig:
    twin_size: int = 4
    prime_size: int = 3
    span_rank: bool = False  # recompute prime stage dimensions by elimination


def twin_report(cfg: ReportConfig) -> int:
    amb = TwinAmbient(GroundSet(point_names(cfg.twin_size)))
    bad = len(generator_identities(amb))
    print(f"twin, {cfg.twin_size} points: generator identity failures {bad}")
    for k in range(1, cfg.twin_size + 1):
        for lam in combinations(amb.ground.points, k):
            row = []
            for variant in ("A", "B"):
                st = build_twin_stage(amb, variant, lam)
                q = quotient_by_commutators(st)
                line = f"{variant}: dim {st.dimension:3d} quotient {q.quotient_dimension}"
                if variant == "B":
                    split = check_splitting(st)
                    bad += not split
                    line += f" splits {'yes' if split else 'NO'}"
                row.append(line)
            sizes = build_twin_stage(amb, "A", lam).algebra.sizes
            print(f"  {subset_name(lam):14s} sizes {str(sizes):22s} " + " | ".join(row))
    iso = countable_iso(amb)
    print(f"  countable identification A -> B: {'ok' if iso.ok else 'FAILED'}")
    return bad + (not iso.ok)


def prime_report(cfg: ReportConfig) -> int:
    amb = PrimeAmbient(point_names(cfg.prime_size))
    print(f"prime, {cfg.prime_size} points")
    bad = 0
    for name, check in [
        ("product formula", check_product_formula),
        ("trichotomy", check_trichotomy),
        ("orthogonal levels", check_orthogonal_levels),
        ("cut-down", check_cut_down),
    ]:
        fails = check(amb)
        bad += len(fails)
        print(f"  {name:18s} failures {len(fails)}")
    for k in range(cfg.prime_size + 1):
        mu = point_names(k)
        t0 = time.perf_counter()
        st = stage_algebra(amb, mu)
        extra = f" span rank {st.span_rank()}" if cfg.span_rank else ""
        ok = st.dimension == expected_stage_dimension(k)
        bad += not ok
        print(
            f"  {subset_name(mu):14s} summands {len(st.algebra.sizes):2d} dim {st.dimension:4d}"
            f" expected {expected_stage_dimension(k):4d}{extra} ({time.perf_counter() - t0:.2f}s)"
        )
    d = stage_diagram(amb)
    print(f"  stage diagram prime: plain {is_prime_diagram(d)}, truncated {is_prime_diagram(d, truncated=True)}")
    return bad


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--twin-size", type=int, default=ReportConfig.twin_size)
    p.add_argument("--prime-size", type=int, default=ReportConfig.prime_size)
    p.add_argument("--span-rank", action="store_true")
    args = p.parse_args(argv)
    cfg = ReportConfig(args.twin_size, args.prime_size, args.span_rank)
    bad = twin_report(cfg) + prime_report(cfg)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
