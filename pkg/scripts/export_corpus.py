"""Regenerate the deterministic diagrams in corpus/, or check them with --check.

The random chains and the small negative fixture are hand-kept and left alone.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from bratteli.diagrams import builtin_diagram, format_diagram


@dataclass(frozen=True)
class ExportConfig:
    out_dir: Path = Path(__file__).resolve().parent.parent / "corpus"
    twin_sizes: tuple[int, ...] = (3, 4)
    prime_sizes: tuple[int, ...] = (2, 3)
    subsets_size: int = 3


def corpus_files(cfg: ExportConfig) -> dict[str, str]:
    files = {
        "example.bd": builtin_diagram("example-nonrealizable"),
        f"finite_subsets{cfg.subsets_size}.bd": builtin_diagram("finite-subsets", cfg.subsets_size),
        "disjoint_chains.bd": builtin_diagram("disjoint-chains"),
    }
    for n in cfg.twin_sizes:
        d = builtin_diagram("twin", n)
        # the two variants share one diagram
        files[f"twin{n}_A.bd"] = files[f"twin{n}_B.bd"] = d
    for n in cfg.prime_sizes:
        files[f"prime{n}.bd"] = builtin_diagram("prime", n)
    return {name: format_diagram(d) for name, d in files.items()}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", type=Path, default=ExportConfig.out_dir)
    p.add_argument("--check", action="store_true", help="compare instead of writing")
    args = p.parse_args(argv)
    cfg = ExportConfig(out_dir=args.out_dir)
    stale = 0
    for name, text in sorted(corpus_files(cfg).items()):
        path = cfg.out_dir / name
        if args.check:
            same = path.exists() and path.read_text() == text
            stale += not same
            print(f"{name:24s} {'ok' if same else 'STALE'}")
        else:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            print(f"wrote {path}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
