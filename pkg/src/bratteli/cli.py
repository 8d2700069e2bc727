"""Command-line interface: ``bratteli <command> ...``.

Exit status is 0 for pass/true/witness, 1 for fail/false/no witness and 2 for
usage or parse errors.  Output depends only on the inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable

from .diagrams import (
    BratteliDiagram,
    DiagramParseError,
    builtin_diagram,
    diagrams_isomorphic,
    format_diagram,
    is_prime_diagram,
    parse_diagram,
    point_names,
    prime_witness_failure,
    subset_name,
    validate_diagram,
)
from .homs import matvec
from .kzero import ColimitClass, K0Stage, block_classes, positive_and_scale, unit_class
from .search import search_realization

MAX_PRIME_SIZE = 4
MAX_TWIN_SIZE = 6


class UsageError(Exception):
    pass


class Report:
    """Human-readable lines, or ``key=value`` lines in porcelain mode."""

    def __init__(self, porcelain: bool, out=None):
        self.porcelain = porcelain
        self.out = out or sys.stdout

    def text(self, line: str = "") -> None:
        if not self.porcelain:
            print(line, file=self.out)

    def kv(self, key: str, value, label: str | None = None) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        if self.porcelain:
            print(f"{key}={value}", file=self.out)
        else:
            print(f"{label or key}: {value}", file=self.out)

    def check(self, key: str, ok: bool, label: str | None = None) -> bool:
        if self.porcelain:
            print(f"{key}={'pass' if ok else 'fail'}", file=self.out)
        else:
            print(f"{label or key}: {'PASS' if ok else 'FAIL'}", file=self.out)
        return ok


def _load(path: str) -> BratteliDiagram:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse_diagram(text)
    except DiagramParseError as e:
        raise UsageError(f"{path}: {e}") from None


def _mat(N) -> str:
    return " ; ".join(" ".join(str(x) for x in row) for row in N) or "(empty)"


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# diagram commands


def _report_validation(rep: Report, d: BratteliDiagram) -> bool:
    res = validate_diagram(d)
    rep.kv("vertices", len(d.vertices))
    rep.kv("comparable_pairs", len(d.poset.comparable_pairs()))
    for v in res.violations:
        rep.kv("violation", str(v))
    return rep.check("valid", res.ok, "validation")


def cmd_validate(args, rep: Report) -> int:
    d = _load(args.file)
    return 0 if _report_validation(rep, d) else 1


def _report_search(rep: Report, d: BratteliDiagram, budget: int) -> bool:
    res = search_realization(d, budget)
    rep.kv("verdict", res.verdict)
    rep.text(f"  {res.describe()}")
    rep.kv("nodes", res.nodes)
    if res.found:
        sys_ = res.system
        for mu, lam in d.poset.hasse_edges():
            rep.kv(f"map.{lam}.{mu}", sys_.map(mu, lam).describe(), f"wiring {lam} -> {mu}")
        functorial = not sys_.functoriality_violations()
        roundtrip = all(sys_.map(mu, lam).multiplicity == d.mult(mu, lam) for mu, lam in d.poset.comparable_pairs())
        rep.check("functoriality", functorial)
        rep.check("multiplicity_roundtrip", roundtrip, "multiplicity round trip")
        return functorial and roundtrip
    return False


def cmd_realize(args, rep: Report) -> int:
    d = _load(args.file)
    if args.max_nodes < 1:
        raise UsageError("--max-nodes must be positive")
    if not _report_validation(rep, d):
        return 1
    return 0 if _report_search(rep, d, args.max_nodes) else 1


def _report_prime(rep: Report, d: BratteliDiagram, truncated: bool) -> bool:
    prime = is_prime_diagram(d, truncated)
    rep.kv("prime", prime)
    if not prime:
        (l1, i), (l2, j) = prime_witness_failure(d, truncated)
        rep.kv("witness", f"{l1}[{i + 1}] {l2}[{j + 1}]", "never co-supported")
    return prime


def cmd_prime(args, rep: Report) -> int:
    d = _load(args.file)
    if not _report_validation(rep, d):
        return 1
    rep.kv("mode", "truncated" if args.truncated else "plain")
    return 0 if _report_prime(rep, d, args.truncated) else 1


def cmd_iso(args, rep: Report) -> int:
    d1, d2 = _load(args.file1), _load(args.file2)
    ok = True
    for tag, d in (("first", d1), ("second", d2)):
        res = validate_diagram(d)
        ok = rep.check(f"valid.{tag}", res.ok, f"validation ({tag})") and ok
    if not ok:
        return 1
    iso = diagrams_isomorphic(d1, d2)
    rep.kv("isomorphic", iso is not None)
    if iso is None:
        return 1
    for v in sorted(iso.vertex_map):
        perm = " ".join(str(b + 1) for b in iso.block_maps[v])
        if rep.porcelain:
            rep.kv(f"vertex.{v}", f"{iso.vertex_map[v]} [{perm}]")
        else:
            rep.text(f"  {v} -> {iso.vertex_map[v]}  blocks [{perm}]")
    return 0


def cmd_k0(args, rep: Report) -> int:
    d = _load(args.file)
    if args.stage not in d.dims:
        raise UsageError(f"unknown vertex {args.stage!r}")
    if not _report_validation(rep, d):
        return 1
    v = args.stage
    st = K0Stage(d.dims[v])
    rep.kv("stage", v)
    rep.kv("rank", st.rank)
    rep.kv("dims", _vec(st.dims), "dimension vector")
    for mu in d.poset.above(v):
        rep.kv(f"connect.{mu}", _mat(d.mult(mu, v)), f"connecting matrix to {mu}")
    classes = [(f"block{i + 1}", c) for i, c in enumerate(block_classes(d, v))]
    classes.append(("unit", unit_class(d, v)))
    classes.append(("neg_unit", ColimitClass(v, tuple(-x for x in d.dims[v]))))
    for name, c in classes:
        pos, scale = positive_and_scale(d, c)
        reps = " ".join(f"{mu}:{_vec(matvec(d.mult(mu, v), c.vector))}" for mu in d.poset.above(v))
        rep.kv(f"class.{name}", f"{_vec(c.vector)} positive={str(pos).lower()} scale={str(scale).lower()}", f"class {name}")
        if reps:
            rep.text(f"    images {reps}")
    return 0


# ---------------------------------------------------------------------------
# demos


def _export(args, name: str, d: BratteliDiagram, rep: Report) -> None:
    if args.export_dir:
        path = Path(args.export_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / name).write_text(format_diagram(d))
        rep.kv(f"export.{name}", name, "exported")


def demo_nonrealizable(args, rep: Report) -> int:
    d = builtin_diagram("example-nonrealizable")
    rep.text(format_diagram(d, edges="hasse").rstrip())
    rep.text()
    _export(args, "example.bd", d, rep)
    if not _report_validation(rep, d):
        return 1
    rep.kv("N_ab*N_bd", _mat(_prod(d, "a", "b", "d")))
    rep.kv("N_ac*N_cd", _mat(_prod(d, "a", "c", "d")))
    rep.kv("N_ad", _mat(d.mult("a", "d")))
    rep.kv("prime", is_prime_diagram(d))
    return 0 if _report_search(rep, d, args.max_nodes) else 1


def _prod(d, a, b, c):
    from .homs import matmul

    return matmul(d.mult(a, b), d.mult(b, c), inner=len(d.dims[b]))


def demo_twin(args, rep: Report) -> int:
    from .exactalg import NotClosedError, check_closed
    from .twin import (
        GroundSet,
        TwinAmbient,
        build_twin_stage,
        check_splitting,
        countable_iso,
        generator_identities,
        inclusion_wiring,
        quotient_by_commutators,
        twin_bratteli_data,
        twin_stages,
    )

    n = args.size
    if not 2 <= n <= MAX_TWIN_SIZE:
        raise UsageError(f"twin size must be between 2 and {MAX_TWIN_SIZE}")
    amb = TwinAmbient(GroundSet(point_names(n)))
    rep.kv("ground", " ".join(amb.ground.points))
    rep.kv("ambient", str(amb.algebra), "ambient blocks (pairs, then tails)")
    ok = rep.check("generator_identities", not generator_identities(amb), "p_x p_y = e11 and q_x q_y = 0")

    stages = {v: twin_stages(amb, v) for v in ("A", "B")}
    shapes = True
    for lam, st in stages["A"].items():
        want = (2,) * len(st.pairs) + (1,) * len(lam)
        for v in ("A", "B"):
            s = stages[v][lam]
            good = s.algebra.sizes == want and not s.units.verify()
            if args.full_checks:
                try:
                    check_closed(s.span)
                    good = good and sorted(k for _, k in s.computed_decomposition()) == sorted(want)
                except NotClosedError:
                    good = False
            shapes = shapes and good
        rep.text(f"  stage {subset_name(lam)}: {st.algebra}")
    ok = rep.check("stage_shapes", shapes, "stage decompositions") and ok

    same = True
    for a in stages["A"]:
        for b in stages["A"]:
            if set(a) < set(b):
                wa = inclusion_wiring(stages["A"][a], stages["A"][b])
                wb = inclusion_wiring(stages["B"][a], stages["B"][b])
                same = same and wa.multiplicity == wb.multiplicity
    ok = rep.check("inclusion_multiplicities", same, "A and B inclusion multiplicities agree") and ok

    dA, dB = twin_bratteli_data(amb, "A"), twin_bratteli_data(amb, "B")
    _export(args, f"twin{n}_A.bd", dA, rep)
    _export(args, f"twin{n}_B.bd", dB, rep)
    ok = rep.check("diagrams_valid", validate_diagram(dA).ok and validate_diagram(dB).ok, "diagrams valid") and ok
    ok = rep.check("diagrams_equal", dA.dims == dB.dims and dA.mults == dB.mults, "A and B diagrams equal") and ok
    ok = rep.check("diagrams_isomorphic", diagrams_isomorphic(dA, dB) is not None, "A and B diagrams isomorphic") and ok

    quot = True
    for v in ("A", "B"):
        for lam, st in stages[v].items():
            q = quotient_by_commutators(st)
            quot = quot and q.ideal_blocks == frozenset(range(len(st.pairs))) and len(q.quotient_sizes) == len(lam)
            quot = quot and all(q.generator_images[x] == tuple(int(y == x) for y in lam) for x in lam)
    ok = rep.check("commutator_quotient", quot, "commutator ideal = pair blocks, pi(generator) = delta") and ok
    top = build_twin_stage(amb, "B", amb.ground.points)
    ok = rep.check("splitting_B", check_splitting(top), "sigma_B splits the quotient") and ok
    iso = countable_iso(amb)
    ok = rep.check("countable_iso", iso.ok, "phi: A -> B is a *-isomorphism fixing p_x1") and ok
    rep.text("  not certified here: non-isomorphism of A and B needs an uncountable point set")
    return 0 if ok else 1


def demo_prime(args, rep: Report) -> int:
    from .prime import (
        CapacityError,
        PrimeAmbient,
        check_cut_down,
        check_orthogonal_levels,
        check_product_formula,
        check_trichotomy,
        expected_stage_dimension,
        hereditary_check,
        ideal_intersection_check,
        locate_summand_ideal,
        stage_algebra,
        stage_diagram,
    )

    n = args.size
    if not 1 <= n <= MAX_PRIME_SIZE:
        raise UsageError(f"prime size must be between 1 and {MAX_PRIME_SIZE}")
    amb = PrimeAmbient(point_names(n))
    rep.kv("ground", " ".join(amb.points))
    ok = True
    dims = True
    for mu in amb.blocks:
        st = stage_algebra(amb, mu)
        want = expected_stage_dimension(len(mu))
        good = st.dimension == want == st.span_rank() and not st.units.verify()
        if args.full_checks or n <= 3:
            good = good and sorted(k for _, k in st.computed_decomposition()) == sorted(st.algebra.sizes)
        dims = dims and good
        rep.text(f"  stage {subset_name(mu)}: dim {st.dimension} = {st.algebra}")
    ok = rep.check("stage_dimensions", dims, "stage dimensions = sum C(n,k)(k!)^2") and ok

    if n <= 3 or args.full_checks:
        ok = rep.check("product_formula", not check_product_formula(amb), "f f' product formula") and ok
        ok = rep.check("trichotomy", not check_trichotomy(amb), "N_lam N_mu trichotomy") and ok
        ok = rep.check("orthogonal_levels", not check_orthogonal_levels(amb), "equal-size N_lam orthogonal") and ok
        ok = rep.check("cut_down", not check_cut_down(amb), "a -> a p_lam' injective") and ok
    else:
        rep.kv("lemma_sweeps", "skipped", "lemma sweeps (use --full-checks)")

    subs = amb.blocks
    her = all(
        hereditary_check(amb, mu, l0, lam)
        for mu in subs
        for lam in subs
        if set(lam) <= set(mu)
        for l0 in subs
        if set(l0) <= set(lam)
    )
    ok = rep.check("hereditary", her, "ideal of N_lam0 contains N_lam") and ok
    inter = all(ideal_intersection_check(amb, a, b) for a in subs for b in subs)
    ok = rep.check("ideal_intersection", inter, "ideals of N_lam1, N_lam2 meet in N_lam1+lam2") and ok
    located = skipped = 0
    for mu in subs:
        for f in stage_algebra(amb, mu).span:
            try:
                locate_summand_ideal(amb, mu, f)
                located += 1
            except CapacityError:
                skipped += 1
    rep.kv("located", located, "nonzero ideals located")
    rep.kv("capacity_skipped", skipped, "skipped (no fresh point)")

    d = stage_diagram(amb)
    _export(args, f"prime{n}.bd", d, rep)
    ok = rep.check("diagram_valid", validate_diagram(d).ok, "stage diagram valid") and ok
    ok = _report_prime_pair(rep, d) and ok
    rep.text("  not certified here: non-primitivity needs an uncountable point set")
    return 0 if ok else 1


def _report_prime_pair(rep: Report, d: BratteliDiagram) -> bool:
    plain = is_prime_diagram(d)
    rep.kv("prime_plain", plain, "prime (plain, fails at the top vertex of any truncation)")
    trunc = is_prime_diagram(d, truncated=True)
    return rep.check("prime_truncated", trunc, "prime (below the truncation boundary)")


def cmd_demo(args, rep: Report) -> int:
    return {"nonrealizable": demo_nonrealizable, "twin": demo_twin, "prime": demo_prime}[args.which](args, rep)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bratteli", description="Bratteli diagrams over finite posets.")
    p.add_argument("--porcelain", action="store_true", help="emit key=value lines")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the dimension and composition conditions")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("realize", help="search for an exactly commuting wiring system")
    s.add_argument("file")
    s.add_argument("--max-nodes", type=int, default=10**7)
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("prime", help="test diagram primeness")
    s.add_argument("file")
    s.add_argument("--truncated", action="store_true", help="ignore pairs meeting only at the top")
    s.set_defaults(func=cmd_prime)

    s = sub.add_parser("iso", help="search for a diagram isomorphism")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("k0", help="K_0 data of one stage")
    s.add_argument("file")
    s.add_argument("--stage", required=True)
    s.set_defaults(func=cmd_k0)

    s = sub.add_parser("demo", help="built-in constructions")
    s.add_argument("which", choices=["twin", "prime", "nonrealizable"])
    s.add_argument("--size", type=int, default=3)
    s.add_argument("--full-checks", action="store_true")
    s.add_argument("--max-nodes", type=int, default=10**7)
    s.add_argument("--export-dir", help="write the demo diagrams here")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = Report(args.porcelain, out)
    handler: Callable = args.func
    try:
        return handler(args, rep)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
