"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial

from bratteli.diagrams import BratteliDiagram
from bratteli.homs import Wiring, compose_homs


def all_wirings(source, target, N):
    """Every wiring with multiplicity matrix N, by brute enumeration."""
    per_block = []
    for j, n in enumerate(target.sizes):
        tokens = [(i, r) for i, m in enumerate(N[j]) for _ in range(m) for r in range(source.sizes[i])]
        tokens += [None] * (n - len(tokens))
        layouts = set()
        for arr in set(permutations(tokens)):
            # occurrences of coordinate 0 fix copy order; match every other coordinate to them
            choices = []
            for i, m in enumerate(N[j]):
                if not m:
                    continue
                for r in range(1, source.sizes[i]):
                    choices.append((i, r, list(permutations(range(m)))))
            for pick in product(*[c[2] for c in choices]):
                assign = {(i, r): perm for (i, r, _), perm in zip(choices, pick)}
                seen: dict = {}
                block = []
                for tok in arr:
                    if tok is None:
                        block.append(None)
                        continue
                    i, r = tok
                    k = seen.get(tok, 0)
                    seen[tok] = k + 1
                    c = k if r == 0 else assign[(i, r)][k]
                    block.append((i, c, r))
                layouts.add(tuple(block))
        per_block.append(sorted(layouts, key=repr))
    out = {Wiring(source, target, combo) for combo in product(*per_block)}
    return sorted(out, key=lambda w: repr(w.layout))


def brute_realizable(d: BratteliDiagram) -> bool:
    """Try every wiring on every Hasse edge; check all paths agree."""
    P = d.poset
    edges = [(lam, mu) for mu, lam in P.hasse_edges()]
    options = [all_wirings(d.algebra(lam), d.algebra(mu), d.mult(mu, lam)) for lam, mu in edges]
    order = P.topological_order()
    for combo in product(*options):
        w = {(mu, lam): x for (lam, mu), x in zip(edges, combo)}
        composite: dict = {}
        ok = True
        for mu in order:
            for lam, m2 in edges:
                if m2 != mu:
                    continue
                e = w[(mu, lam)]
                cands = [((mu, lam), e)]
                for kappa in P.below(lam):
                    cands.append(((mu, kappa), compose_homs(e, composite[(lam, kappa)])))
                for key, val in cands:
                    if key in composite and composite[key] != val:
                        ok = False
                        break
                    composite[key] = val
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def count_wirings(source_sizes, target_sizes, N) -> int:
    """Closed form for the number of distinct wirings with multiplicities N."""
    total = 1
    for j, n in enumerate(target_sizes):
        used = sum(m * s for m, s in zip(N[j], source_sizes))
        ways = factorial(n) // factorial(n - used)
        for m, s in zip(N[j], source_sizes):
            ways //= factorial(m)
        total *= ways
    return total


def stage_dimension_formula(n: int) -> int:
    return sum(comb(n, k) * factorial(k) ** 2 for k in range(n + 1))


def dense_rank(rows) -> int:
    """Gaussian elimination over Fraction on dense rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def dense(element) -> list:
    """Flatten an element into a dense coordinate row (real parts only suffice for 0/1 data)."""
    alg = element.algebra
    out = []
    for b, n in enumerate(alg.sizes):
        for r in range(n):
            for c in range(n):
                out.append(element.entries.get((b, r, c), 0))
    return out


def matrix_product(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]
