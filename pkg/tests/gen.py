"""Seeded random diagram generators shared by the tests."""

from __future__ import annotations

import random

from bratteli.diagrams import parse_diagram, validate_diagram

from oracles import count_wirings, matrix_product


def diagram_text(dims, edges) -> str:
    out = [f"vertex {v} : " + " ".join(map(str, dims[v])) for v in dims]
    for src, dst, N in edges:
        out.append(f"edge {src} -> {dst} : " + " ; ".join(" ".join(map(str, r)) for r in N))
    return "\n".join(out) + "\n"


def random_chain(rng: random.Random, max_stages=4, max_size=8):
    """A valid chain diagram with block sizes at most ``max_size``."""
    while True:
        stages = rng.randint(1, max_stages)
        dims = {"s1": [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]}
        edges = []
        ok = True
        for t in range(2, stages + 1):
            prev = dims[f"s{t - 1}"]
            k = rng.randint(1, 3)
            N = [[rng.randint(0, 2) for _ in prev] for _ in range(k)]
            sizes = []
            for row in N:
                used = sum(m * n for m, n in zip(row, prev))
                sizes.append(max(used, 1) + rng.randint(0, 1))
            if max(sizes) > max_size:
                ok = False
                break
            dims[f"s{t}"] = sizes
            edges.append((f"s{t - 1}", f"s{t}", N))
        if ok:
            return parse_diagram(diagram_text(dims, edges))


def random_bowtie(rng: random.Random, max_top=8, max_mult=3):
    """Two bottoms d, e below two middles b, c below a top a.

    Middle block sizes are the maximum (not the sum) over the bottoms, so
    the images of d and e must overlap; that is what makes non-realizable
    instances appear.  Returns ``None`` when the draw is not a valid diagram.
    """
    k = {v: rng.randint(1, 2) for v in "bcde"}
    dims = {v: [rng.randint(1, 3) for _ in range(k[v])] for v in "de"}

    def rm(r, c):
        return [[rng.randint(0, max_mult) for _ in range(c)] for _ in range(r)]

    N = {(m, x): rm(k[m], k[x]) for m in "bc" for x in "de"}
    for m in "bc":
        dims[m] = [
            max(max(sum(N[(m, x)][i][j] * dims[x][j] for j in range(k[x])) for x in "de"), 1)
            + (rng.random() < 0.2)
            for i in range(k[m])
        ]
    Nab, Nac = rm(1, k["b"]), rm(1, k["c"])
    if any(matrix_product(Nab, N[("b", x)]) != matrix_product(Nac, N[("c", x)]) for x in "de"):
        return None
    top = max(
        sum(a * b for a, b in zip(Nab[0], dims["b"])),
        sum(a * b for a, b in zip(Nac[0], dims["c"])),
    )
    if not 1 <= top <= max_top:
        return None
    dims["a"] = [top]
    edges = [(x, m, N[(m, x)]) for m in "bc" for x in "de"] + [("b", "a", Nab), ("c", "a", Nac)]
    d = parse_diagram(diagram_text(dims, edges))
    return d if validate_diagram(d).ok else None


def brute_cost(d) -> int:
    """Number of wiring combinations the brute-force oracle would try."""
    total = 1
    for mu, lam in d.poset.hasse_edges():
        total *= count_wirings(d.dims[lam], d.dims[mu], d.mult(mu, lam))
    return total


def bowtie_corpus(seed: int, count: int, max_cost: int | None = None, **kw):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_bowtie(rng, **kw)
        if d is None:
            continue
        if max_cost is not None and brute_cost(d) > max_cost:
            continue
        out.append(d)
    return out


# non-realizable instances small enough for the brute-force oracle
SMALL_NEGATIVE = """\
vertex d : 1
vertex e : 1
vertex b : 1 2
vertex c : 2
vertex a : 5
edge d -> b : 1 ; 0
edge e -> b : 0 ; 1
edge d -> c : 1
edge e -> c : 2
edge b -> a : 1 2
edge c -> a : 1
"""

MEDIUM_NEGATIVE = """\
vertex d : 1
vertex e : 1
vertex b : 2 1
vertex c : 2 2
vertex a : 6
edge d -> b : 0 ; 1
edge e -> b : 2 ; 0
edge d -> c : 0 ; 1
edge e -> c : 1 ; 2
edge b -> a : 2 2
edge c -> a : 0 2
"""
