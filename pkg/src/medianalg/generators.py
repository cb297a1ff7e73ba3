"""Constructors for the standard example algebras and the random test corpus.

Random generation uses Python's ``random.Random`` (Mersenne Twister), which is
reproducible across platforms for a fixed 64-bit seed; the seed is recorded in
the provenance of every randomly generated algebra.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from . import thresholds
from .bits import full_mask, iter_bits, mask_of
from .core import MedianAlgebra, subalgebra_closure, restrict, verify_axioms
from .errors import MalformedInputError, PreconditionError, ThresholdError


def _maj3(x: int, y: int, z: int) -> int:
    return (x & y) | (y & z) | (x & z)


def _mid3(x: int, y: int, z: int) -> int:
    return sorted((x, y, z))[1]


def gen_hypercube(d: int) -> MedianAlgebra:
    """Boolean d-cube; element ids are the vertex bit patterns, median is
    bitwise majority.  Materialised up to the table limit, rule-backed above."""
    if d < 0:
        raise PreconditionError("hypercube dimension must be >= 0")
    n = 1 << d
    prov = {"kind": "hypercube", "d": d}
    if n <= thresholds.max_table():
        table = [_maj3(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
        return MedianAlgebra(n, table=table, provenance=prov)
    return MedianAlgebra(n, rule=_maj3, provenance=prov)


def gen_chain(k: int) -> MedianAlgebra:
    """Linear order 0 < 1 < ... < k-1 with the betweenness median."""
    if k < 1:
        raise PreconditionError("chain length must be >= 1")
    table = [_mid3(x, y, z) for x in range(k) for y in range(k) for z in range(k)]
    return MedianAlgebra(k, table=table, provenance={"kind": "chain", "k": k})


def grid_coords(dims: Sequence[int], x: int) -> tuple[int, ...]:
    coords = []
    for d in reversed(dims):
        x, c = divmod(x, d)
        coords.append(c)
    return tuple(reversed(coords))


def grid_id(dims: Sequence[int], coords: Sequence[int]) -> int:
    x = 0
    for d, c in zip(dims, coords):
        x = x * d + c
    return x


def gen_grid(dims: Sequence[int]) -> MedianAlgebra:
    """Product of chains with the coordinate-wise median (last axis fastest)."""
    dims = list(dims)
    if not dims or any(d < 1 for d in dims):
        raise PreconditionError("grid axes must all have length >= 1")
    n = 1
    for d in dims:
        n *= d

    def rule(x: int, y: int, z: int) -> int:
        cx, cy, cz = grid_coords(dims, x), grid_coords(dims, y), grid_coords(dims, z)
        return grid_id(dims, tuple(_mid3(a, b, c) for a, b, c in zip(cx, cy, cz)))

    prov = {"kind": "grid", "dims": dims}
    if n <= thresholds.max_table():
        table = [rule(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
        return MedianAlgebra(n, table=table, provenance=prov)
    return MedianAlgebra(n, rule=rule, provenance=prov)


def gen_wedge(dims: Sequence[int]) -> MedianAlgebra:
    """Cubes of the given dimensions glued at their all-zeros vertices.

    Element ids: the wedge point o is 0; cube i then contributes its nonzero
    vertices in increasing bit-pattern order.  Median case rule: all three in
    one cube -> cube median; two in one cube -> cube median with o as third
    point; three distinct cubes -> o.
    """
    dims = list(dims)
    if not dims or any(d < 1 for d in dims):
        raise PreconditionError("wedge cube dimensions must all be >= 1")
    sizes = [(1 << d) - 1 for d in dims]
    n = 1 + sum(sizes)
    limit = thresholds.max_table()
    if n > limit:
        raise ThresholdError(f"wedge carrier {n} exceeds the table limit {limit}")
    offsets = []
    off = 1
    for s in sizes:
        offsets.append(off)
        off += s

    def cube_of(e: int) -> tuple[int, int]:
        """(cube index, vertex bits); o maps to (-1, 0)."""
        if e == 0:
            return -1, 0
        for i, o in enumerate(offsets):
            if o <= e < o + sizes[i]:
                return i, e - o + 1
        raise PreconditionError(f"wedge id {e} out of range")

    def encode(cube: int, bits: int) -> int:
        return 0 if bits == 0 else offsets[cube] + bits - 1

    def rule(x: int, y: int, z: int) -> int:
        parts = [cube_of(x), cube_of(y), cube_of(z)]
        cubes = {c for c, _ in parts if c >= 0}
        if len(cubes) <= 1:
            c = cubes.pop() if cubes else -1
            if c < 0:
                return 0
            bx, by, bz = (b for _, b in parts)
            return encode(c, _maj3(bx, by, bz))
        for c in sorted(cubes):
            inside = [b for ci, b in parts if ci == c]
            if len(inside) == 2:
                return encode(c, _maj3(inside[0], inside[1], 0))
        return 0

    prov = {"kind": "wedge", "dims": dims}
    table = [rule(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
    return MedianAlgebra(n, table=table, provenance=prov)


def gen_random_subalgebra(d: int, points: int, seed: int) -> MedianAlgebra:
    """Median closure of ``points`` random vertices of the d-cube.

    Deterministic per seed (Mersenne Twister).  The induced algebra is
    returned with dense re-indexed ids.
    """
    if d > 6:
        raise ThresholdError("random subalgebra generation capped at d <= 6")
    if points < 1:
        raise PreconditionError("need at least one seed point")
    cube = gen_hypercube(d)
    rng = random.Random(seed)
    points = min(points, cube.n)
    seeds = sorted(rng.sample(range(cube.n), points))
    closure = subalgebra_closure(cube, mask_of(seeds))
    sub, old_ids = restrict(cube, closure)
    sub.provenance = {"kind": "closure", "ambient_d": d, "points": seeds,
                      "seed": seed, "vertices": old_ids}
    return sub


def import_median_graph(n: int, edges: Sequence[tuple[int, int]]) -> MedianAlgebra:
    """Build the algebra of a median graph from its edge list.

    Uses graph-distance intervals; every triple must have a unique common
    interval point, which becomes its median.  Rejects non-median graphs
    naming the first bad triple, then runs the axiom scanner as a gate.
    """
    if n < 1:
        raise MalformedInputError("graph must have at least one vertex")
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise MalformedInputError(f"bad edge ({u},{v})")
        adj[u].add(v)
        adj[v].add(u)
    # BFS all-pairs distances
    INF = n + 1
    dist = [[INF] * n for _ in range(n)]
    for s in range(n):
        row = dist[s]
        row[s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if row[v] == INF:
                        row[v] = d
                        nxt.append(v)
            frontier = nxt
    if any(dist[0][v] == INF for v in range(n)):
        raise MalformedInputError("graph is not connected")

    interval_masks = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            dxy = dist[x][y]
            mask = 0
            for z in range(n):
                if dist[x][z] + dist[z][y] == dxy:
                    mask |= 1 << z
            interval_masks[x][y] = mask

    table = [0] * n ** 3
    for x in range(n):
        for y in range(x, n):
            common_xy = interval_masks[x][y]
            for z in range(y, n):
                inter = common_xy & interval_masks[y][z] & interval_masks[x][z]
                if inter.bit_count() != 1:
                    raise MalformedInputError(
                        f"not a median graph: triple ({x},{y},{z}) has "
                        f"{inter.bit_count()} common interval points")
                w = (inter & -inter).bit_length() - 1
                for a, b, c in ((x, y, z), (x, z, y), (y, x, z),
                                (y, z, x), (z, x, y), (z, y, x)):
                    table[(a * n + b) * n + c] = w
    A = MedianAlgebra(n, table=table,
                      provenance={"kind": "graph", "n": n,
                                  "edges": sorted(tuple(sorted(e)) for e in edges)})
    report = verify_axioms(A)
    if not report.ok:
        raise MalformedInputError(
            f"graph-induced table fails axiom {report.axiom} at {report.witness}")
    return A


def generate(kind: str, params: dict) -> MedianAlgebra:
    """Dispatch a GeneratorSpec descriptor to its constructor."""
    if kind == "hypercube":
        d = int(params["d"])
        if not (1 <= d <= 6):
            raise PreconditionError("hypercube generator accepts 1 <= d <= 6")
        return gen_hypercube(d)
    if kind == "chain":
        return gen_chain(int(params["k"]))
    if kind == "grid":
        return gen_grid([int(d) for d in params["dims"]])
    if kind == "wedge":
        return gen_wedge([int(d) for d in params["dims"]])
    if kind == "product":
        left = generate(params["left"]["kind"], params["left"]["params"])
        right = generate(params["right"]["kind"], params["right"]["params"])
        from .core import product
        return product(left, right)
    if kind == "closure":
        return gen_random_subalgebra(int(params["d"]), int(params["points"]),
                                     int(params["seed"]))
    if kind == "graph":
        return import_median_graph(int(params["n"]),
                                   [tuple(e) for e in params["edges"]])
    raise MalformedInputError(f"unknown generator kind {kind!r}")


# -- the shared test corpus ---------------------------------------------------

def corpus_small(max_n: int = 12, minimum: int = 50) -> list[tuple[str, MedianAlgebra]]:
    """At least ``minimum`` named algebras with carrier size <= max_n.

    Deterministic: named families first, then seeded random hypercube
    subalgebras until the quota is met.
    """
    out: list[tuple[str, MedianAlgebra]] = []

    def add(name, A):
        if A.n <= max_n:
            out.append((name, A))

    for k in range(1, 9):
        add(f"chain({k})", gen_chain(k))
    for d in range(1, 4):
        add(f"hypercube({d})", gen_hypercube(d))
    for dims in ([2, 3], [2, 4], [2, 5], [2, 6], [3, 3], [3, 4], [2, 2, 3]):
        add("grid(" + ",".join(map(str, dims)) + ")", gen_grid(dims))
    for dims in ([1, 1], [1, 2], [1, 3], [2, 2], [2, 3], [1, 1, 1], [1, 1, 2],
                 [1, 2, 2], [1, 1, 3], [1, 2, 3], [1, 1, 1, 1], [1, 1, 1, 1, 1]):
        add("wedge(" + ",".join(map(str, dims)) + ")", gen_wedge(dims))
    # a few trees beyond chains and stars
    add("star(4)", import_median_graph(5, [(0, i) for i in range(1, 5)]))
    add("spider(2,2,2)", import_median_graph(
        7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]))
    add("caterpillar", import_median_graph(
        7, [(0, 1), (1, 2), (2, 3), (1, 4), (2, 5), (3, 6)]))
    add("binary-tree(2)", import_median_graph(
        7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]))

    seed = 1
    while len(out) < minimum:
        A = gen_random_subalgebra(4, 5, seed)
        if 2 <= A.n <= max_n:
            out.append((f"closure(d=4,p=5,seed={seed})", A))
        seed += 1
        if seed > 400:
            raise RuntimeError("corpus generation failed to reach quota")
    return out


def corpus_extended() -> list[tuple[str, MedianAlgebra]]:
    """The small corpus plus larger named algebras used by scale checks."""
    out = corpus_small()
    out.append(("hypercube(4)", gen_hypercube(4)))
    out.append(("grid(4,4)", gen_grid([4, 4])))
    out.append(("chain(16)", gen_chain(16)))
    out.append(("grid(2,3,4)", gen_grid([2, 3, 4])))
    return out
