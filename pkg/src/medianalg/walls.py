"""Halfspaces, walls, crossing structure, rank, separation, Roller embedding.

A halfspace is a nonempty proper convex subset with convex complement; a wall
is the unordered complementary pair.  Canonical orders: halfspaces ascending
by member bitmask, walls ascending by the mask of the side containing element
0 (side0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from . import thresholds
from .bits import ElementSet, full_mask, iter_bits, lowest_bit, mask_of
from .core import (
    MedianAlgebra,
    MpMap,
    adjacent_pairs,
    convex_hull,
    is_convex,
    is_subalgebra,
    restrict,
)
from .errors import PreconditionError, StructureError, ThresholdError, UsageError
from .generators import gen_hypercube


@dataclass(frozen=True)
class Halfspace:
    algebra: MedianAlgebra
    members: ElementSet

    def complement(self) -> "Halfspace":
        return Halfspace(self.algebra, self.algebra.carrier_mask() & ~self.members)

    def __contains__(self, x: int) -> bool:
        return bool((self.members >> x) & 1)


@dataclass(frozen=True)
class Wall:
    """Complementary halfspace pair; side0 is the side containing element 0."""
    side0: Halfspace
    side1: Halfspace

    @staticmethod
    def of(h: Halfspace) -> "Wall":
        c = h.complement()
        return Wall(h, c) if 0 in h else Wall(c, h)


@dataclass(frozen=True)
class CrossingGraph:
    walls: tuple[Wall, ...]
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[int, ...]  # bitmask rows over wall indices


def halfspace_masks_brute(A: MedianAlgebra) -> list[int]:
    """Oracle enumeration: scan every subset containing element 0 and keep the
    convex/co-convex ones (recording both sides).  Admissible for small n."""
    n = A.n
    limit = thresholds.max_brute_halfspace()
    if n > limit:
        raise ThresholdError(
            f"brute-force halfspace scan refused for n = {n} > {limit} "
            f"(override with MEDIANALG_MAX_BRUTE_HALFSPACE)")
    full = full_mask(n)
    iv = A.interval_masks()

    def convex(S: int) -> bool:
        members = list(iter_bits(S))
        for i, x in enumerate(members):
            row = iv[x]
            for y in members[i + 1:]:
                if row[y] & ~S:
                    return False
        return True

    found = []
    for lower in range(1 << (n - 1)) if n > 1 else []:
        S = (lower << 1) | 1
        comp = full & ~S
        if comp == 0:
            continue
        if convex(S) and convex(comp):
            found.append(S)
            found.append(comp)
    return sorted(found)


def halfspace_masks_edge(A: MedianAlgebra) -> list[int]:
    """Default enumeration: for every adjacent pair (u, v) split the carrier by
    m(u,v,x); keep splits with both sides convex, dedupe."""
    n = A.n
    full = full_mask(n)
    mfun = A.m
    seen: set[int] = set()
    for u, v in adjacent_pairs(A):
        side_u = 0
        for x in range(n):
            if mfun(u, v, x) == u:
                side_u |= 1 << x
        if side_u in seen:
            continue
        comp = full & ~side_u
        if side_u and comp and is_convex(A, side_u) and is_convex(A, comp):
            seen.add(side_u)
            seen.add(comp)
    return sorted(seen)


def enumerate_halfspaces(A: MedianAlgebra, method: str = "edge") -> list[Halfspace]:
    """Complete duplicate-free halfspace list in canonical (mask) order."""
    if method == "edge":
        masks = halfspace_masks_edge(A)
    elif method == "brute":
        masks = halfspace_masks_brute(A)
    else:
        raise UsageError(f"unknown halfspace enumeration method {method!r}")
    return [Halfspace(A, m) for m in masks]


def walls_of(A: MedianAlgebra, method: str = "edge") -> list[Wall]:
    masks = halfspace_masks_edge(A) if method == "edge" else halfspace_masks_brute(A)
    sides0 = sorted(m for m in masks if m & 1)
    return [Wall(Halfspace(A, m), Halfspace(A, A.carrier_mask() & ~m)) for m in sides0]


def are_crossing(h1: Halfspace, h2: Halfspace) -> bool:
    """All four intersections of the two walls' sides are nonempty."""
    if h1.algebra is not h2.algebra:
        raise UsageError("halfspaces belong to different algebras")
    full = h1.algebra.carrier_mask()
    a, b = h1.members, h2.members
    return bool(a & b) and bool(a & ~b & full) and bool(~a & b & full) \
        and bool(~a & ~b & full)


def masks_crossing(full: int, a: int, b: int) -> bool:
    return bool(a & b) and bool(a & ~b & full) and bool(~a & b & full) \
        and bool(~a & ~b & full)


def crossing_graph(A: MedianAlgebra, method: str = "edge") -> CrossingGraph:
    walls = walls_of(A, method)
    full = A.carrier_mask()
    k = len(walls)
    adj = [0] * k
    edges = []
    for i in range(k):
        for j in range(i + 1, k):
            if masks_crossing(full, walls[i].side0.members, walls[j].side0.members):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                edges.append((i, j))
    return CrossingGraph(tuple(walls), tuple(edges), tuple(adj))


# -- exact maximum clique (branch and bound with greedy colouring) -----------

def max_clique(adjacency: Sequence[int]) -> tuple[int, list[int]]:
    """Exact maximum clique over bitmask adjacency rows; deterministic."""
    n = len(adjacency)
    if n == 0:
        return 0, []
    best: list[int] = []

    def colour_order(P: int) -> list[tuple[int, int]]:
        order = []
        colour = 0
        while P:
            colour += 1
            Q = P
            while Q:
                v = lowest_bit(Q)
                order.append((v, colour))
                P &= ~(1 << v)
                Q &= ~((1 << v) | adjacency[v])
        return order

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        order = colour_order(P)
        for v, bound in reversed(order):
            if len(R) + bound <= len(best):
                return
            R.append(v)
            newP = P & adjacency[v]
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best = R.copy()
            R.pop()
            P &= ~(1 << v)

    expand([], full_mask(n))
    return len(best), sorted(best)


def rank_via_crossing(A: MedianAlgebra, method: str = "edge") -> int:
    """Size of a maximum pairwise-crossing wall family; 0 for singletons."""
    g = crossing_graph(A, method)
    size, _ = max_clique(g.adjacency)
    return size


# -- rank via explicit hypercube embedding ------------------------------------

def _cliques_of_size(adjacency: Sequence[int], k: int):
    """All k-cliques (sorted index tuples) in deterministic order."""
    n = len(adjacency)

    def grow(prefix: list[int], candidates: int):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        need = k - len(prefix)
        cands = list(iter_bits(candidates))
        for idx, v in enumerate(cands):
            if len(cands) - idx < need:
                return
            prefix.append(v)
            yield from grow(prefix, candidates & adjacency[v]
                            & ~((1 << (v + 1)) - 1))
            prefix.pop()

    yield from grow([], full_mask(n))


def _majority_pattern_triples(k: int) -> dict[int, list[tuple[int, int, int]]]:
    """For each sign pattern, the triples of patterns whose bitwise majority it is."""
    out: dict[int, list[tuple[int, int, int]]] = {p: [] for p in range(1 << k)}
    patterns = range(1 << k)
    for a in patterns:
        for b in patterns:
            if b < a:
                continue
            ab = a & b
            a_or_b = a | b
            for c in range(b, 1 << k):
                out[ab | (c & a_or_b)].append((a, b, c))
    return out


def rank_via_embedding(A: MedianAlgebra, k: int,
                       max_n: Optional[int] = None) -> bool:
    """Does the Boolean k-cube embed as a median subalgebra?

    Backtracking over the sign-pattern cells of each k-clique of pairwise
    crossing walls; complete because every embedded cube's coordinate walls
    extend to pairwise-crossing walls of the ambient algebra with the cube's
    vertices in their cells.
    """
    if k < 1:
        raise PreconditionError("embedding dimension must be >= 1")
    if k > thresholds.max_embed_k():
        raise ThresholdError(
            f"embedding search refused for k = {k} > {thresholds.max_embed_k()}")
    limit = max_n if max_n is not None else thresholds.max_brute_halfspace()
    if A.n > limit:
        raise ThresholdError(
            f"embedding search refused for n = {A.n} > {limit} "
            f"(pass max_n or set MEDIANALG_MAX_BRUTE_HALFSPACE)")
    if A.n < (1 << k):
        return False

    g = crossing_graph(A)
    full = A.carrier_mask()
    mfun = A.m
    maj_triples = _majority_pattern_triples(k)

    for clique in _cliques_of_size(g.adjacency, k):
        sides = [g.walls[i].side0.members for i in clique]
        cells = []
        ok = True
        for pattern in range(1 << k):
            cell = full
            for bit, side in enumerate(sides):
                cell &= side if not (pattern >> bit) & 1 else full & ~side
            if not cell:
                ok = False
                break
            cells.append(cell)
        if not ok:
            continue
        if _embed_cube_in_cells(mfun, cells, maj_triples, k):
            return True
    return False


def _embed_cube_in_cells(mfun, cells: list[int], maj_triples, k: int) -> bool:
    total = 1 << k
    assigned: list[Optional[int]] = [None] * total

    def backtrack(t: int) -> bool:
        if t == total:
            return True
        cell = cells[t]
        for v in iter_bits(cell):
            ok = True
            # new point as a median argument
            for i in range(t):
                vi = assigned[i]
                for j in range(i, t):
                    w = mfun(vi, assigned[j], v)
                    mu = (i & j) | (j & t) | (i & t)
                    if mu < t or mu == t:
                        target = assigned[mu] if mu < t else v
                        if w != target:
                            ok = False
                            break
                    elif not (cells[mu] >> w) & 1:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                # new point as a forced median of earlier triples
                for a, b, c in maj_triples[t]:
                    if a < t and b < t and c < t:
                        if mfun(assigned[a], assigned[b], assigned[c]) != v:
                            ok = False
                            break
            if ok:
                assigned[t] = v
                if backtrack(t + 1):
                    return True
                assigned[t] = None
        return False

    return backtrack(0)


def embedding_rank(A: MedianAlgebra, max_n: Optional[int] = None) -> int:
    """Largest k with an embedded Boolean k-cube, found by the search above."""
    if A.n < 2:
        return 0
    k = 0
    while True:
        nxt = k + 1
        if (1 << nxt) > A.n or nxt > thresholds.max_embed_k():
            return k
        if not rank_via_embedding(A, nxt, max_n=max_n):
            return k
        k = nxt


# -- separation and Helly ------------------------------------------------------

def kakutani_separate(A: MedianAlgebra, C1: ElementSet, C2: ElementSet) -> Wall:
    """A wall with C1 inside one side and C2 inside the other.

    Preconditions: both sets convex, nonempty, disjoint.  On a verified median
    algebra a separating wall always exists; failure raises StructureError.
    """
    if not C1 or not C2:
        raise PreconditionError("separation inputs must be nonempty")
    if C1 & C2:
        raise PreconditionError("separation inputs must be disjoint")
    if not is_convex(A, C1) or not is_convex(A, C2):
        raise PreconditionError("separation inputs must be convex")
    for wall in walls_of(A):
        s0 = wall.side0.members
        s1 = wall.side1.members
        if C1 & ~s0 == 0 and C2 & ~s1 == 0:
            return wall
        if C1 & ~s1 == 0 and C2 & ~s0 == 0:
            return wall
    raise StructureError("no separating wall found; median structure corrupt")


@dataclass(frozen=True)
class HellyResult:
    common: Optional[int]                      # an element of the intersection
    disjoint_pair: Optional[tuple[int, int]]   # indices of a disjoint pair


def helly_check(A: MedianAlgebra, sets: Sequence[ElementSet]) -> HellyResult:
    """If the convex sets pairwise intersect, produce a common element."""
    if not sets:
        raise PreconditionError("need at least one convex set")
    for i, S in enumerate(sets):
        if not S:
            raise PreconditionError(f"set {i} is empty")
        if not is_convex(A, S):
            raise PreconditionError(f"set {i} is not convex")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if not sets[i] & sets[j]:
                return HellyResult(None, (i, j))
    inter = A.carrier_mask()
    for S in sets:
        inter &= S
    if not inter:
        raise StructureError(
            "pairwise intersecting convex sets with empty intersection; "
            "median structure corrupt")
    return HellyResult(lowest_bit(inter), None)


# -- wall traces on subalgebras ------------------------------------------------

def wall_trace_check(A: MedianAlgebra, Q: ElementSet) -> tuple[bool, Optional[tuple[int, int]]]:
    """Every wall of the induced algebra on Q is the trace of a wall of A.

    Returns (True, None) or (False, failing Q-wall as a mask pair).
    """
    if not Q:
        raise PreconditionError("Q must be nonempty")
    if not is_subalgebra(A, Q):
        raise PreconditionError("Q is not closed under the median")
    sub, old_ids = restrict(A, Q)
    ambient = [(w.side0.members, w.side1.members) for w in walls_of(A)]
    for wall in walls_of(sub):
        t0 = mask_of(old_ids[i] for i in iter_bits(wall.side0.members))
        t1 = mask_of(old_ids[i] for i in iter_bits(wall.side1.members))
        found = any((s0 & Q, s1 & Q) in ((t0, t1), (t1, t0)) for s0, s1 in ambient)
        if not found:
            return False, (t0, t1)
    return True, None


# -- Roller embedding ----------------------------------------------------------

def roller_embedding(A: MedianAlgebra) -> MpMap:
    """Diagonal sign map into the hypercube over the halfspace index set.

    Coordinate i of the image of x is the indicator of x in the i-th canonical
    halfspace; the target cube is rule-backed when too large to materialise.
    """
    masks = halfspace_masks_edge(A)
    target = gen_hypercube(len(masks))
    values = []
    for x in range(A.n):
        sig = 0
        for i, h in enumerate(masks):
            if (h >> x) & 1:
                sig |= 1 << i
        values.append(sig)
    return MpMap(A, target, tuple(values))


# -- coordinate halfspace families ---------------------------------------------

def coordinate_halfspaces(A: MedianAlgebra, axis: int) -> list[Halfspace]:
    """Both orientations of the walls perpendicular to one grid/hypercube axis."""
    kind = A.provenance.get("kind")
    if kind == "grid":
        dims = A.provenance["dims"]
    elif kind == "hypercube":
        dims = [2] * A.provenance["d"]
    else:
        raise UsageError("coordinate halfspaces need grid or hypercube provenance")
    if not (0 <= axis < len(dims)):
        raise UsageError(f"axis {axis} out of range for dims {dims}")
    from .generators import grid_coords
    full = A.carrier_mask()
    masks = []
    for t in range(dims[axis] - 1):
        low = 0
        for x in range(A.n):
            if grid_coords(dims, x)[axis] <= t:
                low |= 1 << x
        masks.append(low)
        masks.append(full & ~low)
    return [Halfspace(A, m) for m in sorted(masks)]


# -- wedge structure -----------------------------------------------------------

def wedge_home_cube(A: MedianAlgebra, h: Halfspace) -> int:
    """Index of the cube supporting a wedge wall (side avoiding the wedge point)."""
    if A.provenance.get("kind") != "wedge":
        raise UsageError("home cube is defined for wedge algebras only")
    dims = A.provenance["dims"]
    side = h.members if not (h.members & 1) else A.carrier_mask() & ~h.members
    offsets = []
    off = 1
    for d in dims:
        offsets.append((off, off + (1 << d) - 1))
        off += (1 << d) - 1
    homes = {i for i, (lo, hi) in enumerate(offsets)
             if any(lo <= e < hi for e in iter_bits(side))}
    if len(homes) != 1:
        raise StructureError(f"wedge halfspace side spans cubes {sorted(homes)}")
    return homes.pop()


# -- random convex sampling (corpus checks) -------------------------------------

def random_convex_set(A: MedianAlgebra, rng: random.Random, max_seed: int = 3) -> ElementSet:
    k = rng.randint(1, max_seed)
    pts = [rng.randrange(A.n) for _ in range(k)]
    return convex_hull(A, mask_of(pts))


def sample_disjoint_convex_pairs(A: MedianAlgebra, count: int, seed: int,
                                 max_attempts_factor: int = 200):
    """Up to ``count`` seeded random disjoint convex pairs (may be fewer when
    the algebra admits none, e.g. singletons)."""
    rng = random.Random(seed)
    pairs = []
    attempts = 0
    while len(pairs) < count and attempts < count * max_attempts_factor:
        attempts += 1
        C1 = random_convex_set(A, rng)
        C2 = random_convex_set(A, rng)
        if C1 and C2 and not (C1 & C2):
            pairs.append((C1, C2))
    return pairs


def sample_intersecting_families(A: MedianAlgebra, count: int, seed: int,
                                 max_attempts_factor: int = 200):
    """Seeded random pairwise-intersecting convex families (sizes 2..4)."""
    rng = random.Random(seed)
    families = []
    attempts = 0
    while len(families) < count and attempts < count * max_attempts_factor:
        attempts += 1
        k = rng.randint(2, 4)
        fam = [random_convex_set(A, rng) for _ in range(k)]
        if all(fam[i] & fam[j] for i in range(k) for j in range(i + 1, k)):
            families.append(fam)
    return families
