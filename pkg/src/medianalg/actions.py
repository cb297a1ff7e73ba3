"""Automorphism groups, orbit families of observables, tameness bounds.

Automorphism search is exact backtracking pruned by wall-incidence signatures
(the multiset of halfspace sizes through each element) and covering-graph
adjacency, with a full median-preservation check at every leaf.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import thresholds
from .bits import iter_bits, mask_of
from .core import MedianAlgebra, adjacent_pairs
from .errors import PreconditionError, ThresholdError, UsageError
from .functions import FunctionFamily, RationalFunctionTable, is_mp_into_chain
from .independence import ind_function_family
from .walls import halfspace_masks_edge, masks_crossing, rank_via_crossing, roller_embedding


@dataclass(frozen=True)
class PermutationGroup:
    """Explicit permutation group on {0..degree-1}, elements in one-line
    notation, sorted lexicographically."""
    degree: int
    elements: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ident = tuple(range(self.degree))
        elems = set(self.elements)
        if ident not in elems:
            raise PreconditionError("group must contain the identity")
        for g in elems:
            if tuple(sorted(g)) != ident:
                raise PreconditionError(f"{g} is not a permutation of degree {self.degree}")
            inv = [0] * self.degree
            for i, v in enumerate(g):
                inv[v] = i
            if tuple(inv) not in elems:
                raise PreconditionError(f"inverse of {g} missing")
        for g in elems:
            for h in elems:
                if tuple(g[h[i]] for i in range(self.degree)) not in elems:
                    raise PreconditionError("element list is not closed under composition")

    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @staticmethod
    def trivial(degree: int) -> "PermutationGroup":
        return PermutationGroup(degree, (tuple(range(degree)),))

    @staticmethod
    def from_generators(degree: int, generators: Sequence[Sequence[int]]
                        ) -> "PermutationGroup":
        """Closure of the generators; explicit lists are capped in size."""
        cap = thresholds.max_group_elements()
        ident = tuple(range(degree))
        gens = [tuple(g) for g in generators]
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = tuple(h[g[i]] for i in range(degree))
                    if prod not in elems:
                        elems.add(prod)
                        nxt.append(prod)
                        if len(elems) > cap:
                            raise ThresholdError(
                                f"group closure exceeded {cap} elements")
            frontier = nxt
        return PermutationGroup(degree, tuple(sorted(elems)))


def is_automorphism(A: MedianAlgebra, perm: Sequence[int]) -> bool:
    n = A.n
    if sorted(perm) != list(range(n)):
        return False
    mfun = A.m
    for x in range(n):
        for y in range(x, n):
            for z in range(y, n):
                if perm[mfun(x, y, z)] != mfun(perm[x], perm[y], perm[z]):
                    return False
    return True


def _signatures(A: MedianAlgebra) -> list[tuple]:
    masks = halfspace_masks_edge(A)
    adjacency = [0] * A.n
    for u, v in adjacent_pairs(A):
        adjacency[u] |= 1 << v
        adjacency[v] |= 1 << u
    sigs = []
    for x in range(A.n):
        through = sorted(m.bit_count() for m in masks if (m >> x) & 1)
        sigs.append((adjacency[x].bit_count(), tuple(through)))
    return sigs


def _isomorphism_search(A: MedianAlgebra, B: MedianAlgebra,
                        find_all: bool) -> list[tuple[int, ...]]:
    if A.n != B.n:
        return []
    n = A.n
    sig_a = _signatures(A)
    sig_b = _signatures(B)
    if sorted(sig_a) != sorted(sig_b):
        return []

    adj_a = [0] * n
    for u, v in adjacent_pairs(A):
        adj_a[u] |= 1 << v
        adj_a[v] |= 1 << u
    adj_b = [0] * n
    for u, v in adjacent_pairs(B):
        adj_b[u] |= 1 << v
        adj_b[v] |= 1 << u

    candidates = [[y for y in range(n) if sig_b[y] == sig_a[x]] for x in range(n)]
    found: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n
    ma, mb = A.m, B.m

    def verify(img: list[int]) -> bool:
        for x in range(n):
            for y in range(x, n):
                for z in range(y, n):
                    if img[ma(x, y, z)] != mb(img[x], img[y], img[z]):
                        return False
        return True

    def backtrack(x: int) -> bool:
        if x == n:
            if verify(image):
                found.append(tuple(image))
                return not find_all
            return False
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for x2 in range(x):
                if bool((adj_a[x] >> x2) & 1) != bool((adj_b[y] >> image[x2]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[x] = y
            used[y] = True
            if backtrack(x + 1):
                return True
            used[y] = False
            image[x] = -1
        return False

    backtrack(0)
    return found


def find_isomorphism(A: MedianAlgebra, B: MedianAlgebra) -> Optional[tuple[int, ...]]:
    """A median isomorphism A -> B as an image tuple, or None."""
    res = _isomorphism_search(A, B, find_all=False)
    return res[0] if res else None


def automorphisms(A: MedianAlgebra,
                  generators: Optional[Sequence[Sequence[int]]] = None
                  ) -> PermutationGroup:
    """All median automorphisms.

    Exhaustive backtracking up to the size cap; larger carriers need a
    generator hint, whose closure is returned after validating every
    generator.
    """
    if generators is not None:
        for g in generators:
            if not is_automorphism(A, g):
                raise PreconditionError(f"hint {tuple(g)} is not a median automorphism")
        return PermutationGroup.from_generators(A.n, generators)
    limit = thresholds.max_aut_exhaustive()
    if A.n > limit:
        raise ThresholdError(
            f"automorphism search refused for n = {A.n} > {limit}; "
            f"pass a generator hint")
    perms = _isomorphism_search(A, A, find_all=True)
    return PermutationGroup(A.n, tuple(sorted(perms)))


def hypercube_axis_permutations(d: int) -> PermutationGroup:
    """The coordinate-permutation subgroup of the d-cube's automorphisms."""
    n = 1 << d
    gens = []
    for i in range(d - 1):
        perm = []
        for x in range(n):
            bi, bj = (x >> i) & 1, (x >> (i + 1)) & 1
            y = x & ~(1 << i) & ~(1 << (i + 1))
            y |= bj << i
            y |= bi << (i + 1)
            perm.append(y)
        gens.append(tuple(perm))
    if not gens:
        return PermutationGroup.trivial(n)
    return PermutationGroup.from_generators(n, gens)


def grid_reflection_group(dims: Sequence[int]) -> PermutationGroup:
    """Axis reversals of a grid algebra (automorphisms for any axis lengths)."""
    from .generators import grid_coords, grid_id
    dims = list(dims)
    n = 1
    for d in dims:
        n *= d
    gens = []
    for axis, length in enumerate(dims):
        if length < 2:
            continue
        perm = []
        for x in range(n):
            coords = list(grid_coords(dims, x))
            coords[axis] = length - 1 - coords[axis]
            perm.append(grid_id(dims, coords))
        gens.append(tuple(perm))
    if not gens:
        return PermutationGroup.trivial(n)
    return PermutationGroup.from_generators(n, gens)


# -- orbits and the tameness bound ---------------------------------------------

def orbit_family(f: RationalFunctionTable, G: PermutationGroup) -> FunctionFamily:
    """The translates x -> f(gx) over the group, deduplicated."""
    if f.n != G.degree:
        raise UsageError("function carrier and group degree differ")
    seen = set()
    members = []
    for g in G:
        values = tuple(f.values[g[x]] for x in range(f.n))
        if values not in seen:
            seen.add(values)
            members.append(values)
    members.sort()
    return FunctionFamily(f.n, tuple(RationalFunctionTable(f.n, v) for v in members))


def orbit_tameness_check(A: MedianAlgebra, f: RationalFunctionTable,
                         G: PermutationGroup) -> dict:
    """ind of the orbit of an MP observable against the algebra's rank.

    The bound ind <= rank is only claimed for median-preserving observables,
    so a non-MP input is rejected.
    """
    if not is_mp_into_chain(A, f):
        raise PreconditionError("observable is not median-preserving into the chain")
    orbit = orbit_family(f, G)
    ind = ind_function_family(orbit)
    rank = rank_via_crossing(A)
    return {"ind_orbit": ind, "rank": rank, "orbit_size": len(orbit),
            "bounded": ind <= rank}


def roller_equivariance_check(A: MedianAlgebra, G: PermutationGroup) -> bool:
    """Each group element permutes the halfspaces, and the sign map intertwines
    the two actions: iota(g x) is the coordinate-permuted iota(x)."""
    if G.degree != A.n:
        raise UsageError("group degree and carrier size differ")
    masks = halfspace_masks_edge(A)
    index = {m: i for i, m in enumerate(masks)}
    iota = roller_embedding(A)
    for g in G:
        perm_idx = []
        for m in masks:
            gm = mask_of(g[x] for x in iter_bits(m))
            if gm not in index:
                return False
            perm_idx.append(index[gm])
        for x in range(A.n):
            lhs = iota.values[g[x]]
            rhs = 0
            sig = iota.values[x]
            for i in range(len(masks)):
                if (sig >> i) & 1:
                    rhs |= 1 << perm_idx[i]
            if lhs != rhs:
                return False
    return True


def automorphisms_preserve_walls(A: MedianAlgebra, G: PermutationGroup) -> bool:
    """Walls map to walls and crossing is preserved (sanity for computed groups)."""
    masks = halfspace_masks_edge(A)
    mask_set = set(masks)
    full = A.carrier_mask()
    for g in G:
        images = []
        for m in masks:
            gm = mask_of(g[x] for x in iter_bits(m))
            if gm not in mask_set:
                return False
            images.append(gm)
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                if masks_crossing(full, masks[i], masks[j]) != \
                        masks_crossing(full, images[i], images[j]):
                    return False
    return True
