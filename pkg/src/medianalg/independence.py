"""Rosenthal independence of set systems and function families, VC duality.

Conventions: a family of sets is independent when every full in/out sign
pattern over it is realised by some ground point (partial patterns follow a
fortiori).  For functions, independence requires one threshold pair a < b
making every low/high pattern of level sets nonempty; on finite value sets it
suffices to scan cut positions between consecutive distinct values, which is
what the search does.  Closed rays are used throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import thresholds
from .bits import full_mask, iter_bits, mask_of
from .core import MedianAlgebra
from .errors import PreconditionError, ThresholdError
from .functions import FunctionFamily, RationalFunctionTable, is_mp_into_chain
from .walls import Wall, halfspace_masks_edge, kakutani_separate, masks_crossing, max_clique


@dataclass(frozen=True)
class SetSystem:
    """Family of subsets (bitmasks) of a ground set {0..ground-1}."""
    ground: int
    sets: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        full = full_mask(self.ground)
        for i, s in enumerate(self.sets):
            if s & ~full:
                raise PreconditionError(f"set {i} has members outside the ground set")

    def has_duplicates(self) -> bool:
        return len(set(self.sets)) < len(self.sets)


def halfspace_system(A: MedianAlgebra) -> SetSystem:
    return SetSystem(A.n, tuple(halfspace_masks_edge(A)))


# -- independence of set families ----------------------------------------------

def is_independent_family(S: SetSystem, indices: Sequence[int]) -> bool:
    """All 2^k full sign-pattern cells over the chosen sets are nonempty."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise PreconditionError("indices must be distinct")
    k = len(idx)
    if k > thresholds.max_ind_k():
        raise ThresholdError(
            f"independence check refused for k = {k} > {thresholds.max_ind_k()}")
    full = full_mask(S.ground)
    chosen = [S.sets[i] for i in idx]
    complements = [full & ~s for s in chosen]
    for pattern in range(1 << k):
        cell = full
        for bit in range(k):
            cell &= chosen[bit] if (pattern >> bit) & 1 else complements[bit]
            if not cell:
                break
        if not cell:
            return False
    return True


def _descending_clique_search(adjacency: list[int], upper: int, accept) -> int:
    """Largest k <= upper admitting an accepted k-clique (k >= 2)."""
    n = len(adjacency)

    def cliques(prefix: list[int], candidates: int, k: int) -> bool:
        if len(prefix) == k:
            return accept(tuple(prefix))
        need = k - len(prefix)
        cands = list(iter_bits(candidates))
        for pos, v in enumerate(cands):
            if len(cands) - pos < need:
                return False
            prefix.append(v)
            if cliques(prefix, candidates & adjacency[v] & ~((1 << (v + 1)) - 1), k):
                return True
            prefix.pop()
        return False

    for k in range(upper, 1, -1):
        if cliques([], full_mask(n), k):
            return k
    return 0


def ind_set_system(S: SetSystem) -> int:
    """Largest size of an independent subfamily; 0 when all sets are trivial.

    Pairwise independence (= crossing) is necessary, so the search runs over
    cliques of the crossing graph, largest candidate size first.
    """
    full = full_mask(S.ground)
    nontrivial = [i for i, s in enumerate(S.sets) if s and s != full]
    if not nontrivial:
        return 0
    m = len(S.sets)
    adjacency = [0] * m
    for a, b in combinations(nontrivial, 2):
        if masks_crossing(full, S.sets[a], S.sets[b]):
            adjacency[a] |= 1 << b
            adjacency[b] |= 1 << a
    bound, _ = max_clique(adjacency)
    if bound >= 2:
        found = _descending_clique_search(
            adjacency, bound, lambda idx: is_independent_family(S, idx))
        if found:
            return found
    return 1


# -- VC dimension and the dual system --------------------------------------------

def vc_dimension(S: SetSystem) -> int:
    """Largest cardinality of a subset of the ground set shattered by S.

    Level-wise scan; supersets are only explored above shattered sets, which
    is complete because shattering is closed downward.
    """
    if S.ground > thresholds.max_vc_ground():
        raise ThresholdError(
            f"shattering scan refused for ground {S.ground} > {thresholds.max_vc_ground()}")
    if not S.sets:
        return 0
    distinct = sorted(set(S.sets))

    def shattered(T: int, size: int) -> bool:
        need = 1 << size
        if len(distinct) < need:
            return False
        traces = set()
        for C in distinct:
            traces.add(C & T)
            if len(traces) == need:
                return True
        return False

    best = 0
    level = [(0, -1)]  # (mask, max element)
    size = 0
    while level:
        size += 1
        if (1 << size) > len(distinct):
            break
        nxt = []
        for T, top in level:
            for v in range(top + 1, S.ground):
                T2 = T | (1 << v)
                if shattered(T2, size):
                    nxt.append((T2, v))
        if not nxt:
            break
        best = size
        level = nxt
    return best


def dual_system(S: SetSystem) -> SetSystem:
    """Transpose the incidence: one set R_x = {i : x in C_i} per ground point,
    duplicates retained once."""
    seen = []
    seen_set = set()
    for x in range(S.ground):
        r = 0
        for i, C in enumerate(S.sets):
            if (C >> x) & 1:
                r |= 1 << i
        if r not in seen_set:
            seen_set.add(r)
            seen.append(r)
    return SetSystem(len(S.sets), tuple(seen))


def check_ind_equals_dual_vc(S: SetSystem) -> dict:
    ind = ind_set_system(S)
    dual_vc = vc_dimension(dual_system(S))
    return {"ind": ind, "dual_vc": dual_vc, "equal": ind == dual_vc}


# -- independence of function families --------------------------------------------

@dataclass(frozen=True)
class FunctionIndependenceWitness:
    independent: bool
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None


def _merged_values(functions: Sequence[RationalFunctionTable]) -> list[Fraction]:
    vals = set()
    for f in functions:
        vals.update(f.values)
    return sorted(vals)


def _canonical_thresholds(vals: Sequence[Fraction], s: int, t: int):
    """Witness pair for sublevel cut at vals[s], superlevel cut at vals[t].

    Distinct gaps get their midpoints; a shared gap is split at its quartiles
    so that a < b holds.
    """
    if t == s + 1:
        gap = vals[t] - vals[s]
        return vals[s] + gap / 4, vals[t] - gap / 4
    return (vals[s] + vals[s + 1]) / 2, (vals[t - 1] + vals[t]) / 2


def function_family_independence(F: FunctionFamily, indices: Sequence[int]
                                 ) -> FunctionIndependenceWitness:
    """Search threshold pairs over the merged value grid of the chosen
    functions; report the first witnessing (a, b) in cut order."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise PreconditionError("indices must be distinct")
    k = len(idx)
    if k > thresholds.max_fun_ind_k():
        raise ThresholdError(
            f"function independence refused for k = {k} > {thresholds.max_fun_ind_k()}")
    chosen = [F.functions[i] for i in idx]
    vals = _merged_values(chosen)
    if len(vals) < 2:
        return FunctionIndependenceWitness(False)
    full = full_mask(F.n)
    # sublevel/superlevel masks per function per distinct value
    sub = []
    sup = []
    for f in chosen:
        sub.append([mask_of(x for x in range(F.n) if f.values[x] <= v) for v in vals])
        sup.append([mask_of(x for x in range(F.n) if f.values[x] >= v) for v in vals])
    for s in range(len(vals) - 1):
        for t in range(s + 1, len(vals)):
            low = [sub[i][s] for i in range(k)]
            high = [sup[i][t] for i in range(k)]
            if any(not m for m in low) or any(not m for m in high):
                continue
            ok = True
            for pattern in range(1 << k):
                cell = full
                for bit in range(k):
                    cell &= high[bit] if (pattern >> bit) & 1 else low[bit]
                    if not cell:
                        break
                if not cell:
                    ok = False
                    break
            if ok:
                a, b = _canonical_thresholds(vals, s, t)
                return FunctionIndependenceWitness(True, a, b)
    return FunctionIndependenceWitness(False)


def ind_function_family(F: FunctionFamily) -> int:
    """Largest k with an independent k-subfamily under some threshold pair."""
    m = len(F.functions)
    if m == 0:
        return 0
    # deduplicate: equal functions can never be jointly independent
    distinct_idx = []
    seen = set()
    for i, f in enumerate(F.functions):
        if f.values not in seen:
            seen.add(f.values)
            distinct_idx.append(i)
    singles = [i for i in distinct_idx
               if function_family_independence(F, [i]).independent]
    if not singles:
        return 0
    adjacency = [0] * m
    for a, b in combinations(singles, 2):
        if function_family_independence(F, [a, b]).independent:
            adjacency[a] |= 1 << b
            adjacency[b] |= 1 << a
    bound, _ = max_clique(adjacency)
    if bound >= 2:
        found = _descending_clique_search(
            adjacency, bound,
            lambda idx: function_family_independence(F, idx).independent)
        if found:
            return found
    return 1


# -- the constructive bridge: level sets to walls -----------------------------------

def separate_level_sets(A: MedianAlgebra, f: RationalFunctionTable,
                        a: Fraction, b: Fraction) -> Wall:
    """Kakutani-separate the sublevel set {f <= a} from the superlevel {f >= b}.

    This is the constructive step turning independent families of
    median-preserving functions into independent halfspace families.
    """
    if not a < b:
        raise PreconditionError("need a < b")
    if not is_mp_into_chain(A, f):
        raise PreconditionError("function is not median-preserving into the rational chain")
    L = mask_of(x for x in range(A.n) if f.values[x] <= a)
    R = mask_of(x for x in range(A.n) if f.values[x] >= b)
    if not L or not R:
        raise PreconditionError("a level set is empty; thresholds miss the range")
    from .core import is_convex
    if not (is_convex(A, L) and is_convex(A, R)):
        raise PreconditionError("level sets of an MP map must be convex")
    return kakutani_separate(A, L, R)


# -- median-preserving maps into finite chains ----------------------------------------

def _sublevel_poset(A: MedianAlgebra) -> list[int]:
    return sorted({0, A.carrier_mask(), *halfspace_masks_edge(A)})


def mp_maps_to_chain(A: MedianAlgebra, levels: int) -> FunctionFamily:
    """Every median-preserving map from A into the chain 0 < 1/(levels-1) < ... < 1.

    Such maps correspond exactly to weakly increasing chains of sublevel sets
    drawn from {empty} + halfspaces + {carrier}: each sublevel must be convex
    with convex complement, and any such nested chain defines an MP map.
    """
    if levels < 2:
        raise PreconditionError("need at least two chain levels")
    poset = _sublevel_poset(A)
    denom = levels - 1
    maps: list[RationalFunctionTable] = []

    def build(chain: list[int], depth: int) -> None:
        if depth == denom:
            values = tuple(
                Fraction(sum(1 for s in chain if not (s >> x) & 1), denom)
                for x in range(A.n))
            maps.append(RationalFunctionTable(A.n, values))
            return
        floor = chain[-1] if chain else 0
        for s in poset:
            if floor & ~s == 0:
                chain.append(s)
                build(chain, depth + 1)
                chain.pop()

    build([], 0)
    return FunctionFamily(A.n, tuple(maps))


def random_mp_function(A: MedianAlgebra, rng: random.Random,
                       levels: int = 3) -> RationalFunctionTable:
    """Seeded random MP map into the rational chain with the given level count."""
    poset = _sublevel_poset(A)
    denom = levels - 1
    chain = []
    floor = 0
    for _ in range(denom):
        options = [s for s in poset if floor & ~s == 0]
        floor = rng.choice(options)
        chain.append(floor)
    values = tuple(Fraction(sum(1 for s in chain if not (s >> x) & 1), denom)
                   for x in range(A.n))
    return RationalFunctionTable(A.n, values)
