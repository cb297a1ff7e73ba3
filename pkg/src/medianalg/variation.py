"""Edge-sum variation on finite subalgebras and halfspace-chain variation.

All arithmetic is exact rational; the suprema in the definitions become
attained maxima on finite carriers and are computed exactly (dynamic
programming for chain transversals, exhaustive or pool-restricted search for
the subalgebra form).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import thresholds
from .bits import iter_bits, lowest_bit, mask_of
from .core import MedianAlgebra, is_subalgebra
from .errors import PreconditionError, ThresholdError
from .functions import RationalFunctionTable
from .walls import Halfspace


def adjacency_pairs(A: MedianAlgebra, Q: int) -> list[tuple[int, int]]:
    """Pairs {a,b} of Q whose Q-relative interval is exactly {a,b}."""
    if not is_subalgebra(A, Q):
        raise PreconditionError("Q is not closed under the median")
    iv = A.interval_masks()
    members = sorted(iter_bits(Q))
    out = []
    for i, a in enumerate(members):
        row = iv[a]
        for b in members[i + 1:]:
            if row[b] & Q == (1 << a) | (1 << b):
                out.append((a, b))
    return out


def edge_sum_variation(A: MedianAlgebra, f: RationalFunctionTable, Q: int) -> Fraction:
    """Sum of |f(a) - f(b)| over the adjacent pairs of the subalgebra Q."""
    if f.n != A.n:
        raise PreconditionError("function carrier does not match the algebra")
    total = Fraction(0)
    for a, b in adjacency_pairs(A, Q):
        total += abs(f.values[a] - f.values[b])
    return total


@dataclass(frozen=True)
class TotalVariationResult:
    value: Fraction
    witness: int          # maximising subalgebra mask
    exhaustive: bool      # False: pool-restricted, value is only a lower bound


def total_variation_upsilon(A: MedianAlgebra, f: RationalFunctionTable,
                            pool: Optional[Sequence[int]] = None) -> TotalVariationResult:
    """Maximum edge-sum variation over finite subalgebras.

    Exhaustive over all median-closed subsets when the carrier allows it;
    with an explicit pool the result is reported as a lower bound, never as
    the supremum.
    """
    if pool is None:
        limit = thresholds.max_total_variation()
        if A.n > limit:
            raise ThresholdError(
                f"subalgebra enumeration refused for n = {A.n} > {limit}; "
                f"pass a restricted pool instead")
        best = Fraction(0)
        witness = 1  # any singleton attains 0
        for Q in range(1, 1 << A.n):
            if not is_subalgebra(A, Q):
                continue
            v = edge_sum_variation(A, f, Q)
            if v > best:
                best, witness = v, Q
        return TotalVariationResult(best, witness, True)
    best = Fraction(0)
    witness = 0
    for Q in pool:
        if not Q:
            continue
        v = edge_sum_variation(A, f, Q)
        if v > best or witness == 0:
            best, witness = v, Q
    if witness == 0:
        raise PreconditionError("restricted pool contained no nonempty subalgebra")
    return TotalVariationResult(best, witness, False)


@dataclass(frozen=True)
class HalfspaceChain:
    """Strictly increasing chain of halfspaces from a declared family."""
    links: tuple[Halfspace, ...]

    def __post_init__(self):
        for prev, nxt in zip(self.links, self.links[1:]):
            if prev.algebra is not nxt.algebra:
                raise PreconditionError("chain mixes halfspaces of different algebras")
            if not (prev.members & ~nxt.members == 0 and prev.members != nxt.members):
                raise PreconditionError("chain links must be strictly increasing")

    def __len__(self) -> int:
        return len(self.links)


def chain_variation(A: MedianAlgebra, f: RationalFunctionTable,
                    chain: HalfspaceChain | Sequence[Halfspace]
                    ) -> tuple[Fraction, list[int]]:
    """Exact maximum of sum |f(z_i) - f(z_{i-1})| over chain transversals.

    z_0 ranges over the first halfspace and z_i over the i-th annulus; the
    stage-wise dynamic program returns the value and one maximising
    transversal (deterministic tie-break: ascending element ids).
    """
    if not isinstance(chain, HalfspaceChain):
        chain = HalfspaceChain(tuple(chain))
    if f.n != A.n:
        raise PreconditionError("function carrier does not match the algebra")
    if len(chain) == 0:
        return Fraction(0), []
    masks = [h.members for h in chain.links]
    stages = [masks[0]]
    for prev, nxt in zip(masks, masks[1:]):
        stages.append(nxt & ~prev)
    vals = f.values
    # tables[i][z] = (best partial sum ending at z in stage i, predecessor)
    tables: list[dict[int, tuple[Fraction, Optional[int]]]] = [
        {z: (Fraction(0), None) for z in sorted(iter_bits(stages[0]))}]
    for stage in stages[1:]:
        prev_table = tables[-1]
        table: dict[int, tuple[Fraction, Optional[int]]] = {}
        for z in sorted(iter_bits(stage)):
            top: Optional[tuple[Fraction, Optional[int]]] = None
            for p in sorted(prev_table):
                cand = prev_table[p][0] + abs(vals[z] - vals[p])
                if top is None or cand > top[0]:
                    top = (cand, p)
            table[z] = top
        tables.append(table)
    end = min(tables[-1], key=lambda z: (-tables[-1][z][0], z))
    value = tables[-1][end][0]
    trail = [end]
    cur = end
    for table in reversed(tables[1:]):
        cur = table[cur][1]
        trail.append(cur)
    trail.reverse()
    return value, trail


@dataclass(frozen=True)
class BvChainResult:
    value: Fraction
    chain: tuple[int, ...]        # indices into the declared family
    transversal: tuple[int, ...]  # one maximising transversal
    family_size: int


def bv_chain(A: MedianAlgebra, f: RationalFunctionTable,
             family: Sequence[Halfspace]) -> BvChainResult:
    """Maximum chain variation over all strictly nested chains in the family.

    Depth-first search over the nesting order with best-suffix memoisation,
    collapsed to distinct function values per annulus.  The reported value
    depends on the declared family; no single family is canonical.
    """
    if f.n != A.n:
        raise PreconditionError("function carrier does not match the algebra")
    limit = thresholds.max_chain_family()
    if len(family) > limit:
        raise ThresholdError(
            f"chain search refused for family size {len(family)} > {limit}")
    masks = sorted({h.members for h in family})
    m = len(masks)
    if m == 0:
        return BvChainResult(Fraction(0), (), (), 0)
    vals = f.values
    successors = [[j for j in range(m)
                   if masks[i] != masks[j] and masks[i] & ~masks[j] == 0]
                  for i in range(m)]

    def values_on(mask: int) -> list[Fraction]:
        return sorted({vals[x] for x in iter_bits(mask)})

    annulus_vals: dict[tuple[int, int], list[Fraction]] = {}

    def annulus(i: int, j: int) -> list[Fraction]:
        key = (i, j)
        if key not in annulus_vals:
            annulus_vals[key] = values_on(masks[j] & ~masks[i])
        return annulus_vals[key]

    memo: dict[tuple[int, Fraction], tuple[Fraction, Optional[tuple[int, Fraction]]]] = {}

    def suffix(i: int, v: Fraction) -> tuple[Fraction, Optional[tuple[int, Fraction]]]:
        key = (i, v)
        if key in memo:
            return memo[key]
        best = (Fraction(0), None)
        for j in successors[i]:
            for w in annulus(i, j):
                tail, _ = suffix(j, w)
                cand = abs(w - v) + tail
                if cand > best[0]:
                    best = (cand, (j, w))
        memo[key] = best
        return best

    top_value = Fraction(0)
    top_start: Optional[tuple[int, Fraction]] = None
    for i in range(m):
        for v in values_on(masks[i]):
            cand, _ = suffix(i, v)
            if top_start is None or cand > top_value:
                top_value, top_start = cand, (i, v)

    if top_start is None:
        return BvChainResult(Fraction(0), (), (), m)

    chain_idx: list[int] = []
    transversal: list[int] = []
    i, v = top_start
    chain_idx.append(i)
    transversal.append(min(x for x in iter_bits(masks[i]) if vals[x] == v))
    step = memo[(i, v)][1]
    while step is not None:
        j, w = step
        transversal.append(min(x for x in iter_bits(masks[j] & ~masks[i])
                               if vals[x] == w))
        chain_idx.append(j)
        i, v = j, w
        step = memo[(i, v)][1]
    return BvChainResult(top_value, tuple(chain_idx), tuple(transversal), m)
