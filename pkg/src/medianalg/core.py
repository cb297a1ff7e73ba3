"""Finite median algebras: representation, axiom scanning, intervals, convexity.

A median algebra here is a carrier {0..n-1} with a ternary operation m given
either as a flat n^3 lookup table (row-major, x-major) or as an evaluation
rule for generated families too large to materialise.  All subset arguments
and results are bitmasks (see bits.ElementSet).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from . import thresholds
from .bits import ElementSet, full_mask, iter_bits, lowest_bit, mask_of
from .errors import (
    MalformedInputError,
    PreconditionError,
    StructureError,
    ThresholdError,
    UsageError,
)


class MedianAlgebra:
    """Immutable finite median algebra.

    ``provenance`` is a construction descriptor dict (kind plus parameters)
    used for reporting and for fast-path algorithms such as coordinate
    halfspace families.  Instances are pure values: every operation is a read,
    and the lazy caches are write-once.
    """

    __slots__ = ("n", "provenance", "_rule", "_table", "_np_table", "_intervals")

    def __init__(self, n: int, table: Optional[list[int]] = None,
                 rule: Optional[Callable[[int, int, int], int]] = None,
                 provenance: Optional[dict] = None):
        if n < 1:
            raise MalformedInputError("carrier must be nonempty")
        if table is None and rule is None:
            raise MalformedInputError("need a median table or an evaluation rule")
        if table is not None:
            if len(table) != n ** 3:
                raise MalformedInputError(
                    f"median table has {len(table)} entries, expected n^3 = {n ** 3}")
            for i, v in enumerate(table):
                if not (0 <= v < n):
                    raise MalformedInputError(f"table[{i}] = {v} out of range 0..{n - 1}")
        self.n = n
        self.provenance = provenance or {"kind": "table"}
        self._rule = rule
        self._table = table
        self._np_table = None
        self._intervals = None

    # -- median evaluation ------------------------------------------------

    def m(self, x: int, y: int, z: int) -> int:
        t = self._table
        if t is not None:
            return t[(x * self.n + y) * self.n + z]
        return self._rule(x, y, z)

    @property
    def has_table(self) -> bool:
        return self._table is not None

    def table(self) -> list[int]:
        """Flat median table, materialising from the rule when permitted."""
        if self._table is None:
            limit = thresholds.max_table()
            if self.n > limit:
                raise ThresholdError(
                    f"will not materialise an n^3 table for n = {self.n} > {limit} "
                    f"(override with MEDIANALG_MAX_TABLE)")
            n, rule = self.n, self._rule
            self._table = [rule(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
        return self._table

    def np_table(self) -> np.ndarray:
        if self._np_table is None:
            n = self.n
            self._np_table = np.asarray(self.table(), dtype=np.int16).reshape(n, n, n)
        return self._np_table

    # -- interval cache ---------------------------------------------------

    def interval_masks(self) -> list[list[int]]:
        """n x n table of interval bitmasks; built once on first use."""
        if self._intervals is None:
            n = self.n
            limit = thresholds.max_interval_table()
            if n > limit:
                raise ThresholdError(
                    f"interval table refused for n = {self.n} > {limit} "
                    f"(override with MEDIANALG_MAX_INTERVAL_TABLE)")
            if self.has_table or n <= thresholds.max_table():
                t = self.table()
                rows = []
                for x in range(n):
                    row = []
                    for y in range(n):
                        base = (x * n + y) * n
                        mask = 0
                        for z in range(n):
                            if t[base + z] == z:
                                mask |= 1 << z
                        row.append(mask)
                    rows.append(row)
            else:
                rule = self._rule
                rows = []
                for x in range(n):
                    row = []
                    for y in range(n):
                        mask = 0
                        for z in range(n):
                            if rule(x, y, z) == z:
                                mask |= 1 << z
                        row.append(mask)
                    rows.append(row)
            self._intervals = rows
        return self._intervals

    def carrier_mask(self) -> int:
        return full_mask(self.n)

    def _check_element(self, *xs: int) -> None:
        for x in xs:
            if not (0 <= x < self.n):
                raise PreconditionError(f"element id {x} out of range 0..{self.n - 1}")

    def __repr__(self) -> str:
        return f"MedianAlgebra(n={self.n}, {self.provenance.get('kind', 'table')})"


# -- axiom verification ----------------------------------------------------

@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: Optional[str] = None       # "M1" | "M2" | "M3"
    witness: Optional[tuple] = None   # lexicographically least failing tuple
    mode: str = "exhaustive"          # "exhaustive" | "randomized"
    trials: Optional[int] = None
    seed: Optional[int] = None


def verify_axioms(A: MedianAlgebra, trials: Optional[int] = None,
                  seed: int = 0) -> AxiomReport:
    """Scan the three median axioms.

    Exhaustive when the table is available and n is within the M3 scan cap;
    otherwise a seeded randomized-tuple scan (trial count reported).  Passing
    ``trials`` forces the randomized mode.
    """
    n = A.n
    can_exhaust = n <= thresholds.max_axiom_exhaustive() and \
        (A.has_table or n <= thresholds.max_table())
    if trials is None and can_exhaust:
        return _verify_exhaustive(A)
    return _verify_randomized(A, trials if trials is not None else 100_000, seed)


def _verify_exhaustive(A: MedianAlgebra) -> AxiomReport:
    n = A.n
    T = A.np_table()
    ids = np.arange(n, dtype=np.int16)

    # M1: symmetry under all argument permutations.
    bad = np.zeros((n, n, n), dtype=bool)
    for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        bad |= T != T.transpose(perm)
    if bad.any():
        x, y, z = (int(v) for v in np.argwhere(bad)[0])
        return AxiomReport(False, "M1", (x, y, z))

    # M2: m(x,y,y) = y.
    diag = T[:, ids, ids]          # diag[x, y] = m(x, y, y)
    bad2 = diag != ids[None, :]
    if bad2.any():
        x, y = (int(v) for v in np.argwhere(bad2)[0])
        return AxiomReport(False, "M2", (x, y, y))

    # M3: m(m(x,y,z),u,v) = m(x, m(y,u,v), m(z,u,v)); sliced over x to keep
    # the n^5 comparison in n^4-sized temporaries.
    TY = T[:, None, :, :]
    TZ = T[None, :, :, :]
    for x in range(n):
        lhs = T[T[x]]              # [y,z,u,v]
        rhs = T[x][TY, TZ]         # [y,z,u,v]
        bad3 = lhs != rhs
        if bad3.any():
            y, z, u, v = (int(w) for w in np.argwhere(bad3)[0])
            return AxiomReport(False, "M3", (x, y, z, u, v))
    return AxiomReport(True)


def _verify_randomized(A: MedianAlgebra, trials: int, seed: int) -> AxiomReport:
    n = A.n
    rng = random.Random(seed)
    mfun = A.m
    for _ in range(trials):
        x, y, z, u, v = (rng.randrange(n) for _ in range(5))
        base = mfun(x, y, z)
        for p in permutations((x, y, z)):
            if mfun(*p) != base:
                return AxiomReport(False, "M1", tuple(sorted((x, y, z))),
                                   mode="randomized", trials=trials, seed=seed)
        if mfun(x, y, y) != y:
            return AxiomReport(False, "M2", (x, y, y),
                               mode="randomized", trials=trials, seed=seed)
        if mfun(base, u, v) != mfun(x, mfun(y, u, v), mfun(z, u, v)):
            return AxiomReport(False, "M3", (x, y, z, u, v),
                               mode="randomized", trials=trials, seed=seed)
    return AxiomReport(True, mode="randomized", trials=trials, seed=seed)


# -- intervals, convexity, hulls -------------------------------------------

def interval(A: MedianAlgebra, x: int, y: int) -> ElementSet:
    """The set {z : m(x,y,z) = z}; always contains x and y."""
    A._check_element(x, y)
    return A.interval_masks()[x][y]


def triple_intersection_check(A: MedianAlgebra, x: int, y: int, z: int) -> int:
    """Intersect the three pairwise intervals; the unique member is m(x,y,z).

    A non-singleton intersection signals a corrupt median table, so this
    doubles as a structural self-test.
    """
    A._check_element(x, y, z)
    inter = interval(A, x, y) & interval(A, y, z) & interval(A, x, z)
    if inter.bit_count() != 1:
        raise StructureError(
            f"interval triple intersection at ({x},{y},{z}) has {inter.bit_count()} "
            f"elements; median table is corrupt")
    w = lowest_bit(inter)
    if w != A.m(x, y, z):
        raise StructureError(
            f"triple intersection at ({x},{y},{z}) is {w}, median table says {A.m(x, y, z)}")
    return w


def is_convex(A: MedianAlgebra, S: ElementSet) -> bool:
    """True iff [x,y] is inside S for every pair x,y of S."""
    if S & ~A.carrier_mask():
        raise PreconditionError("subset mask has bits outside the carrier")
    iv = A.interval_masks()
    members = list(iter_bits(S))
    for i, x in enumerate(members):
        row = iv[x]
        for y in members[i + 1:]:
            if row[y] & ~S:
                return False
    return True


def convex_hull(A: MedianAlgebra, S: ElementSet) -> ElementSet:
    """Least convex superset of S (interval-closure fixpoint)."""
    if S & ~A.carrier_mask():
        raise PreconditionError("subset mask has bits outside the carrier")
    iv = A.interval_masks()
    cur = S
    while True:
        nxt = cur
        members = list(iter_bits(cur))
        for i, x in enumerate(members):
            row = iv[x]
            for y in members[i:]:
                nxt |= row[y]
        if nxt == cur:
            return cur
        cur = nxt


def subalgebra_closure(A: MedianAlgebra, S: ElementSet) -> ElementSet:
    """Least superset of S closed under the median operation."""
    if S & ~A.carrier_mask():
        raise PreconditionError("subset mask has bits outside the carrier")
    mfun = A.m
    cur = S
    fresh = list(iter_bits(S))
    members = list(fresh)
    while fresh:
        added = []
        k = len(members)
        # only triples touching a fresh element can produce new medians
        for z in fresh:
            for i in range(k):
                x = members[i]
                for j in range(i, k):
                    w = mfun(x, members[j], z)
                    if not (cur >> w) & 1:
                        cur |= 1 << w
                        added.append(w)
        members.extend(added)
        fresh = added
    return cur


def is_subalgebra(A: MedianAlgebra, S: ElementSet) -> bool:
    members = list(iter_bits(S))
    mfun = A.m
    k = len(members)
    for i in range(k):
        for j in range(i, k):
            for l in range(j, k):
                if not (S >> mfun(members[i], members[j], members[l])) & 1:
                    return False
    return True


def restrict(A: MedianAlgebra, S: ElementSet) -> tuple[MedianAlgebra, list[int]]:
    """Induced algebra on a subalgebra mask; returns (algebra, new-id -> old-id)."""
    if not is_subalgebra(A, S):
        raise PreconditionError("restriction requires a median-closed subset")
    old = sorted(iter_bits(S))
    index = {v: i for i, v in enumerate(old)}
    k = len(old)
    table = [0] * (k ** 3)
    for i, x in enumerate(old):
        for j, y in enumerate(old):
            for l, z in enumerate(old):
                table[(i * k + j) * k + l] = index[A.m(x, y, z)]
    prov = {"kind": "restriction", "parent": A.provenance, "members": old}
    return MedianAlgebra(k, table=table, provenance=prov), old


# -- products ----------------------------------------------------------------

def product(A: MedianAlgebra, B: MedianAlgebra) -> MedianAlgebra:
    """Coordinate-wise product; element (a, b) gets id a*|B| + b."""
    n = A.n * B.n
    limit = thresholds.max_table()
    if n > limit:
        raise ThresholdError(
            f"product carrier {A.n}*{B.n} = {n} exceeds the materialisation "
            f"limit {limit} (override with MEDIANALG_MAX_TABLE)")
    nb = B.n
    ta, tb = A.m, B.m
    table = [0] * n ** 3
    for x in range(n):
        xa, xb = divmod(x, nb)
        for y in range(n):
            ya, yb = divmod(y, nb)
            base = (x * n + y) * n
            for z in range(n):
                za, zb = divmod(z, nb)
                table[base + z] = ta(xa, ya, za) * nb + tb(xb, yb, zb)
    prov = {"kind": "product", "factors": [A.provenance, B.provenance]}
    return MedianAlgebra(n, table=table, provenance=prov)


def product_projections(P: MedianAlgebra, A: MedianAlgebra, B: MedianAlgebra):
    """The two coordinate projections of product(A, B) as MpMaps."""
    if P.n != A.n * B.n:
        raise UsageError("algebra is not the product of the given factors")
    nb = B.n
    p1 = MpMap(P, A, tuple(x // nb for x in range(P.n)))
    p2 = MpMap(P, B, tuple(x % nb for x in range(P.n)))
    return p1, p2


# -- median-preserving maps ---------------------------------------------------

@dataclass(frozen=True)
class MpMap:
    """Total map between two algebras; candidate median homomorphism."""
    source: MedianAlgebra
    target: MedianAlgebra
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source.n:
            raise PreconditionError("map values must cover the whole source carrier")
        for v in self.values:
            if not (0 <= v < self.target.n):
                raise PreconditionError(f"map value {v} outside the target carrier")

    def __call__(self, x: int) -> int:
        return self.values[x]


def is_mp_map(f: MpMap) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check f(m(x,y,z)) = m(f x, f y, f z) on all triples.

    Both sides are symmetric in (x,y,z), so scanning sorted triples suffices;
    the witness returned is the lexicographically least failing triple.
    """
    n = f.source.n
    ms, mt = f.source.m, f.target.m
    vals = f.values
    for x in range(n):
        fx = vals[x]
        for y in range(x, n):
            fy = vals[y]
            for z in range(y, n):
                if vals[ms(x, y, z)] != mt(fx, fy, vals[z]):
                    return False, (x, y, z)
    return True, None


def is_convexity_preserving(f: MpMap) -> bool:
    """Preimages of convex target sets are convex (equivalent to MP)."""
    tn = f.target.n
    if tn > 16:
        raise ThresholdError("convexity-preserving scan refused for targets with n > 16")
    full = full_mask(tn)
    pre = [0] * tn
    for x, v in enumerate(f.values):
        pre[v] |= 1 << x
    for C in range(full + 1):
        if not is_convex(f.target, C):
            continue
        preimage = 0
        for t in iter_bits(C):
            preimage |= pre[t]
        if not is_convex(f.source, preimage):
            return False
    return True


def compose(g: MpMap, f: MpMap) -> MpMap:
    if f.target is not g.source:
        raise UsageError("maps do not compose: target/source mismatch")
    return MpMap(f.source, g.target, tuple(g.values[v] for v in f.values))


def adjacent_pairs(A: MedianAlgebra) -> list[tuple[int, int]]:
    """Pairs {u,v} with [u,v] = {u,v}: the edges of the covering graph."""
    iv = A.interval_masks()
    out = []
    for u in range(A.n):
        row = iv[u]
        for v in range(u + 1, A.n):
            if row[v] == (1 << u) | (1 << v):
                out.append((u, v))
    return out
