"""Exact rational-valued functions on a carrier and families thereof."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import MedianAlgebra
from .errors import MalformedInputError, PreconditionError


def _mid3(a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    return sorted((a, b, c))[1]


@dataclass(frozen=True)
class RationalFunctionTable:
    """Total exact rational function on {0..n-1}."""
    n: int
    values: tuple[Fraction, ...]
    bounds: Optional[tuple[Fraction, Fraction]] = None

    def __post_init__(self):
        if len(self.values) != self.n:
            raise MalformedInputError(
                f"function table has {len(self.values)} values, expected {self.n}")
        if self.bounds is not None:
            lo, hi = self.bounds
            for i, v in enumerate(self.values):
                if not (lo <= v <= hi):
                    raise MalformedInputError(
                        f"value[{i}] = {v} outside declared range [{lo}, {hi}]")

    def __call__(self, x: int) -> Fraction:
        return self.values[x]

    def add(self, other: "RationalFunctionTable") -> "RationalFunctionTable":
        if self.n != other.n:
            raise PreconditionError("function tables live on different carriers")
        return RationalFunctionTable(
            self.n, tuple(a + b for a, b in zip(self.values, other.values)))


def table_from_ints(values: Sequence[int]) -> RationalFunctionTable:
    return RationalFunctionTable(len(values), tuple(Fraction(v) for v in values))


def unit_range() -> tuple[Fraction, Fraction]:
    return Fraction(0), Fraction(1)


@dataclass(frozen=True)
class FunctionFamily:
    """Finite family of rational functions on one carrier, values in [0,1]
    unless other bounds are declared."""
    n: int
    functions: tuple[RationalFunctionTable, ...]
    bounds: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))

    def __post_init__(self):
        lo, hi = self.bounds
        for k, f in enumerate(self.functions):
            if f.n != self.n:
                raise MalformedInputError(f"function {k} has carrier size {f.n}, expected {self.n}")
            for v in f.values:
                if not (lo <= v <= hi):
                    raise MalformedInputError(
                        f"function {k} takes value {v} outside [{lo}, {hi}]")

    def __len__(self) -> int:
        return len(self.functions)


def is_mp_into_chain(A: MedianAlgebra, f: RationalFunctionTable) -> bool:
    """f(m(x,y,z)) is the middle of the three values, for all triples."""
    if f.n != A.n:
        raise PreconditionError("function carrier does not match the algebra")
    vals = f.values
    mfun = A.m
    n = A.n
    for x in range(n):
        for y in range(x, n):
            for z in range(y, n):
                if vals[mfun(x, y, z)] != _mid3(vals[x], vals[y], vals[z]):
                    return False
    return True


def pointwise_limit(tables: Sequence[RationalFunctionTable],
                    tail: int = 2) -> RationalFunctionTable:
    """Limit of a pointwise convergent sequence on a finite carrier.

    Convergence on a finite carrier means each point's value is eventually
    constant; as evidence the last ``tail`` entries must already agree at every
    point, and that shared tail value is returned.
    """
    if len(tables) < tail:
        raise PreconditionError(f"need at least {tail} sequence entries")
    n = tables[0].n
    for t in tables:
        if t.n != n:
            raise PreconditionError("sequence mixes carrier sizes")
    limit = tables[-1].values
    for x in range(n):
        if any(t.values[x] != limit[x] for t in tables[-tail:]):
            raise PreconditionError(f"sequence has not stabilised at point {x}")
    return RationalFunctionTable(n, tuple(limit))
