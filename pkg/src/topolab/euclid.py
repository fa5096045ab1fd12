"""Open-interval sets on the Euclidean line with exact rational endpoints.

The game engine's metrizable comparison model: finite unions of bounded open
intervals (a, b).  Overlapping components merge; touching ones do not (the
shared endpoint is missing from the union), so equality of canonical forms
is equality of sets.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class EOpenSet:
    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[tuple[Fraction, Fraction]] = ()):
        items = []
        for lo, hi in parts:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo < hi:
                items.append((lo, hi))
        items.sort()
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in items:
            if merged and lo < merged[-1][1]:  # strict: touching stays split
                plo, phi = merged[-1]
                merged[-1] = (plo, max(phi, hi))
            else:
                merged.append((lo, hi))
        self.parts = tuple(merged)

    @classmethod
    def empty(cls) -> EOpenSet:
        return cls(())

    @classmethod
    def interval(cls, a, b) -> EOpenSet:
        return cls(((a, b),))

    def is_empty(self) -> bool:
        return not self.parts

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, EOpenSet) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def contains(self, q) -> bool:
        q = Fraction(q)
        return any(lo < q < hi for lo, hi in self.parts)

    def intersect(self, other: EOpenSet) -> EOpenSet:
        out = []
        for alo, ahi in self.parts:
            for blo, bhi in other.parts:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo < hi:
                    out.append((lo, hi))
        return EOpenSet(out)

    def is_subset(self, other: EOpenSet) -> bool:
        # interval-by-interval containment: each component must fit inside
        # a single component of the other (open sets, exact endpoints)
        for lo, hi in self.parts:
            if not any(blo <= lo and hi <= bhi for blo, bhi in other.parts):
                return False
        return True

    def span(self) -> Fraction:
        if not self.parts:
            return Fraction(0)
        return self.parts[-1][1] - self.parts[0][0]

    def first_component(self) -> tuple[Fraction, Fraction]:
        if not self.parts:
            raise ValueError("empty set")
        return self.parts[0]

    def sample(self) -> Fraction:
        lo, hi = self.first_component()
        return (lo + hi) / 2

    def serialize(self) -> list[str]:
        return [f"({lo.numerator}/{lo.denominator}, {hi.numerator}/{hi.denominator})"
                for lo, hi in self.parts]

    def __str__(self) -> str:
        return " u ".join(self.serialize()) if self.parts else "(empty)"

    def __repr__(self) -> str:
        return f"EOpenSet<{self}>"
