"""Exact half-open interval algebra on the Sorgenfrey line plus its pi-base rules.

Open sets are canonical finite unions of components ``[a, b)`` where either
end may be infinite.  Every canonical set is clopen in the lower-limit
topology, so the algebra supports exact complement, intersection, union,
and equality with rational endpoints throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .finseq import FinSeq
from .seqcore import SchemeRule, SetAlgebra, scheme_address

# Components are (lo, hi) pairs; None means -inf in the lo slot and +inf in
# the hi slot.  The denoted set is [lo, hi), with an open left end at -inf.


@dataclass(frozen=True, slots=True)
class HalfInterval:
    """A bounded base interval [left, right) with rational endpoints."""

    left: Fraction
    right: Fraction

    def __post_init__(self) -> None:
        if self.left >= self.right:
            raise ValueError(f"need left < right, got [{self.left}, {self.right})")

    def as_open_set(self) -> SOpenSet:
        return SOpenSet.interval(self.left, self.right)


def _lo_key(lo):
    return (0,) if lo is None else (1, lo)


def _le_lo_hi(lo, hi) -> bool:
    # lo <= hi where lo may be -inf (None) and hi may be +inf (None)
    if lo is None or hi is None:
        return True
    return lo <= hi


class SOpenSet:
    """Canonical finite union of half-open intervals and rays."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[tuple[Fraction | None, Fraction | None]] = (), *, _canonical=False):
        if _canonical:
            self.parts = tuple(parts)
            return
        self.parts = self._canonicalize(parts)

    @staticmethod
    def _canonicalize(parts) -> tuple:
        items = []
        for lo, hi in parts:
            if lo is not None:
                lo = Fraction(lo)
            if hi is not None:
                hi = Fraction(hi)
            if lo is not None and hi is not None and lo >= hi:
                if lo > hi:
                    raise ValueError(f"component with lo > hi: [{lo}, {hi})")
                continue  # empty component
            items.append((lo, hi))
        items.sort(key=lambda p: _lo_key(p[0]))
        merged: list = []
        for lo, hi in items:
            if merged:
                plo, phi = merged[-1]
                # overlap or adjacency: [a,b) followed by [b,c) merges exactly
                if phi is None or (lo is not None and lo <= phi):
                    if phi is not None and (hi is None or hi > phi):
                        merged[-1] = (plo, hi)
                    continue
            merged.append((lo, hi))
        return tuple(merged)

    # ---- constructors -------------------------------------------------

    @classmethod
    def empty(cls) -> SOpenSet:
        return cls((), _canonical=True)

    @classmethod
    def full_line(cls) -> SOpenSet:
        return cls(((None, None),), _canonical=True)

    @classmethod
    def interval(cls, a, b) -> SOpenSet:
        return cls(((Fraction(a), Fraction(b)),))

    @classmethod
    def ray_from(cls, c) -> SOpenSet:
        return cls(((Fraction(c), None),), _canonical=True)

    @classmethod
    def ray_below(cls, c) -> SOpenSet:
        return cls(((None, Fraction(c)),), _canonical=True)

    # ---- basic queries -------------------------------------------------

    def is_empty(self) -> bool:
        return not self.parts

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, SOpenSet) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def contains(self, q) -> bool:
        q = Fraction(q)
        for lo, hi in self.parts:
            if (lo is None or lo <= q) and (hi is None or q < hi):
                return True
        return False

    def contains_segment(self, p, q) -> bool:
        """Exact test for the closed segment [p, q] (p <= q) being inside."""
        p, q = Fraction(p), Fraction(q)
        if p > q:
            raise ValueError("need p <= q")
        for lo, hi in self.parts:
            if (lo is None or lo <= p) and (hi is None or q < hi):
                return True
        return False

    def span(self) -> Fraction | None:
        """sup - inf of the set; None when unbounded (or undefined on empty)."""
        if not self.parts:
            return Fraction(0)
        lo = self.parts[0][0]
        hi = self.parts[-1][1]
        if lo is None or hi is None:
            return None
        return hi - lo

    def max_component_width(self) -> Fraction | None:
        widest: Fraction | None = Fraction(0)
        for lo, hi in self.parts:
            if lo is None or hi is None:
                return None
            widest = max(widest, hi - lo)
        return widest

    # ---- algebra -------------------------------------------------------

    def union(self, other: SOpenSet) -> SOpenSet:
        return SOpenSet(self.parts + other.parts)

    def intersect(self, other: SOpenSet) -> SOpenSet:
        out = []
        for alo, ahi in self.parts:
            for blo, bhi in other.parts:
                lo = blo if alo is None else alo if blo is None else max(alo, blo)
                if ahi is None:
                    hi = bhi
                elif bhi is None:
                    hi = ahi
                else:
                    hi = min(ahi, bhi)
                if lo is None or hi is None or lo < hi:
                    out.append((lo, hi))
        return SOpenSet(out)

    def complement(self) -> SOpenSet:
        if not self.parts:
            return SOpenSet.full_line()
        out = []
        cursor = None  # current left edge of the gap; None = -inf
        first_lo = self.parts[0][0]
        if first_lo is not None:
            out.append((None, first_lo))
        for i, (lo, hi) in enumerate(self.parts):
            if hi is None:
                return SOpenSet(out)
            nxt = self.parts[i + 1][0] if i + 1 < len(self.parts) else None
            out.append((hi, nxt))
        return SOpenSet(out)

    def difference(self, other: SOpenSet) -> SOpenSet:
        return self.intersect(other.complement())

    def is_subset(self, other: SOpenSet) -> bool:
        return self.difference(other).is_empty()

    def __iter__(self) -> Iterator[tuple[Fraction | None, Fraction | None]]:
        return iter(self.parts)

    # ---- serialization ---------------------------------------------------

    @staticmethod
    def _fmt_q(q: Fraction) -> str:
        return f"{q.numerator}/{q.denominator}"

    def serialize(self) -> list[str]:
        toks = []
        for lo, hi in self.parts:
            left = "(-inf" if lo is None else f"[{self._fmt_q(lo)}"
            right = "+inf)" if hi is None else f"{self._fmt_q(hi)})"
            toks.append(f"{left}, {right}")
        return toks

    @classmethod
    def parse(cls, tokens: Iterable[str] | str) -> SOpenSet:
        if isinstance(tokens, str):
            tokens = [tokens]
        parts = []
        for tok in tokens:
            body = tok.strip()
            left, right = body.split(",")
            left, right = left.strip(), right.strip()
            if left == "(-inf":
                lo = None
            elif left.startswith("["):
                lo = Fraction(left[1:])
            else:
                raise ValueError(f"bad interval token: {tok!r}")
            if right == "+inf)":
                hi = None
            elif right.endswith(")"):
                hi = Fraction(right[:-1])
            else:
                raise ValueError(f"bad interval token: {tok!r}")
            parts.append((lo, hi))
        return cls(parts)

    def __str__(self) -> str:
        return " u ".join(self.serialize()) if self.parts else "(empty)"

    def __repr__(self) -> str:
        return f"SOpenSet<{self}>"


class SorgenfreyAlgebra(SetAlgebra):
    """Exact set-algebra oracle over canonical SOpenSets."""

    def __init__(self, universe: SOpenSet | None = None):
        self.universe = universe if universe is not None else SOpenSet.full_line()

    def is_empty(self, a: SOpenSet) -> bool:
        return a.is_empty()

    def intersect(self, a: SOpenSet, b: SOpenSet) -> SOpenSet:
        return a.intersect(b)

    def union(self, a: SOpenSet, b: SOpenSet) -> SOpenSet:
        return a.union(b)

    def equal(self, a: SOpenSet, b: SOpenSet) -> bool:
        return a == b

    def is_subset(self, a: SOpenSet, b: SOpenSet) -> bool:
        return a.is_subset(b)

    def contains(self, a: SOpenSet, point) -> bool:
        return a.contains(point)

    def cover_equal(self, parent: SOpenSet, children: list[SOpenSet], tail: SOpenSet) -> bool:
        acc = tail
        for ch in children:
            acc = acc.union(ch)
        return acc == parent


# ---------------------------------------------------------------------------
# Integer block zigzag: 0, -1, 1, -2, 2, ...


def zigzag_int(n: int) -> int:
    return (n + 1) // 2 * (-1 if n % 2 else 1)


def zigzag_index(z: int) -> int:
    if z == 0:
        return 0
    return 2 * z if z > 0 else -2 * z - 1


def _halving_cut(a: Fraction, b: Fraction, n: int) -> Fraction:
    # x_n = b - (b - a) / 2^n; x_0 = a, increasing to b
    return b - (b - a) / (1 << n)


def make_pi_base() -> SchemeRule:
    """Level-wise pi-base rule for the Sorgenfrey line.

    The root is the whole line; level one enumerates the blocks [z, z+1)
    in zigzag order; below that, a node [a, b) is cut at
    x_n = b - (b-a)/2^n, so child n is [x_n, x_{n+1}).  Depth-k nodes have
    width at most 2^(1-k), and the cut gaps at a depth-k node are below
    1/k, which witnesses the neighborhood-tail condition.
    """
    full = SOpenSet.full_line()

    def child(payload: SOpenSet, n: int) -> SOpenSet:
        if payload == full:
            z = zigzag_int(n)
            return SOpenSet.interval(z, z + 1)
        (lo, hi), = payload.parts
        return SOpenSet.interval(_halving_cut(lo, hi, n), _halving_cut(lo, hi, n + 1))

    def tail(payload: SOpenSet, bound: int) -> SOpenSet:
        if payload == full:
            used = SOpenSet.empty()
            for n in range(bound + 1):
                z = zigzag_int(n)
                used = used.union(SOpenSet.interval(z, z + 1))
            return full.difference(used)
        (lo, hi), = payload.parts
        return SOpenSet.interval(_halving_cut(lo, hi, bound + 1), hi)

    def width(payload: SOpenSet) -> Fraction | None:
        return payload.max_component_width()

    def affine_key(payload: SOpenSet):
        if payload == full:
            return "root"
        return payload.max_component_width()

    def locate(q, payload: SOpenSet, bound: int) -> int | None:
        q = Fraction(q)
        if payload == full:
            z = q.__floor__()
            idx = zigzag_index(z)
            return idx if idx <= bound else None
        (lo, hi), = payload.parts
        if not (lo <= q < hi):
            return None
        n = 0
        while n <= bound:
            if q < _halving_cut(lo, hi, n + 1):
                return n
            n += 1
        return None

    def gaps(payload: SOpenSet, bound: int) -> list[Fraction]:
        if payload == full:
            return []
        (lo, hi), = payload.parts
        return [
            _halving_cut(lo, hi, n + 1) - _halving_cut(lo, hi, n)
            for n in range(bound + 1)
        ]

    return SchemeRule(
        root=full,
        child=child,
        label="sorgenfrey-pi-base",
        tail=tail,
        width=width,
        affine_key=affine_key,
        locate=locate,
        gaps=gaps,
    )


def make_pi_base_with_endpoints(mandated: Iterable[Fraction]) -> SchemeRule:
    """Pi-base rule whose node right-endpoints include every mandated point.

    Each point of the finite set lands as a cut of the shallowest node whose
    interior contains it (integers are block endpoints already).  Between
    consecutive forced cuts the splitting is an equal subdivision fine enough
    to keep every gap below 1/depth; past the last forced cut the usual
    halving tail runs to the right endpoint.
    """
    forced = tuple(sorted({Fraction(d) for d in mandated}))
    full = SOpenSet.full_line()

    # payloads: "root" -> full line; otherwise (lo, hi, depth)

    def _cuts(lo: Fraction, hi: Fraction, depth: int):
        """Infinite increasing cut sequence for [lo, hi) at the given depth."""
        inner = [d for d in forced if lo < d < hi]
        prefix = [lo]
        base = lo
        for point in inner:
            segments = int((point - base) * depth) + 1  # gap < 1/depth
            step = (point - base) / segments
            for i in range(1, segments):
                prefix.append(base + step * i)
            prefix.append(point)
            base = point
        return prefix, base  # halving tail runs from `base` to hi

    def _cut_at(payload, n: int) -> Fraction:
        lo, hi, depth = payload
        prefix, base = _cuts(lo, hi, depth)
        if n < len(prefix):
            return prefix[n]
        return _halving_cut(base, hi, n - len(prefix) + 1)

    def child(payload, n: int):
        if payload == "root":
            z = zigzag_int(n)
            return (Fraction(z), Fraction(z + 1), 1)
        lo, hi, depth = payload
        return (_cut_at(payload, n), _cut_at(payload, n + 1), depth + 1)

    def as_set(payload) -> SOpenSet:
        if payload == "root":
            return full
        lo, hi, _ = payload
        return SOpenSet.interval(lo, hi)

    def tail(payload, bound: int) -> SOpenSet:
        if payload == "root":
            used = SOpenSet.empty()
            for n in range(bound + 1):
                z = zigzag_int(n)
                used = used.union(SOpenSet.interval(z, z + 1))
            return full.difference(used)
        lo, hi, _ = payload
        return SOpenSet.interval(_cut_at(payload, bound + 1), hi)

    def width(payload) -> Fraction | None:
        if payload == "root":
            return None
        lo, hi, _ = payload
        return hi - lo

    def locate(q, payload, bound: int) -> int | None:
        q = Fraction(q)
        if payload == "root":
            idx = zigzag_index(q.__floor__())
            return idx if idx <= bound else None
        lo, hi, _ = payload
        if not (lo <= q < hi):
            return None
        for n in range(bound + 1):
            if _cut_at(payload, n) <= q < _cut_at(payload, n + 1):
                return n
        return None

    def gaps(payload, bound: int) -> list[Fraction]:
        if payload == "root":
            return []
        return [_cut_at(payload, n + 1) - _cut_at(payload, n) for n in range(bound + 1)]

    return SchemeRule(
        root="root",
        child=child,
        label="sorgenfrey-pi-base-endpoints",
        tail=tail,
        width=width,
        as_set=as_set,
        locate=locate,
        gaps=gaps,
    )


def address(q, rule: SchemeRule, depth: int) -> FinSeq:
    """Address of the rational q in an interval pi-base rule, to the depth."""
    return scheme_address(Fraction(q), rule, rule.locate, depth)


# ---------------------------------------------------------------------------
# Clopen decomposition into countably many nonempty clopen pieces.


def first_half_interval(a_set: SOpenSet) -> tuple[Fraction, Fraction]:
    """A bounded [a, b) inside the set, carved from its first component."""
    if a_set.is_empty():
        raise ValueError("empty set")
    lo, hi = a_set.parts[0]
    if lo is None and hi is None:
        return Fraction(0), Fraction(1)
    if lo is None:
        return hi - 1, hi
    if hi is None:
        return lo, lo + 1
    return lo, hi


def decompose_clopen(a_set: SOpenSet) -> Iterator[SOpenSet]:
    """Countable partition of a nonempty clopen set into nonempty clopen pieces.

    Picks [a, b) inside the first component, emits the remainder (when
    nonempty) and then the ladder pieces [b - (b-a)/(n+1), b - (b-a)/(n+2)).
    """
    if a_set.is_empty():
        raise ValueError("empty set")
    a, b = first_half_interval(a_set)
    rest = a_set.difference(SOpenSet.interval(a, b))
    if not rest.is_empty():
        yield rest
    w = b - a
    n = 0
    while True:
        piece = SOpenSet.interval(b - w / (n + 1), b - w / (n + 2))
        yield piece
        n += 1


def decompose_prefix(a_set: SOpenSet, count: int) -> tuple[list[SOpenSet], SOpenSet]:
    """First `count` pieces of the decomposition plus the exact residual."""
    gen = decompose_clopen(a_set)
    pieces = [next(gen) for _ in range(count)]
    residual = a_set
    for p in pieces:
        residual = residual.difference(p)
    return pieces, residual
