"""Cantor-Bendixson analysis of compact countable ordinal spaces and the
closed-open map compiler from the Sorgenfrey line onto them.

Spaces are order-topology intervals [0, top] with top below omega^omega, or
finite topological sums of such blocks.  Ranks and heights come from the
last-exponent formula on interval-relative coordinates; an independent
brute-force stage-removal derivative over coefficient grids cross-checks
them.  The map compiler realizes the recursion: sum targets split the domain
through the clopen ladder decomposition, limit targets peel their top point
against a dyadic clopen base at the domain anchor, and singleton targets
are constant leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .euclid import EOpenSet
from .finseq import FinSeq
from .ordinals import ZERO, OrdinalCNF, FundamentalSequence
from .sorgenfrey import SOpenSet, decompose_prefix, first_half_interval


# ---------------------------------------------------------------------------
# Intervals, subspaces, ranks.


@dataclass(frozen=True, slots=True)
class OrdinalInterval:
    """(lo, top] when lo is given, [0, top] when lo is None; clopen in context."""

    lo: OrdinalCNF | None
    top: OrdinalCNF

    def __post_init__(self) -> None:
        if self.lo is not None and not self.lo < self.top:
            raise ValueError(f"need lo < top, got ({self.lo}, {self.top}]")

    def base(self) -> OrdinalCNF:
        return self.lo if self.lo is not None else ZERO

    def contains(self, x: OrdinalCNF) -> bool:
        if self.lo is None:
            return x <= self.top
        return self.lo < x <= self.top

    def length(self) -> OrdinalCNF:
        return self.top - self.base()

    def is_singleton(self) -> bool:
        if self.lo is None:
            return self.top == ZERO
        return self.top == self.lo.successor()

    def only_point(self) -> OrdinalCNF:
        if not self.is_singleton():
            raise ValueError(f"{self} is not a singleton")
        return self.top

    def rank_of(self, x: OrdinalCNF) -> int:
        """Cantor-Bendixson rank of x inside this interval."""
        if not self.contains(x):
            raise ValueError(f"{x} not in {self}")
        return (x - self.base()).last_exponent()

    def height(self) -> int:
        """First derivative stage with nothing left; finite below w^w."""
        if self.is_singleton():
            return 1
        return self.length().leading_exponent() + 1

    def serialize(self) -> str:
        left = "[0" if self.lo is None else f"({self.lo.serialize()}"
        return f"{left}, {self.top.serialize()}]"

    def __str__(self) -> str:
        return self.serialize()


def space_interval(top: OrdinalCNF) -> OrdinalInterval:
    return OrdinalInterval(None, top)


def open_interval_height(lo: OrdinalCNF, hi: OrdinalCNF) -> int:
    """Height of the open order interval (lo, hi); empty intervals give 0.

    With hi - lo = w^K * c + rho, the punctured interior reaches rank K
    exactly when some multiple of w^K lies strictly below hi - lo, i.e. when
    c >= 2 or rho > 0; a pure w^K length stops at rank K - 1.
    """
    if not lo < hi:
        return 0
    length = hi - lo
    if length == OrdinalCNF.from_int(1):
        return 0
    big_k = length.leading_exponent()
    if length == OrdinalCNF.omega_power(big_k):
        return big_k
    return big_k + 1


@dataclass(frozen=True)
class OrdinalSpace:
    """A compact scattered space: one block [0, top] or a finite sum of them."""

    blocks: tuple[OrdinalCNF, ...]

    @classmethod
    def single(cls, top: OrdinalCNF) -> OrdinalSpace:
        return cls((top,))

    @classmethod
    def parse(cls, text: str) -> OrdinalSpace:
        """Accepts the point-count form: "w^2+1" means the space [0, w^2]."""
        alpha = OrdinalCNF.parse(text)
        if alpha.is_zero():
            raise ValueError("the empty space is not a valid target")
        if not alpha.is_successor():
            raise ValueError(
                f"{text!r} is a limit ordinal; compact spaces need a successor point count"
            )
        return cls.single(alpha.predecessor())

    def is_single(self) -> bool:
        return len(self.blocks) == 1

    def height(self) -> int:
        return max(space_interval(t).height() for t in self.blocks)

    def serialize(self) -> list[str]:
        return [space_interval(t).serialize() for t in self.blocks]


class SubSpace:
    """Canonical finite union of ordinal intervals inside an ambient block.

    Separated components are clopen in the union, so the union is the
    topological sum of its components and ranks reduce to the per-component
    formula.
    """

    __slots__ = ("components",)

    def __init__(self, components: Iterable[OrdinalInterval]):
        items = sorted(components, key=lambda c: (c.lo is not None, c.lo or ZERO, c.top))
        merged: list[OrdinalInterval] = []
        for comp in items:
            if merged:
                prev = merged[-1]
                if comp.lo is not None and comp.lo <= prev.top:
                    if comp.top > prev.top:
                        merged[-1] = OrdinalInterval(prev.lo, comp.top)
                    continue
            merged.append(comp)
        self.components = tuple(merged)

    def is_empty(self) -> bool:
        return not self.components

    def contains(self, x: OrdinalCNF) -> bool:
        return any(c.contains(x) for c in self.components)

    def component_of(self, x: OrdinalCNF) -> OrdinalInterval:
        for c in self.components:
            if c.contains(x):
                return c
        raise ValueError(f"{x} not in subspace")

    def rank_of(self, x: OrdinalCNF) -> int:
        return self.component_of(x).rank_of(x)

    def height(self) -> int:
        return max((c.height() for c in self.components), default=0)

    def serialize(self) -> list[str]:
        return [c.serialize() for c in self.components]


def isolating_neighborhood(x: OrdinalCNF, top: OrdinalCNF, n: int = 0) -> OrdinalInterval:
    """A clopen neighborhood (cut, x] of x in [0, top] whose punctured part
    has height at most the rank of x.

    Successors and zero get their singleton; a limit x takes the n-th
    fundamental cut below it.
    """
    iv = space_interval(top)
    if not iv.contains(x):
        raise ValueError(f"{x} not in the space")
    if x.is_zero():
        return OrdinalInterval(None, x)
    if x.is_successor():
        return OrdinalInterval(x.predecessor(), x)
    return OrdinalInterval(FundamentalSequence(x)(n), x)


# ---------------------------------------------------------------------------
# Cantor-Bendixson report with the brute-force cross-check.


@dataclass
class CBLevel:
    alpha: int
    description: str
    sample: list[str]


@dataclass
class CBReport:
    space: OrdinalSpace
    height: int
    levels: list[CBLevel]
    brute_points: int = 0
    brute_agrees: bool | None = None

    def rank(self, x: OrdinalCNF) -> int:
        for top in self.space.blocks:
            iv = space_interval(top)
            if iv.contains(x):
                return iv.rank_of(x)
        raise ValueError(f"{x} not in the space")

    def level_contains(self, alpha: int, x: OrdinalCNF) -> bool:
        return self.rank(x) == alpha

    def to_payload(self) -> dict:
        return {
            "space": self.space.serialize(),
            "height": self.height,
            "levels": [
                {"alpha": lv.alpha, "description": lv.description, "sample": lv.sample}
                for lv in self.levels
            ],
            "brute_points": self.brute_points,
            "brute_agrees": self.brute_agrees,
        }


def coefficient_grid(top: OrdinalCNF, coeff_bound: int) -> list[OrdinalCNF]:
    """All ordinals <= top whose CNF coefficients stay <= coeff_bound."""
    lead = top.leading_exponent()
    grid: list[OrdinalCNF] = [ZERO]
    for exp in range(lead, -1, -1):
        extended = list(grid)
        for coeff in range(1, coeff_bound + 1):
            term = OrdinalCNF.omega_power(exp, coeff)
            for g in grid:
                extended.append(g + term)
        grid = extended
    return sorted({g for g in grid if g <= top})


def brute_cb_ranks(points: Iterable[OrdinalCNF], ladder_len: int = 8) -> dict[OrdinalCNF, int]:
    """Independent stage-removal derivative over an explicit point set.

    A point survives a stage while at least two of its fundamental-ladder
    points are still alive; successors and zero fall at once.  The removal
    stage is the point's rank.  No closed-form rank is consulted.
    """
    residue = set(points)
    ladders: dict[OrdinalCNF, list[OrdinalCNF]] = {}
    for x in residue:
        if x.is_limit():
            seq = FundamentalSequence(x)
            ladders[x] = [seq(n) for n in range(ladder_len)]
    stage = 0
    ranks: dict[OrdinalCNF, int] = {}
    while residue:
        fallen = set()
        for x in residue:
            if x not in ladders:
                fallen.add(x)
            else:
                alive = sum(1 for y in ladders[x] if y in residue)
                if alive < 2:
                    fallen.add(x)
        if not fallen:
            raise RuntimeError("derivative stalled; ladder too short for the grid")
        for x in fallen:
            ranks[x] = stage
        residue -= fallen
        stage += 1
    return ranks


def _level_samples(top: OrdinalCNF, alpha: int) -> list[OrdinalCNF]:
    if alpha == 0:
        out = [ZERO, OrdinalCNF.from_int(1), OrdinalCNF.from_int(2)]
    else:
        out = [OrdinalCNF.omega_power(alpha, c) for c in (1, 2, 3)]
    return [x for x in out if x <= top]


def cb_analyze(space: OrdinalSpace | OrdinalCNF | str, truncation: int = 0) -> CBReport:
    """Symbolic levels, height, and ranks, optionally brute-force checked.

    With `truncation` > 0 the closed-form ranks are compared against the
    stage-removal derivative on a coefficient grid of at most that many
    points; the check runs for blocks of leading exponent <= 2 (larger
    blocks blow past any sensible grid).
    """
    if isinstance(space, str):
        space = OrdinalSpace.parse(space)
    elif isinstance(space, OrdinalCNF):
        space = OrdinalSpace.single(space)
    height = space.height()
    levels = []
    for alpha in range(height):
        sample = []
        for top in space.blocks:
            iv = space_interval(top)
            for x in _level_samples(top, alpha):
                if iv.rank_of(x) == alpha:
                    sample.append(x.serialize())
        levels.append(CBLevel(
            alpha,
            f"points whose interval rank is exactly {alpha}",
            sample[:6],
        ))
    report = CBReport(space, height, levels)

    if truncation > 0:
        total = 0
        agrees = True
        for top in space.blocks:
            if top.leading_exponent() > 2:
                continue
            bound = 2
            while bound < 200 and len(coefficient_grid(top, bound + 1)) <= truncation:
                bound += 1
            grid = coefficient_grid(top, bound)
            ranks = brute_cb_ranks(grid, ladder_len=max(4, min(bound, 16)))
            iv = space_interval(top)
            for x, stage in ranks.items():
                if stage != iv.rank_of(x):
                    agrees = False
            brute_height = max(ranks.values()) + 1 if ranks else 0
            if brute_height != iv.height():
                agrees = False
            total += len(grid)
        report.brute_points = total
        report.brute_agrees = agrees
    return report


# ---------------------------------------------------------------------------
# The closed-open map compiler.


@dataclass
class MapLeaf:
    domain: SOpenSet
    value: OrdinalCNF

    def target_top(self) -> OrdinalCNF:
        return self.value


class MapNode:
    """Limit-target node: the domain anchor maps to the target's top point.

    The domain splits along the dyadic base U_n = Z intersect [z0, z0 + w/2^n)
    at the anchor z0 (piece 0 absorbs the other components); the target
    splits along the fundamental cuts below its top.  Children pair the two
    partitions and are compiled lazily.
    """

    def __init__(self, domain: SOpenSet, target: OrdinalInterval):
        if not target.top.is_limit():
            raise ValueError("limit node needs a limit top")
        self.domain = domain
        self.target = target
        a, b = first_half_interval(domain)
        self.z0 = a
        self.width = b - a
        self.y0 = target.top
        self._seq = FundamentalSequence(target.top)
        self._children: dict[int, object] = {}
        # cut index 0 sits at the fundamental base; interval lows below the
        # target's low are clipped away by _piece_interval
        self._head = OrdinalInterval(target.lo, self._cut(self._first_cut_index())) \
            if self._has_head() else None

    def _cut(self, n: int) -> OrdinalCNF:
        return self._seq.cut(n)

    def _first_cut_index(self) -> int:
        # least n with cut(n) > target lo (or >= 0 point for [0, ...])
        lo = self.target.lo
        n = 0
        while True:
            c = self._cut(n)
            if lo is None:
                if c >= ZERO:
                    return n
            elif c > lo:
                return n
            n += 1

    def _has_head(self) -> bool:
        # a head piece exists when the first cut sits strictly above the low
        # end of the target (for [0, top] the head is [0, cut0])
        n0 = self._first_cut_index()
        c = self._cut(n0)
        if self.target.lo is None:
            return True
        return c > self.target.lo

    def piece_interval(self, n: int) -> OrdinalInterval:
        """Target piece W_n; pieces partition the target minus its top."""
        n0 = self._first_cut_index()
        if self._head is not None:
            if n == 0:
                head_top = self._cut(n0)
                if self.target.lo is None and head_top == ZERO:
                    return OrdinalInterval(None, ZERO)
                return OrdinalInterval(self.target.lo, head_top)
            return OrdinalInterval(self._cut(n0 + n - 1), self._cut(n0 + n))
        return OrdinalInterval(self._cut(n0 + n), self._cut(n0 + n + 1))

    def upper_set(self, n: int) -> SOpenSet:
        """U_n: the clopen base at the anchor; U_0 is the whole domain."""
        if n == 0:
            return self.domain
        return self.domain.intersect(
            SOpenSet.interval(self.z0, self.z0 + self.width / (1 << n))
        )

    def piece_domain(self, n: int) -> SOpenSet:
        """Z_n = U_n minus U_{n+1}; piece 0 absorbs the other components."""
        return self.upper_set(n).difference(self.upper_set(n + 1))

    def child(self, n: int):
        cached = self._children.get(n)
        if cached is None:
            cached = build_closed_open_map(self.piece_domain(n), self.piece_interval(n))
            self._children[n] = cached
        return cached

    def locate_domain(self, q: Fraction) -> int:
        """Exact child index containing q (q != z0, q in the domain)."""
        if not self.domain.contains(q):
            raise ValueError(f"{q} outside the domain")
        offset = q - self.z0
        if offset < 0 or offset >= self.width:
            return 0  # one of the absorbed components
        if offset >= self.width / 2:
            return 0
        n = 1
        while True:
            if offset >= self.width / (1 << (n + 1)):
                return n
            n += 1

    def locate_target(self, y: OrdinalCNF) -> int:
        """Exact piece index with y in W_n (y != y0, y in the target)."""
        if y == self.y0 or not self.target.contains(y):
            raise ValueError(f"{y} is not in a proper piece")
        n = 0
        while True:
            if self.piece_interval(n).contains(y):
                return n
            n += 1

    def target_top(self) -> OrdinalCNF:
        return self.y0


class MapSum:
    """Finite topological sum: clopen domain pieces paired with target blocks."""

    def __init__(self, domain: SOpenSet, parts: list[tuple[SOpenSet, object]]):
        self.domain = domain
        self.parts = parts

    def locate(self, q: Fraction) -> object:
        for dom, sub in self.parts:
            if dom.contains(q):
                return sub
        raise ValueError(f"{q} outside the domain")


MapTree = MapLeaf | MapNode | MapSum


def _interval_blocks(iv: OrdinalInterval) -> list[OrdinalInterval]:
    """Split an interval target into blocks, each compilable directly.

    A pure block has length w^K (one maximal-rank point, its top); otherwise
    cut at the multiples of w^K, leaving a shorter remainder block.
    """
    length = iv.length()
    big_k = length.leading_exponent()
    power = OrdinalCNF.omega_power(big_k)
    if length == power:
        return [iv]
    blocks = []
    lo = iv.lo
    cursor = iv.base()
    while True:
        remaining = iv.top - cursor
        if remaining.is_zero():
            break
        if remaining.leading_exponent() < big_k:
            blocks.append(OrdinalInterval(lo, iv.top))
            break
        cursor = cursor + power
        blocks.append(OrdinalInterval(lo, cursor))
        lo = cursor
    return blocks


def build_closed_open_map(domain: SOpenSet, target) -> MapTree:
    """Compile the continuous closed-open surjection from a nonempty clopen
    Sorgenfrey set onto a compact scattered ordinal target.

    Targets: an OrdinalSpace (single block or finite sum), an OrdinalCNF top
    (meaning [0, top]), or an OrdinalInterval.  Sum and multi-block targets
    decompose the domain through the clopen ladder; the recursion bottoms
    out at singleton leaves, and every descent strictly decreases the pair
    (target height, target length).
    """
    if domain.is_empty():
        raise ValueError("empty domain")
    if isinstance(target, str):
        target = OrdinalSpace.parse(target)
    if isinstance(target, OrdinalCNF):
        target = OrdinalInterval(None, target)
    if isinstance(target, OrdinalSpace):
        if target.is_single():
            target = OrdinalInterval(None, target.blocks[0])
        else:
            blocks = [OrdinalInterval(None, t) for t in target.blocks]
            return _compile_sum(domain, blocks)

    iv: OrdinalInterval = target
    if iv.is_singleton():
        return MapLeaf(domain, iv.only_point())
    blocks = _interval_blocks(iv)
    if len(blocks) > 1:
        return _compile_sum(domain, blocks)
    # pure block: length w^K with K >= 1, so the top point is a limit
    assert iv.top.is_limit(), "non-singleton pure blocks end at a limit"
    return MapNode(domain, iv)


def _compile_sum(domain: SOpenSet, blocks: list[OrdinalInterval]) -> MapSum:
    pieces, residual = decompose_prefix(domain, len(blocks) - 1)
    doms = pieces + [residual]
    parts = [(dom, build_closed_open_map(dom, block)) for dom, block in zip(doms, blocks)]
    return MapSum(domain, parts)


def eval_map(tree: MapTree, q: Fraction) -> OrdinalCNF:
    """Descend the tree at a rational; terminates along the shrinking targets."""
    q = Fraction(q)
    while True:
        if isinstance(tree, MapLeaf):
            if not tree.domain.contains(q):
                raise ValueError(f"{q} outside the domain")
            return tree.value
        if isinstance(tree, MapSum):
            tree = tree.locate(q)
            continue
        if q == tree.z0:
            return tree.y0
        tree = tree.child(tree.locate_domain(q))


def preimage_witness(tree: MapTree, y: OrdinalCNF) -> Fraction:
    """An explicit rational with image y: anchors map to tops, leaves to
    their left endpoints."""
    while True:
        if isinstance(tree, MapLeaf):
            if tree.value != y:
                raise ValueError(f"{y} not reachable in this leaf")
            a, _ = first_half_interval(tree.domain)
            return a
        if isinstance(tree, MapSum):
            found = None
            for _, sub in tree.parts:
                if _target_contains(sub, y):
                    found = sub
                    break
            if found is None:
                raise ValueError(f"{y} outside the target")
            tree = found
            continue
        if y == tree.y0:
            return tree.z0
        tree = tree.child(tree.locate_target(y))


def _target_contains(tree: MapTree, y: OrdinalCNF) -> bool:
    if isinstance(tree, MapLeaf):
        return tree.value == y
    if isinstance(tree, MapNode):
        return tree.target.contains(y)
    return any(_target_contains(sub, y) for _, sub in tree.parts)


def preimage_upper(tree: MapTree, lam: OrdinalCNF) -> SOpenSet:
    """Exact clopen preimage of the subbasic clopen (lam, top-of-target].

    At a limit node all pieces above some cut pull back to one clopen base
    set, so the union collapses to finitely many exact components.
    """
    if isinstance(tree, MapLeaf):
        return tree.domain if tree.value > lam else SOpenSet.empty()
    if isinstance(tree, MapSum):
        out = SOpenSet.empty()
        for _, sub in tree.parts:
            out = out.union(preimage_upper(sub, lam))
        return out
    node: MapNode = tree
    if lam >= node.y0:
        return SOpenSet.empty()
    if node.target.lo is not None and lam <= node.target.lo:
        return node.domain
    if node.target.lo is None and lam.is_zero():
        # (0, top]: everything except the fiber of 0
        pass
    # find the least piece fully above lam; pieces below contribute partially
    n = 0
    while True:
        piece = node.piece_interval(n)
        if piece.contains(lam):
            break
        n += 1
    partial = preimage_upper(node.child(n), lam)
    # pieces n+1, n+2, ... plus the anchor collapse to U_{n+1}
    return partial.union(node.upper_set(n + 1))


def preimage_point_fiber(tree: MapTree, y: OrdinalCNF) -> SOpenSet | Fraction:
    """The exact fiber of y: a clopen set at leaves, the bare anchor rational
    when y is a peeled top point."""
    while True:
        if isinstance(tree, MapLeaf):
            if tree.value != y:
                return SOpenSet.empty()
            return tree.domain
        if isinstance(tree, MapSum):
            found = None
            for _, sub in tree.parts:
                if _target_contains(sub, y):
                    found = sub
                    break
            if found is None:
                return SOpenSet.empty()
            tree = found
            continue
        if y == tree.y0:
            return tree.z0
        tree = tree.child(tree.locate_target(y))


@dataclass
class MapVerifyReport:
    checks: dict[str, dict]
    samples: int
    subbase_bound: int

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks.values())

    def to_payload(self) -> dict:
        return {
            "samples": self.samples,
            "subbase_bound": self.subbase_bound,
            "passed": self.passed,
            "checks": self.checks,
        }


def _ordinal_points_upto(tree: MapTree, bound: int) -> list[OrdinalCNF]:
    """The finite ordinals 0..bound inside the target plus all peeled tops
    reachable within the bound-indexed pieces; a small surjectivity probe."""
    tops: list[OrdinalCNF] = []
    for n in range(bound + 1):
        x = OrdinalCNF.from_int(n)
        if _target_contains(tree, x):
            tops.append(x)
    if isinstance(tree, MapNode):
        tops.append(tree.y0)
    return tops


def verify_map(tree: MapTree, sample_points: list[Fraction], subbase_bound: int) -> MapVerifyReport:
    """Finite-depth exact audit of the compiled map.

    Continuity: preimages of the subbasic clopens (cut_n, top] for indices up
    to the bound are exact clopen sets, cross-checked against evaluation on
    every sample.  Closed-openness: each materialized piece maps exactly onto
    its target piece (witnessed by the construction plus endpoint checks).
    Surjectivity: every finite ordinal up to the bound in the target, and the
    node tops, receive explicit rational preimages.  Partition: materialized
    domain pieces are pairwise disjoint and fill the domain short of the
    anchor base; target pieces tile the target short of its top.
    """
    checks: dict[str, dict] = {}

    # partition invariants at the root node (and the first sum layer)
    node = tree
    while isinstance(node, MapSum):
        union = SOpenSet.empty()
        for dom, _ in node.parts:
            if not dom.is_subset(node.domain):
                checks["partition"] = {"status": "fail", "at": "sum piece outside domain"}
            union = union.union(dom)
        if union != node.domain:
            checks["partition"] = {"status": "fail", "at": "sum pieces do not tile the domain"}
        node = node.parts[0][1]
    if isinstance(node, MapNode):
        union = SOpenSet.empty()
        ok = True
        for n in range(subbase_bound + 1):
            dom = node.piece_domain(n)
            inter = union.intersect(dom)
            if not inter.is_empty():
                ok = False
            union = union.union(dom)
        if union.union(node.upper_set(subbase_bound + 1)) != node.domain:
            ok = False
        target_union_top = node.piece_interval(subbase_bound).top
        rebuilt = node.piece_interval(0)
        for n in range(1, subbase_bound + 1):
            piece = node.piece_interval(n)
            if piece.lo != rebuilt.top:
                ok = False
            rebuilt = OrdinalInterval(rebuilt.lo, piece.top)
        if rebuilt.top != target_union_top:
            ok = False
        checks.setdefault("partition", {"status": "pass" if ok else "fail",
                                        "mode": "exact", "note": "domain and target pieces tile, with exact clopen residuals"})

    # continuity: subbasic preimages exact + sample cross-check
    cont_ok = True
    cuts: list[OrdinalCNF] = [ZERO]
    if isinstance(node, MapNode):
        cuts = [node.piece_interval(n).top for n in range(min(subbase_bound, 50) + 1)]
    for lam in cuts:
        pre = preimage_upper(tree, lam)
        for q in sample_points:
            val = eval_map(tree, q)
            if (val > lam) != pre.contains(q):
                cont_ok = False
    checks["continuity"] = {
        "status": "pass" if cont_ok else "fail",
        "mode": "exact",
        "note": f"{len(cuts)} subbasic clopen preimages as exact interval sets, cross-checked on samples",
    }

    # evaluation totality on samples
    total_ok = True
    for q in sample_points:
        try:
            eval_map(tree, q)
        except Exception:
            total_ok = False
    checks["totality"] = {"status": "pass" if total_ok else "fail", "mode": "exact"}

    # closed-openness: materialized pieces map onto their target pieces;
    # witnessed through round trips on piece anchors
    co_ok = True
    if isinstance(node, MapNode):
        for n in range(min(subbase_bound, 25) + 1):
            dom = node.piece_domain(n)
            piece = node.piece_interval(n)
            a, _ = first_half_interval(dom)
            if not piece.contains(eval_map(node.child(n), a)):
                co_ok = False
            wit = preimage_witness(node.child(n), piece.top)
            if not dom.contains(wit):
                co_ok = False
    checks["closed-open"] = {
        "status": "pass" if co_ok else "fail",
        "mode": "witnessed",
        "note": "piece images equal piece targets by construction; endpoints round-trip",
    }

    # surjectivity probe
    sur_ok = True
    witnesses = {}
    for y in _ordinal_points_upto(tree, subbase_bound):
        try:
            q = preimage_witness(tree, y)
            if eval_map(tree, q) != y:
                sur_ok = False
            witnesses[y.serialize()] = f"{q.numerator}/{q.denominator}"
        except ValueError:
            sur_ok = False
    checks["surjectivity"] = {
        "status": "pass" if sur_ok else "fail",
        "mode": "exact",
        "note": f"{len(witnesses)} explicit rational preimages",
    }

    return MapVerifyReport(checks, len(sample_points), subbase_bound)


# ---------------------------------------------------------------------------
# Nested segment schemes inside a dense-in-itself set.


@dataclass(frozen=True)
class Segment:
    left: Fraction
    right: Fraction  # closed [left, right], nondegenerate

    def __post_init__(self) -> None:
        if self.left >= self.right:
            raise ValueError("degenerate segment")

    def inside(self, other: Segment) -> bool:
        return other.left <= self.left and self.right <= other.right

    def disjoint(self, other: Segment) -> bool:
        return self.right < other.left or other.right < self.left

    def serialize(self) -> str:
        return (f"[{self.left.numerator}/{self.left.denominator}, "
                f"{self.right.numerator}/{self.right.denominator}]")


PickTwo = Callable[[Fraction, Fraction], tuple[Fraction, Fraction]]


def thirds_oracle(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Two interior points at the third cuts; the stand-in for a set with no
    isolated points."""
    w = b - a
    return a + w / 3, a + 2 * w / 3


def _component_right_end(u: EOpenSet, x: Fraction) -> Fraction:
    for lo, hi in u.parts:
        if lo < x < hi:
            return hi
    raise ValueError(f"anchor {x} outside the open set")


def cantor_scheme(
    pick_two: PickTwo,
    opens: Callable[[int], EOpenSet],
    depth: int,
    window: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1)),
) -> dict[FinSeq, Segment]:
    """Binary tree of nondegenerate closed segments: children nest, siblings
    are disjoint, and the depth-d segment sits inside the d-th open set.

    Children anchor at the oracle's two interior points with length half the
    anchor gap, capped by the open-set component and the parent's right end.
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    u0 = opens(0)
    if not u0.contains(lo):
        raise ValueError("window anchor outside the depth-0 open set")
    root = Segment(lo, min(hi, (lo + _component_right_end(u0, lo)) / 2))
    out: dict[FinSeq, Segment] = {FinSeq(): root}
    frontier = [(FinSeq(), root)]
    for level in range(depth):
        u = opens(level + 1)
        nxt = []
        for addr, seg in frontier:
            p, q = pick_two(seg.left, seg.right)
            if not (seg.left < p < q < seg.right):
                raise ValueError(f"oracle returned bad points for {seg.serialize()}")
            gap = q - p
            for bit, anchor in ((0, p), (1, q)):
                if not u.contains(anchor):
                    raise ValueError(f"anchor {anchor} outside the depth-{level + 1} open set")
                right = min(
                    anchor + gap / 2,
                    (anchor + _component_right_end(u, anchor)) / 2,
                    (anchor + seg.right) / 2,
                )
                child = Segment(anchor, right)
                out[addr.extend(bit)] = child
                nxt.append((addr.extend(bit), child))
        frontier = nxt
    return out


def validate_cantor_scheme(segments: dict[FinSeq, Segment], opens: Callable[[int], EOpenSet],
                           depth: int) -> bool:
    """Exhaustive exact check of nesting, sibling disjointness, and open-set
    containment over the materialized tree."""
    for addr, seg in segments.items():
        u = opens(len(addr))
        if not any(lo < seg.left and seg.right < hi for lo, hi in u.parts):
            raise ValueError(f"segment {seg.serialize()} escapes the depth-{len(addr)} open set")
        if len(addr) < depth:
            kids = [segments[addr.extend(0)], segments[addr.extend(1)]]
            if not (kids[0].inside(seg) and kids[1].inside(seg)):
                raise ValueError(f"nesting broken below {addr.serialize()}")
            if not kids[0].disjoint(kids[1]):
                raise ValueError(f"siblings collide below {addr.serialize()}")
    return True
