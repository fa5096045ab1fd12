"""Engine for Choquet, strong Choquet, and strict Choquet games.

The engine enforces the nesting and membership constraints move by move over
a pluggable open-set model, so every accepted run satisfies the alternating
chain exactly; audits re-verify runs and compute exact finite intersections.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Optional

from .euclid import EOpenSet
from .sorgenfrey import SOpenSet

KINDS = ("choquet", "strong", "strict")


class SpaceModel:
    """Open-set oracle for the game engine; optional metric extras."""

    label = ""
    has_metric = False

    def is_nonempty(self, u) -> bool:
        raise NotImplementedError

    def intersect(self, a, b):
        raise NotImplementedError

    def is_subset(self, a, b) -> bool:
        raise NotImplementedError

    def contains(self, u, x) -> bool:
        raise NotImplementedError

    def diameter(self, u) -> Optional[Fraction]:
        raise NotImplementedError

    def shrink(self, u, bound: Fraction):
        """A nonempty open subset of u with diameter < bound."""
        raise NotImplementedError

    def serialize_set(self, u) -> list[str]:
        return u.serialize()

    def parse_set(self, tokens):
        raise NotImplementedError


class SorgenfreySpace(SpaceModel):
    label = "sorgenfrey"
    has_metric = True

    def is_nonempty(self, u: SOpenSet) -> bool:
        return not u.is_empty()

    def intersect(self, a, b):
        return a.intersect(b)

    def is_subset(self, a, b) -> bool:
        return a.is_subset(b)

    def contains(self, u, x) -> bool:
        return u.contains(x)

    def diameter(self, u: SOpenSet) -> Optional[Fraction]:
        return u.span()

    def shrink(self, u: SOpenSet, bound: Fraction) -> SOpenSet:
        from .sorgenfrey import first_half_interval

        a, b = first_half_interval(u)
        return SOpenSet.interval(a, a + min(b - a, bound) / 2)

    def parse_set(self, tokens):
        return SOpenSet.parse(tokens)


class EuclidSpace(SpaceModel):
    label = "euclid"
    has_metric = True

    def is_nonempty(self, u: EOpenSet) -> bool:
        return not u.is_empty()

    def intersect(self, a, b):
        return a.intersect(b)

    def is_subset(self, a, b) -> bool:
        return a.is_subset(b)

    def contains(self, u, x) -> bool:
        return u.contains(x)

    def diameter(self, u: EOpenSet) -> Optional[Fraction]:
        return u.span()

    def shrink(self, u: EOpenSet, bound: Fraction) -> EOpenSet:
        a, b = u.first_component()
        return EOpenSet.interval(a, a + min(b - a, bound) / 2)

    def parse_set(self, tokens):
        return EOpenSet((tuple(Fraction(x) for x in tok.strip("() ").split(",")) for tok in tokens))


@dataclass(frozen=True)
class Move:
    player: str  # "I" | "II"
    open_set: object
    point: Optional[Fraction] = None


@dataclass(frozen=True)
class IllegalMove:
    player: str
    round: int
    reason: str  # "not-nested" | "empty" | "point-missing"


@dataclass
class Run:
    kind: str
    space_label: str
    moves: list[Move] = field(default_factory=list)
    violation: Optional[IllegalMove] = None

    @property
    def rounds(self) -> int:
        return len(self.moves) // 2

    def ii_sets(self) -> list:
        return [m.open_set for m in self.moves if m.player == "II"]

    def i_moves(self) -> list[Move]:
        return [m for m in self.moves if m.player == "I"]

    def to_payload(self, space: SpaceModel) -> dict:
        rows = []
        for idx, m in enumerate(self.moves):
            row = {"n": idx // 2, "player": m.player, "set": space.serialize_set(m.open_set)}
            if m.point is not None:
                row["point"] = f"{m.point.numerator}/{m.point.denominator}"
            rows.append(row)
        payload = {"kind": self.kind, "space": self.space_label, "moves": rows}
        if self.violation is not None:
            payload["violation"] = {
                "player": self.violation.player,
                "round": self.violation.round,
                "reason": self.violation.reason,
            }
        return payload

    @classmethod
    def from_payload(cls, payload: dict, space: SpaceModel) -> Run:
        run = cls(payload["kind"], payload["space"])
        for row in payload["moves"]:
            pt = Fraction(row["point"]) if "point" in row else None
            run.moves.append(Move(row["player"], space.parse_set(row["set"]), pt))
        if "violation" in payload:
            v = payload["violation"]
            run.violation = IllegalMove(v["player"], v["round"], v["reason"])
        return run


class Strategy:
    """Deterministic move oracle: same history, same move."""

    name = "strategy"

    def move_i(self, run: Run, space: SpaceModel):
        """Player I: return open set (choquet/strict) or (open set, point) (strong)."""
        raise NotImplementedError

    def move_ii(self, run: Run, space: SpaceModel):
        """Player II: return the answering open set."""
        raise NotImplementedError


def _subseed(seed: int, round_no: int, last_tokens: list[str]) -> int:
    text = f"{seed}:{round_no}:" + "|".join(last_tokens)
    return zlib.crc32(text.encode("utf-8"))


class RandomStrongI(Strategy):
    """Seeded adversary for the strong game on the Sorgenfrey line.

    Picks a grid sub-interval of the previous answer plus an anchor point in
    it; pure function of (seed, round, previous move).
    """

    def __init__(self, seed: int, opening: SOpenSet | None = None):
        self.seed = seed
        self.opening = opening if opening is not None else SOpenSet.interval(0, 1)
        self.name = f"random:{seed}"

    def move_i(self, run: Run, space: SpaceModel):
        prev = run.moves[-1].open_set if run.moves else self.opening
        rng = Random(_subseed(self.seed, run.rounds, space.serialize_set(prev)))
        parts = prev.parts
        lo, hi = parts[rng.randrange(len(parts))]
        if lo is None:
            lo = hi - 1
        if hi is None:
            hi = lo + 1
        w = hi - lo
        i = rng.randrange(0, 8)
        j = rng.randrange(i + 1, 9)
        u_lo, u_hi = lo + w * i / 8, lo + w * j / 8
        x = u_lo + (u_hi - u_lo) * rng.randrange(0, 4) / 4
        return SOpenSet.interval(u_lo, u_hi), x


class SorgenfreyStrongII(Strategy):
    """Answer (U, x) with [x, z): z the midpoint toward the component's end.

    The closed segment [x, z] stays inside U, which keeps every finite
    intersection of answers nonempty; unbounded components anchor at x + 1.
    """

    name = "midpoint"

    def move_ii(self, run: Run, space: SpaceModel) -> SOpenSet:
        last = run.moves[-1]
        u, x = last.open_set, last.point
        for lo, hi in u.parts:
            if (lo is None or lo <= x) and (hi is None or x < hi):
                y = x + 1 if hi is None else hi
                return SOpenSet.interval(x, (x + y) / 2)
        raise ValueError("anchor point outside player I's set")


class HalvingChoquetI(Strategy):
    """Greedy halving adversary on the Euclidean-line model."""

    def __init__(self, opening: EOpenSet | None = None):
        self.opening = opening if opening is not None else EOpenSet.interval(0, 1)
        self.name = "halving"

    def move_i(self, run: Run, space: SpaceModel) -> EOpenSet:
        if not run.moves:
            return self.opening
        lo, hi = run.moves[-1].open_set.first_component()
        return EOpenSet.interval(lo, lo + (hi - lo) / 2)


class ClosedMarginHalvingII(Strategy):
    """Completeness answerer: keep the closure inside, halve the width."""

    name = "margin"

    def move_ii(self, run: Run, space: SpaceModel) -> EOpenSet:
        lo, hi = run.moves[-1].open_set.first_component()
        w = hi - lo
        return EOpenSet.interval(lo + w / 4, hi - w / 4)


class StrictFromChoquetII(Strategy):
    """Strict-game answerer wrapped around a plain Choquet strategy.

    Round n replaces player I's set by a nonempty open subset of diameter
    below 1/(n+1) before delegating, so the answers' diameters vanish and the
    run's intersection shrinks to at most one point.
    """

    def __init__(self, base: Strategy):
        self.base = base
        self.name = f"strict({base.name})"

    def move_ii(self, run: Run, space: SpaceModel):
        if not space.has_metric:
            raise ValueError("model defect: strict wrapper needs diameter and shrink")
        shadow = Run(run.kind, run.space_label)
        for idx, m in enumerate(run.moves):
            if m.player == "I":
                shadow.moves.append(Move("I", space.shrink(m.open_set, Fraction(1, idx // 2 + 1))))
            else:
                shadow.moves.append(m)
        return self.base.move_ii(shadow, space)


def play(kind: str, space: SpaceModel, strat_i: Strategy, strat_ii: Strategy, rounds: int) -> Run:
    """Produce a legal run of the requested length or stop at an illegal move."""
    if kind not in KINDS:
        raise ValueError(f"unknown game kind {kind!r}")
    run = Run(kind, space.label)
    for n in range(rounds):
        prev_ii = run.moves[-1].open_set if run.moves else None
        if kind == "strong":
            u, x = strat_i.move_i(run, space)
        else:
            u, x = strat_i.move_i(run, space), None
        reason = _check_i(kind, space, u, x, prev_ii)
        if reason:
            run.violation = IllegalMove("I", n, reason)
            return run
        run.moves.append(Move("I", u, x))
        v = strat_ii.move_ii(run, space)
        reason = _check_ii(kind, space, v, u, x)
        if reason:
            run.violation = IllegalMove("II", n, reason)
            return run
        run.moves.append(Move("II", v))
    return run


def _check_i(kind, space, u, x, prev_ii) -> str | None:
    if not space.is_nonempty(u):
        return "empty"
    if prev_ii is not None and not space.is_subset(u, prev_ii):
        return "not-nested"
    if kind == "strong":
        if x is None or not space.contains(u, x):
            return "point-missing"
    return None


def _check_ii(kind, space, v, u, x) -> str | None:
    if not space.is_nonempty(v):
        return "empty"
    if not space.is_subset(v, u):
        return "not-nested"
    if kind == "strong" and not space.contains(v, x):
        return "point-missing"
    return None


@dataclass
class RunAudit:
    legal: bool
    violations: list[dict] = field(default_factory=list)
    intersection_tokens: list[str] = field(default_factory=list)
    nonempty: bool = False
    diameter: str | None = None
    within_tolerance: bool | None = None
    witness_segment: tuple[str, str] | None = None
    witness_inside_prior: bool | None = None

    @property
    def passed(self) -> bool:
        return self.legal and self.nonempty

    def to_payload(self) -> dict:
        out = {
            "legal": self.legal,
            "violations": self.violations,
            "intersection": self.intersection_tokens,
            "nonempty": self.nonempty,
        }
        if self.diameter is not None:
            out["diameter"] = self.diameter
        if self.within_tolerance is not None:
            out["within_tolerance"] = self.within_tolerance
        if self.witness_segment is not None:
            out["witness_segment"] = list(self.witness_segment)
            out["witness_inside_prior"] = self.witness_inside_prior
        return out


def audit_run(run: Run, space: SpaceModel, singleton_tolerance: Fraction | None = None) -> RunAudit:
    """Re-verify a run move by move and measure its exact finite intersection.

    Reports nonemptiness (the Choquet proxy), the diameter against the given
    tolerance (the strict proxy), and, for strong Sorgenfrey runs, the final
    closed witness segment [x, z] together with the exact check that it sits
    inside every earlier answer.  Never mutates the run.
    """
    audit = RunAudit(legal=True)
    prev_ii = None
    for idx, m in enumerate(run.moves):
        n = idx // 2
        if m.player == "I":
            reason = _check_i(run.kind, space, m.open_set, m.point, prev_ii)
        else:
            u = run.moves[idx - 1].open_set
            x = run.moves[idx - 1].point
            reason = _check_ii(run.kind, space, m.open_set, u, x)
            prev_ii = m.open_set
        if reason:
            audit.legal = False
            audit.violations.append({"player": m.player, "round": n, "reason": reason})
    if run.violation is not None:
        audit.violations.append({
            "player": run.violation.player,
            "round": run.violation.round,
            "reason": run.violation.reason,
            "recorded": True,
        })
        audit.legal = False

    ii_sets = run.ii_sets()
    if ii_sets:
        inter = ii_sets[0]
        for s in ii_sets[1:]:
            inter = space.intersect(inter, s)
        audit.intersection_tokens = space.serialize_set(inter)
        audit.nonempty = space.is_nonempty(inter)
        if space.has_metric and space.is_nonempty(inter):
            d = space.diameter(inter)
            if d is not None:
                audit.diameter = f"{d.numerator}/{d.denominator}"
                if singleton_tolerance is not None:
                    audit.within_tolerance = d <= singleton_tolerance

    if run.kind == "strong" and run.space_label == "sorgenfrey" and audit.legal and ii_sets:
        x_last = run.i_moves()[-1].point
        (lo, hi), = ii_sets[-1].parts
        z_last = hi
        audit.witness_segment = (
            f"{x_last.numerator}/{x_last.denominator}",
            f"{z_last.numerator}/{z_last.denominator}",
        )
        audit.witness_inside_prior = all(
            s.contains_segment(x_last, z_last) for s in ii_sets[:-1]
        )
    return audit
