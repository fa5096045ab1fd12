"""Cover refinement and depth-n fiber amplification over the Baire space.

The concrete map is the even-coordinate projection f(x)(n) = x(2n): it is
continuous, open, surjective, and every nonempty basic open contains two
points with the same image, because odd positions are free.  All refinement
steps are exact stem combinatorics: a cover is a disjoint family of basic
opens sharing one exact image, and each refinement statement returns a new
cover witnessing its conclusion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .finseq import EMPTY, FinSeq

Strategy = Callable[[list[FinSeq]], FinSeq]
"""Player-II oracle on basic opens: alternating stem history -> answer stem."""


def even_projection(stem: FinSeq) -> FinSeq:
    """Stem of the exact image of N_stem under the even-coordinate map."""
    return FinSeq(stem.digits[0::2])


def pad_to_target(stem: FinSeq, target: FinSeq) -> FinSeq:
    """Least extension of `stem` whose even projection is exactly `target`.

    Even positions take the target's digits, odd positions pad with 0; fails
    when the stem's projection is not consistent with the target.
    """
    proj = even_projection(stem)
    if not (proj.is_prefix_of(target) or target.is_prefix_of(proj)):
        raise ValueError(
            f"empty refinement: projection {proj.serialize()} incompatible with {target.serialize()}"
        )
    if target.is_prefix_of(proj) and len(proj) >= len(target):
        if proj != target:
            raise ValueError(
                f"stem {stem.serialize()} already projects beyond {target.serialize()}"
            )
        return stem
    digits = list(stem.digits)
    while (len(digits) + 1) // 2 < len(target):
        pos = len(digits)
        digits.append(target[pos // 2] if pos % 2 == 0 else 0)
    return FinSeq(tuple(digits))


def collision_pair(stem: FinSeq) -> tuple[FinSeq, FinSeq]:
    """Two disjoint extensions of the stem differing at one odd position.

    Their images coincide, witnessing that the even map is nowhere locally
    injective.
    """
    digits = list(stem.digits)
    if len(digits) % 2 == 0:
        digits.append(0)  # next position is even; fix it so the split lands odd
    return FinSeq(tuple(digits + [0])), FinSeq(tuple(digits + [1]))


@dataclass(frozen=True)
class Cover:
    """Disjoint nonempty basic opens with one exact common image.

    `target` and each piece are single stems; the even map sends N_piece
    exactly onto N_target for every piece.
    """

    target: FinSeq
    pieces: tuple[FinSeq, ...]

    def validate(self) -> None:
        for p in self.pieces:
            if even_projection(p) != self.target:
                raise ValueError(
                    f"piece {p.serialize()} has image {even_projection(p).serialize()}, "
                    f"not {self.target.serialize()}"
                )
        # in sorted order, any prefix pair forces an adjacent prefix pair,
        # so the adjacent scan decides disjointness of the whole family
        ordered = sorted(self.pieces, key=lambda s: s.digits)
        for a, b in zip(ordered, ordered[1:]):
            if a.comparable(b):
                raise ValueError(
                    f"pieces {a.serialize()} and {b.serialize()} are not disjoint"
                )

    def to_payload(self) -> dict:
        return {
            "target": self.target.serialize(),
            "pieces": [p.serialize() for p in self.pieces],
        }


def initial_cover() -> Cover:
    """The whole space covering its own image."""
    return Cover(EMPTY, (EMPTY,))


@dataclass(frozen=True)
class SplitFirst:
    pass


@dataclass(frozen=True)
class SplitAll:
    pass


@dataclass(frozen=True)
class ShrinkPiece:
    index: int
    inside: FinSeq  # nonempty basic open inside the chosen piece


@dataclass(frozen=True)
class ShrinkTarget:
    inside: FinSeq  # nonempty basic open inside the target


Directive = SplitFirst | SplitAll | ShrinkPiece | ShrinkTarget


def _split_at(cover: Cover, k: int) -> Cover:
    u0, u1 = collision_pair(cover.pieces[k])
    new_target = even_projection(u0)
    pieces = []
    for i, p in enumerate(cover.pieces):
        if i == k:
            pieces.extend([u0, u1])
        else:
            pieces.append(pad_to_target(p, new_target))
    return Cover(new_target, tuple(pieces))


def refine(cover: Cover, directive: Directive) -> tuple[Cover, dict]:
    """Apply a refinement statement; the output cover is validated exactly."""
    if isinstance(directive, SplitFirst):
        out = _split_at(cover, 0)
        step = {"op": "split-first"}
    elif isinstance(directive, SplitAll):
        out = cover
        idx = 0
        for _ in range(len(cover.pieces)):
            out = _split_at(out, idx)
            idx += 2  # skip past the freshly split pair
        step = {"op": "split-all"}
    elif isinstance(directive, ShrinkPiece):
        k, inside = directive.index, directive.inside
        if not cover.pieces[k].is_prefix_of(inside):
            raise ValueError(
                f"empty refinement: {inside.serialize()} is not inside piece {k}"
            )
        new_target = even_projection(inside)
        pieces = []
        for i, p in enumerate(cover.pieces):
            pieces.append(inside if i == k else pad_to_target(p, new_target))
        out = Cover(new_target, tuple(pieces))
        step = {"op": "shrink-piece", "index": k, "inside": inside.serialize()}
    elif isinstance(directive, ShrinkTarget):
        inside = directive.inside
        if not cover.target.is_prefix_of(inside):
            raise ValueError(
                f"empty refinement: {inside.serialize()} is not inside the target"
            )
        pieces = tuple(pad_to_target(p, inside) for p in cover.pieces)
        out = Cover(inside, pieces)
        step = {"op": "shrink-target", "inside": inside.serialize()}
    else:
        raise TypeError(f"unknown directive {directive!r}")
    out.validate()
    step["target"] = out.target.serialize()
    step["pieces"] = len(out.pieces)
    return out, step


def basic_nesting_strategy() -> Strategy:
    """Answer any basic open with a longer basic open below it.

    Padding with zeros to a length past the round index wins both the plain
    and the strict variants on the Baire space: answer diameters shrink to a
    single branch along every run.
    """

    def move(history: list[FinSeq]) -> FinSeq:
        u = history[-1]
        round_no = len(history) // 2
        digits = list(u.digits)
        while len(digits) < round_no + 1:
            digits.append(0)
        return FinSeq(tuple(digits))

    return move


@dataclass
class AmplifierState:
    """Transcript of the level-by-level amplification.

    levels[k] maps bit addresses of length k to piece stems; chains holds the
    target-side triples per level; branch_runs holds the alternating stem
    histories that realize the domain-side game runs.
    """

    depth: int
    levels: list[dict[FinSeq, FinSeq]] = field(default_factory=list)
    chains: list[dict[str, str]] = field(default_factory=list)
    final_target: FinSeq = EMPTY
    branch_runs: dict[FinSeq, list[FinSeq]] = field(default_factory=dict)
    transcript: list[dict] = field(default_factory=list)

    def final_pieces(self) -> dict[FinSeq, FinSeq]:
        return self.levels[-1]


def amplify(depth: int, strat_x: Strategy | None = None, strat_y: Strategy | None = None) -> AmplifierState:
    """Run the amplification recursion to the requested depth.

    Level k holds 2^k pairwise disjoint basic opens covering one target; a
    level step plays the domain strategy on every branch (shrinking the
    matching piece), plays the target strategy once (shrinking the target),
    then splits every piece through a collision pair.  The final state holds
    2^depth disjoint stems with one exact common image.
    """
    strat_x = strat_x or basic_nesting_strategy()
    strat_y = strat_y or basic_nesting_strategy()

    state = AmplifierState(depth)
    cover = initial_cover()
    bits: list[FinSeq] = [EMPTY]
    state.levels.append({EMPTY: EMPTY})
    state.branch_runs[EMPTY] = []
    target_history: list[FinSeq] = []

    for level in range(depth):
        w_tilde = cover.target
        # domain-side round on every branch, each followed by a piece shrink
        for i, bit_addr in enumerate(bits):
            u = cover.pieces[i]
            history = state.branch_runs[bit_addr] + [u]
            v = strat_x(history)
            if not u.is_prefix_of(v):
                raise ValueError(f"illegal domain answer at {bit_addr.serialize()}")
            state.branch_runs[bit_addr] = history + [v]
            cover, step = refine(cover, ShrinkPiece(i, v))
            step["level"] = level
            state.transcript.append(step)
        u_tilde = cover.target
        # target-side round
        v_tilde = strat_y(target_history + [u_tilde])
        if not u_tilde.is_prefix_of(v_tilde):
            raise ValueError("illegal target answer")
        target_history.extend([u_tilde, v_tilde])
        cover, step = refine(cover, ShrinkTarget(v_tilde))
        step["level"] = level
        state.transcript.append(step)
        # split every piece
        cover, step = refine(cover, SplitAll())
        step["level"] = level
        state.transcript.append(step)
        state.chains.append({
            "W": w_tilde.serialize(),
            "U": u_tilde.serialize(),
            "V": v_tilde.serialize(),
            "W_next": cover.target.serialize(),
        })
        # rebind branch bookkeeping to the doubled family
        new_bits = []
        new_level: dict[FinSeq, FinSeq] = {}
        new_runs: dict[FinSeq, list[FinSeq]] = {}
        for i, bit_addr in enumerate(bits):
            for b in (0, 1):
                child = bit_addr.extend(b)
                new_bits.append(child)
                new_level[child] = cover.pieces[2 * i + b]
                new_runs[child] = list(state.branch_runs[bit_addr])
        bits = new_bits
        state.levels.append(new_level)
        state.branch_runs = new_runs

    state.final_target = cover.target
    return state


@dataclass
class Certificate:
    depth: int
    image: FinSeq
    stems: tuple[FinSeq, ...]

    def to_payload(self) -> dict:
        return {
            "depth": self.depth,
            "common_image": self.image.serialize(),
            "stems": [s.serialize() for s in self.stems],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> Certificate:
        return cls(
            payload["depth"],
            FinSeq.parse(payload["common_image"]),
            tuple(FinSeq.parse(s) for s in payload["stems"]),
        )


def verify_amplifier(state: AmplifierState) -> Certificate:
    """Independent re-check of a completed state; emits the stem certificate.

    Re-verifies pairwise disjointness, the exact common image, per-branch
    nesting, and the target chain, naming the offending pair on failure.
    """
    pieces = state.final_pieces()
    if len(pieces) != 1 << state.depth:
        raise ValueError(f"expected {1 << state.depth} pieces, found {len(pieces)}")
    stems = tuple(pieces[k] for k in sorted(pieces, key=lambda s: s.digits))
    cert = Certificate(state.depth, state.final_target, stems)
    check_certificate(cert)
    # branch nesting: pieces refine along every bit prefix
    for bit_addr, stem in pieces.items():
        for k in range(len(bit_addr) + 1):
            above = state.levels[k][bit_addr.prefix(k)]
            if not above.is_prefix_of(stem):
                raise ValueError(f"nesting broken along {bit_addr.serialize()} at level {k}")
    for entry in state.chains:
        w = FinSeq.parse(entry["W"])
        u = FinSeq.parse(entry["U"])
        v = FinSeq.parse(entry["V"])
        w_next = FinSeq.parse(entry["W_next"])
        if not (w.is_prefix_of(u) and u.is_prefix_of(v) and v.is_prefix_of(w_next)):
            raise ValueError(f"target chain broken at {entry}")
    return cert


def check_certificate(cert: Certificate) -> bool:
    """Pure stem re-check of a certificate: disjointness and image equality."""
    stems = sorted(cert.stems, key=lambda s: s.digits)
    if len(stems) != 1 << cert.depth:
        raise ValueError(f"expected {1 << cert.depth} stems, found {len(stems)}")
    for a, b in zip(stems, stems[1:]):
        if a.comparable(b):
            raise ValueError(f"stems {a.serialize()} and {b.serialize()} are not disjoint")
    for s in stems:
        if even_projection(s) != cert.image:
            raise ValueError(
                f"stem {s.serialize()} maps to {even_projection(s).serialize()}, "
                f"not {cert.image.serialize()}"
            )
    return True
