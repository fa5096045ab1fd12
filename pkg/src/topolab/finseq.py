"""Finite sequences of naturals: the addresses indexing every scheme tree."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class FinSeq:
    """Immutable finite sequence of natural numbers.

    The empty sequence is valid and has length 0; ``extend`` appends one
    digit, ``prefix`` truncates.  Used as the tree address everywhere.
    """

    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for d in self.digits:
            if not isinstance(d, int) or d < 0:
                raise ValueError(f"address digits must be naturals, got {d!r}")

    @classmethod
    def of(cls, *digits: int) -> FinSeq:
        return cls(tuple(digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i: int) -> int:
        return self.digits[i]

    def extend(self, n: int) -> FinSeq:
        return FinSeq(self.digits + (n,))

    def prefix(self, m: int) -> FinSeq:
        if m > len(self.digits):
            raise ValueError(f"prefix length {m} exceeds length {len(self.digits)}")
        return FinSeq(self.digits[:m])

    def parent(self) -> FinSeq:
        if not self.digits:
            raise ValueError("empty sequence has no parent")
        return FinSeq(self.digits[:-1])

    def is_prefix_of(self, other: FinSeq) -> bool:
        return self.digits == other.digits[: len(self.digits)]

    def comparable(self, other: FinSeq) -> bool:
        """True when one address is a prefix of the other."""
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def serialize(self) -> str:
        return "[" + ",".join(str(d) for d in self.digits) + "]"

    @classmethod
    def parse(cls, text: str) -> FinSeq:
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"bad address literal: {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return cls()
        return cls(tuple(int(part) for part in inner.split(",")))

    def __repr__(self) -> str:
        return f"FinSeq{self.serialize()}"


EMPTY = FinSeq()
