"""Ordinals below omega^omega in Cantor normal form, with exact arithmetic.

A value is a sum of terms w^k * m with strictly decreasing natural exponents
and positive coefficients; comparison, addition, left subtraction, and the
fundamental-sequence construction for limits are all exact.  The string form
is like "w^2*3+w+4".
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True, slots=True)
class OrdinalCNF:
    terms: tuple[tuple[int, int], ...] = ()  # (exponent, coefficient), exps strictly decreasing

    def __post_init__(self) -> None:
        prev = None
        for exp, coeff in self.terms:
            if exp < 0 or coeff <= 0:
                raise ValueError(f"bad term w^{exp}*{coeff}")
            if prev is not None and exp >= prev:
                raise ValueError("exponents must strictly decrease")
            prev = exp

    # ---- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> OrdinalCNF:
        return cls(())

    @classmethod
    def from_int(cls, n: int) -> OrdinalCNF:
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        return cls(((0, n),) if n else ())

    @classmethod
    def omega_power(cls, k: int, coeff: int = 1) -> OrdinalCNF:
        if coeff == 0:
            return cls(())
        return cls(((k, coeff),))

    # ---- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] >= 1

    def last_exponent(self) -> int:
        """Exponent of the last CNF term; 0 for zero and successors."""
        return self.terms[-1][0] if self.terms else 0

    def leading_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def successor(self) -> OrdinalCNF:
        return self + OrdinalCNF.from_int(1)

    def predecessor(self) -> OrdinalCNF:
        if not self.is_successor():
            raise ValueError(f"{self} is not a successor")
        exp, coeff = self.terms[-1]
        rest = self.terms[:-1]
        if coeff == 1:
            return OrdinalCNF(rest)
        return OrdinalCNF(rest + ((0, coeff - 1),))

    def limit_split(self) -> tuple[OrdinalCNF, int]:
        """Write a limit as gamma + w^k (k >= 1); returns (gamma, k)."""
        if not self.is_limit():
            raise ValueError(f"{self} is not a limit ordinal")
        exp, coeff = self.terms[-1]
        rest = self.terms[:-1]
        if coeff == 1:
            return OrdinalCNF(rest), exp
        return OrdinalCNF(rest + ((exp, coeff - 1),)), exp

    # ---- order and arithmetic --------------------------------------------

    def _key(self):
        # term-by-term: larger (exp, coeff) first wins; longer extension is larger
        return self.terms

    def __lt__(self, other: OrdinalCNF) -> bool:
        a, b = self.terms, other.terms
        for (ea, ca), (eb, cb) in zip(a, b):
            if ea != eb:
                return ea < eb
            if ca != cb:
                return ca < cb
        return len(a) < len(b)

    def __add__(self, other: OrdinalCNF) -> OrdinalCNF:
        if isinstance(other, int):
            other = OrdinalCNF.from_int(other)
        if not other.terms:
            return self
        lead = other.terms[0][0]
        kept = [t for t in self.terms if t[0] > lead]
        merged = list(other.terms)
        for exp, coeff in self.terms:
            if exp == lead:
                merged[0] = (lead, coeff + other.terms[0][1])
        return OrdinalCNF(tuple(kept) + tuple(merged))

    __radd__ = __add__

    def left_subtract(self, base: OrdinalCNF) -> OrdinalCNF:
        """The unique delta with base + delta == self; needs base <= self."""
        if base > self:
            raise ValueError(f"cannot subtract {base} from smaller {self}")
        a, b = list(self.terms), list(base.terms)
        i = 0
        while i < len(a) and i < len(b) and a[i] == b[i]:
            i += 1
        if i == len(b):
            rest = a[i:]
            return OrdinalCNF(tuple(rest))
        # first difference: a[i] > b[i] (same exp, larger coeff) or bigger exp
        ea, ca = a[i]
        eb, cb = b[i]
        if ea == eb and ca > cb:
            return OrdinalCNF(((ea, ca - cb),) + tuple(a[i + 1:]))
        return OrdinalCNF(tuple(a[i:]))

    def __sub__(self, base: OrdinalCNF) -> OrdinalCNF:
        return self.left_subtract(base)

    # ---- serialization -----------------------------------------------------

    def serialize(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            if exp == 0:
                parts.append(str(coeff))
            else:
                head = "w" if exp == 1 else f"w^{exp}"
                parts.append(head if coeff == 1 else f"{head}*{coeff}")
        return "+".join(parts)

    _TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")

    @classmethod
    def parse(cls, text: str) -> OrdinalCNF:
        body = text.strip().replace(" ", "")
        if body == "0":
            return cls.zero()
        terms = []
        for part in body.split("+"):
            m = cls._TERM.match(part)
            if not m:
                raise ValueError(f"bad ordinal term {part!r} in {text!r}")
            exp_s, coeff_s, const_s = m.groups()
            if const_s is not None:
                terms.append((0, int(const_s)))
            else:
                exp = int(exp_s) if exp_s is not None else 1
                coeff = int(coeff_s) if coeff_s is not None else 1
                terms.append((exp, coeff))
        total = cls.zero()
        for exp, coeff in terms:
            total = total + cls.omega_power(exp, coeff)
        return total

    def __str__(self) -> str:
        return self.serialize()

    def __repr__(self) -> str:
        return f"OrdinalCNF({self.serialize()!r})"


ZERO = OrdinalCNF.zero()
ONE = OrdinalCNF.from_int(1)
OMEGA = OrdinalCNF.omega_power(1)


class FundamentalSequence:
    """Strictly increasing cofinal sequence below a limit ordinal.

    For lam = gamma + w^k the n-th element is gamma + w^(k-1) * (n+1); the
    induced blocks (seq(n), seq(n+1)] are clopen in [0, lam].
    """

    def __init__(self, lam: OrdinalCNF):
        if not lam.is_limit():
            raise ValueError(f"{lam} is not a limit ordinal")
        self.limit = lam
        self.base, self.exp = lam.limit_split()

    def __call__(self, n: int) -> OrdinalCNF:
        return self.base + OrdinalCNF.omega_power(self.exp - 1, n + 1)

    def cut(self, n: int) -> OrdinalCNF:
        """gamma + w^(k-1) * n: the cut sequence starting at the base."""
        if n == 0:
            return self.base
        return self.base + OrdinalCNF.omega_power(self.exp - 1, n)

    def take(self, count: int) -> list[OrdinalCNF]:
        return [self(n) for n in range(count)]


def fundamental_sequence(lam: OrdinalCNF) -> FundamentalSequence:
    return FundamentalSequence(lam)
