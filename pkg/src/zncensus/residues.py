"""Unions of reduced residue classes."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groups import DomainError, PrimePower, factorint

__all__ = ["ResidueSet", "residue_set_B", "residue_set_BH", "totient"]


def totient(d: int) -> int:
    out = d
    for p in factorint(d):
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class ResidueSet:
    d: int
    classes: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError("modulus must be positive")
        cs = tuple(sorted(set(self.classes)))
        if len(cs) != len(self.classes):
            raise DomainError("duplicate residue classes")
        for c in cs:
            if not (1 <= c < self.d or (self.d == 1 and c == 0)) or math.gcd(c, self.d) != 1:
                raise DomainError(f"{c} is not a reduced residue mod {self.d}")
        object.__setattr__(self, "classes", cs)

    @property
    def tau(self) -> int:
        return len(self.classes)

    @property
    def phi_d(self) -> int:
        return totient(self.d)

    def __contains__(self, q: int) -> bool:
        return q % self.d in self.classes and math.gcd(q, self.d) == 1

    @classmethod
    def full(cls, d: int) -> "ResidueSet":
        if d == 1:
            return cls(1, (0,))
        return cls(d, tuple(c for c in range(1, d) if math.gcd(c, d) == 1))

    def to_dict(self) -> dict:
        return {"modulus": self.d, "classes": list(self.classes), "tau": self.tau}


def _pp(x: PrimePower | int) -> PrimePower:
    return x if isinstance(x, PrimePower) else PrimePower.from_value(x)


def residue_set_B(p_alpha: PrimePower | int) -> ResidueSet:
    """Reduced classes mod ``p^alpha`` other than 1."""
    pp = _pp(p_alpha)
    if pp.value < 3:
        raise DomainError("B_{p^alpha} needs p^alpha >= 3")
    d = pp.value
    return ResidueSet(d, tuple(c for c in range(2, d) if c % pp.p))


def residue_set_BH(p1b1: PrimePower | int, p2b2: PrimePower | int) -> ResidueSet:
    """Reduced classes mod ``m1*m2`` that are 1 modulo neither prime power."""
    a, b = _pp(p1b1), _pp(p2b2)
    if a.p == b.p:
        raise DomainError("residue_set_BH needs distinct primes")
    m1, m2 = a.value, b.value
    d = m1 * m2
    return ResidueSet(
        d, tuple(c for c in range(1, d) if math.gcd(c, d) == 1 and c % m1 != 1 % m1 and c % m2 != 1 % m2)
    )
