"""Finite abelian groups in primary form.

A group is stored as a sorted tuple of ``(p, alpha, multiplicity)`` triples,
so two isomorphic groups always compare equal.  Everything here is a pure
function on immutable values.
"""

from __future__ import annotations

import enum
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

__all__ = [
    "GroupSpecError",
    "DomainError",
    "TrivialGroupError",
    "PrimePower",
    "FiniteAbelianGroup",
    "GatheredSummand",
    "PPartition",
    "Ordering",
    "is_prime",
    "factorint",
    "parse_group",
    "gathered_summands",
    "preorder_cmp",
    "dominant_summands",
    "phi_collision_partner",
    "p_partition",
    "embeds",
    "unit_group_of_prime_power",
    "unit_group",
    "euler_phi_pp",
]

U64_MAX = 2**64 - 1


class GroupSpecError(ValueError):
    """Malformed group-spec text."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class TrivialGroupError(DomainError):
    """The trivial group was passed where a nontrivial one is required."""


# -- integer helpers ---------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def _factorint_cached(n: int) -> tuple[tuple[int, int], ...]:
    if n < 1 << 20:
        out = []
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                e = 0
                while m % d == 0:
                    m //= d
                    e += 1
                out.append((d, e))
            d += 1 if d == 2 else 2
        if m > 1:
            out.append((m, 1))
        return tuple(out)
    import sympy

    return tuple(sorted(sympy.factorint(n).items()))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` as ``{p: e}``."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    return dict(_factorint_cached(int(n)))


def _integer_root(n: int, k: int) -> int:
    """Largest r with r**k <= n."""
    if k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


# -- value types -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PrimePower:
    p: int
    alpha: int

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise DomainError(f"exponent must be >= 1, got {self.alpha}")
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.p**self.alpha > U64_MAX:
            raise DomainError(f"{self.p}^{self.alpha} does not fit in 64 bits")

    @classmethod
    def from_value(cls, q: int) -> "PrimePower":
        f = factorint(q) if q > 1 else {}
        if len(f) != 1:
            raise DomainError(f"{q} is not a prime power")
        ((p, a),) = f.items()
        return cls(p, a)

    @property
    def value(self) -> int:
        return self.p**self.alpha

    @property
    def phi(self) -> int:
        return self.p ** (self.alpha - 1) * (self.p - 1)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, order=True)
class GatheredSummand:
    """``Z_{p^alpha}^k``: all ``k`` copies of one primary cyclic factor."""

    p: int
    alpha: int
    k: int

    @property
    def prime_power(self) -> PrimePower:
        return PrimePower(self.p, self.alpha)

    @property
    def phi(self) -> int:
        return self.p ** (self.alpha - 1) * (self.p - 1)

    def __str__(self) -> str:
        base = f"Z{self.p ** self.alpha}"
        return base if self.k == 1 else f"{base}^{self.k}"


@dataclass(frozen=True)
class PPartition:
    ell: int
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(a <= 0 for a in self.parts):
            raise DomainError("partition parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise DomainError("partition parts must be non-increasing")

    def dominated_by(self, other: "PPartition") -> bool:
        """Componentwise ``self[i] <= other[i]`` after zero padding."""
        if len(self.parts) > len(other.parts):
            return False
        return all(a <= b for a, b in zip(self.parts, other.parts))


class Ordering(enum.Enum):
    LESS = -1
    EQUIVALENT = 0
    GREATER = 1


@dataclass(frozen=True)
class FiniteAbelianGroup:
    summands: tuple[tuple[int, int, int], ...] = ()

    @classmethod
    def from_prime_powers(cls, pps: Iterable[tuple[int, int] | PrimePower]) -> "FiniteAbelianGroup":
        c: Counter[tuple[int, int]] = Counter()
        for pp in pps:
            if not isinstance(pp, PrimePower):
                pp = PrimePower(*pp)
            c[(pp.p, pp.alpha)] += 1
        return cls(tuple((p, a, m) for (p, a), m in sorted(c.items())))

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Direct product of ``Z_n`` for each order; composites split by CRT."""
        pps = []
        for n in orders:
            n = int(n)
            if n < 1:
                raise DomainError(f"cyclic order must be positive, got {n}")
            pps.extend(PrimePower(p, e) for p, e in factorint(n).items())
        return cls.from_prime_powers(pps)

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls(())

    def normalized(self) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_prime_powers(self.prime_powers())

    def prime_powers(self) -> list[PrimePower]:
        return [PrimePower(p, a) for p, a, m in self.summands for _ in range(m)]

    def is_trivial(self) -> bool:
        return not self.summands

    @property
    def order(self) -> int:
        return math.prod((p**a) ** m for p, a, m in self.summands)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({p for p, _, _ in self.summands}))

    def __mul__(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_prime_powers(self.prime_powers() + other.prime_powers())

    def cyclic_orders(self) -> list[int]:
        return [p**a for p, a, m in self.summands for _ in range(m)]

    def __str__(self) -> str:
        if not self.summands:
            return "Z1"
        return "*".join(f"Z{p ** a}" + (f"^{m}" if m > 1 else "") for p, a, m in self.summands)

    def require_nontrivial(self) -> "FiniteAbelianGroup":
        if self.is_trivial():
            raise TrivialGroupError("trivial group is not allowed here")
        return self


# -- parsing -----------------------------------------------------------------

_TERM = re.compile(r"Z(\d+)(?:\^(\d+))?")
_BRACKET = re.compile(r"\[(\d+(?:,\d+)*)\]")


def parse_group(spec: str) -> FiniteAbelianGroup:
    """Parse ``"Z4*Z2^2"`` or ``"[4,2,2]"`` into canonical primary form."""
    text = re.sub(r"\s+", "", spec)
    if not text:
        raise GroupSpecError("empty group spec")
    orders: list[int] = []
    m = _BRACKET.fullmatch(text)
    if m:
        orders = [int(t) for t in m.group(1).split(",")]
    else:
        for term in text.split("*"):
            tm = _TERM.fullmatch(term)
            if tm is None:
                raise GroupSpecError(f"malformed term {term!r} in {spec!r}")
            n = int(tm.group(1))
            reps = int(tm.group(2)) if tm.group(2) is not None else 1
            if reps < 1:
                raise GroupSpecError(f"exponent must be >= 1 in {term!r}")
            orders.extend([n] * reps)
    for n in orders:
        if n == 0:
            raise DomainError("cyclic order 0 is not a finite group")
        if n == 1:
            raise TrivialGroupError("trivial group: order-1 factor in group spec")
        if n > U64_MAX:
            raise DomainError(f"cyclic order {n} overflows 64 bits")
    return FiniteAbelianGroup.from_cyclic_orders(orders)


# -- structure ---------------------------------------------------------------


def euler_phi_pp(pp: PrimePower | int) -> int:
    if not isinstance(pp, PrimePower):
        pp = PrimePower.from_value(pp)
    return pp.phi


def gathered_summands(G: FiniteAbelianGroup) -> list[GatheredSummand]:
    G.require_nontrivial()
    return [GatheredSummand(p, a, m) for p, a, m in G.summands]


def preorder_cmp(a: GatheredSummand, b: GatheredSummand) -> Ordering:
    ka, kb = (a.phi, a.k), (b.phi, b.k)
    if ka == kb:
        return Ordering.EQUIVALENT
    return Ordering.LESS if ka < kb else Ordering.GREATER


def dominant_summands(G: FiniteAbelianGroup) -> list[GatheredSummand]:
    """Maximal gathered summands, ascending by ``p``; never more than two."""
    gs = gathered_summands(G)
    top = max((g.phi, g.k) for g in gs)
    dom = sorted((g for g in gs if (g.phi, g.k) == top), key=lambda g: (g.p, g.alpha))
    assert len(dom) <= 2, f"more than two prime powers share phi={top[0]}"
    return dom


def phi_collision_partner(pp: PrimePower | int) -> PrimePower | None:
    """The other prime power with the same totient, if there is one.

    Exhaustive: ``phi(q^b) = v`` forces ``q - 1 < v^(1/b) < q`` so for each
    ``b`` there is exactly one candidate ``q``.
    """
    if not isinstance(pp, PrimePower):
        pp = PrimePower.from_value(pp)
    v = pp.phi
    found = []
    for b in range(1, v.bit_length() + 2):
        q = v + 1 if b == 1 else _integer_root(v, b) + 1
        if q < 2:
            continue
        if q ** (b - 1) * (q - 1) == v and is_prime(q) and (q, b) != (pp.p, pp.alpha):
            found.append(PrimePower(q, b))
    assert len(found) <= 1
    return found[0] if found else None


def p_partition(G: FiniteAbelianGroup, ell: int) -> PPartition:
    parts = [a for p, a, m in G.summands if p == ell for _ in range(m)]
    return PPartition(ell, tuple(sorted(parts, reverse=True)))


def embeds(G: FiniteAbelianGroup, H: FiniteAbelianGroup) -> bool:
    """True iff ``G`` is isomorphic to a subgroup of ``H``."""
    return all(p_partition(G, ell).dominated_by(p_partition(H, ell)) for ell in G.primes)


def unit_group_of_prime_power(p: int, beta: int) -> FiniteAbelianGroup:
    """Structure of ``(Z/p^beta)^x`` in primary form."""
    if beta < 1:
        raise DomainError("beta must be >= 1")
    PrimePower(p, beta)  # validates primality and the 64-bit bound
    if p == 2:
        if beta == 1:
            return FiniteAbelianGroup.trivial()
        if beta == 2:
            return FiniteAbelianGroup(((2, 1, 1),))
        return FiniteAbelianGroup.from_prime_powers([(2, 1), (2, beta - 2)])
    pps = [PrimePower(q, e) for q, e in factorint(p - 1).items()]
    if beta >= 2:
        pps.append(PrimePower(p, beta - 1))
    return FiniteAbelianGroup.from_prime_powers(pps)


def unit_group(n: int) -> FiniteAbelianGroup:
    """Structure of ``(Z/n)^x`` by CRT over the factorization of ``n``."""
    if n < 1:
        raise DomainError("n must be positive")
    pps: list[PrimePower] = []
    for p, e in factorint(n).items():
        pps.extend(unit_group_of_prime_power(p, e).prime_powers())
    return FiniteAbelianGroup.from_prime_powers(pps)
