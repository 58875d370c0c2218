"""Main terms of S(x; G) and the exponent in the two-prime error bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..groups import (
    DomainError,
    FiniteAbelianGroup,
    GatheredSummand,
    PrimePower,
    dominant_summands,
    gathered_summands,
)
from .constants import k_constant

__all__ = [
    "MainTerm",
    "TermRow",
    "main_term_z2k",
    "main_term_general",
    "growth",
    "classify",
    "error_exponent_rho",
]

E_THRESHOLD = math.e


def _check_x(x: float) -> None:
    if not x > E_THRESHOLD:
        raise DomainError(f"main terms need log log x > 0, got x={x}")


def growth(x: float, phi: int, k: int) -> float:
    """``x (log log x)^(k-1) / (log x)^(1/phi)``."""
    _check_x(x)
    lx = math.log(x)
    return x * math.log(lx) ** (k - 1) / lx ** (1.0 / phi)


def main_term_z2k(x: float, k: int) -> float:
    """``3 x (log log x)^(k-2) / (2 (k-2)! log x)`` for ``G = Z_2^k``, ``k >= 2``."""
    if k < 2:
        raise DomainError("the Z_2^k main term needs k >= 2")
    _check_x(x)
    lx = math.log(x)
    return 1.5 / math.factorial(k - 2) * x * math.log(lx) ** (k - 2) / lx


@dataclass(frozen=True)
class TermRow:
    summand: GatheredSummand
    K: float
    value: float
    placeholder: bool = False


@dataclass(frozen=True)
class MainTerm:
    """Main-term evaluation at one ``x``.

    ``branch`` is ``z2k`` (G is Z_2^k), ``z2-exact`` (G = Z_2, where the
    count is exactly 2), ``unique-dominant`` or ``two-dominant``.
    """

    x: float
    group: FiniteAbelianGroup
    branch: str
    terms: tuple[TermRow, ...] = ()
    total: float = 0.0
    dominant: tuple[GatheredSummand, ...] = ()
    dominant_total: float = 0.0
    dominant_coefficient: float = 0.0
    extras: dict = field(default_factory=dict)


def classify(G: FiniteAbelianGroup) -> str:
    G.require_nontrivial()
    if len(G.summands) == 1 and G.summands[0][:2] == (2, 1):
        return "z2-exact" if G.summands[0][2] == 1 else "z2k"
    return "two-dominant" if len(dominant_summands(G)) == 2 else "unique-dominant"


def main_term_general(x: float, G: FiniteAbelianGroup, Q: int | None = None) -> MainTerm:
    """Sum over gathered summands, plus the dominant-only total.

    For ``Z_2^k`` both totals are the dedicated formula (and the constant 2
    for ``Z_2`` itself), since the sum over gathered summands does not apply.
    """
    _check_x(x)
    branch = classify(G)
    if branch in ("z2-exact", "z2k"):
        k = G.summands[0][2]
        v = 2.0 if branch == "z2-exact" else main_term_z2k(x, k)
        coeff = 2.0 if branch == "z2-exact" else 1.5 / math.factorial(k - 2)
        g = gathered_summands(G)
        return MainTerm(x, G, branch, (TermRow(g[0], 1.0, v, True),), v, tuple(g), v, coeff)
    rows = []
    for g in gathered_summands(G):
        K = k_constant(PrimePower(g.p, g.alpha), g.k, Q=Q)
        rows.append(TermRow(g, K, K * growth(x, g.phi, g.k), placeholder=(g.p ** g.alpha == 2)))
    dom = tuple(dominant_summands(G))
    dom_rows = [r for r in rows if r.summand in dom]
    coeff = sum(r.K for r in dom_rows)
    dom_total = coeff * growth(x, dom[0].phi, dom[0].k)
    return MainTerm(
        x, G, branch, tuple(rows), math.fsum(r.value for r in rows), dom, dom_total, coeff,
    )


def error_exponent_rho(p1b1: PrimePower | int, p2b2: PrimePower | int) -> tuple[Fraction, Fraction]:
    """``rho`` and ``rho - 1/phi(p1^b1)``, as exact fractions."""
    a = p1b1 if isinstance(p1b1, PrimePower) else PrimePower.from_value(p1b1)
    b = p2b2 if isinstance(p2b2, PrimePower) else PrimePower.from_value(p2b2)
    if a.p == b.p:
        raise DomainError("rho needs distinct primes")
    fa, fb = Fraction(1, a.phi), Fraction(1, b.phi)
    rho = fa + fb - fa * fb  # phi is multiplicative on coprime moduli
    return rho, rho - fa
