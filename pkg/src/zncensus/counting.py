"""Exact counting functions, all served by one sieve pass.

A census takes a grid of thresholds and any number of counters; each counter
turns the per-segment features into a boolean mask over ``n`` and the census
sums prefix counts of that mask at every grid point.  Counters are frozen
dataclasses, so they double as result keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import DomainError, FiniteAbelianGroup, PrimePower
from .residues import ResidueSet, residue_set_B, totient
from .sieve import DEFAULT_CAP, DEFAULT_SEGMENT, QueryPlan, SegmentFeatures, build_spf, check_cap, map_segments

__all__ = [
    "CountS",
    "CountSEll",
    "CountDm",
    "CountDmResidue",
    "CountPiM",
    "CountSPair",
    "Census",
    "run_census",
    "cyclic_power",
    "count_S",
    "count_S_ell",
    "count_S0",
    "count_D_m",
    "count_D_m_residue",
    "count_pi_m",
    "count_pi_m_star",
    "count_S_pair",
    "MertensDiagnostic",
    "mertens_diagnostic",
]


def cyclic_power(pp: PrimePower | int, k: int) -> FiniteAbelianGroup:
    """``Z_{p^alpha}^k``; ``k <= 0`` gives the trivial group."""
    if not isinstance(pp, PrimePower):
        pp = PrimePower.from_value(pp)
    return FiniteAbelianGroup.from_prime_powers([pp] * max(k, 0))


# -- counters -----------------------------------------------------------------


@dataclass(frozen=True)
class CountS:
    """``#{n <= x : G does not embed in Z_n^x}``."""

    group: FiniteAbelianGroup
    name = "S"

    def __post_init__(self) -> None:
        self.group.require_nontrivial()

    def register(self, plan: QueryPlan) -> None:
        plan.add_group(self.group)

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        return f.fail[plan.groups.index(self.group)]

    @property
    def params(self) -> str:
        return f"G={self.group}"


@dataclass(frozen=True)
class CountSEll:
    """Like ``CountS`` for ``Z_{p^alpha}^k`` but only ``n`` with ``p^ell || n``."""

    p_alpha: PrimePower
    k: int
    ell: int
    name = "S_ell"

    def __post_init__(self) -> None:
        if self.ell < 0:
            raise DomainError("ell must be >= 0")

    @property
    def group(self) -> FiniteAbelianGroup:
        return cyclic_power(self.p_alpha, self.k)

    def register(self, plan: QueryPlan) -> None:
        plan.add_valuation(self.p_alpha.p)
        if self.k > 0:
            plan.add_group(self.group)

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        if self.k <= 0:
            return np.zeros(f.hi - f.lo, np.bool_)
        v = f.val[plan.valuation_primes.index(self.p_alpha.p)]
        return f.fail[plan.groups.index(self.group)] & (v == self.ell)

    @property
    def params(self) -> str:
        return f"p^alpha={self.p_alpha};k={self.k};ell={self.ell}"


@dataclass(frozen=True)
class CountDmResidue:
    """``N <= x`` with exactly ``m`` distinct prime factors outside ``B``."""

    B: ResidueSet
    m: int
    name = "D_m_residue"

    def register(self, plan: QueryPlan) -> None:
        plan.add_residue_set(self.B.d, self.B.classes)

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        r = plan.residue_sets.index((self.B.d, frozenset(self.B.classes)))
        return f.res[r] == self.m

    @property
    def params(self) -> str:
        return f"d={self.B.d};tau={self.B.tau};m={self.m}"


@dataclass(frozen=True)
class CountDm:
    """``N <= x``, ``p`` not dividing ``N``, exactly ``m`` distinct prime
    factors congruent to 1 mod ``p^alpha``."""

    p_alpha: PrimePower
    m: int
    name = "D_m"

    def __post_init__(self) -> None:
        if self.p_alpha.value < 3:
            raise DomainError("D_m(x; p^alpha) needs p^alpha >= 3")

    @property
    def B(self) -> ResidueSet:
        return residue_set_B(self.p_alpha)

    def register(self, plan: QueryPlan) -> None:
        plan.add_valuation(self.p_alpha.p)
        plan.add_residue_set(self.B.d, self.B.classes)

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        # With p coprime to N, the primes outside B are exactly q = 1 mod p^alpha.
        v = f.val[plan.valuation_primes.index(self.p_alpha.p)]
        return (v == 0) & CountDmResidue(self.B, self.m).mask(f, plan)

    @property
    def params(self) -> str:
        return f"p^alpha={self.p_alpha};m={self.m}"


@dataclass(frozen=True)
class CountPiM:
    """``#{n <= x : omega(n) = m}``, optionally restricted to odd ``n``."""

    m: int
    odd: bool = False

    @property
    def name(self) -> str:
        return "pi_m_star" if self.odd else "pi_m"

    def register(self, plan: QueryPlan) -> None:
        pass

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        out = f.omega == self.m
        if self.odd:
            out &= (f.n & 1) == 1
        return out

    @property
    def params(self) -> str:
        return f"m={self.m}"


@dataclass(frozen=True)
class CountSPair:
    """``n <= x`` where neither ``H1`` nor ``H2`` embeds in ``Z_n^x``."""

    H1: FiniteAbelianGroup
    H2: FiniteAbelianGroup
    name = "S_pair"

    def __post_init__(self) -> None:
        self.H1.require_nontrivial()
        self.H2.require_nontrivial()

    def register(self, plan: QueryPlan) -> None:
        plan.add_group(self.H1)
        plan.add_group(self.H2)

    def mask(self, f: SegmentFeatures, plan: QueryPlan) -> np.ndarray:
        return f.fail[plan.groups.index(self.H1)] & f.fail[plan.groups.index(self.H2)]

    @property
    def params(self) -> str:
        return f"H1={self.H1};H2={self.H2}"


# -- census driver -------------------------------------------------------------


def _normalize_grid(x_grid: Iterable[int]) -> np.ndarray:
    g = np.asarray([int(x) for x in x_grid], dtype=np.int64)
    if g.size == 0:
        raise DomainError("x_grid must be nonempty")
    return g


class Census:
    """One sieve pass over ``[1, max(grid)]`` serving many counters.

    The grid need not be sorted; each counter's result lists one count per
    grid entry in the order given.  Thresholds below 1 count nothing.
    """

    def __init__(
        self,
        x_grid: Iterable[int],
        counters: Iterable = (),
        threads: int = 1,
        segment_size: int = DEFAULT_SEGMENT,
        cap: int = DEFAULT_CAP,
    ):
        self.grid = _normalize_grid(x_grid)
        self.threads = threads
        self.segment_size = segment_size
        self.cap = cap
        self.counters: list = []
        self.plan = QueryPlan()
        self.results: dict | None = None
        for c in counters:
            self.add(c)

    def add(self, counter) -> None:
        if counter not in self.counters:
            counter.register(self.plan)
            self.counters.append(counter)
            self.results = None

    def _segment_counts(self, f: SegmentFeatures) -> np.ndarray:
        idx = np.clip(self.grid - f.lo, -1, f.hi - f.lo - 1)
        out = np.zeros((len(self.counters), self.grid.size), np.int64)
        for ci, c in enumerate(self.counters):
            cs = np.cumsum(c.mask(f, self.plan), dtype=np.int64)
            out[ci] = np.where(idx < 0, 0, cs[np.maximum(idx, 0)])
        return out

    def run(self) -> dict:
        x_max = int(self.grid.max())
        check_cap(x_max, self.cap)
        total = np.zeros((len(self.counters), self.grid.size), np.int64)
        if x_max >= 1:
            for part in map_segments(
                x_max, self.plan, self._segment_counts, self.threads, self.segment_size, self.cap
            ):
                total += part
        self.results = {c: [int(v) for v in total[i]] for i, c in enumerate(self.counters)}
        return self.results

    def __getitem__(self, counter) -> list[int]:
        if self.results is None or counter not in self.results:
            self.add(counter)
            self.run()
        return self.results[counter]

    def value(self, counter, x: int) -> int:
        """Count at one threshold, which must be on the grid."""
        hits = np.flatnonzero(self.grid == int(x))
        if hits.size == 0:
            raise KeyError(f"x={x} is not on the census grid")
        return self[counter][int(hits[0])]


def run_census(x_grid: Iterable[int], counters: Sequence, **opts) -> dict:
    return Census(x_grid, counters, **opts).run()


# -- one-shot functional API ----------------------------------------------------


def _pp(x: PrimePower | int) -> PrimePower:
    return x if isinstance(x, PrimePower) else PrimePower.from_value(x)


def count_S(x_grid: Iterable[int], G: FiniteAbelianGroup, **opts) -> list[int]:
    c = CountS(G)
    return run_census(x_grid, [c], **opts)[c]


def count_S_ell(x: int, p_alpha: PrimePower | int, k: int, ell: int, **opts) -> int:
    c = CountSEll(_pp(p_alpha), k, ell)
    return run_census([x], [c], **opts)[c][0]


def count_S0(x: int, p_alpha: PrimePower | int, k: int, **opts) -> int:
    return count_S_ell(x, p_alpha, k, 0, **opts)


def count_D_m(x: int, p_alpha: PrimePower | int, m: int, **opts) -> int:
    c = CountDm(_pp(p_alpha), m)
    return run_census([x], [c], **opts)[c][0]


def count_D_m_residue(x: int, B: ResidueSet, m: int, **opts) -> int:
    c = CountDmResidue(B, m)
    return run_census([x], [c], **opts)[c][0]


def count_pi_m(x: int, m: int, **opts) -> int:
    c = CountPiM(m)
    return run_census([x], [c], **opts)[c][0]


def count_pi_m_star(x: int, m: int, **opts) -> int:
    c = CountPiM(m, odd=True)
    return run_census([x], [c], **opts)[c][0]


def count_S_pair(x: int, H1: FiniteAbelianGroup, H2: FiniteAbelianGroup, **opts) -> int:
    c = CountSPair(H1, H2)
    return run_census([x], [c], **opts)[c][0]


# -- Mertens-type prime reciprocal sums ------------------------------------------


@dataclass(frozen=True)
class MertensDiagnostic:
    modulus: int
    x: int
    M: float
    c_estimate: float
    R: float

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "x": self.x, "M": self.M, "c_estimate": self.c_estimate, "R": self.R}


def mertens_diagnostic(
    x_grid: Iterable[int],
    p_alpha: PrimePower | int,
    segment_size: int = DEFAULT_SEGMENT,
    cap: int = DEFAULT_CAP,
) -> list[MertensDiagnostic]:
    """``M(x) = sum of 1/q over primes q <= x, q = 1 mod p^alpha``.

    ``p_alpha = 1`` means every prime.  The constant is fitted at the largest
    grid point and ``R`` is the drift left over at each ``x``.
    """
    modulus = 1 if p_alpha in (1, None) else _pp(p_alpha).value
    grid = sorted({int(x) for x in x_grid})
    if grid[0] < 3:
        raise DomainError("Mertens diagnostics need x >= 3")
    check_cap(grid[-1], cap)
    phi = totient(modulus)
    chunks: list[float] = []
    values: dict[int, float] = {}
    gi = 0
    for seg in build_spf(grid[-1], segment_size=segment_size, cap=cap):
        n = np.arange(seg.base, seg.base + len(seg), dtype=np.int64)
        q = n[(seg.spf == n) & (n % modulus == 1 % modulus)]
        while gi < len(grid) and grid[gi] < seg.base + len(seg):
            sel = q[q <= grid[gi]]
            values[grid[gi]] = math.fsum(chunks + [math.fsum((1.0 / sel).tolist())])
            gi += 1
        chunks.append(math.fsum((1.0 / q).tolist()))
    c_fit = values[grid[-1]] - math.log(math.log(grid[-1])) / phi
    out = []
    for x in grid:
        c_est = values[x] - math.log(math.log(x)) / phi
        out.append(MertensDiagnostic(modulus, x, values[x], c_est, c_est - c_fit))
    return out
