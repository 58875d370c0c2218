"""Segmented sieving: smallest prime factors, factorizations, and per-n
descriptions of ``(Z/n)^x`` restricted to a handful of primes."""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

import numpy as np

from . import kernels
from .groups import DomainError, FiniteAbelianGroup, PPartition, PrimePower, p_partition

__all__ = [
    "DEFAULT_CAP",
    "DEFAULT_SEGMENT",
    "SieveCapError",
    "SpfSegment",
    "SpfTable",
    "QueryPlan",
    "SegmentFeatures",
    "UnitGroupProfile",
    "simple_primes",
    "build_spf",
    "factorize",
    "iter_ranges",
    "map_segments",
    "unit_group_stream",
]

DEFAULT_CAP = 2**31
DEFAULT_SEGMENT = 1 << 17

T = TypeVar("T")


class SieveCapError(RuntimeError):
    """Requested limit exceeds the configured sieve cap."""


def check_cap(limit: int, cap: int = DEFAULT_CAP) -> None:
    if limit > cap:
        raise SieveCapError(f"limit {limit} exceeds sieve cap {cap}")


def simple_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` (plain Eratosthenes, used for base primes)."""
    if limit < 2:
        return np.zeros(0, np.int64)
    flags = np.ones(limit + 1, np.bool_)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _width(hi: int) -> int:
    """Max number of distinct prime factors of any n < hi."""
    w, prod, p = 0, 1, 2
    while True:
        if prod * p > max(hi - 1, 1):
            return max(w, 1)
        prod *= p
        w += 1
        p += 1
        while any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            p += 1


def iter_ranges(x: int, segment_size: int = DEFAULT_SEGMENT, start: int = 1) -> Iterator[tuple[int, int]]:
    """Half-open ``[lo, hi)`` blocks covering ``[start, x]``."""
    if segment_size < 1:
        raise ValueError("segment_size must be positive")
    lo = start
    while lo <= x:
        hi = min(lo + segment_size, x + 1)
        yield lo, hi
        lo = hi


def _ordered_map(fn: Callable[[tuple[int, int]], T], items: Iterable[tuple[int, int]], threads: int) -> Iterator[T]:
    if threads <= 1:
        for it in items:
            yield fn(it)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending: deque = deque()
        for it in items:
            pending.append(pool.submit(fn, it))
            if len(pending) >= 2 * threads:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


# -- smallest prime factors ---------------------------------------------------


@dataclass(frozen=True)
class SpfSegment:
    base: int
    spf: np.ndarray  # spf[i] for base+i; 0 flags 0 and 1

    def __len__(self) -> int:
        return self.spf.shape[0]


def build_spf(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
    cap: int = DEFAULT_CAP,
) -> Iterator[SpfSegment]:
    """Stream smallest-prime-factor segments covering ``[2, limit]``."""
    check_cap(limit, cap)
    if limit < 2:
        return iter(())
    base = simple_primes(math.isqrt(limit))

    def work(r: tuple[int, int]) -> SpfSegment:
        return SpfSegment(r[0], kernels.spf_segment(r[0], r[1], base))

    return _ordered_map(work, iter_ranges(limit, segment_size, start=2), threads)


class SpfTable:
    """Contiguous SPF lookup for ``[0, limit]``."""

    def __init__(self, limit: int, cap: int = DEFAULT_CAP):
        self.limit = limit
        spf = np.zeros(limit + 1, np.int64)
        for seg in build_spf(limit, cap=cap):
            spf[seg.base : seg.base + len(seg)] = seg.spf
        self.spf = spf

    def __call__(self, n: int) -> int:
        return int(self.spf[n])

    def factorize(self, n: int) -> list[PrimePower]:
        return factorize(n, self)


def factorize(n: int, spf: SpfTable) -> list[PrimePower]:
    """Factor ``2 <= n <= spf.limit`` by repeated SPF lookup."""
    if not 2 <= n <= spf.limit:
        raise DomainError(f"{n} outside SPF range [2, {spf.limit}]")
    out: list[PrimePower] = []
    while n > 1:
        p = spf(n)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append(PrimePower(p, e))
    return out


# -- query plans and per-segment features ------------------------------------


@dataclass
class QueryPlan:
    """Everything the evaluation kernel needs to know about a census.

    Each group becomes a set of thresholds: for prime ``ell`` and each
    distinct part ``a`` of the group's ``ell``-partition, ``Z_n^x`` needs at
    least ``req`` cyclic ``ell``-factors of exponent ``>= a``.  Checking only
    these counts is exactly partition domination, and it means nothing about
    the unit group beyond those counts is ever materialized.
    """

    groups: list[FiniteAbelianGroup] = field(default_factory=list)
    valuation_primes: list[int] = field(default_factory=list)
    residue_sets: list[tuple[int, frozenset[int]]] = field(default_factory=list)

    def add_group(self, G: FiniteAbelianGroup) -> int:
        if G in self.groups:
            return self.groups.index(G)
        self.groups.append(G)
        self._args = None
        return len(self.groups) - 1

    def add_valuation(self, p: int) -> int:
        if p not in self.valuation_primes:
            self.valuation_primes.append(p)
            self._args = None
        return self.valuation_primes.index(p)

    def add_residue_set(self, d: int, classes: Iterable[int]) -> int:
        key = (int(d), frozenset(int(c) % d for c in classes))
        if key not in self.residue_sets:
            self.residue_sets.append(key)
            self._args = None
        return self.residue_sets.index(key)

    def thresholds(self) -> list[tuple[int, int, int, int]]:
        """``(ell, size, required_count, group_index)`` rows."""
        rows = []
        for gi, G in enumerate(self.groups):
            for ell in G.primes:
                parts = p_partition(G, ell).parts
                for a in sorted(set(parts)):
                    rows.append((ell, a, sum(1 for b in parts if b >= a), gi))
        return rows

    def kernel_args(self) -> tuple:
        if getattr(self, "_args", None) is not None:
            return self._args
        rows = self.thresholds()
        i64 = lambda xs: np.asarray(xs, dtype=np.int64).reshape(-1)  # noqa: E731
        ell = i64([r[0] for r in rows])
        size = i64([r[1] for r in rows])
        mods = []
        for e, s in zip(ell.tolist(), size.tolist()):
            m = e**s
            mods.append(m if m < 2**62 else -1)
        tables, offs, moduli = [], [], []
        off = 0
        for d, classes in self.residue_sets:
            t = np.zeros(d, np.uint8)
            t[sorted(classes)] = 1
            tables.append(t)
            offs.append(off)
            moduli.append(d)
            off += d
        table = np.concatenate(tables) if tables else np.zeros(0, np.uint8)
        self._args = (
            ell, size, i64(mods), i64([r[2] for r in rows]), i64([r[3] for r in rows]),
            len(self.groups), i64(self.valuation_primes), i64(moduli), i64(offs), table,
        )
        return self._args


@dataclass
class SegmentFeatures:
    """Per-n features for ``n`` in ``[lo, hi)``.

    ``fail[g]`` is True where group ``g`` does not embed in ``Z_n^x``;
    ``val[v]`` is the exponent of the ``v``-th valuation prime; ``res[r]``
    counts distinct prime factors outside residue set ``r``; ``omega`` is
    the number of distinct prime factors.
    """

    lo: int
    hi: int
    fail: np.ndarray
    val: np.ndarray
    res: np.ndarray
    omega: np.ndarray
    fac_p: np.ndarray | None = None
    fac_e: np.ndarray | None = None

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.lo, self.hi, dtype=np.int64)


def segment_features(lo: int, hi: int, base: np.ndarray, plan: QueryPlan, keep_factors: bool = False) -> SegmentFeatures:
    fac_p, fac_e, nfac = kernels.factor_segment(lo, hi, base, _width(hi))
    fail, val, res = kernels.evaluate_segment(fac_p, fac_e, nfac, plan)
    if keep_factors:
        return SegmentFeatures(lo, hi, fail, val, res, nfac, fac_p, fac_e)
    return SegmentFeatures(lo, hi, fail, val, res, nfac)


def map_segments(
    x: int,
    plan: QueryPlan,
    fn: Callable[[SegmentFeatures], T],
    threads: int = 1,
    segment_size: int = DEFAULT_SEGMENT,
    cap: int = DEFAULT_CAP,
    keep_factors: bool = False,
    start: int = 1,
) -> Iterator[T]:
    """Apply ``fn`` to the features of each segment of ``[start, x]``, in order."""
    check_cap(x, cap)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if start < 1:
        raise DomainError("start must be >= 1")
    base = simple_primes(math.isqrt(max(x, 1)))
    plan.kernel_args()  # build once before workers share the plan

    def work(r: tuple[int, int]) -> T:
        return fn(segment_features(r[0], r[1], base, plan, keep_factors))

    return _ordered_map(work, iter_ranges(x, segment_size, start), threads)


# -- unit group profiles ------------------------------------------------------


@dataclass(frozen=True)
class UnitGroupProfile:
    n: int
    partitions: dict[int, PPartition]
    p_adic_valuation: int | None = None

    def group(self) -> FiniteAbelianGroup:
        """The queried primary parts of ``Z_n^x`` as a group."""
        return FiniteAbelianGroup.from_prime_powers(
            (ell, a) for ell, part in self.partitions.items() for a in part.parts
        )


def _ell_parts(q: int, b: int, ell: int) -> list[int]:
    if q == 2:
        if ell != 2 or b < 2:
            return []
        return [1] if b == 2 else [1, b - 2]
    parts = []
    v, m = 0, q - 1
    while m % ell == 0:
        m //= ell
        v += 1
    if v:
        parts.append(v)
    if q == ell and b >= 2:
        parts.append(b - 1)
    return parts


def unit_group_stream(
    x: int,
    query_primes: Sequence[int] | set[int],
    p_for_valuation: int | None = None,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
    cap: int = DEFAULT_CAP,
    start: int = 1,
) -> Iterator[UnitGroupProfile]:
    """Yield the ``ell``-primary partitions of ``Z_n^x`` for ``start <= n <= x``.

    Profiles are complete, not truncated to any query group.
    """
    if x < 1:
        raise DomainError("x must be >= 1")
    ells = sorted(set(int(e) for e in query_primes))
    if not ells:
        raise DomainError("query_primes must be nonempty")
    for e in ells:
        PrimePower(e, 1)
    plan = QueryPlan()
    for feats in map_segments(x, plan, lambda f: f, threads, segment_size, cap, keep_factors=True, start=start):
        fp, fe, nf = feats.fac_p, feats.fac_e, feats.omega
        for i in range(feats.hi - feats.lo):
            facs = [(int(fp[i, j]), int(fe[i, j])) for j in range(int(nf[i]))]
            parts = {}
            for ell in ells:
                ps = [a for q, b in facs for a in _ell_parts(q, b, ell)]
                parts[ell] = PPartition(ell, tuple(sorted(ps, reverse=True)))
            val = None
            if p_for_valuation is not None:
                val = next((b for q, b in facs if q == p_for_valuation), 0)
            yield UnitGroupProfile(feats.lo + i, parts, val)
