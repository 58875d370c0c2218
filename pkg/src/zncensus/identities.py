"""Exact structural identities between the counting functions.

``identity_suite`` builds a single census that serves every row, then
checks each relation with exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .counting import (
    Census,
    CountDm,
    CountPiM,
    CountS,
    CountSEll,
    CountSPair,
    cyclic_power,
)
from .groups import PrimePower
from .sieve import DEFAULT_SEGMENT

__all__ = ["IdentityRow", "identity_suite", "DEFAULT_PALPHAS"]

DEFAULT_PALPHAS = (2, 3, 4, 5, 8, 9)


@dataclass(frozen=True)
class IdentityRow:
    identity: str
    params: str
    lhs: int
    rhs: int
    relation: str = "=="

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs if self.relation == "==" else self.lhs <= self.rhs

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": self.params,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "status": "PASS" if self.passed else "FAIL",
        }


def _shift(k_drop: int, k: int) -> int:
    return max(k - k_drop, 0)


def _sell_drop(pp: PrimePower, ell: int) -> int:
    """How many copies of ``Z_{p^alpha}`` the factor ``Z_{p^ell}^x`` supplies."""
    if pp.value == 2:
        return 0 if ell <= 1 else (1 if ell == 2 else 2)
    if pp.p == 2:
        return 1 if ell >= pp.alpha + 2 else 0
    return 1 if ell >= pp.alpha + 1 else 0


def identity_suite(
    xs: Sequence[int] = (10**4, 10**5),
    palphas: Sequence[int] = DEFAULT_PALPHAS,
    ks: Sequence[int] = (1, 2, 3),
    ells: Sequence[int] = tuple(range(7)),
    pair_bases: Sequence[tuple[int, int]] | None = None,
    threads: int = 1,
    segment_size: int = DEFAULT_SEGMENT,
    inject_fault: bool = False,
) -> list[IdentityRow]:
    pps = [PrimePower.from_value(v) for v in palphas]
    pairs = _pairs(pps) if pair_bases is None else [
        (PrimePower.from_value(a), PrimePower.from_value(b)) for a, b in pair_bases
    ]
    grid = set(int(x) for x in xs)
    for x in xs:
        for pp in pps:
            grid.update(x // pp.p**e for e in range(0, int(math.log(x, pp.p)) + 2))
    grid.discard(0)
    census = Census(sorted(grid), threads=threads, segment_size=segment_size)

    def val(counter, x: int) -> int:
        return census.value(counter, x) if x >= 1 else 0

    def S(G, x):
        return 0 if G.is_trivial() else val(CountS(G), x)

    plan_rows = []

    for x in xs:
        for pp in pps:
            for k in ks:
                G = cyclic_power(pp, k)
                top = int(math.log(x, pp.p)) + 1
                plan_rows.append(("group_by_ell", f"x={x};p^alpha={pp};k={k}",
                                  lambda x=x, pp=pp, k=k, top=top: sum(val(CountSEll(pp, k, e), x) for e in range(top + 1)),
                                  lambda x=x, G=G: S(G, x), "=="))
                for ell in ells:
                    kk = _shift(_sell_drop(pp, ell), k)
                    plan_rows.append(("sell_to_s0", f"x={x};p^alpha={pp};k={k};ell={ell}",
                                      lambda x=x, pp=pp, k=k, ell=ell: val(CountSEll(pp, k, ell), x),
                                      lambda x=x, pp=pp, kk=kk, ell=ell: val(CountSEll(pp, kk, 0), x // pp.p**ell),
                                      "=="))
                if pp.value >= 3:
                    plan_rows.append(("sum_splitting", f"x={x};p^alpha={pp};k={k}",
                                      lambda x=x, pp=pp, k=k: val(CountSEll(pp, k, 0), x),
                                      lambda x=x, pp=pp, k=k: sum(val(CountDm(pp, m), x) for m in range(k)),
                                      "=="))
                else:
                    plan_rows.append(("s0_z2k_pi_star", f"x={x};k={k}",
                                      lambda x=x, pp=pp, k=k: val(CountSEll(pp, k, 0), x),
                                      lambda x=x, k=k: sum(val(CountPiM(m, odd=True), x) for m in range(k)),
                                      "=="))
                if k >= 2:
                    G1 = cyclic_power(pp, k - 1)
                    plan_rows.append(("subgroup_monotone", f"x={x};G1={G1};G={G}",
                                      lambda x=x, G1=G1: S(G1, x), lambda x=x, G=G: S(G, x), "<="))
        for a, b in pairs:
            H1, H2 = cyclic_power(a, 1), cyclic_power(b, 1)
            G = H1 * H2
            params = f"x={x};H1={H1};H2={H2}"
            plan_rows.append(("incl_excl", params,
                              lambda x=x, G=G: S(G, x),
                              lambda x=x, H1=H1, H2=H2: S(H1, x) + S(H2, x) - val(CountSPair(H1, H2), x),
                              "=="))
            plan_rows.append(("union_bound", params,
                              lambda x=x, G=G: S(G, x), lambda x=x, H1=H1, H2=H2: S(H1, x) + S(H2, x), "<="))
            plan_rows.append(("subgroup_monotone", f"x={x};G1={H1};G={G}",
                              lambda x=x, H1=H1: S(H1, x), lambda x=x, G=G: S(G, x), "<="))

    # Register every counter first so the census runs exactly once.
    _collect(census, xs, pps, ks, ells, pairs)
    census.run()

    rows = [IdentityRow(name, params, lhs(), rhs(), rel) for name, params, lhs, rhs, rel in plan_rows]
    if inject_fault and rows:
        r = rows[0]
        rows[0] = IdentityRow(r.identity, r.params + ";FAULT_INJECTED", r.lhs + 1, r.rhs, r.relation)
    return rows


def _pairs(pps: Sequence[PrimePower]) -> list[tuple[PrimePower, PrimePower]]:
    out = [(a, b) for a, b in combinations(pps, 2) if a.p != b.p]
    return out


def _collect(census: Census, xs, pps, ks, ells, pairs) -> None:
    for pp in pps:
        census.add(CountSEll(pp, 0, 0))
        for k in ks:
            census.add(CountS(cyclic_power(pp, k)))
            if k >= 2:
                census.add(CountS(cyclic_power(pp, k - 1)))
            top = max(int(math.log(max(xs), pp.p)) + 1, max(ells))
            for e in range(top + 1):
                census.add(CountSEll(pp, k, e))
            for j in range(k + 1):
                census.add(CountSEll(pp, j, 0))
            if pp.value >= 3:
                for m in range(k):
                    census.add(CountDm(pp, m))
            else:
                for m in range(k):
                    census.add(CountPiM(m, odd=True))
    for a, b in pairs:
        H1, H2 = cyclic_power(a, 1), cyclic_power(b, 1)
        census.add(CountS(H1))
        census.add(CountS(H2))
        census.add(CountS(H1 * H2))
        census.add(CountSPair(H1, H2))
