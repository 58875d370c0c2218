"""Acceptance criteria 1 to 9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.  Criterion 7 runs the census to 10^7 by default and to
10^8 when ``ZNCENSUS_FULL_SHAPE=1``.
"""

from __future__ import annotations

import math
import os
import random
import time
from itertools import combinations

import pytest

from oracles import NaiveCensus, abelian_groups_up_to, has_subgroup_iso, merge
from test_asymptotics import periodic_series
from zncensus.asymptotics import (
    ResidueSet,
    characters_mod,
    delta_direct,
    delta_l_function,
    l_value,
    main_term_general,
    residue_set_B,
)
from zncensus.counting import (
    Census,
    CountDm,
    CountPiM,
    CountS,
    CountSEll,
    CountSPair,
    count_S,
    cyclic_power,
    mertens_diagnostic,
)
from zncensus.groups import FiniteAbelianGroup, PrimePower, dominant_summands, embeds, parse_group, phi_collision_partner
from zncensus.identities import identity_suite
from zncensus.sieve import simple_primes

PALPHAS = (2, 3, 4, 5, 8, 9)
KS = (1, 2, 3)
ELLS = tuple(range(7))


def test_criterion_1_identity_suite(acceptance_line):
    t0 = time.perf_counter()
    rows = identity_suite((10**4, 10**5), PALPHAS, KS, ELLS)
    dt = time.perf_counter() - t0
    failed = [r for r in rows if not r.passed]
    names = sorted({r.identity for r in rows})
    ok = not failed and dt < 120
    acceptance_line(1, ok, f"{len(rows) - len(failed)}/{len(rows)} exact identities hold ({', '.join(names)}); {dt:.1f}s < 120s")
    assert ok, failed[:5]


def test_criterion_2_z2_constant(acceptance_line):
    got = count_S([10, 10**3, 10**6], parse_group("Z2"))
    ok = got == [2, 2, 2]
    acceptance_line(2, ok, f"S(x; Z2) at x = 10, 1e3, 1e6 -> {got}")
    assert ok


@pytest.mark.slow
def test_criterion_3_embedding_oracle(acceptance_line):
    t0 = time.perf_counter()
    groups = abelian_groups_up_to(64)
    fag = {g: FiniteAbelianGroup.from_cyclic_orders(g) for g in groups}
    pairs = mismatches = 0
    for H in groups:
        for G in groups:
            pairs += 1
            if embeds(fag[G], fag[H]) != has_subgroup_iso(H, G):
                mismatches += 1
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < 300
    acceptance_line(3, ok, f"embeds vs subgroup enumeration: {pairs - mismatches}/{pairs} pairs agree (#H <= 64); {dt:.1f}s < 300s")
    assert ok


def test_criterion_4_sieve_vs_naive(acceptance_line):
    x = 10**4
    naive = NaiveCensus(x)
    cen = Census([x])
    checks = []
    pps = [PrimePower.from_value(v) for v in PALPHAS]
    for pp in pps:
        for k in KS:
            cyc = naive.cyc(pp.value, k)
            checks.append((CountS(cyclic_power(pp, k)), lambda cyc=cyc: naive.S(cyc)))
            top = max(int(math.log(x, pp.p)) + 1, max(ELLS))
            for e in range(top + 1):
                checks.append((CountSEll(pp, k, e), lambda v=pp.value, k=k, e=e: naive.S_ell(v, k, e)))
        if pp.value >= 3:
            for m in range(max(KS)):
                checks.append((CountDm(pp, m), lambda v=pp.value, m=m: naive.D_m(v, m)))
    for m in range(max(KS) + 1):
        checks.append((CountPiM(m), lambda m=m: naive.pi_m(m)))
        checks.append((CountPiM(m, odd=True), lambda m=m: naive.pi_m(m, odd=True)))
    for a, b in combinations(pps, 2):
        if a.p == b.p:
            continue
        H1, H2 = cyclic_power(a, 1), cyclic_power(b, 1)
        g1, g2 = naive.cyc(a.value, 1), naive.cyc(b.value, 1)
        checks.append((CountSPair(H1, H2), lambda g1=g1, g2=g2: naive.S_pair(g1, g2)))
        checks.append((CountS(H1 * H2), lambda g1=g1, g2=g2: naive.S(merge(g1, g2))))
    for c, _ in checks:
        cen.add(c)
    cen.run()
    bad = [(c, cen[c][0], want()) for c, want in checks if cen[c][0] != want()]
    kinds = sorted({c.name for c, _ in checks})
    ok = not bad
    acceptance_line(4, ok, f"{len(checks) - len(bad)}/{len(checks)} sieve counters equal naive factorization at x = 1e4 ({', '.join(kinds)})")
    assert ok, bad[:5]


def _closed_form_full(d: int) -> float:
    return math.prod(1 - 1 / ell for ell in {p for p in range(2, d + 1) if d % p == 0 and all(p % q for q in range(2, p))})


def test_criterion_5_delta_cross_method(acceptance_line):
    worst_q = worst_m = worst_full = 0.0
    for v in (3, 4, 5, 7, 8, 9, 16):
        B = residue_set_B(v)
        lo = delta_l_function(B, 10**5).value
        hi = delta_l_function(B, 10**6).value
        direct = delta_direct(B).value
        worst_q = max(worst_q, abs(hi - lo))
        worst_m = max(worst_m, abs(hi - direct))
    for d in (3, 4, 5, 7, 8, 9, 12, 15, 16, 35):
        worst_full = max(worst_full, abs(delta_l_function(ResidueSet.full(d)).value - _closed_form_full(d)))
    ok = worst_q < 1e-6 and worst_m < 1e-3 and worst_full < 1e-9
    acceptance_line(
        5, ok,
        f"max |Q=1e6 - Q=1e5| = {worst_q:.2e} (< 1e-6), max |l-function - direct| = {worst_m:.2e} (< 1e-3), "
        f"full-class closed form err = {worst_full:.2e} (< 1e-9)",
    )
    assert ok


def test_criterion_6_l_values(acceptance_line):
    chi4 = next(c for c in characters_mod(4) if not c.is_principal)
    chi3 = next(c for c in characters_mod(3) if not c.is_principal)
    e4 = abs(l_value(chi4) - math.pi / 4)
    e3 = abs(l_value(chi3) - math.pi / (3 * math.sqrt(3)))
    s4 = abs(periodic_series(chi4) - math.pi / 4)
    s3 = abs(periodic_series(chi3) - math.pi / (3 * math.sqrt(3)))
    ok = max(e4, e3, s4, s3) < 1e-10
    acceptance_line(6, ok, f"|L(1,chi4) - pi/4| = {e4:.1e}, |L(1,chi3) - pi/(3 sqrt 3)| = {e3:.1e}; series oracle {s4:.1e}, {s3:.1e} (< 1e-10)")
    assert ok


SHAPE_GROUPS = ("Z3", "Z4", "Z5", "Z2^2", "Z2^3", "Z3*Z4", "Z9")
FULL_SHAPE = os.environ.get("ZNCENSUS_FULL_SHAPE", "") not in ("", "0")


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="Z3*Z4: |ratio - 1| grows across 1e4..1e8 because the pair correction decays like (log x)^(-1/4); see decisions ledger",
)
def test_criterion_7_main_term_shape(acceptance_line):
    cap = 10**8 if FULL_SHAPE else 10**7
    budget = 30 * 60 if FULL_SHAPE else 3 * 60
    grid = []
    j = 0
    while 10**4 * 2**j <= cap:
        grid.append(10**4 * 2**j)
        j += 1
    groups = [parse_group(s) for s in SHAPE_GROUPS]
    t0 = time.perf_counter()
    res = Census(grid, [CountS(G) for G in groups]).run()
    details, failures = [], []
    for G in groups:
        ratios = [v / main_term_general(x, G).dominant_total for x, v in zip(grid, res[CountS(G)])]
        dev = [abs(r - 1) for r in ratios]
        bottom, top = sum(dev[:3]) / 3, sum(dev[-3:]) / 3
        in_band = all(0.2 <= r <= 5 for r in ratios)
        trend = top <= bottom
        details.append(f"{G}: ratio {ratios[0]:.3f}->{ratios[-1]:.3f}, mean|r-1| bottom {bottom:.4f} top {top:.4f}")
        if not (in_band and trend):
            failures.append(str(G))
    dt = time.perf_counter() - t0
    ok = not failures and dt < budget
    summary = "; ".join(details)
    acceptance_line(
        7, ok,
        f"grid 1e4*2^j <= {cap:.0e} ({len(grid)} points, {dt:.0f}s < {budget}s); "
        + (f"trend fails for {', '.join(failures)}; " if failures else "")
        + summary,
    )
    assert ok


def test_criterion_8_dominant_logic(acceptance_line):
    rng = random.Random(8)
    primes = simple_primes(10**6).tolist()
    pool = [PrimePower(p, a) for p in primes for a in range(1, 21) if p**a <= 10**6]
    violations = 0
    twos = 0
    for _ in range(10**5):
        pps = [rng.choice(pool) for _ in range(rng.randint(1, 6))]
        if rng.random() < 0.3:
            # seed phi collisions so the two-dominant case is actually exercised
            partner = phi_collision_partner(pps[0])
            if partner is not None:
                pps += [partner] * pps.count(pps[0])
        G = FiniteAbelianGroup.from_prime_powers(pps)
        dom = dominant_summands(G)
        if not 1 <= len(dom) <= 2:
            violations += 1
        if len(dom) == 2:
            twos += 1
            a, b = dom
            if a.phi != b.phi or a.k != b.k or (a.alpha == 1) + (b.alpha == 1) != 1 or a.p > b.p:
                violations += 1
    ok = violations == 0
    acceptance_line(8, ok, f"10^5 random groups (prime powers <= 1e6): {violations} violations, {twos} with two dominant summands")
    assert ok


def test_criterion_9_mertens(acceptance_line):
    rows = mertens_diagnostic([10**6, 10**7], 1)
    diff = abs(rows[0].c_estimate - rows[1].c_estimate)
    ok = diff < 1e-3
    acceptance_line(9, ok, f"M(x) - log log x: {rows[0].c_estimate:.6f} at 1e6 vs {rows[1].c_estimate:.6f} at 1e7, |diff| = {diff:.1e} (< 1e-3)")
    assert ok
