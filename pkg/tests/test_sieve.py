import math
import random

import numpy as np
import pytest

from oracles import trial_factor, unit_partition
from zncensus.groups import (
    DomainError,
    FiniteAbelianGroup,
    PrimePower,
    embeds,
    p_partition,
    parse_group,
    unit_group_of_prime_power,
)
from zncensus.sieve import (
    QueryPlan,
    SieveCapError,
    SpfTable,
    build_spf,
    factorize,
    map_segments,
    simple_primes,
    unit_group_stream,
)


def _eratosthenes(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return flags


def _spf_dict(limit, segment_size=1 << 17, threads=1):
    out = {}
    for seg in build_spf(limit, segment_size=segment_size, threads=threads):
        for i, v in enumerate(seg.spf.tolist()):
            out[seg.base + i] = v
    return out


def test_spf_small():
    assert _spf_dict(10) == {2: 2, 3: 3, 4: 2, 5: 5, 6: 2, 7: 7, 8: 2, 9: 3, 10: 2}
    segs = list(build_spf(2))
    assert len(segs) == 1 and segs[0].base == 2 and segs[0].spf.tolist() == [2]
    assert list(build_spf(1)) == []


def test_prime_count_1e6():
    n = 0
    for seg in build_spf(10**6):
        n += int((seg.spf == np.arange(seg.base, seg.base + len(seg))).sum())
    assert n == 78498
    assert sum(_eratosthenes(10**6)) == 78498


def test_spf_matches_trial_division():
    spf = _spf_dict(5000, segment_size=333)
    for m in range(2, 5001):
        assert spf[m] == min(trial_factor(m))


def test_spf_deterministic():
    ref = _spf_dict(50_000)
    assert _spf_dict(50_000, segment_size=777, threads=3) == ref


def test_spf_cap():
    with pytest.raises(SieveCapError):
        build_spf(10**6, cap=10**5)


def test_factorize_examples():
    t = SpfTable(2**20 * 3**5)
    assert sorted(factorize(12, t)) == [PrimePower(2, 2), PrimePower(3, 1)]
    assert factorize(97, t) == [PrimePower(97, 1)]
    assert sorted(t.factorize(2**20 * 3**5)) == [PrimePower(2, 20), PrimePower(3, 5)]
    with pytest.raises(DomainError):
        factorize(1, t)
    with pytest.raises(DomainError):
        factorize(2**20 * 3**5 + 1, t)


def test_simple_primes():
    assert simple_primes(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_primes(1).size == 0


# -- unit group profiles ----------------------------------------------------------


def _direct(n, ell):
    """Partition built factor by factor from the prime-power rules."""
    pps = []
    for q, b in trial_factor(n).items():
        pps.extend(unit_group_of_prime_power(q, b).prime_powers())
    return p_partition(FiniteAbelianGroup.from_prime_powers(pps), ell).parts


def test_stream_examples():
    profiles = {pr.n: pr for pr in unit_group_stream(20, {2}, p_for_valuation=2)}
    assert profiles[16].partitions[2].parts == (2, 1)
    assert profiles[16].p_adic_valuation == 4
    assert profiles[1].partitions[2].parts == () and profiles[2].partitions[2].parts == ()
    assert profiles[1].group().is_trivial()


def test_stream_matches_direct_and_brute_force():
    for pr in unit_group_stream(10**4, {2, 3, 5}, segment_size=997):
        for ell in (2, 3, 5):
            parts = pr.partitions[ell].parts
            assert parts == _direct(pr.n, ell) if pr.n > 1 else parts == ()
            if pr.n <= 3000:
                assert parts == unit_partition(pr.n, ell)


def test_stream_full_1e5():
    checked = 0
    for pr in unit_group_stream(10**5, {2, 3}):
        for ell in (2, 3):
            assert pr.partitions[ell].parts == (_direct(pr.n, ell) if pr.n > 1 else ())
        checked += 1
    assert checked == 10**5


def test_stream_sampled_up_to_1e8():
    rng = random.Random(7)
    starts = sorted(rng.sample(range(10**7, 10**8 - 100), 100))
    seen = 0
    for s in starts:
        for pr in unit_group_stream(s + 99, {2, 3, 5}, start=s):
            for ell in (2, 3, 5):
                assert pr.partitions[ell].parts == _direct(pr.n, ell)
            seen += 1
    assert seen == 10**4


TRUNCATION_GROUPS = ["Z2", "Z4", "Z2^3", "Z8*Z2", "Z4^2", "Z3", "Z9", "Z3^2", "Z3*Z4", "Z5", "Z25", "Z2^5*Z16"]


def test_truncated_kernel_matches_untruncated_profile():
    groups = [parse_group(s) for s in TRUNCATION_GROUPS]
    plan = QueryPlan()
    for G in groups:
        plan.add_group(G)
    fails = np.concatenate(list(map_segments(10**5, plan, lambda f: f.fail)), axis=1)
    for pr in unit_group_stream(10**5, {2, 3, 5}):
        U = pr.group()
        for gi, G in enumerate(groups):
            assert bool(fails[gi, pr.n - 1]) == (not embeds(G, U)), (pr.n, str(G))
