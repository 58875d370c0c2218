import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from zncensus.asymptotics import (
    DirichletGroup,
    ResidueSet,
    classify,
    characters_mod,
    delta,
    delta_direct,
    delta_l_function,
    error_exponent_rho,
    gamma_real,
    growth,
    k_constant,
    k_rational_factor,
    l_value,
    log_l_value,
    main_term_general,
    main_term_z2k,
    residue_set_B,
    residue_set_BH,
)
from zncensus.groups import DomainError, FiniteAbelianGroup, GatheredSummand, PrimePower, TrivialGroupError, parse_group


def periodic_series(chi):
    """``sum_{n>=1} chi(n)/n`` summed block by block in multiprecision, with
    exact roots of unity so each block's numerator sums to zero."""
    mpmath.mp.dps = 30
    d, E, e = chi.d, chi.group.exponent, chi.exponents
    vals = [mpmath.mpc(0) if e[a] < 0 else mpmath.expjpi(mpmath.mpf(2 * int(e[a])) / E) for a in range(d)]

    def block(n):
        return sum(vals[a % d] / (n * d + a) for a in range(1, d + 1))

    return complex(mpmath.nsum(block, [0, mpmath.inf], method="euler-maclaurin"))


# -- residue sets -------------------------------------------------------------


def test_residue_sets():
    assert residue_set_B(3).classes == (2,)
    assert residue_set_B(9).classes == (2, 4, 5, 7, 8)
    assert residue_set_B(4).classes == (3,)
    with pytest.raises(DomainError):
        residue_set_B(2)
    assert residue_set_BH(3, 4) == ResidueSet(12, (11,))
    assert residue_set_BH(3, 5).classes == (2, 8, 14)
    with pytest.raises(DomainError):
        residue_set_BH(3, 9)


@pytest.mark.parametrize("a,b", [(3, 4), (3, 5), (4, 9), (5, 8), (7, 9), (3, 16)])
def test_residue_set_BH_tau(a, b):
    B = residue_set_BH(a, b)
    pa, pb = PrimePower.from_value(a), PrimePower.from_value(b)
    assert B.tau == B.phi_d - pa.phi - pb.phi + 1
    assert 0 <= B.tau < B.phi_d


# -- characters and L-values -------------------------------------------------------


def test_character_counts():
    assert len(characters_mod(3)) == 2
    assert DirichletGroup(8).orders == [2, 2]
    assert len(characters_mod(8)) == 4


@pytest.mark.parametrize("d", range(1, 101))
def test_orthogonality(d):
    chars = characters_mod(d)
    V = np.array([c.values for c in chars])
    phi = len(chars)
    col = V.sum(axis=0)
    want = np.array([phi if c % d == 1 % d else 0 for c in range(d)])
    np.testing.assert_allclose(col, want, atol=1e-12)
    gram = V @ V.conj().T
    np.testing.assert_allclose(gram, phi * np.eye(phi), atol=1e-10)


@pytest.mark.parametrize("d", [1024, 2187, 3125, 7 * 11 * 13, 9973, 10_000])
def test_orthogonality_larger_moduli(d):
    chars = characters_mod(d)
    rng = random.Random(d)
    cs = [1] + [c for c in rng.sample(range(2, d), 30) if math.gcd(c, d) == 1][:10]
    for c in cs:
        s = sum(ch(c) for ch in chars)
        assert abs(s - (len(chars) if c == 1 else 0)) < 1e-9


def _quadratic(d):
    return next(c for c in characters_mod(d) if not c.is_principal and c.is_real)


def test_l_value_closed_forms():
    chi4, chi3 = _quadratic(4), _quadratic(3)
    assert abs(l_value(chi4) - math.pi / 4) < 1e-12
    assert abs(l_value(chi3) - math.pi / (3 * math.sqrt(3))) < 1e-12
    # independent series
    assert abs(periodic_series(chi4) - math.pi / 4) < 1e-12
    assert abs(periodic_series(chi3) - math.pi / (3 * math.sqrt(3))) < 1e-12


@pytest.mark.parametrize("d", [5, 7, 9, 16, 12, 15])
def test_l_value_matches_series(d):
    for chi in characters_mod(d):
        if chi.is_principal:
            continue
        assert abs(l_value(chi) - periodic_series(chi)) < 1e-10
        assert abs(l_value(chi.conj()) - l_value(chi).conjugate()) < 1e-13


def test_l_value_rejects_principal():
    with pytest.raises(DomainError):
        l_value(characters_mod(5)[0])


def test_log_l_value_is_a_logarithm():
    for d in (5, 7, 13, 16, 21):
        for chi in characters_mod(d):
            if chi.is_principal:
                continue
            assert abs(complex(np.exp(log_l_value(chi))) - l_value(chi)) < 1e-12


# -- delta -----------------------------------------------------------------------


def test_delta_empty_and_full():
    assert delta_l_function(ResidueSet(7, ())).value == 1.0
    for d in (4, 12, 15, 8, 9, 35):
        want = math.prod(1 - 1 / ell for ell in {p for p in range(2, d + 1) if d % p == 0 and all(p % q for q in range(2, p))})
        assert abs(delta_l_function(ResidueSet.full(d)).value - want) < 1e-9


@pytest.mark.parametrize("pa", [3, 4])
def test_delta_two_methods(pa):
    B = residue_set_B(pa)
    a = delta_l_function(B, 10**5)
    b = delta_l_function(B, 10**6)
    c = delta_direct(B, 10**6)
    assert abs(a.value - b.value) < 1e-6
    assert abs(b.value - c.value) < 1e-3
    assert b.value > 0 and b.error_estimate >= 0


def test_delta_complex_weights():
    # single classes give genuinely complex character weights
    for B in (ResidueSet(7, (3,)), ResidueSet(5, (2,)), ResidueSet(13, (2, 5))):
        assert abs(delta_l_function(B).value - delta_direct(B, 10**6).value) < 1e-3


def test_delta_memo_and_dict():
    r1 = delta(3)
    assert delta(residue_set_B(3)) is r1
    d = r1.to_dict()
    assert list(d) == ["modulus", "classes", "tau", "delta", "method", "Q", "error_estimate"]
    assert d["classes"] == [2] and d["method"] == "l-function"
    with pytest.raises(ValueError):
        delta(3, method="guess")


def test_delta_threadsafe():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(4) as pool:
        vals = list(pool.map(lambda _: delta(ResidueSet(11, (2, 6, 7))).value, range(8)))
    assert len(set(vals)) == 1


# -- K, Gamma, main terms ----------------------------------------------------------


def test_gamma():
    assert gamma_real(1.0) == 1.0
    assert abs(gamma_real(0.5) / math.sqrt(math.pi) - 1) < 1e-13
    assert abs(gamma_real(1.5) / (math.sqrt(math.pi) / 2) - 1) < 1e-13
    with pytest.raises(DomainError):
        gamma_real(-2.0)


def test_k_constant():
    assert all(k_constant(2, k) == 1.0 for k in range(1, 6))
    K31 = delta(3).value * (4 / 3) / math.sqrt(math.pi)
    assert abs(k_constant(3, 1) - K31) < 1e-14
    assert Fraction(k_rational_factor(9, 2)).limit_denominator(1000) == Fraction(26, 108)
    assert k_rational_factor(16, 1) == (2**6 - 1) / 2**5
    for pa in (3, 4, 5, 7, 8, 9, 16):
        for k in (1, 2, 3):
            assert k_constant(pa, k) > 0
    with pytest.raises(DomainError):
        k_constant(3, 0)


def test_main_term_z2k():
    x = math.e**math.e
    assert abs(main_term_z2k(x, 2) - 1.5 * math.e ** (math.e - 1)) < 1e-9
    for x in (100.0, 1e5, 1e9):
        assert abs(main_term_z2k(x, 3) / main_term_z2k(x, 2) - math.log(math.log(x))) < 1e-12
    for k in range(2, 6):
        xs = np.geomspace(100, 1e12, 200)
        v = [main_term_z2k(float(x), k) for x in xs]
        assert all(a < b for a, b in zip(v, v[1:]))
    with pytest.raises(DomainError):
        main_term_z2k(2.0, 2)
    with pytest.raises(DomainError):
        main_term_z2k(100.0, 1)


def test_main_term_branches():
    x = 1e6
    m = main_term_general(x, parse_group("Z3*Z4"))
    assert m.branch == "two-dominant"
    assert m.dominant_coefficient == pytest.approx(k_constant(3, 1) + k_constant(4, 1), rel=1e-15)
    assert m.dominant_total == pytest.approx(m.dominant_coefficient * x / math.log(x) ** 0.5, rel=1e-13)

    m = main_term_general(x, parse_group("Z5^2*Z3"))
    assert m.branch == "unique-dominant"
    assert m.dominant == (GatheredSummand(5, 1, 2),)
    assert m.dominant_total == pytest.approx(k_constant(5, 2) * x * math.log(math.log(x)) / math.log(x) ** 0.25)
    # dominant-only total is the same term the full sum uses
    row = next(r for r in m.terms if r.summand == GatheredSummand(5, 1, 2))
    assert m.dominant_total == row.value
    assert m.total == pytest.approx(sum(r.value for r in m.terms))

    assert main_term_general(x, parse_group("Z2^3*Z3")).dominant == (GatheredSummand(3, 1, 1),)
    assert main_term_general(x, parse_group("Z2^3")).total == main_term_z2k(x, 3)
    assert main_term_general(x, parse_group("Z2")).total == 2.0
    with pytest.raises(TrivialGroupError):
        main_term_general(x, FiniteAbelianGroup.trivial())


def test_classify_total():
    rng = random.Random(3)
    seen = set()
    for _ in range(2000):
        pps = [PrimePower.from_value(rng.choice([2, 3, 4, 5, 7, 8, 9, 16, 17, 27])) for _ in range(rng.randint(1, 5))]
        G = FiniteAbelianGroup.from_prime_powers(pps)
        b = classify(G)
        seen.add(b)
        z2 = G.primes == (2,) and all(a == 1 for _, a, _ in G.summands)
        assert (b in ("z2k", "z2-exact")) == z2
    assert seen == {"z2k", "z2-exact", "unique-dominant", "two-dominant"}


def test_growth():
    x = 1e8
    assert growth(x, 2, 1) == pytest.approx(x / math.sqrt(math.log(x)))


def test_rho():
    assert error_exponent_rho(3, 4) == (Fraction(3, 4), Fraction(1, 4))
    rho, gap = error_exponent_rho(3, 5)
    assert rho == Fraction(5, 8) and gap == Fraction(1, 8)
    for a, b in ((3, 4), (5, 8), (9, 16), (7, 4), (25, 3)):
        rho, gap = error_exponent_rho(a, b)
        pa, pb = PrimePower.from_value(a), PrimePower.from_value(b)
        assert gap == (1 - Fraction(1, pa.phi)) / pb.phi
        assert gap > 0
    with pytest.raises(DomainError):
        error_exponent_rho(3, 9)
