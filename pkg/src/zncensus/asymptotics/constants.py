"""The Euler-product constant delta(B) and the leading constants K(p^alpha, k)."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from ..groups import DomainError, PrimePower, factorint
from ..residues import ResidueSet, residue_set_B
from ..sieve import simple_primes
from .characters import characters_mod, log_l_value

__all__ = [
    "DeltaResult",
    "NonCancellationError",
    "ConvergenceError",
    "delta",
    "delta_l_function",
    "delta_direct",
    "gamma_real",
    "k_constant",
    "k_rational_factor",
]

L_VALUE_ABS_ERR = 1e-12


class NonCancellationError(ArithmeticError):
    """Imaginary parts of the character-weighted log did not cancel."""


class ConvergenceError(ArithmeticError):
    """Richardson extrapolation of the defining limit did not settle."""


@dataclass(frozen=True)
class DeltaResult:
    value: float
    method: str
    truncation: int
    error_estimate: float
    residues: ResidueSet | None = None

    def to_dict(self) -> dict:
        B = self.residues
        return {
            "modulus": B.d if B else None,
            "classes": list(B.classes) if B else None,
            "tau": B.tau if B else None,
            "delta": self.value,
            "method": self.method,
            "Q": self.truncation,
            "error_estimate": self.error_estimate,
        }


@lru_cache(maxsize=8)
def _primes(Q: int) -> np.ndarray:
    return simple_primes(Q)


def _check_Q(Q: int) -> None:
    if Q < 10**3:
        raise DomainError("truncation bound Q must be >= 1000")


def delta_l_function(B: ResidueSet, Q: int = 10**6) -> DeltaResult:
    """delta(B) through the character expansion of the indicator of B.

    ``1_B = sum_chi a_chi chi`` turns the Euler product over B into
    ``prod_chi L(s, chi)^{a_chi}`` times local factors that are
    ``1 + O(q^-2)``; the principal character cancels the zeta power.
    """
    _check_Q(Q)
    d, tau = B.d, B.tau
    if tau == 0:
        return DeltaResult(1.0, "l-function", Q, 0.0, B)
    phi = B.phi_d
    chars = characters_mod(d)
    V = np.array([c.values for c in chars])  # (phi, d)
    cls = np.array(B.classes, np.int64)
    a = V[:, cls].conj().sum(axis=1) / phi
    principal = next(i for i, c in enumerate(chars) if c.is_principal)

    log_terms: list[complex] = []
    for ell in factorint(d):
        log_terms.append(tau / phi * math.log1p(-1.0 / ell))
    nontrivial = [i for i in range(len(chars)) if i != principal and abs(a[i]) > 1e-15]
    for i in nontrivial:
        log_terms.append(a[i] * log_l_value(chars[i]))

    q = _primes(Q)
    q = q[d % q != 0] if d > 1 else q
    r = q % d
    inB = np.isin(r, cls)
    local = np.where(inB, -np.log1p(-1.0 / q), 0.0).astype(np.complex128)
    for i in [principal] + nontrivial:
        local += a[i] * np.log1p(-V[i, r] / q)
    re = math.fsum([t.real for t in log_terms] + local.real.tolist())
    im = math.fsum([complex(t).imag for t in log_terms] + local.imag.tolist())
    if abs(im) > 1e-10:
        raise NonCancellationError(f"imaginary part {im:.3e} did not cancel for modulus {d}")
    value = math.exp(re)
    A = float(np.abs(a).sum())
    # |log E_q| <= (1 + A) / (2 q (q - 1)) and the sum of that over q > Q is < (1 + A) / (2 Q)
    err = value * ((1 + A) / (2 * Q) + len(nontrivial) * L_VALUE_ABS_ERR)
    return DeltaResult(value, "l-function", Q, err, B)


def _richardson(values: list[float]) -> tuple[float, float]:
    table = [list(values)]
    for m in range(1, len(values)):
        prev = table[-1]
        f = 2.0**m
        table.append([(f * prev[j + 1] - prev[j]) / (f - 1) for j in range(len(prev) - 1)])
    best = table[-1][0]
    return best, abs(best - table[-2][-1])


def delta_direct(B: ResidueSet, Q: int = 10**7, eps0: float = 0.1, levels: int = 5) -> DeltaResult:
    """delta(B) straight from its defining limit, Richardson-extrapolated.

    Evaluates ``zeta(s)^(-tau/phi) prod_{q in B, q <= Q} (1 - q^-s)^-1`` at
    ``s = 1 + eps0 / 2^j``; primes above Q are replaced by their expected
    share ``(tau/phi) E1((s-1) log Q)``.  Meant as a low-precision oracle.
    """
    _check_Q(Q)
    d, tau = B.d, B.tau
    if tau == 0:
        return DeltaResult(1.0, "direct-extrapolation", Q, 0.0, B)
    phi = B.phi_d
    q = _primes(Q)
    q = q[np.isin(q % d, np.array(B.classes)) & (np.gcd(q, d) == 1)].astype(np.float64)
    logs = []
    for j in range(levels):
        eps = eps0 / 2**j
        s = 1.0 + eps
        part = math.fsum((-np.log1p(-(q ** -s))).tolist())
        tail = tau / phi * float(special.exp1(eps * math.log(Q)))
        logs.append(-tau / phi * math.log(float(special.zeta(s, 1))) + part + tail)
    best, err = _richardson(logs)
    if not math.isfinite(best) or err > 1e-2:
        raise ConvergenceError(f"extrapolation unsettled (step change {err:.2e})")
    value = math.exp(best)
    return DeltaResult(value, "direct-extrapolation", Q, value * err, B)


_memo: dict = {}
_memo_lock = threading.Lock()


def delta(B: ResidueSet | PrimePower | int, method: str = "l-function", Q: int | None = None) -> DeltaResult:
    """delta(B), memoized per ``(modulus, classes, method, Q)``.

    Passing a prime power means ``B_{p^alpha}``.
    """
    if not isinstance(B, ResidueSet):
        B = residue_set_B(B)
    if method == "l-function":
        fn, Q = delta_l_function, Q or 10**6
    elif method == "direct-extrapolation":
        fn, Q = delta_direct, Q or 10**7
    else:
        raise ValueError(f"unknown method {method!r}")
    key = (B.d, B.classes, method, Q)
    with _memo_lock:
        if key not in _memo:
            _memo[key] = fn(B, Q)
        return _memo[key]


def gamma_real(z: float) -> float:
    if z <= 0 and float(z).is_integer():
        raise DomainError(f"Gamma has a pole at {z}")
    return math.gamma(z)


def _pp(x: PrimePower | int) -> PrimePower:
    return x if isinstance(x, PrimePower) else PrimePower.from_value(x)


def k_rational_factor(p_alpha: PrimePower | int, k: int) -> float:
    """The p-adic rational factor of K(p^alpha, k)."""
    pp = _pp(p_alpha)
    p, a = pp.p, pp.alpha
    if p >= 3:
        return (p ** (a + 1) - 1) / (p ** (k * (a - 1) + 1) * (p - 1) ** k)
    if a >= 2:
        return (2 ** (a + 2) - 1) / 2 ** (k * (a - 1) + 2)
    return 1.0


def k_constant(p_alpha: PrimePower | int, k: int, Q: int | None = None) -> float:
    """Leading constant of the ``Z_{p^alpha}^k`` term; ``K(2, k) = 1`` by convention."""
    if k < 1:
        raise DomainError("k must be >= 1")
    pp = _pp(p_alpha)
    if pp.value == 2:
        return 1.0
    dl = delta(pp, Q=Q).value
    return dl / (math.factorial(k - 1) * gamma_real(1 - 1 / pp.phi)) * k_rational_factor(pp, k)
