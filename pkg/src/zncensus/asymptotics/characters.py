"""Dirichlet characters and their L-values at s = 1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import special

from ..groups import DomainError, factorint
from ..residues import totient

__all__ = ["DirichletGroup", "DirichletCharacter", "characters_mod", "l_value", "log_l_value"]


def _primitive_root(p: int, a: int) -> int:
    """A generator of ``(Z/p^a)^x`` for odd ``p``."""
    phi = p - 1
    qs = list(factorint(phi))
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            break
    if a >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _component(p: int, a: int) -> tuple[list[int], list[int], np.ndarray]:
    """Generators, their orders and a discrete-log table mod ``p^a``.

    The table has one row per residue and one column per generator; rows of
    non-units are -1.
    """
    m = p**a
    if p == 2:
        if a == 1:
            return [], [], np.zeros((2, 0), np.int64)
        if a == 2:
            table = np.full((4, 1), -1, np.int64)
            table[1, 0], table[3, 0] = 0, 1
            return [3], [2], table
        order5 = 2 ** (a - 2)
        table = np.full((m, 2), -1, np.int64)
        x = 1
        for j in range(order5):
            table[x] = (0, j)
            table[m - x] = (1, j)
            x = x * 5 % m
        return [m - 1, 5], [2, order5], table
    g = _primitive_root(p, a)
    phi = m // p * (p - 1)
    table = np.full((m, 1), -1, np.int64)
    x = 1
    for j in range(phi):
        table[x, 0] = j
        x = x * g % m
    return [g], [phi], table


class DirichletGroup:
    """The character group mod ``d``, built from generators of ``(Z/d)^x``."""

    def __init__(self, d: int):
        if d < 1:
            raise DomainError("modulus must be positive")
        self.d = d
        self.phi = totient(d)
        orders: list[int] = []
        cols = []
        residues = np.arange(d, dtype=np.int64)
        unit = np.ones(d, np.bool_)
        for p, a in sorted(factorint(d).items()):
            m = p**a
            _, ords, table = _component(p, a)
            orders.extend(ords)
            t = table[residues % m]
            unit &= (t >= 0).all(axis=1) if t.shape[1] else (residues % p != 0)
            cols.append(t)
        self.orders = orders
        self.exponent = math.lcm(*orders) if orders else 1
        logs = np.concatenate(cols, axis=1) if cols else np.zeros((d, 0), np.int64)
        logs[~unit] = -1
        self.logs = logs
        self.units = unit
        if d == 1:
            self.units[:] = True

    def __len__(self) -> int:
        return self.phi

    def indices(self):
        """Character indices as tuples; index ``(0,...,0)`` is principal."""
        return np.ndindex(*self.orders) if self.orders else iter([()])

    def characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(self, tuple(int(v) for v in j)) for j in self.indices()]


@lru_cache(maxsize=256)
def _group(d: int) -> DirichletGroup:
    return DirichletGroup(d)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    group: DirichletGroup
    index: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.group.d

    @cached_property
    def exponents(self) -> np.ndarray:
        """``chi(c) = exp(2 pi i e[c] / E)``; ``e[c] = -1`` where ``chi(c) = 0``."""
        g = self.group
        E = g.exponent
        w = np.array([j * (E // n) for j, n in zip(self.index, g.orders)], np.int64)
        e = (g.logs @ w) % E if w.size else np.zeros(g.d, np.int64)
        return np.where(g.units, e, -1)

    @cached_property
    def values(self) -> np.ndarray:
        e = self.exponents
        v = np.exp(2j * np.pi * np.maximum(e, 0) / self.group.exponent)
        v[e < 0] = 0
        # snap exact real/imaginary zeros for +-1 and +-i
        v.real[np.abs(v.real) < 1e-15] = 0.0
        v.imag[np.abs(v.imag) < 1e-15] = 0.0
        return v

    def __call__(self, c: int) -> complex:
        return complex(self.values[c % self.d])

    @property
    def is_principal(self) -> bool:
        return not any(self.index)

    @property
    def is_real(self) -> bool:
        E = self.group.exponent
        e = self.exponents
        return bool(np.all((e < 0) | (2 * e % E == 0)))

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, tuple((-j) % n for j, n in zip(self.index, self.group.orders)))

    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletCharacter) and other.d == self.d and other.index == self.index

    def __hash__(self) -> int:
        return hash((self.d, self.index))

    def __repr__(self) -> str:
        return f"DirichletCharacter(d={self.d}, index={self.index})"


def characters_mod(d: int) -> list[DirichletCharacter]:
    return _group(d).characters()


def l_value(chi: DirichletCharacter) -> complex:
    """``L(1, chi) = -(1/d) sum_a chi(a) psi(a/d)`` for non-principal chi."""
    if chi.is_principal:
        raise DomainError("L(1, chi) diverges for the principal character")
    d = chi.d
    a = np.arange(1, d)
    vals = chi.values[1:]
    nz = vals != 0
    psi = special.digamma(a[nz] / d)
    re = math.fsum((vals[nz].real * psi).tolist())
    im = math.fsum((vals[nz].imag * psi).tolist())
    return complex(-re / d, -im / d)


def _l_real_s(chi: DirichletCharacter, s: np.ndarray) -> np.ndarray:
    """``L(s, chi)`` for real ``s > 1`` via Hurwitz zeta."""
    d = chi.d
    a = np.arange(1, d)
    vals = chi.values[1:]
    nz = vals != 0
    hz = special.zeta(s[:, None], (a[nz] / d)[None, :])
    return (hz * vals[nz][None, :]).sum(axis=1) * d ** (-s)


def log_l_value(chi: DirichletCharacter) -> complex:
    """``log L(1, chi)`` on the branch continuous from ``s = +inf``.

    That is the branch the Euler product defines, and it can differ from the
    principal logarithm by a multiple of ``2 pi i``.  For real characters
    ``L(1, chi) > 0`` and no tracking is needed.
    """
    L1 = l_value(chi)
    if chi.is_real:
        return complex(math.log(L1.real), 0.0)
    s = 1.0 + np.geomspace(1e-2, 64.0, 600)
    Ls = np.concatenate([[L1], _l_real_s(chi, s)])
    # walk from large s, where L is ~1 and arg is ~0, down to s = 1
    phase = np.unwrap(np.angle(Ls[::-1]))
    return complex(math.log(abs(L1)), float(phase[-1]))
