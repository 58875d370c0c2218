"""Backend dispatch for the hot sieve kernels.

The backend is chosen once from ``ZNCENSUS_BACKEND`` (``numba`` or
``numpy``); numba is the default when it imports.  ``set_backend`` switches
at runtime, which the tests and the benchmark use to compare both paths.
"""

from __future__ import annotations

import importlib
import logging
import os
from contextlib import contextmanager
from types import ModuleType

import numpy as np

log = logging.getLogger(__name__)

BACKENDS = ("numba", "numpy")
_active: ModuleType | None = None
_active_name = ""


def _load(name: str) -> ModuleType:
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(f"{__name__}._{name}")


def set_backend(name: str) -> None:
    global _active, _active_name
    _active = _load(name)
    _active_name = name


def get_backend() -> str:
    _ensure()
    return _active_name


@contextmanager
def backend(name: str):
    prev = get_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _ensure() -> ModuleType:
    if _active is None:
        want = os.environ.get("ZNCENSUS_BACKEND", "numba").strip().lower() or "numba"
        try:
            set_backend(want)
        except ImportError:
            log.warning("numba unavailable, falling back to numpy kernels")
            set_backend("numpy")
    return _active


def spf_segment(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    return _ensure().spf_segment(lo, hi, base_primes)


def factor_segment(lo: int, hi: int, base_primes: np.ndarray, width: int):
    return _ensure().factor_segment(lo, hi, base_primes, width)


def evaluate_segment(fac_p, fac_e, nfac, plan):
    return _ensure().evaluate_segment(fac_p, fac_e, nfac, *plan.kernel_args())
