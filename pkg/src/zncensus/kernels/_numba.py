"""Compiled sieve kernels.

Every function here has a twin with the same signature in ``_numpy``; the
two must agree bit for bit (``tests/test_kernels.py``).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def spf_segment(lo, hi, base_primes):
    n = hi - lo
    spf = np.zeros(n, np.int64)
    for j in range(base_primes.shape[0]):
        p = base_primes[j]
        if p * p > hi - 1:
            break
        start = ((lo + p - 1) // p) * p
        if start < p * p:
            start = p * p
        for m in range(start, hi, p):
            if spf[m - lo] == 0:
                spf[m - lo] = p
    for i in range(n):
        if spf[i] == 0 and lo + i >= 2:
            spf[i] = lo + i
    return spf


@njit(cache=True, nogil=True)
def factor_segment(lo, hi, base_primes, width):
    n = hi - lo
    rem = np.empty(n, np.int64)
    for i in range(n):
        rem[i] = lo + i
    fac_p = np.zeros((n, width), np.int64)
    fac_e = np.zeros((n, width), np.int8)
    nfac = np.zeros(n, np.int8)
    for j in range(base_primes.shape[0]):
        p = base_primes[j]
        if p * p > hi - 1:
            break
        start = ((lo + p - 1) // p) * p
        for m in range(start, hi, p):
            i = m - lo
            e = 0
            while rem[i] % p == 0:
                rem[i] //= p
                e += 1
            k = nfac[i]
            fac_p[i, k] = p
            fac_e[i, k] = e
            nfac[i] = k + 1
    for i in range(n):
        if rem[i] > 1:
            k = nfac[i]
            fac_p[i, k] = rem[i]
            fac_e[i, k] = 1
            nfac[i] = k + 1
    return fac_p, fac_e, nfac


@njit(cache=True, nogil=True)
def evaluate_segment(
    fac_p, fac_e, nfac,
    thr_ell, thr_size, thr_mod, thr_req, thr_group, ngroups,
    val_primes, res_mod, res_off, res_table,
):
    n = nfac.shape[0]
    T = thr_size.shape[0]
    fail = np.zeros((ngroups, n), np.bool_)
    val = np.zeros((val_primes.shape[0], n), np.int8)
    res = np.zeros((res_mod.shape[0], n), np.int8)
    counts = np.zeros(T, np.int64)
    for i in range(n):
        for t in range(T):
            counts[t] = 0
        for f in range(nfac[i]):
            q = fac_p[i, f]
            b = np.int64(fac_e[i, f])
            for t in range(T):
                ell = thr_ell[t]
                s = thr_size[t]
                if q == 2:
                    if ell == 2:
                        if b >= 2 and s <= 1:
                            counts[t] += 1
                        if b >= 3 and b - 2 >= s:
                            counts[t] += 1
                else:
                    mod = thr_mod[t]
                    if mod > 0 and (q - 1) % mod == 0:
                        counts[t] += 1
                    if q == ell and b - 1 >= s:
                        counts[t] += 1
            for v in range(val_primes.shape[0]):
                if q == val_primes[v]:
                    val[v, i] = fac_e[i, f]
            for r in range(res_mod.shape[0]):
                if res_table[res_off[r] + q % res_mod[r]] == 0:
                    res[r, i] += 1
        for t in range(T):
            if counts[t] < thr_req[t]:
                fail[thr_group[t], i] = True
    return fail, val, res
