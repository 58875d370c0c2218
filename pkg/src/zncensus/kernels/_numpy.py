"""Vectorized numpy versions of the sieve kernels (no JIT required)."""

import numpy as np


def spf_segment(lo, hi, base_primes):
    n = hi - lo
    spf = np.zeros(n, np.int64)
    for p in base_primes.tolist():
        if p * p > hi - 1:
            break
        start = max(((lo + p - 1) // p) * p, p * p)
        idx = np.arange(start - lo, n, p)
        sub = spf[idx]
        spf[idx] = np.where(sub == 0, p, sub)
    nums = np.arange(lo, hi, dtype=np.int64)
    unset = (spf == 0) & (nums >= 2)
    spf[unset] = nums[unset]
    return spf


def factor_segment(lo, hi, base_primes, width):
    n = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    fac_p = np.zeros((n, width), np.int64)
    fac_e = np.zeros((n, width), np.int8)
    nfac = np.zeros(n, np.int8)
    for p in base_primes.tolist():
        if p * p > hi - 1:
            break
        start = ((lo + p - 1) // p) * p
        m = np.arange(start, hi, p, dtype=np.int64)
        if m.size == 0:
            continue
        e = np.ones(m.size, np.int64)
        pk = p * p
        while pk < hi:
            e += m % pk == 0
            pk *= p
        idx = m - lo
        rem[idx] //= np.power(p, e)
        slot = nfac[idx].astype(np.int64)
        fac_p[idx, slot] = p
        fac_e[idx, slot] = e
        nfac[idx] += 1
    idx = np.flatnonzero(rem > 1)
    slot = nfac[idx].astype(np.int64)
    fac_p[idx, slot] = rem[idx]
    fac_e[idx, slot] = 1
    nfac[idx] += 1
    return fac_p, fac_e, nfac


def evaluate_segment(
    fac_p, fac_e, nfac,
    thr_ell, thr_size, thr_mod, thr_req, thr_group, ngroups,
    val_primes, res_mod, res_off, res_table,
):
    n = nfac.shape[0]
    T = thr_size.shape[0]
    counts = np.zeros((T, n), np.int64)
    val = np.zeros((val_primes.shape[0], n), np.int8)
    res = np.zeros((res_mod.shape[0], n), np.int8)
    for f in range(fac_p.shape[1]):
        active = nfac > f
        if not active.any():
            break
        q = fac_p[:, f]
        b = fac_e[:, f].astype(np.int64)
        two = active & (q == 2)
        odd = active & (q != 2)
        for t in range(T):
            ell, s, mod = int(thr_ell[t]), int(thr_size[t]), int(thr_mod[t])
            if ell == 2:
                counts[t] += two & (b >= 2) & (s <= 1)
                counts[t] += two & (b - 2 >= s)
            if mod > 0:
                counts[t] += odd & ((q - 1) % mod == 0)
            counts[t] += odd & (q == ell) & (b - 1 >= s)
        for v in range(val_primes.shape[0]):
            hit = active & (q == val_primes[v])
            val[v, hit] = fac_e[hit, f]
        for r in range(res_mod.shape[0]):
            table = res_table[res_off[r]: res_off[r] + res_mod[r]]
            res[r] += active & (table[q % res_mod[r]] == 0)
    fail = np.zeros((ngroups, n), np.bool_)
    for t in range(T):
        fail[thr_group[t]] |= counts[t] < thr_req[t]
    return fail, val, res
