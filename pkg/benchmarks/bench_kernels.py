"""Compare the numba and numpy kernels on the same workload.

    python benchmarks/bench_kernels.py --x 2e6 --repeat 3

Each kernel is timed on one segment, then a small census is timed end to
end.  Results are printed as a table; ``--json`` writes them out as well.
Both backends must produce identical output, which is asserted along the way.
"""

from __future__ import annotations

import argparse
import json
import time
from decimal import Decimal

import numpy as np

from zncensus import kernels
from zncensus.counting import Census, CountS, cyclic_power
from zncensus.sieve import simple_primes


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(x: int, repeat: int) -> list[dict]:
    lo, hi = x - (1 << 18), x
    base = simple_primes(int(hi**0.5) + 1)
    groups = [cyclic_power(3, 1), cyclic_power(4, 1), cyclic_power(2, 3)]
    rows, outputs = [], {}
    for name in kernels.BACKENDS:
        try:
            kernels.set_backend(name)
        except ImportError as e:
            print(f"{name}: unavailable ({e})")
            continue
        kernels.spf_segment(2, 1000, simple_primes(40))  # jit warmup
        t_spf, spf = best_of(lambda: kernels.spf_segment(lo, hi, base), repeat)
        t_fac, fac = best_of(lambda: kernels.factor_segment(lo, hi, base, 16), repeat)
        t_cen, cen = best_of(lambda: Census([x], [CountS(G) for G in groups], threads=1).run(), repeat)
        outputs[name] = (spf, fac, [cen[CountS(G)] for G in groups])
        rows.append({
            "backend": name,
            "spf_segment_s": t_spf,
            "factor_segment_s": t_fac,
            "census_s": t_cen,
            "census_per_s": x / t_cen,
        })
    if len(outputs) == 2:
        a, b = outputs.values()
        assert np.array_equal(a[0], b[0]), "spf kernels disagree"
        assert all(np.array_equal(u, v) for u, v in zip(a[1], b[1])), "factor kernels disagree"
        assert a[2] == b[2], "census counts disagree"
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", default="2e6", help="census bound (default 2e6)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args()
    x = int(Decimal(args.x))
    rows = run(x, args.repeat)
    print(f"x = {x:,}, best of {args.repeat}")
    print(f"{'backend':8} {'spf seg':>10} {'factor seg':>11} {'census':>10} {'n/s':>12}")
    for r in rows:
        print(f"{r['backend']:8} {r['spf_segment_s']:10.4f} {r['factor_segment_s']:11.4f} "
              f"{r['census_s']:10.3f} {r['census_per_s']:12,.0f}")
    if len(rows) == 2:
        print(f"numba speedup on the census: {rows[1]['census_s'] / rows[0]['census_s']:.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"x": x, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
