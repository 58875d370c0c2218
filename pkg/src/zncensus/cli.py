"""Command-line front end: ``zncensus {count,compare,verify,constants,bench}``."""

from __future__ import annotations

import argparse
import math
import platform
import sys
import time
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, kernels
from .asymptotics import ConvergenceError, NonCancellationError
from .counting import Census, CountS, cyclic_power
from .groups import DomainError, GroupSpecError, parse_group
from .identities import DEFAULT_PALPHAS, identity_suite
from .report import census_report, constants_rows, count_rows, meta, render
from .sieve import DEFAULT_CAP, DEFAULT_SEGMENT, SieveCapError, build_spf

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3

# the CLI refuses main terms this close to the origin, where log log x is tiny
MIN_MAIN_TERM_X = 16

DEFAULTS = {
    "threads": 1,
    "format": "csv",
    "cap": DEFAULT_CAP,
    "segment_size": DEFAULT_SEGMENT,
    "no_timestamp": False,
}
COMMAND_DEFAULTS = {
    "count": {"x": "1e6"},
    "compare": {"x": "1e4:1e7:2"},
    "verify": {"x": "1e4,1e5", "palpha": ",".join(map(str, DEFAULT_PALPHAS)), "k": "1..3", "ell": "6"},
    "constants": {"palpha": "3,4,5,8,9", "k": "1..3"},
    "bench": {"x": "1e7", "threads": 8},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument parsing -----------------------------------------------------------


def parse_int(text: str) -> int:
    """Integers in plain or exponent notation, e.g. ``100000`` or ``1e5``."""
    try:
        v = Decimal(str(text).strip())
    except InvalidOperation:
        raise UsageError(f"not a number: {text!r}") from None
    if v != v.to_integral_value():
        raise UsageError(f"not an integer: {text!r}")
    return int(v)


def parse_grid(text: str) -> list[int]:
    """A comma list, or ``start:stop:factor`` for a geometric grid."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"geometric grid needs start:stop:factor, got {text!r}")
        start, stop = parse_int(parts[0]), parse_int(parts[1])
        try:
            factor = Fraction(Decimal(parts[2].strip()))
        except InvalidOperation:
            raise UsageError(f"bad grid factor {parts[2]!r}") from None
        if start < 1 or stop < start or factor <= 1:
            raise UsageError(f"bad geometric grid {text!r}")
        out, v = [], Fraction(start)
        while v <= stop:
            n = math.floor(v)
            if not out or n > out[-1]:
                out.append(n)
            v *= factor
        return out
    vals = [parse_int(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise UsageError("empty x grid")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise UsageError("x grid must be strictly increasing")
    if vals[0] < 1:
        raise UsageError("x grid values must be >= 1")
    return vals


def parse_range(text: str) -> list[int]:
    """``1..3`` or ``1,2,3``."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = parse_int(a), parse_int(b)
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [parse_int(t) for t in text.split(",") if t.strip()]


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` comments and ``[section]`` headers are ignored."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        v = v.strip("\"'")
        k = k.replace("-", "_")
        if k in ("no_timestamp", "inject_fault"):
            v = v.lower() in ("1", "true", "yes", "on")
        elif k in ("threads", "cap", "segment_size", "Q"):
            v = parse_int(v)
        out[k] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", action="append", help="group spec, e.g. 'Z4*Z2^2' or '[4,2,2]' (repeatable)")
    common.add_argument("--x", help="x grid: '1e6', '100,1000' or geometric 'start:stop:factor'")
    common.add_argument("--threads", type=int)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--Q", help="prime truncation bound for delta")
    common.add_argument("--cap", help="sieve cap")
    common.add_argument("--segment-size", dest="segment_size")
    common.add_argument("--no-timestamp", dest="no_timestamp", action="store_true", default=None)
    common.add_argument("--config", help="key = value file; CLI flags win over it")
    common.add_argument("--backend", choices=kernels.BACKENDS)

    p = _Parser(prog="zncensus", description=__doc__)
    p.add_argument("--version", action="version", version=f"zncensus {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("count", parents=[common], help="exact S(x; G) on a grid")
    sub.add_parser("compare", parents=[common], help="exact counts against main terms")
    v = sub.add_parser("verify", parents=[common], help="exact identity suites")
    v.add_argument("--palpha")
    v.add_argument("--k")
    v.add_argument("--ell", help="largest ell for the S_ell reductions")
    v.add_argument("--inject-fault", dest="inject_fault", action="store_true", default=None, help=argparse.SUPPRESS)
    c = sub.add_parser("constants", parents=[common], help="delta(B) and K(p^alpha, k)")
    c.add_argument("--palpha")
    c.add_argument("--k")
    sub.add_parser("bench", parents=[common], help="kernel throughput, both backends")
    return p


def resolve(ns: argparse.Namespace) -> dict:
    """Merge flags over config over defaults."""
    cfg = {**DEFAULTS, **COMMAND_DEFAULTS.get(ns.command, {})}
    if ns.config:
        cfg.update(read_config(ns.config))
    for k, v in vars(ns).items():
        if v is not None and k != "config":
            cfg[k] = v
    for k in ("threads", "cap", "segment_size"):
        cfg[k] = parse_int(cfg[k])
    if cfg.get("Q") is not None:
        cfg["Q"] = parse_int(cfg["Q"])
    if cfg["threads"] < 1:
        raise UsageError("--threads must be >= 1")
    g = cfg.get("group")
    cfg["group"] = [g] if isinstance(g, str) else g
    return cfg


# -- commands ---------------------------------------------------------------------


def _groups(cfg: dict):
    if not cfg.get("group"):
        raise UsageError("--group is required")
    gs = [parse_group(s) for s in cfg["group"]]
    for G in gs:
        G.require_nontrivial()
    return gs


def _grid(cfg: dict) -> list[int]:
    grid = parse_grid(cfg["x"])
    if grid[-1] > cfg["cap"]:
        raise SieveCapError(f"x={grid[-1]} exceeds sieve cap {cfg['cap']}")
    return grid


def _opts(cfg: dict) -> dict:
    return {"threads": cfg["threads"], "segment_size": cfg["segment_size"], "cap": cfg["cap"]}


def cmd_count(cfg: dict):
    groups = _groups(cfg)
    grid = _grid(cfg)
    rows = count_rows(grid, groups, **_opts(cfg))
    return rows, {"groups": [str(G) for G in groups], "x_grid": grid}, EXIT_OK


def cmd_compare(cfg: dict):
    groups = _groups(cfg)
    grid = _grid(cfg)
    if grid[0] <= MIN_MAIN_TERM_X:
        raise UsageError(f"compare needs x > {MIN_MAIN_TERM_X} so that log log x is meaningful")
    rows = [r.to_dict() for r in census_report(grid, groups, Q=cfg.get("Q"), **_opts(cfg))]
    return rows, {"groups": [str(G) for G in groups], "x_grid": grid, "Q": cfg.get("Q")}, EXIT_OK


def cmd_verify(cfg: dict):
    xs = parse_grid(cfg["x"])
    palphas = parse_range(cfg["palpha"])
    ks = parse_range(cfg["k"])
    ells = list(range(parse_int(cfg["ell"]) + 1))
    if any(k < 1 for k in ks):
        raise UsageError("--k values must be >= 1")
    t0 = time.perf_counter()
    rows = identity_suite(
        xs, palphas, ks, ells, threads=cfg["threads"], segment_size=cfg["segment_size"],
        inject_fault=bool(cfg.get("inject_fault")),
    )
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.identity} [{r.params}]: lhs={r.lhs} {r.relation} rhs={r.rhs}", file=sys.stderr)
    print(f"{len(rows) - len(failed)}/{len(rows)} identities hold ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
    info = {"x_grid": xs, "palpha": palphas, "k": ks, "ell_max": ells[-1], "passed": not failed}
    return [r.to_dict() for r in rows], info, EXIT_VERIFY if failed else EXIT_OK


def cmd_constants(cfg: dict):
    palphas = parse_range(cfg["palpha"])
    ks = parse_range(cfg["k"])
    if any(k < 1 for k in ks):
        raise UsageError("--k values must be >= 1")
    rows = constants_rows(palphas, ks, Q=cfg.get("Q"))
    return rows, {"palpha": palphas, "k": ks}, EXIT_OK


def _time_census(x: int, threads: int, segment_size: int) -> dict:
    groups = [cyclic_power(3, 1), cyclic_power(4, 1), cyclic_power(2, 3)]
    t0 = time.perf_counter()
    n_primes = 0
    for seg in build_spf(x, segment_size=segment_size, threads=threads):
        n_primes += int((seg.spf == seg.base + np.arange(len(seg))).sum())
    t1 = time.perf_counter()
    Census([x], [CountS(G) for G in groups], threads=threads, segment_size=segment_size).run()
    t2 = time.perf_counter()
    return {
        "threads": threads,
        "spf_seconds": t1 - t0,
        "spf_per_second": x / (t1 - t0),
        "census_seconds": t2 - t1,
        "census_per_second": x / (t2 - t1),
        "primes": n_primes,
    }


def cmd_bench(cfg: dict):
    """Time both backends; reports numbers only and never fails on them."""
    x = _grid(cfg)[-1]
    threads = cfg["threads"]
    rows = []
    for name in kernels.BACKENDS:
        try:
            with kernels.backend(name):
                w0 = time.perf_counter()
                _time_census(1000, 1, cfg["segment_size"])  # compile / warm caches
                warm = time.perf_counter() - w0
                single = _time_census(x, 1, cfg["segment_size"])
                multi = _time_census(x, threads, cfg["segment_size"]) if threads > 1 else single
        except ImportError as e:
            rows.append({"backend": name, "x": x, "error": str(e)})
            continue
        rows.append({
            "backend": name,
            "x": x,
            "warmup_seconds": warm,
            "single": single,
            "multi": multi,
            "scaling": single["census_seconds"] / multi["census_seconds"],
        })
    info = {"x": x, "threads": threads, "cpu": platform.processor() or platform.machine()}
    return rows, info, EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "compare": cmd_compare,
    "verify": cmd_verify,
    "constants": cmd_constants,
    "bench": cmd_bench,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve(ns)
        if cfg.get("backend"):
            kernels.set_backend(cfg["backend"])
        rows, info, code = COMMANDS[cfg["command"]](cfg)
        fmt = "json" if cfg["command"] == "bench" else cfg["format"]
        m = meta(cfg["command"], timestamp=not cfg["no_timestamp"], **info)
        _emit(render(cfg["command"], rows, fmt, m), cfg.get("out"))
        return code
    except SieveCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GroupSpecError, DomainError, ConvergenceError, NonCancellationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
