"""Report rows and their CSV / JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from . import __version__, kernels
from .asymptotics import delta, gamma_real, k_constant, main_term_general, residue_set_B
from .counting import Census, CountS
from .groups import FiniteAbelianGroup, PrimePower

__all__ = [
    "SCHEMA_VERSION",
    "COLUMNS",
    "CensusRow",
    "census_report",
    "count_rows",
    "constants_rows",
    "render",
]

SCHEMA_VERSION = 1

COLUMNS = {
    "count": ["x", "counter", "params", "value"],
    "compare": [
        "x", "group", "branch", "exact", "main_total", "main_dominant",
        "dominant_coefficient", "ratio", "ratio_total", "residual",
    ],
    "verify": ["identity", "params", "lhs", "relation", "rhs", "status"],
    "constants": [
        "kind", "p_alpha", "p", "alpha", "k", "modulus", "tau", "delta", "gamma", "K",
        "method", "Q", "error_estimate", "delta_direct", "agreement", "flag",
    ],
}


@dataclass(frozen=True)
class CensusRow:
    """Exact count next to both main terms at one threshold.

    ``residual`` is ``(ratio - 1) * log log x``: flat if the relative error
    really is of order ``1 / log log x``.
    """

    x: int
    group: str
    branch: str
    exact: int
    main_total: float
    main_dominant: float
    dominant_coefficient: float

    @property
    def ratio(self) -> float:
        return self.exact / self.main_dominant

    @property
    def ratio_total(self) -> float:
        return self.exact / self.main_total

    @property
    def residual(self) -> float:
        return (self.ratio - 1.0) * math.log(math.log(self.x))

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "group": self.group,
            "branch": self.branch,
            "exact": self.exact,
            "main_total": self.main_total,
            "main_dominant": self.main_dominant,
            "dominant_coefficient": self.dominant_coefficient,
            "ratio": self.ratio,
            "ratio_total": self.ratio_total,
            "residual": self.residual,
        }


def count_rows(grid: Sequence[int], groups: Sequence[FiniteAbelianGroup], **opts) -> list[dict]:
    census = Census(grid, [CountS(G) for G in groups], **opts)
    res = census.run()
    rows = []
    for G in groups:
        for x, v in zip(grid, res[CountS(G)]):
            rows.append({"x": int(x), "counter": "S", "params": f"G={G}", "value": v})
    return rows


def census_report(
    grid: Sequence[int], groups: Sequence[FiniteAbelianGroup], Q: int | None = None, **opts
) -> list[CensusRow]:
    census = Census(grid, [CountS(G) for G in groups], **opts)
    res = census.run()
    rows = []
    for G in groups:
        for x, v in zip(grid, res[CountS(G)]):
            mt = main_term_general(x, G, Q=Q)
            rows.append(CensusRow(int(x), str(G), mt.branch, v, mt.total, mt.dominant_total, mt.dominant_coefficient))
    return rows


def constants_rows(palphas: Sequence[int], ks: Sequence[int], Q: int | None = None, cross_check: bool = True) -> list[dict]:
    rows = []
    for v in palphas:
        pp = PrimePower.from_value(v)
        if pp.value >= 3:
            d = delta(pp, Q=Q)
            row = {"kind": "delta", "p_alpha": pp.value, "p": pp.p, "alpha": pp.alpha, **d.to_dict()}
            if cross_check:
                dd = delta(residue_set_B(pp), method="direct-extrapolation")
                row["delta_direct"] = dd.value
                row["agreement"] = abs(dd.value - d.value)
            rows.append(row)
        for k in ks:
            row = {"kind": "K", "p_alpha": pp.value, "p": pp.p, "alpha": pp.alpha, "k": k, "K": k_constant(pp, k, Q=Q)}
            if pp.value == 2:
                row["flag"] = "placeholder - never a dominant coefficient"
            else:
                row["gamma"] = gamma_real(1 - 1 / pp.phi)
                row["delta"] = delta(pp, Q=Q).value
            rows.append(row)
    return rows


def meta(command: str, timestamp: bool = True, **extra) -> dict:
    m = {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "backend": kernels.get_backend(),
    }
    m.update(extra)
    if timestamp:
        m["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return m


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(command: str, rows: Sequence[dict], fmt: str, meta_info: dict) -> str:
    if fmt == "json":
        return json.dumps({"meta": meta_info, "rows": list(rows)}, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    cols = COLUMNS[command]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()

