"""Reproduce the published coverage, quantization and unit-ball tables.

Each reproduced cell is compared with the printed one and flagged PASS
(within tolerance), NEAR (within twice the tolerance) or FAIL.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import reference as ref
from .geometry import unit_volume_radius

R_TOL = 0.01
DELTA_TOL = 0.04
QUANT_REL_TOL = 0.01
QUANT_REL_TOL_FACTORIAL = 0.02
TABLE7_TOL = 0.001

CELL_HEADER = ("table", "row", "d", "n", "published_value", "published_delta", "value", "delta", "status")


@dataclass(frozen=True)
class Budget:
    test_points: int = 20_000
    replications: int = 10
    seed: int = 0
    delta_step: float = 0.02


@dataclass(frozen=True)
class TableCell:
    table: int
    row: str
    d: int
    n: int | None
    published_value: float
    published_delta: float | None
    value: float
    delta: float | None
    status: str

    def csv_fields(self) -> list[str]:
        def num(v):
            return "" if v is None else format(float(v), ".17g")

        return [str(self.table), self.row, str(self.d), "" if self.n is None else str(self.n),
                num(self.published_value), num(self.published_delta), num(self.value),
                num(self.delta), self.status]


def _status(errors_and_tols) -> str:
    worst = max(err / tol for err, tol in errors_and_tols)
    if worst <= 1.0 + 1e-12:
        return "PASS"
    return "NEAR" if worst <= 2.0 else "FAIL"


def table7() -> list[TableCell]:
    cells = []
    for d, printed in ref.TABLE7.items():
        value = unit_volume_radius(d)
        cells.append(TableCell(7, "r_d", d, None, printed, None, value, None,
                               _status([(abs(value - printed), TABLE7_TOL)])))
    return cells


def _spec(row: ref.RowSpec, delta: float):
    from .designs import SchemeSpec

    return SchemeSpec(row.scheme, delta, row.alpha)


def _coarse_to_fine(func, spec, d: int, step: float):
    """Minimize ``func`` over the scheme's delta range: coarse grid, fine grid, golden section."""
    from .union_cover import delta_grid, golden_refine

    coarse = delta_grid(spec, d, 5 * step)
    cvals = np.array([func(x) for x in coarse])
    best = int(np.argmin(cvals))
    lo = coarse[max(best - 1, 0)] - 4 * step
    hi = coarse[min(best + 1, len(coarse) - 1)] + 4 * step
    fine = np.array([x for x in delta_grid(spec, d, step) if lo <= x <= hi])
    fvals = np.array([func(x) for x in fine])
    return golden_refine(func, fine, fvals, maximize=False, tol=0.005)


def coverage_cell(row: ref.RowSpec, d: int, n: int, budget: Budget) -> tuple[float, float]:
    """``(r, delta)``: smallest radius reaching 0.9 coverage, minimized over ``delta`` unless fixed."""
    from .union_cover import FrozenStudy, _replications, mc_radius_for_target

    spec = _spec(row, row.fixed_delta or 1.0)
    m = _replications(spec, budget.replications if spec.id.random else 1)
    study = FrozenStudy(spec, d, n, budget.test_points, m, budget.seed)

    def radius(x):
        return mc_radius_for_target(study.distances(float(x)), 0.9)

    if row.fixed_delta is not None:
        return radius(row.fixed_delta), row.fixed_delta
    delta, r = _coarse_to_fine(radius, spec, d, budget.delta_step)
    return r, delta


def quantization_cell(row: ref.RowSpec, d: int, n: int, budget: Budget) -> tuple[float, float]:
    from .quantize import _combine
    from .union_cover import FrozenStudy, _replications

    spec = _spec(row, row.fixed_delta or 1.0)
    m = _replications(spec, budget.replications if spec.id.random else 1)
    study = FrozenStudy(spec, d, n, budget.test_points, m, budget.seed)
    factor = n ** (2.0 / d)

    def value(x):
        return factor * _combine(study.distances(float(x)), budget.seed).value

    if row.fixed_delta is not None:
        return value(row.fixed_delta), row.fixed_delta
    delta, v = _coarse_to_fine(value, spec, d, budget.delta_step)
    return v, delta


def reproduce(table_id: int, budget: Budget = Budget(), schemes=None, ns=None) -> list[TableCell]:
    """Reproduce table ``table_id`` (1-7), optionally restricted to some schemes and sizes."""
    if table_id == 7:
        return table7()
    if table_id not in ref.TABLES:
        raise ValueError(f"unknown table id {table_id!r}; expected 1-7")
    table = ref.TABLES[table_id]
    wanted = None if schemes is None else {s.lower() for s in schemes}
    cells = []
    for row in table.rows:
        if wanted is not None and row.scheme not in wanted:
            continue
        for n in table.ns:
            if ns is not None and n not in ns:
                continue
            published = table.cell(row, n)
            if published is None:
                continue
            pv, pd = published
            if table.kind == "coverage":
                value, delta = coverage_cell(row, table.d, n, budget)
                checks = [(abs(value - pv), R_TOL)]
            else:
                value, delta = quantization_cell(row, table.d, n, budget)
                rel = QUANT_REL_TOL_FACTORIAL if row.scheme == "s3" else QUANT_REL_TOL
                checks = [(abs(value - pv), rel * pv)]
            if row.fixed_delta is None:
                checks.append((abs(delta - pd), DELTA_TOL))
            cells.append(TableCell(table_id, row.label, table.d, n, pv, pd, value, delta, _status(checks)))
    return cells


def cells_to_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CELL_HEADER)
    for c in cells:
        w.writerow(c.csv_fields())
    return buf.getvalue()


def cells_to_json(cells, provenance: dict | None = None) -> str:
    return json.dumps({"provenance": provenance or {}, "cells": [asdict(c) for c in cells]}, indent=1)


def summary(cells) -> dict:
    out = {"PASS": 0, "NEAR": 0, "FAIL": 0}
    for c in cells:
        out[c.status] += 1
    return out


__all__ = ["Budget", "TableCell", "reproduce", "table7", "cells_to_csv", "cells_to_json", "summary",
           "coverage_cell", "quantization_cell"]
