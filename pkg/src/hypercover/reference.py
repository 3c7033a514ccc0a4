"""Published reference values used by the table reproductions.

Coverage tables hold ``(r, delta)`` pairs: the smallest radius giving 0.9
coverage and the ``delta`` achieving it. Quantization tables hold
``(min n^(2/d) E theta, delta)``. ``None`` marks a cell absent from the
source table.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RowSpec:
    label: str
    scheme: str
    alpha: float | None = None
    fixed_delta: float | None = None  # rows evaluated at one delta instead of optimized


S1 = RowSpec("Scheme 1", "s1")
S1_FIXED = RowSpec("Scheme 1, delta=1", "s1", fixed_delta=1.0)
S2 = RowSpec("Scheme 2", "s2")
S3 = RowSpec("Scheme 3", "s3")
S4_HALF = RowSpec("Scheme 4, alpha=0.5", "s4", alpha=0.5)
S4_THREE_HALVES = RowSpec("Scheme 4, alpha=1.5", "s4", alpha=1.5)
S5 = RowSpec("Scheme 5", "s5")
S6 = RowSpec("Scheme 6", "s6")
S7 = RowSpec("Scheme 7", "s7")
S7_FIXED = RowSpec("Scheme 7, delta=1", "s7", fixed_delta=1.0)

COVERAGE_ROWS = (S1, S1_FIXED, S2, S3, S4_HALF, S4_THREE_HALVES, S5, S6, S7, S7_FIXED)
QUANTIZATION_ROWS = (S1, S3, S4_HALF, S7, S7_FIXED)


@dataclass(frozen=True)
class PublishedTable:
    table_id: int
    kind: str  # "coverage" or "quantization"
    d: int
    ns: tuple[int, ...]
    rows: tuple[RowSpec, ...]
    cells: dict  # (row label, n) -> (value, delta)

    def cell(self, row: RowSpec, n: int):
        return self.cells.get((row.label, n))


def _table(table_id, kind, d, ns, rows, values):
    cells = {}
    for row, entries in zip(rows, values):
        for n, entry in zip(ns, entries):
            if entry is not None:
                cells[(row.label, n)] = entry
    return PublishedTable(table_id, kind, d, tuple(ns), tuple(rows), cells)


TABLE1 = _table(1, "coverage", 10, (64, 128, 512, 1024), COVERAGE_ROWS, [
    [(1.632, 0.70), (1.520, 0.78), (1.291, 0.86), (1.195, 0.90)],
    [(1.720, 1.00), (1.577, 1.00), (1.319, 1.00), (1.215, 1.00)],
    [(1.634, 0.70), (1.520, 0.78), (1.291, 0.86), (1.195, 0.90)],
    [(1.530, 0.44), (1.395, 0.48), (1.115, 0.50), (1.075, 0.50)],
    [(1.629, 0.58), (1.505, 0.65), (1.270, 0.72), (1.165, 0.75)],
    [(1.635, 0.80), (1.525, 0.88), (1.310, 1.00), (1.210, 1.00)],
    [(1.645, 1.40), (1.530, 1.50), (1.330, 1.75), (1.250, 1.75)],
    [(1.642, 1.25), (1.532, 1.35), (1.330, 1.50), (1.250, 1.70)],
    [(1.595, 0.72), (1.485, 0.80), (1.280, 0.85), (1.170, 0.88)],
    [(1.678, 1.00), (1.534, 1.00), (1.305, 1.00), (1.187, 1.00)],
])

TABLE2 = _table(2, "coverage", 20, (64, 128, 512, 1024), COVERAGE_ROWS, [
    [(2.545, 0.50), (2.460, 0.55), (2.290, 0.68), (2.205, 0.70)],
    [(2.840, 1.00), (2.702, 1.00), (2.444, 1.00), (2.330, 1.00)],
    [(2.545, 0.50), (2.460, 0.55), (2.290, 0.68), (2.205, 0.70)],
    [(2.490, 0.32), (2.410, 0.35), (2.220, 0.40), (2.125, 0.44)],
    [(2.540, 0.44), (2.455, 0.48), (2.285, 0.55), (2.220, 0.60)],
    [(2.545, 0.60), (2.460, 0.65), (2.290, 0.76), (2.215, 0.78)],
    [(2.550, 1.40), (2.467, 1.60), (2.305, 1.75), (2.235, 1.90)],
    [(2.550, 1.40), (2.467, 1.58), (2.305, 1.75), (2.235, 1.90)],
    [(2.520, 0.50), (2.445, 0.60), (2.285, 0.68), (2.196, 0.72)],
    [(2.750, 1.00), (2.656, 1.00), (2.435, 1.00), (2.325, 1.00)],
])

TABLE3 = _table(3, "coverage", 50, (128, 512, 1024), COVERAGE_ROWS, [
    [(4.130, 0.38), (4.020, 0.45), (3.970, 0.46)],
    [(4.855, 1.00), (4.625, 1.00), (4.520, 1.00)],
    [(4.130, 0.38), (4.020, 0.45), (3.970, 0.46)],
    [(4.110, 0.21), (4.000, 0.25), (3.950, 0.28)],
    [(4.130, 0.30), (4.020, 0.36), (3.970, 0.40)],
    [(4.130, 0.42), (4.020, 0.48), (3.970, 0.52)],
    [(4.130, 1.50), (4.020, 1.75), (3.970, 2.00)],
    [(4.130, 1.50), (4.020, 1.75), (3.970, 2.00)],
    [(4.115, 0.40), (4.015, 0.45), (3.965, 0.47)],
    [(4.395, 1.00), (4.379, 1.00), (4.366, 1.00)],
])

TABLE4 = _table(4, "quantization", 10, (64, 128, 512, 1024), QUANTIZATION_ROWS, [
    [(4.153, 0.68), (4.105, 0.72), (3.992, 0.80), (3.925, 0.84)],
    [(3.663, 0.40), (3.548, 0.44), (3.221, 0.48), (3.348, 0.52)],
    [(4.072, 0.56), (4.013, 0.60), (3.839, 0.68), (3.770, 0.69)],
    [(3.998, 0.68), (3.973, 0.76), (3.936, 0.80), (3.834, 0.82)],
    [(4.569, 1.00), (4.425, 1.00), (4.239, 1.00), (4.094, 1.00)],
])

TABLE5 = _table(5, "quantization", 20, (64, 128, 512, 1024), QUANTIZATION_ROWS, [
    [(7.552, 0.52), (7.563, 0.56), (7.528, 0.64), (7.484, 0.68)],
    [(7.298, 0.32), (7.270, 0.33), (7.133, 0.36), (7.016, 0.40)],
    [(7.541, 0.40), (7.515, 0.44), (7.457, 0.52), (7.421, 0.54)],
    [(7.445, 0.48), (7.464, 0.56), (7.487, 0.64), (7.453, 0.66)],
    [(9.089, 1.00), (9.133, 1.00), (8.87, 1.00), (8.681, 1.00)],
])

TABLE6 = _table(6, "quantization", 50, (128, 512, 1024), QUANTIZATION_ROWS, [
    [(17.608, 0.36), (17.634, 0.40), (17.643, 0.44)],
    [(17.483, 0.20), (17.511, 0.24), (17.554, 0.27)],
    [(17.590, 0.28), (17.670, 0.36), (17.620, 0.38)],
    [None, None, None],
    [(20.196, 1.00), (21.231, 1.00), (21.711, 1.00)],
])

# radius of the unit-volume ball, as printed (some entries carry fewer digits)
TABLE7 = {
    1: 0.5, 2: 0.564, 3: 0.62, 4: 0.671, 5: 0.717, 6: 0.761, 7: 0.8, 8: 0.839, 9: 0.876,
    10: 0.911, 20: 1.201, 30: 1.43, 40: 1.626, 50: 1.8, 100: 2.49, 200: 3.477, 500: 5.45, 1000: 7.682,
}

BALL_VOLUME_100 = 2.368e-40

TABLES = {1: TABLE1, 2: TABLE2, 3: TABLE3, 4: TABLE4, 5: TABLE5, 6: TABLE6}
