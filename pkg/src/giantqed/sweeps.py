"""Parameter-grid evaluation producing figure-ready datasets.

Error cells never abort a sweep: they hold ``None`` (an empty CSV field, JSON
null) and carry a status of ``divergent``, ``decoupled`` or ``degenerate``.
Grid chunks may be evaluated on worker threads; rows are always emitted in
grid order, so output does not depend on the degree of parallelism.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import core, three_level, two_level
from .errors import DecoupledAtom, DivergentNormalization, RequiresResonance, ScatteringError

OK = "ok"
DIVERGENT = "divergent"
DECOUPLED = "decoupled"
DEGENERATE = "degenerate"

GRID_VARIABLES = ("k", "x", "theta", "omega_rabi")
CHUNK = 256


@dataclass(frozen=True)
class GridSpec:
    variable: str
    start: float
    stop: float
    steps: int
    second: "GridSpec | None" = None

    def __post_init__(self):
        if self.variable not in GRID_VARIABLES:
            raise ValueError(f"grid variable must be one of {GRID_VARIABLES}")
        if self.steps < 2:
            raise ValueError("a grid needs at least two steps")
        if not self.start < self.stop:
            raise ValueError("grid start must be below stop")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def describe(self) -> dict:
        out = {"variable": self.variable, "start": self.start, "stop": self.stop, "steps": self.steps}
        if self.second is not None:
            out["second"] = self.second.describe()
        return out


@dataclass
class SweepDataset:
    header: dict
    columns: tuple
    rows: list = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def array(self, name: str) -> np.ndarray:
        """Numeric column with error cells as NaN (for analysis only, never written)."""
        return np.array([np.nan if v is None else v for v in self.column(name)], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.header.items():
            buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"params": self.header, "columns": list(self.columns), "rows": [list(r) for r in self.rows]}
        return json.dumps(doc, sort_keys=True) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        Path(path).write_text(text, encoding="utf-8")

    @classmethod
    def from_text(cls, text: str) -> "SweepDataset":
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
            return cls(doc["params"], tuple(doc["columns"]), [tuple(r) for r in doc["rows"]])
        header = {}
        lines = text.splitlines()
        body = []
        for line in lines:
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                header[key] = json.loads(value)
            else:
                body.append(line)
        reader = csv.reader(body)
        columns = tuple(next(reader))
        rows = [tuple(_parse_cell(name, v) for name, v in zip(columns, row)) for row in reader]
        return cls(header, columns, rows)

    @classmethod
    def read(cls, path) -> "SweepDataset":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def _format_cell(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _parse_cell(name, v):
    if name == "status":
        return v
    return None if v == "" else float(v)


def _header(model, params, grid=None, **extra):
    out = {"model": model, **asdict(params)}
    if grid is not None:
        out["grid"] = grid.describe()
    out.update(extra)
    return out


def _evaluate_chunks(fn, values, workers):
    """Apply ``fn`` (chunk -> list of rows) over grid chunks, keeping grid order."""
    chunks = [values[i:i + CHUNK] for i in range(0, len(values), CHUNK)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    return [row for part in parts for row in part]


def _scalar_rows(values, point):
    """Rows from a per-point evaluator returning (values tuple, status)."""
    rows = []
    for v in values:
        try:
            out, status = point(v)
        except DivergentNormalization:
            out, status = None, DIVERGENT
        except DecoupledAtom:
            out, status = None, DECOUPLED
        except ScatteringError:
            out, status = None, DEGENERATE
        rows.append((out, status))
    return rows


def _require_grid(grid, variable):
    if grid.variable != variable:
        raise ValueError(f"expected a grid over {variable}, got {grid.variable}")


def default_k_grid(params, steps: int = 2001) -> GridSpec:
    """k window omega0 +- 4 Gamma, widened to cover the dressed peaks at large Rabi frequency."""
    half = 4.0 * params.gamma
    rabi = getattr(params, "omega_rabi", 0.0)
    half = max(half, rabi / 2 + 3.5 * params.gamma)
    return GridSpec("k", params.omega0 - half, params.omega0 + half, steps)


def default_x_grid(params, steps: int = 3001) -> GridSpec:
    return GridSpec("x", 0.0, 60.0 / params.gamma, steps)


def default_chi_grid(params, steps: int = 401) -> GridSpec:
    return GridSpec(
        "k", params.omega0 - 3 * params.gamma, params.omega0 + 3 * params.gamma, steps,
        second=GridSpec("theta", 0.0, 0.95 * np.pi, steps),
    )


def sweep_F_two_level(params: core.TwoLevelParams, grid: GridSpec | None = None, workers: int = 1) -> SweepDataset:
    """F(k) of the two-level atom; at the decoupled point every row is 0 with status decoupled."""
    grid = grid or default_k_grid(params)
    _require_grid(grid, "k")
    status = DECOUPLED if core.is_decoupled(params) else OK

    def chunk(ks):
        return [(float(k), float(f), status) for k, f in zip(ks, np.atleast_1d(two_level.total_incoherent_F2(params, ks)))]

    rows = _evaluate_chunks(chunk, grid.values(), workers)
    return SweepDataset(_header("two_level", params, grid), ("k", "F", "status"), rows)


def sweep_F_three_level(params: core.ThreeLevelParams, grid: GridSpec | None = None, workers: int = 1) -> SweepDataset:
    grid = grid or default_k_grid(params)
    _require_grid(grid, "k")
    if params.delta != 0:
        raise RequiresResonance("F(k) of the three-level atom needs delta = 0")

    def chunk(ks):
        try:
            f = np.atleast_1d(three_level.total_F3(params, ks))
            return [(float(k), float(v), OK) for k, v in zip(ks, f)]
        except ScatteringError:
            rows = _scalar_rows(ks, lambda k: (float(three_level.total_F3(params, k)), OK))
            return [(float(k), out, st) for k, (out, st) in zip(ks, rows)]

    rows = _evaluate_chunks(chunk, grid.values(), workers)
    return SweepDataset(_header("three_level", params, grid), ("k", "F", "status"), rows)


def _chi_point(model, params):
    if model == "two_level":
        return lambda k: two_level.chi2(params, k)
    if model == "three_level":
        return lambda k: three_level.chi3(params, k)
    raise ValueError(f"unknown model {model!r}")


def sweep_chi_map(model: str, params, grid: GridSpec | None = None, workers: int = 1) -> SweepDataset:
    """chi_R and chi_L over a k x theta map; rows ordered by k, then theta."""
    grid = grid or default_chi_grid(params)
    _require_grid(grid, "k")
    if grid.second is None or grid.second.variable != "theta":
        raise ValueError("a chi map needs a second grid over theta")
    ks = grid.values()
    thetas = grid.second.values()

    def column(theta):
        p = params.with_theta(float(theta))
        status = DECOUPLED if core.is_decoupled(p) else OK
        try:
            chi_r, chi_l = _chi_point(model, p)(ks)
            return [(float(cr), float(cl), status) for cr, cl in zip(np.atleast_1d(chi_r), np.atleast_1d(chi_l))]
        except ScatteringError:
            cells = _scalar_rows(ks, lambda k: (_chi_point(model, p)(k), status))
            return [
                (float(out[0]), float(out[1]), st) if out is not None else (None, None, st)
                for out, st in cells
            ]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_theta = list(pool.map(column, thetas))
    else:
        per_theta = [column(th) for th in thetas]
    rows = []
    for i, k in enumerate(ks):
        for j, th in enumerate(thetas):
            cr, cl, st = per_theta[j][i]
            rows.append((float(k), float(th), cr, cl, st))
    return SweepDataset(_header(model, params, grid), ("k", "theta", "chi_R", "chi_L", "status"), rows)


def sweep_g2(model: str, params, k: float, direction: str = "R", grid: GridSpec | None = None,
             workers: int = 1) -> SweepDataset:
    """g2(x) at equal incident frequencies k.

    A vanishing normalization turns the whole dataset divergent (header
    ``status`` and every row), mirroring curves that cannot be drawn.
    """
    grid = grid or default_x_grid(params)
    _require_grid(grid, "x")
    if model == "two_level":
        def fn(x):
            return two_level.g2_two_level(params, k, x, direction)
    elif model == "three_level":
        def fn(x):
            return three_level.g2_three_level(params, k, x, direction)
    else:
        raise ValueError(f"unknown model {model!r}")
    xs = grid.values()
    try:
        fn(xs[:1])
        status = OK
    except DivergentNormalization:
        status = DIVERGENT
    except ScatteringError:
        status = DEGENERATE
    if status != OK:
        rows = [(float(x), None, status) for x in xs]
    else:
        def chunk(block):
            return [(float(x), float(g), OK) for x, g in zip(block, np.atleast_1d(fn(block)))]
        rows = _evaluate_chunks(chunk, xs, workers)
    header = _header(model, params, grid, k=k, direction=direction, status=status)
    return SweepDataset(header, ("x", "g2", "status"), rows)


def pole_table(model: str, params_list) -> SweepDataset:
    """Pole positions for each parameter record, in the given order.

    Two-level rows carry the single pole omega_tilde - i gamma_tilde in the
    first pole columns and leave the second empty.
    """
    params_list = list(params_list)
    rows = []
    for p in params_list:
        rabi = float(getattr(p, "omega_rabi", 0.0))
        try:
            poles = core.poles(p)
        except ScatteringError:
            rows.append((float(p.theta), rabi, None, None, None, None, DEGENERATE))
            continue
        cells = []
        for pole in poles:
            cells += [pole.location.real, pole.location.imag]
        cells += [None] * (4 - len(cells))
        status = DECOUPLED if core.is_decoupled(p) else OK
        rows.append((float(p.theta), rabi, *cells, status))
    header = {"model": model, "params": [asdict(p) for p in params_list]}
    columns = ("theta", "omega_rabi", "re_pole1", "im_pole1", "re_pole2", "im_pole2", "status")
    return SweepDataset(header, columns, rows)
