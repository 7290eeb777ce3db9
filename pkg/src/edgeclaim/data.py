"""Bundled benchmark data: the karate-club graph, four classic 2-D shapes,
and a CSV loader with z-score normalization."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, ParameterError
from .graph import PointDataset, WeightedGraph

SHAPES = ("banana", "highleyman", "lithuanian", "spirals")

# Zachary's karate club: 34 members, 78 unweighted friendship ties.
KARATE_EDGES = (
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31),
    (1, 2), (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30),
    (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32),
    (3, 7), (3, 12), (3, 13),
    (4, 6), (4, 10),
    (5, 6), (5, 10), (5, 16),
    (6, 16),
    (8, 30), (8, 32), (8, 33),
    (9, 33),
    (13, 33),
    (14, 32), (14, 33),
    (15, 32), (15, 33),
    (18, 32), (18, 33),
    (19, 33),
    (20, 32), (20, 33),
    (22, 32), (22, 33),
    (23, 25), (23, 27), (23, 29), (23, 32), (23, 33),
    (24, 25), (24, 27), (24, 31),
    (25, 31),
    (26, 29), (26, 33),
    (27, 33),
    (28, 31), (28, 33),
    (29, 32), (29, 33),
    (30, 32), (30, 33),
    (31, 32), (31, 33),
    (32, 33),
)

# Faction each member supported in the conflict (0 = instructor's group).
# Member 8 backed the president's side yet later joined the instructor's
# club to keep his belt rank; the grouping target here is the allegiance,
# not the club joined, so 8 carries label 1.
KARATE_FACTIONS = (
    0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1,
    1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
)


@dataclass(frozen=True)
class NamedDataset:
    """A benchmark payload (points or a graph) with optional ground truth."""

    name: str
    payload: PointDataset | WeightedGraph
    ground_truth: np.ndarray | None
    provenance: str

    def __post_init__(self) -> None:
        if self.ground_truth is not None:
            gt = np.asarray(self.ground_truth, dtype=np.int64)
            object.__setattr__(self, "ground_truth", gt)


def karate_club() -> NamedDataset:
    graph = WeightedGraph.from_pairs(34, KARATE_EDGES, weight=1.0)
    return NamedDataset(
        name="karate_club",
        payload=graph,
        ground_truth=np.array(KARATE_FACTIONS, dtype=np.int64),
        provenance="embedded",
    )


def _spirals(m: int, rng: np.random.Generator) -> np.ndarray:
    # Sample uniformly in arc length, not in angle, so the outer turns are
    # as densely covered as the inner ones.
    grid = np.linspace(0.5 * np.pi, 3.5 * np.pi, 2048)
    arc = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(grid), (grid[:-1] * np.diff(grid))))])
    s = np.linspace(0.0, arc[-1], m) + rng.uniform(-0.5, 0.5, size=m) * arc[-1] / m
    theta = np.interp(np.clip(s, 0.0, arc[-1]), arc, grid)
    pts = np.column_stack([theta * np.cos(theta), theta * np.sin(theta)])
    return pts + rng.normal(0.0, 0.08, size=pts.shape)


def _banana(m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    t0 = rng.uniform(0.0, np.pi, size=m)
    t1 = rng.uniform(0.0, np.pi, size=m)
    upper = np.column_stack([np.cos(t0), np.sin(t0)])
    lower = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)])
    noise = rng.normal(0.0, 0.08, size=(2 * m, 2))
    return upper + noise[:m], lower + noise[m:]


def _highleyman(m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    a = rng.normal([1.0, 1.0], [1.0, 0.5], size=(m, 2))
    b = rng.normal([2.0, 0.0], [0.1, 2.0], size=(m, 2))
    return a, b


def _lithuanian(m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    t0 = rng.uniform(-1.0, 1.0, size=m)
    t1 = rng.uniform(-1.0, 1.0, size=m)
    a = np.column_stack([5.0 * t0, 1.5 * t0**2 - 0.5])
    b = np.column_stack([5.0 * t1, 0.5 - 1.5 * t1**2])
    noise = rng.normal(0.0, 0.35, size=(2 * m, 2))
    return a + noise[:m], b + noise[m:]


def generate(shape: str, n: int, seed: int = 0) -> NamedDataset:
    """Two-class 2-D benchmark shapes, n/2 points per class, deterministic
    per seed."""
    if shape not in SHAPES:
        raise ParameterError(f"shape must be one of {SHAPES}, got {shape!r}")
    if n < 4 or n % 2 != 0:
        raise ParameterError(f"n must be an even integer >= 4, got {n}")
    m = n // 2
    rng = np.random.default_rng(seed)
    if shape == "spirals":
        a = _spirals(m, rng)
        b = -_spirals(m, rng)  # the second arm is the first rotated by pi
    elif shape == "banana":
        a, b = _banana(m, rng)
    elif shape == "highleyman":
        a, b = _highleyman(m, rng)
    else:
        a, b = _lithuanian(m, rng)
    points = np.vstack([a, b])
    labels = np.repeat(np.array([0, 1], dtype=np.int64), m)
    return NamedDataset(
        name=shape,
        payload=PointDataset(points, labels),
        ground_truth=labels,
        provenance=f"generated(shape={shape}, n={n}, seed={seed})",
    )


def _zscore(features: np.ndarray, path: str) -> np.ndarray:
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    flat = std == 0.0
    if flat.any():
        cols = np.flatnonzero(flat).tolist()
        warnings.warn(f"{path}: constant feature column(s) {cols} set to zero")
        std = np.where(flat, 1.0, std)
    out = (features - mean) / std
    out[:, flat] = 0.0
    return out


def load_csv(path: str | Path, label_column: str | int | None = None) -> NamedDataset:
    """Load numeric CSV points, z-scoring every feature column.

    A header row is detected when the first row has any non-numeric cell; a
    column named `label` (or the one named/indexed by `label_column`) becomes
    the integer ground truth.  Categorical data must be encoded numerically
    beforehand.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    if not rows:
        raise DataError(f"{path}: empty file")

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    header: list[str] | None = None
    if not all(numeric(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows for a k-NN graph")

    width = len(rows[0])
    if header is not None and len(header) != width:
        raise DataError(f"{path}: header width does not match data rows")

    label_idx: int | None = None
    if isinstance(label_column, int):
        if not (0 <= label_column < width):
            raise ParameterError(f"label_column index {label_column} out of range")
        label_idx = label_column
    elif isinstance(label_column, str):
        if header is None or label_column not in header:
            raise ParameterError(f"no column named {label_column!r} in {path}")
        label_idx = header.index(label_column)
    elif header is not None and "label" in header:
        label_idx = header.index("label")

    values = np.empty((len(rows), width))
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {r + 1} has {len(row)} fields, expected {width}")
        for c, cell in enumerate(row):
            try:
                values[r, c] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric value {cell.strip()!r} at row {r + 1}, column {c + 1}"
                ) from None

    if label_idx is not None:
        labels = values[:, label_idx].astype(np.int64)
        features = np.delete(values, label_idx, axis=1)
    else:
        labels = None
        features = values
    if features.shape[1] == 0:
        raise DataError(f"{path}: no feature columns")

    features = _zscore(features, str(path))
    return NamedDataset(
        name=path.stem,
        payload=PointDataset(features, labels),
        ground_truth=labels,
        provenance=f"ingested({path})",
    )


def save_points_csv(dataset: NamedDataset, path: str | Path) -> None:
    """Write points (and labels when present) with an x0,x1,...,label header."""
    if not isinstance(dataset.payload, PointDataset):
        raise ParameterError("save_points_csv needs a point dataset")
    pts = dataset.payload.points
    labels = dataset.ground_truth
    header = [f"x{i}" for i in range(pts.shape[1])]
    if labels is not None:
        header.append("label")
    lines = [",".join(header)]
    for i in range(pts.shape[0]):
        cells = [repr(float(v)) for v in pts[i]]
        if labels is not None:
            cells.append(str(int(labels[i])))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
