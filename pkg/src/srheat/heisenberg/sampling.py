"""Grid sampling of the distance field and a scikit-learn style transformer."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .distance import RESIDUAL_TOL, distance_to_plane
from .geodesics import Point

CSV_COLUMNS = ("x", "y", "z", "delta", "on_axis", "foot_x0", "foot_y0", "time")


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.num < 1:
            raise ValueError("axis needs at least one point")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``start:stop:num`` (or a single value)."""
        parts = text.split(":")
        if len(parts) == 1:
            v = float(parts[0])
            return cls(v, v, 1)
        if len(parts) != 3:
            raise ValueError(f"axis spec must be start:stop:num, got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))


@dataclass(frozen=True)
class GridSpec:
    x: Axis
    y: Axis
    z: Axis

    def points(self) -> Iterator[Tuple[float, float, float]]:
        for x in self.x.values():
            for y in self.y.values():
                for z in self.z.values():
                    yield float(x), float(y), float(z)

    @property
    def size(self) -> int:
        return self.x.num * self.y.num * self.z.num


def sample_grid(spec: GridSpec, tol: float = RESIDUAL_TOL) -> List[tuple]:
    rows = []
    for x, y, z in spec.points():
        res = distance_to_plane(Point(x, y, z), tol)
        foot = res.foot
        rows.append((x, y, z, res.value, res.on_axis,
                     foot.x0 if foot else None, foot.y0 if foot else None,
                     foot.time if foot else None))
    return rows


def rows_to_csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(["" if v is None else (int(v) if isinstance(v, bool) else repr(v))
                    for v in row])
    return buf.getvalue()


class PlaneDistanceTransformer(TransformerMixin, BaseEstimator):
    """Map rows (x, y, z) to their distance from the plane z = 0.

    Stateless; ``fit`` only validates the input width. With
    ``return_foot=True`` the output has columns (delta, foot_x0, foot_y0),
    NaN on the axis.
    """

    def __init__(self, tol: float = RESIDUAL_TOL, return_foot: bool = False):
        self.tol = tol
        self.return_foot = return_foot

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=3)
        if X.shape[1] != 3:
            raise ValueError("expected three columns (x, y, z)")
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        X = check_array(X)
        if X.shape[1] != 3:
            raise ValueError("expected three columns (x, y, z)")
        out = np.empty((X.shape[0], 3 if self.return_foot else 1))
        for i, (x, y, z) in enumerate(X):
            res = distance_to_plane(Point(float(x), float(y), float(z)), self.tol)
            out[i, 0] = res.value
            if self.return_foot:
                out[i, 1:] = (res.foot.x0, res.foot.y0) if res.foot else (np.nan, np.nan)
        return out
