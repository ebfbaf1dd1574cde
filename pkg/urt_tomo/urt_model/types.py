# Copyright (c) 2022 The URT Tomography Tool authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
This file contains the value types shared across the tool: uniform 1-D
grids, the square image grid, images, sinograms and the sparse forward
operator in CSR layout.

"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Grid1D",
    "ImageGrid",
    "Image",
    "Sinogram",
    "SparseOperator",
    "grid_sample",
    "sparse_apply",
    "sparse_apply_adjoint",
]


@dataclass(frozen=True)
class Grid1D:
    """
    Uniform grid with `count` samples from `lo` to `hi`, both included.
    """

    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid needs at least two samples, got count={self.count}")
        if not np.isfinite(self.lo) or not np.isfinite(self.hi) or not self.lo < self.hi:
            raise ValueError(f"grid bounds must be finite with lo < hi, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "count", int(self.count))

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.count - 1)

    def sample(self, i: int) -> float:
        return grid_sample(self, i)

    def samples(self) -> np.ndarray:
        values = self.lo + np.arange(self.count) * self.spacing
        values[-1] = self.hi
        return values

    def reversed_index(self, i: int) -> int:
        return self.count - 1 - i


def grid_sample(g: Grid1D, i: int) -> float:
    """
    Return the i-th sample of a uniform grid.

    Parameters
    ----------
        g : Grid1D
            The grid.

        i : int
            Sample index, 0 <= i < g.count.

    Returns
    -------
    The value lo + i * (hi - lo) / (count - 1), exactly hi for the last index.

    """

    if not 0 <= i < g.count:
        raise IndexError(f"grid index {i} out of range [0, {g.count})")
    if i == g.count - 1:
        return g.hi
    return g.lo + i * g.spacing


@dataclass(frozen=True)
class ImageGrid:
    """
    Square m x m pixel grid covering [-m/2, m/2]^2 with pixel centres on
    both boundaries. Row 0 holds the largest x2, column 0 the smallest x1.
    """

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3 or self.m % 2 == 0:
            raise ValueError(f"image size must be odd and at least 3, got m={self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def spacing(self) -> float:
        return self.m / (self.m - 1)

    @property
    def size(self) -> int:
        return self.m * self.m

    def coords(self) -> np.ndarray:
        """
        Pixel centre coordinates in ascending order; symmetric about 0.
        """
        offsets = np.arange(self.m) - (self.m - 1) // 2
        return offsets * self.spacing

    def row_x2(self) -> np.ndarray:
        """
        The x2 coordinate of every image row, row 0 first.
        """
        return self.coords()[::-1].copy()

    def upper_rows(self) -> np.ndarray:
        return self.row_x2() > 0

    def mirror_row(self, row: int) -> int:
        return self.m - 1 - row

    def axis(self) -> Grid1D:
        return Grid1D(-self.m / 2.0, self.m / 2.0, self.m)


@dataclass(frozen=True, eq=False)
class Image:
    """
    Pixel values of an image in row-major order (row 0 = largest x2).
    """

    grid: ImageGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != self.grid.size:
            raise ValueError(f"image of size {self.grid.m}x{self.grid.m} needs {self.grid.size} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("image values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: ImageGrid) -> "Image":
        return cls(grid, np.zeros(grid.size))

    @classmethod
    def from_matrix(cls, grid: ImageGrid, matrix: np.ndarray) -> "Image":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (grid.m, grid.m):
            raise ValueError(f"expected a {grid.m}x{grid.m} matrix, got {matrix.shape}")
        return cls(grid, matrix.reshape(-1))

    def as_matrix(self) -> np.ndarray:
        return self.values.reshape(self.grid.m, self.grid.m)

    def reflect_x2(self) -> "Image":
        """
        Image mirrored about the line x2 = 0.
        """
        return Image.from_matrix(self.grid, self.as_matrix()[::-1, :])

    def scaled(self, factor: float) -> "Image":
        return Image(self.grid, self.values * factor)


@dataclass(frozen=True, eq=False)
class Sinogram:
    """
    Samples of a transform on the (p, y1) lattice; `values` has shape
    (p_axis.count, y_axis.count).
    """

    p_axis: Grid1D
    y_axis: Grid1D
    values: np.ndarray
    j: int = 0
    s: float = 2.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        shape = (self.p_axis.count, self.y_axis.count)
        if values.size != shape[0] * shape[1]:
            raise ValueError(f"sinogram needs {shape[0]}x{shape[1]} values, got {values.size}")
        values = values.reshape(shape)
        if not np.all(np.isfinite(values)):
            raise ValueError("sinogram values must be finite")
        if self.j not in (0, 1):
            raise ValueError(f"curve family j must be 0 or 1, got {self.j}")
        if not self.s > 0:
            raise ValueError(f"shape parameter s must be positive, got {self.s}")
        object.__setattr__(self, "values", values)

    @property
    def axes(self) -> Tuple[Grid1D, Grid1D]:
        return self.p_axis, self.y_axis

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def with_values(self, values: np.ndarray) -> "Sinogram":
        return Sinogram(self.p_axis, self.y_axis, values, self.j, self.s)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """
    Sparse matrix in compressed sparse row layout.

    `row_offsets` has rows + 1 entries, `col_indices` and `weights` one
    entry per stored non-zero. The scipy view is built once on demand.
    """

    rows: int
    cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        row_offsets = np.asarray(self.row_offsets, dtype=np.int64)
        col_indices = np.asarray(self.col_indices, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=float)
        if self.rows < 0 or self.cols < 0:
            raise ValueError("operator dimensions must be non-negative")
        if row_offsets.shape != (self.rows + 1,):
            raise ValueError(f"row_offsets needs {self.rows + 1} entries, got {row_offsets.shape}")
        if row_offsets[0] != 0 or np.any(np.diff(row_offsets) < 0):
            raise ValueError("row_offsets must start at 0 and be non-decreasing")
        nnz = int(row_offsets[-1])
        if col_indices.shape != (nnz,) or weights.shape != (nnz,):
            raise ValueError("col_indices and weights must hold one entry per stored value")
        if nnz and (col_indices.min() < 0 or col_indices.max() >= self.cols):
            raise ValueError("column index out of range")
        if not np.all(np.isfinite(weights)):
            raise ValueError("operator weights must be finite")
        object.__setattr__(self, "row_offsets", row_offsets)
        object.__setattr__(self, "col_indices", col_indices)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_scipy(cls, matrix) -> "SparseOperator":
        csr = sp.csr_matrix(matrix, dtype=float)
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr.shape[0], csr.shape[1], csr.indptr, csr.indices, csr.data)

    @classmethod
    def identity(cls, n: int) -> "SparseOperator":
        return cls.from_scipy(sp.identity(n, format="csr"))

    def to_scipy(self) -> sp.csr_matrix:
        return self.csr.copy()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return int(self.row_offsets[-1])

    @cached_property
    def csr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.weights, self.col_indices, self.row_offsets), shape=self.shape)

    def with_weights(self, weights: np.ndarray) -> "SparseOperator":
        return SparseOperator(self.rows, self.cols, self.row_offsets, self.col_indices, weights)

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.weights >= 0))

    def norm_estimate(self, iterations: int = 30) -> float:
        """
        Estimate the spectral norm by power iteration on A^T A.
        """
        if self.nnz == 0:
            return 0.0
        x = np.ones(self.cols) / np.sqrt(self.cols)
        estimate = 0.0
        for _ in range(iterations):
            y = sparse_apply_adjoint(self, sparse_apply(self, x))
            norm = np.linalg.norm(y)
            if norm == 0:
                return 0.0
            estimate = np.sqrt(norm)
            x = y / norm
        return float(estimate)


def sparse_apply(a: SparseOperator, x: np.ndarray) -> np.ndarray:
    """
    Compute y = A x.

    Parameters
    ----------
        a : SparseOperator
            The operator.

        x : ndarray
            Vector with a.cols entries.

    Returns
    -------
    Vector with a.rows entries.

    """

    x = np.asarray(x)
    if x.shape != (a.cols,):
        raise ValueError(f"dimension mismatch: operator has {a.cols} columns, vector has shape {x.shape}")
    return a.csr @ x


def sparse_apply_adjoint(a: SparseOperator, y: np.ndarray) -> np.ndarray:
    """
    Compute x = A^T y.
    """

    y = np.asarray(y)
    if y.shape != (a.rows,):
        raise ValueError(f"dimension mismatch: operator has {a.rows} rows, vector has shape {y.shape}")
    return a.csr.T @ y
