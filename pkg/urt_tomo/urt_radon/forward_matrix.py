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
This file contains the assembly of the sparse forward operators.

Each curve is sampled once per p relative to y1 = 0 and shifted along
x1 for every sinogram column. Every sample deposits its arc weight
bilinearly onto the four surrounding pixel centres.

"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from urt_tomo.urt_model.types import Grid1D, ImageGrid, SparseOperator
from urt_tomo.urt_radon.curves import CurveSpec, curve_points, samples_for_curve

__all__ = ["default_sinogram_axes", "build_forward_matrix"]


def default_sinogram_axes(img: ImageGrid) -> Tuple[Grid1D, Grid1D]:
    """
    Sinogram axes of an m x m image.

    p takes the (m + 1) / 2 values 1, 2, ..., (m + 1) / 2. y1 runs over
    [-m, m] with 2m - 1 samples at the pixel pitch m / (m - 1) rather than
    2m even steps of 1, so every y1 shift moves a curve by a whole number of
    image columns and every column is a curve centre.
    """
    half = (img.m + 1) // 2
    return Grid1D(1.0, float(half), half), Grid1D(-float(img.m), float(img.m), 2 * img.m - 1)


def _cell_offsets(y_axis: Grid1D, spacing: float) -> np.ndarray:
    offsets = y_axis.samples() / spacing
    nearest = np.round(offsets)
    snap = np.abs(offsets - nearest) < 1e-9
    offsets[snap] = nearest[snap]
    return offsets


def _block(
    c: CurveSpec,
    p: float,
    img: ImageGrid,
    y_offsets: np.ndarray,
    two_sided: bool,
) -> sp.csr_matrix:
    m = img.m
    h = img.spacing
    half = (m - 1) / 2.0
    truncation = c.truncation if c.truncation is not None else float(m)
    x2_max = m / 2.0
    samples = samples_for_curve(c, p, h, truncation, x2_max)
    points = curve_points(c, p, 0.0, samples, truncation, x2_max)
    x1, x2, weight = points[:, 0], points[:, 1], points[:, 2]

    # fractional pixel indices; column index ascends with x1, height index with x2
    col = x1[None, :] / h + half + y_offsets[:, None]
    height = np.broadcast_to(x2[None, :] / h + half, col.shape)
    weight = np.broadcast_to(weight[None, :], col.shape)
    sino_col = np.broadcast_to(np.arange(y_offsets.size)[:, None], col.shape)

    col0 = np.floor(col).astype(np.int64)
    height0 = np.floor(height).astype(np.int64)
    fx = col - col0
    fy = height - height0

    rows, cols, values = [], [], []
    for dx, dy, share in (
        (0, 0, (1.0 - fx) * (1.0 - fy)),
        (1, 0, fx * (1.0 - fy)),
        (0, 1, (1.0 - fx) * fy),
        (1, 1, fx * fy),
    ):
        cx = col0 + dx
        cy = height0 + dy
        inside = (cx >= 0) & (cx < m) & (cy >= 0) & (cy < m) & (share > 0)
        deposit = (weight * share)[inside]
        rows.append(sino_col[inside])
        cols.append((m - 1 - cy[inside]) * m + cx[inside])
        values.append(deposit)
        if two_sided:
            rows.append(sino_col[inside])
            cols.append(cy[inside] * m + cx[inside])
            values.append(deposit)

    block = sp.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(y_offsets.size, img.size),
    )
    return block.tocsr()


def build_forward_matrix(
    c: CurveSpec,
    img: ImageGrid,
    sino_axes: Tuple[Grid1D, Grid1D] = None,
    two_sided: bool = True,
    workers: int = 1,
) -> SparseOperator:
    """
    Assemble the discrete curve integral operator.

    Parameters
    ----------
        c : CurveSpec
            Curve family.

        img : ImageGrid
            Image grid.

        sino_axes : (Grid1D, Grid1D)
            Axes of p and y1; the default axes of the image if omitted.

        two_sided : bool
            Integrate over the upper and the mirrored lower half of each
            curve (operator E_j) instead of the upper half only (R_j).

        workers : int
            Number of threads assembling blocks of p values.

    Returns
    -------
    Operator with one row per (p, y1) pair, p slowest, and one column per
    pixel in row-major order.

    """

    p_axis, y_axis = sino_axes if sino_axes is not None else default_sinogram_axes(img)
    if p_axis.lo <= 0:
        raise ValueError(f"curve parameters must be positive, got p_min={p_axis.lo}")
    started = time.perf_counter()
    y_offsets = _cell_offsets(y_axis, img.spacing)
    p_values = p_axis.samples()

    def assemble(p):
        return _block(c, float(p), img, y_offsets, two_sided)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(assemble, p_values))
    else:
        blocks = [assemble(p) for p in p_values]

    matrix = sp.vstack(blocks, format="csr")
    operator = SparseOperator.from_scipy(matrix)
    logging.info(
        "assembled %s operator with %d x %d entries and %d non-zeros in %.1f s",
        "two-sided" if two_sided else "one-sided",
        operator.rows,
        operator.cols,
        operator.nnz,
        time.perf_counter() - started,
    )
    return operator
