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
This file contains the error measures comparing reconstructions with the
true phantom.

"""

import numpy as np

from urt_tomo.urt_model.types import Image

__all__ = ["normalize_max", "delta_error", "reflection_correlation"]


def normalize_max(values: np.ndarray) -> np.ndarray:
    """
    Scale values to maximal magnitude one; a zero array stays zero.
    """
    values = np.asarray(values, dtype=float)
    peak = np.max(np.abs(values)) if values.size else 0.0
    return values / peak if peak > 0 else values.copy()


def _check_grids(x_rec: Image, x_true: Image) -> None:
    if x_rec.grid != x_true.grid:
        raise ValueError(f"images live on different grids, m={x_rec.grid.m} and m={x_true.grid.m}")


def delta_error(x_rec: Image, x_true: Image) -> float:
    """
    Relative least squares error on the upper half plane.

    Both images are normalised to maximum one and compared on the rows
    with x2 > 0 only, so that the mirror artefact in the lower half does
    not count.

    Parameters
    ----------
        x_rec : Image
            Reconstruction.

        x_true : Image
            True phantom.

    Returns
    -------
    delta = ||x_rec - x_true|| / ||x_true|| on the upper half plane.

    Raises
    ------
    ValueError
        If the grids differ or the true image vanishes on the upper half.

    """

    _check_grids(x_rec, x_true)
    upper = x_true.grid.upper_rows()
    truth = x_true.as_matrix()[upper, :]
    estimate = x_rec.as_matrix()[upper, :]
    if not np.any(truth != 0):
        raise ValueError("the true image vanishes on the upper half plane")
    truth = normalize_max(truth)
    estimate = normalize_max(estimate)
    return float(np.linalg.norm(estimate - truth) / np.linalg.norm(truth))


def reflection_correlation(x_rec: Image, x_true: Image) -> float:
    """
    Correlation coefficient between the lower half of a reconstruction and
    the true phantom mirrored into the lower half.
    """
    _check_grids(x_rec, x_true)
    lower = x_true.grid.row_x2() < 0
    estimate = x_rec.as_matrix()[lower, :].reshape(-1)
    mirrored = x_true.reflect_x2().as_matrix()[lower, :].reshape(-1)
    if np.std(estimate) == 0 or np.std(mirrored) == 0:
        return 0.0
    return float(np.corrcoef(estimate, mirrored)[0, 1])
