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
This file contains the numerical differentiation of sampled profiles.

"""

import logging

import numpy as np
from scipy.signal import savgol_filter

from urt_tomo.urt_model.types import Grid1D

__all__ = ["differentiate_m", "smooth_profile"]

SMOOTHING_WINDOW = 7
SMOOTHING_ORDER = 3


def smooth_profile(values: np.ndarray, window: int = SMOOTHING_WINDOW, polyorder: int = SMOOTHING_ORDER) -> np.ndarray:
    """
    Savitzky-Golay smoothing; complex profiles are smoothed per component.
    """

    values = np.asarray(values)
    if values.size < window:
        logging.debug("profile with %d samples is shorter than the smoothing window", values.size)
        return values
    if np.iscomplexobj(values):
        return smooth_profile(values.real, window, polyorder) + 1j * smooth_profile(values.imag, window, polyorder)
    return savgol_filter(values, window, polyorder, mode="interp")


def differentiate_m(g: np.ndarray, m_int: int, grid: Grid1D, smooth: bool = False) -> np.ndarray:
    """
    Approximate the m_int-th derivative of a sampled profile.

    Second order central differences are used in the interior and second
    order one-sided differences on both ends. Optionally the profile is
    smoothed before each differentiation.

    Parameters
    ----------
        g : ndarray
            Samples on the grid, real or complex.

        m_int : int
            Derivative order, at least 1.

        grid : Grid1D
            Uniform grid of the samples.

        smooth : bool
            Apply Savitzky-Golay smoothing before each step.

    Returns
    -------
    Samples of the derivative on the same grid.

    """

    if m_int < 1:
        raise ValueError(f"derivative order must be at least 1, got {m_int}")
    g = np.asarray(g)
    if g.shape != (grid.count,):
        raise ValueError(f"profile must have {grid.count} samples, got shape {g.shape}")
    if grid.count < 2 * m_int + 3:
        raise ValueError(f"grid with {grid.count} samples is too coarse for a derivative of order {m_int}")

    result = g
    for _ in range(m_int):
        if smooth:
            result = smooth_profile(result)
        result = np.gradient(result, grid.spacing, edge_order=2)
    return result
