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
This file contains reading and writing of one-dimensional profiles, the
data and solutions of Abel equations, as CSV files with a header line.

"""

from typing import Dict

import numpy as np
import pandas as pd

from urt_tomo.urt_io.constants import FLOAT_FORMAT, PROFILE_AXIS, PROFILE_DATA
from urt_tomo.urt_model.types import Grid1D

__all__ = ["read_profile_csv", "write_profile_csv"]


def read_profile_csv(path: str, grid: Grid1D) -> np.ndarray:
    """
    Read profile samples on a grid.

    The column "g" is read if present, the last column otherwise. A "p"
    column, if present, must hold the grid samples.

    Parameters
    ----------
        path : str
            CSV file with a header line.

        grid : Grid1D
            Grid the samples belong to.

    Returns
    -------
    Profile samples.

    """

    frame = pd.read_csv(path)
    column = PROFILE_DATA if PROFILE_DATA in frame.columns else frame.columns[-1]
    values = frame[column].to_numpy(dtype=float)
    if values.size != grid.count:
        raise ValueError(f"profile file {path} holds {values.size} samples, grid has {grid.count}")
    if PROFILE_AXIS in frame.columns and PROFILE_AXIS != column:
        axis = frame[PROFILE_AXIS].to_numpy(dtype=float)
        if not np.allclose(axis, grid.samples(), rtol=1e-9, atol=1e-12):
            raise ValueError(f"sample points of {path} do not match the grid [{grid.lo}, {grid.hi}] x {grid.count}")
    return values


def write_profile_csv(path: str, grid: Grid1D, columns: Dict[str, np.ndarray], dry_run: bool = False) -> pd.DataFrame:
    """
    Write named profiles next to the grid samples.
    """
    frame = pd.DataFrame({PROFILE_AXIS: grid.samples(), **{name: np.asarray(values) for name, values in columns.items()}})
    if not dry_run:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return frame
