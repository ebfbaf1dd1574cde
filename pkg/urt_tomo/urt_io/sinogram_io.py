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
This file contains reading and writing of sinograms as CSV files.

The file starts with three header lines

    transform,<j>,<s>
    p_axis,<lo>,<hi>,<count>
    y_axis,<lo>,<hi>,<count>

followed by one line per p sample with the values along y1.

"""

import numpy as np
import pandas as pd

from urt_tomo.urt_io.constants import FLOAT_FORMAT, SINOGRAM_HEADER
from urt_tomo.urt_model.types import Grid1D, Sinogram

__all__ = ["write_sinogram_csv", "read_sinogram_csv"]


def write_sinogram_csv(sino: Sinogram, path: str) -> None:
    """
    Write a sinogram with its axes.

    Parameters
    ----------
        sino : Sinogram
            Sinogram to write.

        path : str
            Target file.

    """

    with open(path, "w", newline="") as outfile:
        outfile.write(f"{SINOGRAM_HEADER[0]},{sino.j},{sino.s!r}\n")
        for name, axis in zip(SINOGRAM_HEADER[1:], sino.axes):
            outfile.write(f"{name},{axis.lo!r},{axis.hi!r},{axis.count}\n")
        pd.DataFrame(sino.values).to_csv(outfile, header=False, index=False, float_format=FLOAT_FORMAT)


def _header_line(line: str, name: str) -> list:
    fields = line.strip().split(",")
    if not fields or fields[0] != name:
        raise ValueError(f"malformed sinogram header, expected '{name}' line, got '{line.strip()}'")
    return fields[1:]


def read_sinogram_csv(path: str) -> Sinogram:
    """
    Read a sinogram written by write_sinogram_csv.
    """
    with open(path, "r") as infile:
        lines = [infile.readline() for _ in SINOGRAM_HEADER]
    j, s = _header_line(lines[0], SINOGRAM_HEADER[0])
    axes = []
    for line, name in zip(lines[1:], SINOGRAM_HEADER[1:]):
        lo, hi, count = _header_line(line, name)
        axes.append(Grid1D(float(lo), float(hi), int(count)))
    values = pd.read_csv(path, header=None, skiprows=len(SINOGRAM_HEADER), dtype=float).to_numpy()
    if values.shape != (axes[0].count, axes[1].count):
        raise ValueError(f"sinogram file {path} holds {values.shape} values, header says {axes[0].count}x{axes[1].count}")
    return Sinogram(axes[0], axes[1], np.ascontiguousarray(values), int(j), float(s))
