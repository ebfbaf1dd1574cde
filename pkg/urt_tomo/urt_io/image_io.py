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
This file contains reading and writing of images as PGM and CSV files.

PGM files hold the values linearly quantised from [0, max] to
[0, 65535]; negative values are clipped. CSV files are lossless and
hold one line per image row, row 0 (largest x2) first.

"""

import logging

import numpy as np
import pandas as pd
from PIL import Image as PilImage

from urt_tomo.urt_io.constants import FLOAT_FORMAT, PGM_FORMATS, PGM_MAXVAL
from urt_tomo.urt_model.types import Image, ImageGrid

__all__ = ["quantize", "write_pgm", "read_pgm", "write_image_csv", "read_image_csv"]


def quantize(values: np.ndarray) -> np.ndarray:
    """
    Map [0, max(values)] linearly onto the integers [0, 65535].
    """
    values = np.clip(np.asarray(values, dtype=float), 0.0, None)
    peak = values.max() if values.size else 0.0
    if not peak > 0:
        return np.zeros(values.shape, dtype=np.int32)
    return np.rint(values / peak * PGM_MAXVAL).astype(np.int32)


def write_pgm(image: Image, path: str, fmt: str = "P5") -> None:
    """
    Write an image as 16 bit PGM.

    Parameters
    ----------
        image : Image
            Image to write.

        path : str
            Target file.

        fmt : str
            "P5" (binary) or "P2" (ASCII).

    """

    if fmt not in PGM_FORMATS:
        raise ValueError(f"unknown PGM format '{fmt}', expected one of {PGM_FORMATS}")
    levels = quantize(image.as_matrix())
    m = image.grid.m
    if fmt == "P5":
        PilImage.fromarray(levels).save(path, format="PPM")
    else:
        # Pillow only writes the binary variant
        with open(path, "w") as outfile:
            outfile.write(f"P2\n{m} {m}\n{PGM_MAXVAL}\n")
            for row in levels:
                outfile.write(" ".join(str(level) for level in row) + "\n")
    logging.debug("wrote %s image of size %d to %s", fmt, m, path)


def read_pgm(path: str, scale: float = 1.0) -> Image:
    """
    Read a square PGM image; the values are mapped to [0, scale].
    """
    with PilImage.open(path) as pgm:
        levels = np.asarray(pgm, dtype=float)
        maxval = PGM_MAXVAL if pgm.mode.startswith("I") else 255
    if levels.ndim != 2 or levels.shape[0] != levels.shape[1]:
        raise ValueError(f"expected a square grey image in {path}, got shape {levels.shape}")
    return Image.from_matrix(ImageGrid(levels.shape[0]), levels / maxval * scale)


def write_image_csv(image: Image, path: str) -> None:
    pd.DataFrame(image.as_matrix()).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)


def read_image_csv(path: str) -> Image:
    """
    Read an image written by write_image_csv.
    """
    matrix = pd.read_csv(path, header=None, dtype=float).to_numpy()
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"image file {path} is not square, got shape {matrix.shape}")
    return Image.from_matrix(ImageGrid(matrix.shape[0]), matrix)
