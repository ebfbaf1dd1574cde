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
This file contains the binary cache of assembled operators.

Layout, little endian: the 8 byte magic, rows, cols and nnz as 64 bit
integers, then row_offsets and col_indices as 64 bit integers and the
weights as 64 bit floats.

"""

import logging
import os

import numpy as np

from urt_tomo.urt_io.constants import OPERATOR_FLOAT, OPERATOR_INT, OPERATOR_MAGIC
from urt_tomo.urt_model.types import SparseOperator

__all__ = ["write_operator_cache", "read_operator_cache"]


def write_operator_cache(a: SparseOperator, path: str) -> None:
    """
    Write an operator to a cache file; the file appears atomically.
    """
    partial = path + ".partial"
    with open(partial, "wb") as outfile:
        outfile.write(OPERATOR_MAGIC)
        outfile.write(np.array([a.rows, a.cols, a.nnz], dtype=OPERATOR_INT).tobytes())
        outfile.write(a.row_offsets.astype(OPERATOR_INT).tobytes())
        outfile.write(a.col_indices.astype(OPERATOR_INT).tobytes())
        outfile.write(a.weights.astype(OPERATOR_FLOAT).tobytes())
    os.replace(partial, path)
    logging.debug("cached operator with %d non-zeros in %s", a.nnz, path)


def read_operator_cache(path: str) -> SparseOperator:
    """
    Read an operator cache file.

    Raises
    ------
    ValueError
        If the file is not an operator cache or is truncated.

    """

    with open(path, "rb") as infile:
        magic = infile.read(len(OPERATOR_MAGIC))
        if magic != OPERATOR_MAGIC:
            raise ValueError(f"{path} is not an operator cache file")
        dims = np.frombuffer(infile.read(24), dtype=OPERATOR_INT)
        if dims.size != 3:
            raise ValueError(f"operator cache {path} is truncated")
        rows, cols, nnz = (int(v) for v in dims)
        row_offsets = np.frombuffer(infile.read(8 * (rows + 1)), dtype=OPERATOR_INT)
        col_indices = np.frombuffer(infile.read(8 * nnz), dtype=OPERATOR_INT)
        weights = np.frombuffer(infile.read(8 * nnz), dtype=OPERATOR_FLOAT)
    if row_offsets.size != rows + 1 or col_indices.size != nnz or weights.size != nnz:
        raise ValueError(f"operator cache {path} is truncated")
    return SparseOperator(rows, cols, row_offsets.astype(np.int64), col_indices.astype(np.int64), weights.astype(float))
