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
Test resources for the reconstruction tests.

"""

import numpy as np
import scipy.sparse as sp

from urt_tomo.urt_model.rng import STREAM_TEST, make_generator
from urt_tomo.urt_model.types import Image, ImageGrid, SparseOperator


def get_random_operator(rows: int, cols: int, density: float = 0.2, seed: int = 0) -> SparseOperator:
    """
    Create a random sparse operator with non-negative weights.
    """
    rng = make_generator(seed, STREAM_TEST)
    dense = rng.uniform(0.0, 1.0, size=(rows, cols))
    dense[rng.uniform(size=(rows, cols)) > density] = 0.0
    return SparseOperator.from_scipy(dense)


def get_stacked_operator(m: int, density: float = 0.005, seed: int = 0) -> SparseOperator:
    """
    Well conditioned operator [I; R] with a random sparse block R.
    """
    n = m * m
    block = get_random_operator(n, n, density, seed).csr
    return SparseOperator.from_scipy(sp.vstack([sp.identity(n, format="csr"), block]))


def get_disk(grid: ImageGrid, center=(0.0, 6.0), radius: float = 4.0) -> Image:
    """
    Indicator of a disk in the upper half plane.
    """
    x1 = grid.coords()[None, :]
    x2 = grid.row_x2()[:, None]
    inside = (x1 - center[0]) ** 2 + (x2 - center[1]) ** 2 <= radius ** 2
    return Image.from_matrix(grid, inside.astype(float))


def get_random_vector(size: int, seed: int = 1) -> np.ndarray:
    return make_generator(seed, STREAM_TEST).uniform(0.0, 1.0, size)
