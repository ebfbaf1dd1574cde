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
Test resources for the forward operator tests.

"""

import numpy as np

from urt_tomo.urt_model.types import Image, ImageGrid


def get_upper_blob(grid: ImageGrid, center=(0.0, 6.0), radius: float = 4.0) -> Image:
    """
    Smooth bump supported in the upper half plane.
    """
    x1 = grid.coords()[None, :]
    x2 = grid.row_x2()[:, None]
    dist2 = ((x1 - center[0]) ** 2 + (x2 - center[1]) ** 2) / radius ** 2
    return Image.from_matrix(grid, np.where(dist2 < 1.0, (1.0 - dist2) ** 3, 0.0))


def get_odd_image(grid: ImageGrid) -> Image:
    """
    Image odd in x2.
    """
    upper = get_upper_blob(grid)
    return Image(grid, upper.values - upper.reflect_x2().values)


def get_even_image(grid: ImageGrid) -> Image:
    """
    Image even in x2.
    """
    upper = get_upper_blob(grid)
    return Image(grid, upper.values + upper.reflect_x2().values)
