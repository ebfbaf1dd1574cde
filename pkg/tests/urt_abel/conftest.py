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
Test resources for the Abel solver tests.

"""

import numpy as np

from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec


def kernel_one(p, omega):
    return np.ones(np.broadcast(p, omega).shape)


def kernel_sum(p, omega):
    return p + omega


def kernel_sqrt_sum(p, omega):
    return np.sqrt(p + omega)


KERNELS = {"one": kernel_one, "sum": kernel_sum, "sqrt_sum": kernel_sqrt_sum}


def get_profile(x: np.ndarray) -> np.ndarray:
    """
    Smooth positive test profile.
    """
    return 2.0 + np.sin(3.0 * x)


def get_spec(alpha: float, j: int, kernel: str = "sqrt_sum") -> AbelKernelSpec:
    """
    Create an Abel kernel spec from a named test kernel.
    """
    return AbelKernelSpec.from_alpha(j, alpha, KERNELS[kernel], name=kernel)


def relative_l2(estimate: np.ndarray, truth: np.ndarray) -> float:
    return float(np.linalg.norm(estimate - truth) / np.linalg.norm(truth))
