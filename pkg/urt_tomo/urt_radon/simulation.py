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
This file contains the simulation of measurements: the multiplicative
perturbation of the operator weights and additive Gaussian noise.

"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from urt_tomo.urt_model.rng import STREAM_NOISE, STREAM_PERTURBATION, make_generator
from urt_tomo.urt_model.types import Grid1D, Image, Sinogram, SparseOperator, sparse_apply

__all__ = ["NoiseSpec", "perturb_matrix", "simulate_data", "forward_sinogram"]


@dataclass
class NoiseSpec(object):
    """
    Dataclass for the measurement simulation.

    Parameters
    ----------
        gamma : float
            Relative noise level, ||noise|| is about gamma ||A x||.

        epsilon : float
            Half width of the uniform multiplicative weight perturbation.

        seed : int
            Seed of the perturbation and noise streams.
    """

    gamma: float = 0.01
    epsilon: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"noise level gamma must be non-negative, got {self.gamma}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"perturbation epsilon must lie in [0, 1), got {self.epsilon}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    @classmethod
    def from_payload(cls, payload: dict):
        return cls(
            gamma=float(payload.get("gamma", 0.01)),
            epsilon=float(payload.get("epsilon", 0.05)),
            seed=int(payload.get("seed", 0)),
        )

    def to_payload(self) -> dict:
        return {"gamma": self.gamma, "epsilon": self.epsilon, "seed": self.seed}


def perturb_matrix(a: SparseOperator, epsilon: float, seed: int) -> SparseOperator:
    """
    Multiply every stored weight by an independent factor uniform in
    [1 - epsilon, 1 + epsilon]. The i-th draw belongs to the i-th stored
    entry in CSR order.

    Parameters
    ----------
        a : SparseOperator
            Operator to perturb.

        epsilon : float
            Half width of the factors, 0 <= epsilon < 1.

        seed : int
            Seed of the perturbation stream.

    Returns
    -------
    Perturbed operator with the sparsity pattern of `a`.

    """

    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"perturbation epsilon must lie in [0, 1), got {epsilon}")
    if epsilon == 0.0:
        return a.with_weights(a.weights.copy())
    factors = make_generator(seed, STREAM_PERTURBATION).uniform(1.0 - epsilon, 1.0 + epsilon, size=a.nnz)
    return a.with_weights(a.weights * factors)


def simulate_data(a_eps: SparseOperator, x: Image, noise: NoiseSpec) -> np.ndarray:
    """
    Compute b = A_eps x + gamma ||A_eps x|| / sqrt(l) eta with standard
    normal eta drawn from the noise stream.

    Returns
    -------
    Data vector; exactly A_eps x if gamma is zero.

    """

    clean = sparse_apply(a_eps, x.values)
    if noise.gamma == 0.0:
        return clean
    eta = make_generator(noise.seed, STREAM_NOISE).standard_normal(clean.size)
    scale = noise.gamma * np.linalg.norm(clean) / np.sqrt(clean.size)
    logging.debug("adding noise with standard deviation %g", scale)
    return clean + scale * eta


def forward_sinogram(a: SparseOperator, x: Image, axes: Tuple[Grid1D, Grid1D], j: int, s: float) -> Sinogram:
    """
    Apply an operator to an image and shape the result as a sinogram.
    """
    p_axis, y_axis = axes
    return Sinogram(p_axis, y_axis, sparse_apply(a, x.values), j, s)
