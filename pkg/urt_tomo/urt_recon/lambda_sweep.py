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
This file contains the sweep over regularization weights.

"""

import dataclasses
import logging
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from urt_tomo.urt_model.types import Image
from urt_tomo.urt_phantom.metrics import delta_error
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem, ReconstructionMethod

__all__ = ["DEFAULT_LAMBDAS", "lambda_sweep"]

DEFAULT_LAMBDAS = np.logspace(-4.0, 2.0, 13)


def lambda_sweep(
    method: ReconstructionMethod,
    problem: ReconProblem,
    truth: Optional[Image],
    cfg: ReconConfig,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
) -> Tuple[pd.DataFrame, float]:
    """
    Reconstruct for every weight and select the one with the smallest error.

    Parameters
    ----------
        method : ReconstructionMethod
            Method to run.

        problem : ReconProblem
            Operator and data.

        truth : Image
            True image; without it no selection takes place and the
            weight of cfg is returned.

        cfg : ReconConfig
            Base configuration; only lambda varies.

        lambdas : sequence of float
            Weights to try, 13 logarithmically spaced values in
            [1e-4, 1e2] by default.

    Returns
    -------
    Data frame with columns lambda, delta, objective, iterations, flag and
    the selected weight.

    """

    rows = []
    for lam in lambdas:
        result = method.reconstruct(problem, dataclasses.replace(cfg, lam=float(lam)))
        delta = delta_error(result.image, truth) if truth is not None else np.nan
        objective = float(result.log["objective"].iloc[-1]) if len(result.log) else np.nan
        rows.append((float(lam), delta, objective, result.iterations, result.flag))
        logging.info("lambda %.3e: delta %.4f after %d iterations (%s)", lam, delta, result.iterations, result.flag)
    table = pd.DataFrame(rows, columns=["lambda", "delta", "objective", "iterations", "flag"])
    if truth is None:
        return table, cfg.lam
    best = float(table.loc[table["delta"].idxmin(), "lambda"])
    logging.info("selected lambda %.3e", best)
    return table, best
