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
This file contains the interface class for all reconstruction methods and
the types they share.

"""

from abc import ABC
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from urt_tomo.urt_model.types import Grid1D, Image, ImageGrid, SparseOperator
from urt_tomo.urt_spectral.inversion import SpectralOptions

__all__ = ["TV_NORMS", "LOG_COLUMNS", "ReconConfig", "ReconProblem", "ReconResult", "ReconstructionMethod"]

TV_NORMS = ("isotropic", "global")
LOG_COLUMNS = ["iter", "objective", "residual", "step"]


@dataclass
class ReconConfig(object):
    """
    Dataclass for the reconstruction configuration.

    Parameters
    ----------
        lam : float
            Regularization weight lambda >= 0 (manifest key "lambda").

        beta_smooth : float
            Smoothing of the total variation.

        max_iters : int
            Iteration budget.

        tol : float
            Relative stopping tolerance.

        nonneg : bool
            Project the iterates of the TV solver onto x >= 0.

        seed : int
            Seed of the random streams used by the run.

        tv_norm : str
            "isotropic" sums the smoothed gradient magnitude per pixel,
            "global" takes one square root of the whole gradient norm.

        normalize : bool
            Solve the TV problem for an image of unit scale.
    """

    lam: float = 0.01
    beta_smooth: float = 1e-3
    max_iters: int = 200
    tol: float = 1e-6
    nonneg: bool = True
    seed: int = 0
    tv_norm: str = "global"
    normalize: bool = True

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lambda must be non-negative, got {self.lam}")
        if not self.beta_smooth > 0:
            raise ValueError(f"beta_smooth must be positive, got {self.beta_smooth}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")
        self.max_iters = int(self.max_iters)
        if not self.tol >= 0:
            raise ValueError(f"tol must be non-negative, got {self.tol}")
        if self.tv_norm not in TV_NORMS:
            raise ValueError(f"unknown TV norm '{self.tv_norm}', expected one of {TV_NORMS}")

    @classmethod
    def from_payload(cls, payload: dict):
        """
        Method to create the reconstruction configuration from a payload dictionary.

        Parameters
        ----------
            payload : dict
                Dictionary with the "recon" section of the manifest.

        Returns
        -------
        Reconstruction configuration.
        """

        return cls(
            lam=float(payload.get("lambda", 0.01)),
            beta_smooth=float(payload.get("beta_smooth", 1e-3)),
            max_iters=int(payload.get("max_iters", 200)),
            tol=float(payload.get("tol", 1e-6)),
            nonneg=bool(payload.get("nonneg", True)),
            seed=int(payload.get("seed", 0)),
            tv_norm=payload.get("tv_norm", "global"),
            normalize=bool(payload.get("normalize", True)),
        )

    def to_payload(self) -> dict:
        return {
            "lambda": self.lam,
            "beta_smooth": self.beta_smooth,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "nonneg": self.nonneg,
            "seed": self.seed,
            "tv_norm": self.tv_norm,
            "normalize": self.normalize,
        }


@dataclass
class ReconProblem(object):
    """
    Everything a reconstruction method may need: the (perturbed) operator,
    the data, the image grid and, for the spectral method, the sinogram
    axes and the support band.
    """

    operator: SparseOperator
    data: np.ndarray
    grid: ImageGrid
    sino_axes: Optional[Tuple[Grid1D, Grid1D]] = None
    j: int = 0
    s: float = 2.0
    band: Optional[Tuple[float, float]] = None
    spectral: Optional[SpectralOptions] = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.shape != (self.operator.rows,):
            raise ValueError(f"data must have {self.operator.rows} entries, got shape {self.data.shape}")
        if self.operator.cols != self.grid.size:
            raise ValueError(f"operator has {self.operator.cols} columns, image has {self.grid.size} pixels")


@dataclass
class ReconResult(object):
    """
    Result of a reconstruction with its iteration log.

    The flag is "converged", "max_iters", "breakdown", "line_search" or
    "frequencies_discarded".
    """

    image: Image
    log: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=LOG_COLUMNS))
    flag: str = "converged"
    iterations: int = 0

    @staticmethod
    def make_log(rows: List[Tuple[int, float, float, float]]) -> pd.DataFrame:
        return pd.DataFrame(rows, columns=LOG_COLUMNS)


class ReconstructionMethod(ABC):
    """
    Base class for all reconstruction methods
    """

    def __init__(self, identifier: str, name: str) -> None:
        """
        Setup the identifier and name of the method.

        Parameters
        ----------
            identifier : str
                Identifier used on the command line and in manifests.

            name : str
                Human readable name of the method.
        """

        self.identifier = identifier
        self.name = name

    def reconstruct(self, problem: ReconProblem, cfg: ReconConfig) -> ReconResult:
        """
        Prototype to reconstruct an image from the data of a problem.

        Parameters
        ----------
            problem : ReconProblem
                Operator, data and geometry.

            cfg : ReconConfig
                Regularization and iteration parameters.

        Returns
        -------
        Reconstruction with iteration log and termination flag.

        """

        raise NotImplementedError
