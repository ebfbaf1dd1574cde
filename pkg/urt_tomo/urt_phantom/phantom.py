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
This file contains the phantom definitions and their rasterisation.

Three kinds are available: an annulus, a sum of random axis aligned
ellipses and a smooth compact bump. All of them live in the upper half
plane x2 > 0 of the image.

"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from urt_tomo.urt_model.rng import STREAM_PHANTOM, make_generator
from urt_tomo.urt_model.types import Image, ImageGrid

__all__ = ["PHANTOM_KINDS", "AnnulusSpec", "EllipseSetSpec", "BumpSpec", "PhantomSpec", "make_phantom"]

PHANTOM_KINDS = ("annulus", "ellipses", "smooth_bump")


def _pair(value, name: str) -> Tuple[float, float]:
    values = tuple(float(v) for v in value)
    if len(values) != 2:
        raise ValueError(f"{name} needs two values, got {value}")
    return values


@dataclass
class AnnulusSpec(object):
    """
    Annulus r_inner <= |x - center| <= r_outer; r_inner = 0 gives a disk.
    """

    center: Tuple[float, float] = (0.0, 1.0)
    r_inner: float = 0.0
    r_outer: float = 1.0

    def __post_init__(self):
        self.center = _pair(self.center, "annulus center")
        if not 0.0 <= self.r_inner < self.r_outer:
            raise ValueError(f"annulus needs 0 <= r_inner < r_outer, got {self.r_inner}, {self.r_outer}")

    @classmethod
    def from_payload(cls, payload: dict, m: int):
        return cls(
            center=payload.get("center", (0.0, m / 5.0)),
            r_inner=float(payload.get("r_inner", m / 12.0)),
            r_outer=float(payload.get("r_outer", m / 6.0)),
        )

    def to_payload(self) -> dict:
        return {"center": list(self.center), "r_inner": self.r_inner, "r_outer": self.r_outer}


@dataclass
class EllipseSetSpec(object):
    """
    Random axis aligned ellipses.

    Parameters
    ----------
        count : int
            Number of ellipses.

        seed : int
            Seed of the phantom random stream.

        center_box : tuple
            (x1_min, x1_max, x2_min, x2_max) of the uniformly drawn centres.

        axis_range : tuple
            (min, max) of the uniformly drawn semi-axes.
    """

    count: int = 20
    seed: int = 0
    center_box: Tuple[float, float, float, float] = (-1.0, 1.0, 1.0, 2.0)
    axis_range: Tuple[float, float] = (0.1, 0.5)

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 0:
            raise ValueError(f"ellipse count must be a non-negative integer, got {self.count}")
        self.count = int(self.count)
        self.center_box = tuple(float(v) for v in self.center_box)
        if len(self.center_box) != 4:
            raise ValueError(f"center box needs four values, got {self.center_box}")
        self.axis_range = _pair(self.axis_range, "axis range")
        if not 0.0 < self.axis_range[0] <= self.axis_range[1]:
            raise ValueError(f"axis range needs 0 < min <= max, got {self.axis_range}")

    @classmethod
    def from_payload(cls, payload: dict, m: int):
        return cls(
            count=int(payload.get("count", 20)),
            seed=int(payload.get("seed", 0)),
            center_box=payload.get("center_box", (-m / 3.0, m / 3.0, m / 12.0, 5.0 * m / 12.0)),
            axis_range=payload.get("axis_range", (m / 60.0, m / 12.0)),
        )

    def to_payload(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "center_box": list(self.center_box),
            "axis_range": list(self.axis_range),
        }


@dataclass
class BumpSpec(object):
    """
    Compact bump (1 - |x - center|^2 / radius^2)^3.
    """

    center: Tuple[float, float] = (0.0, 1.0)
    radius: float = 1.0

    def __post_init__(self):
        self.center = _pair(self.center, "bump center")
        if not self.radius > 0:
            raise ValueError(f"bump radius must be positive, got {self.radius}")

    @classmethod
    def from_payload(cls, payload: dict, m: int):
        return cls(center=payload.get("center", (0.0, m / 4.0)), radius=float(payload.get("radius", m / 6.0)))

    def to_payload(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}


@dataclass
class PhantomSpec(object):
    """
    Dataclass for the phantom configuration. Sub-specs that are not given
    get the defaults for the image size m.
    """

    kind: str = "annulus"
    m: int = 129
    annulus: Optional[AnnulusSpec] = None
    ellipses: Optional[EllipseSetSpec] = None
    bump: Optional[BumpSpec] = None
    grid: ImageGrid = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in PHANTOM_KINDS:
            raise ValueError(f"unknown phantom kind '{self.kind}', expected one of {PHANTOM_KINDS}")
        self.grid = ImageGrid(self.m)
        if self.annulus is None:
            self.annulus = AnnulusSpec.from_payload({}, self.m)
        if self.ellipses is None:
            self.ellipses = EllipseSetSpec.from_payload({}, self.m)
        if self.bump is None:
            self.bump = BumpSpec.from_payload({}, self.m)

    @classmethod
    def from_payload(cls, payload: dict):
        """
        Method to create the phantom configuration from a payload dictionary.

        Parameters
        ----------
            payload : dict
                Dictionary with the "phantom" section of the manifest.

        Returns
        -------
        Phantom configuration.
        """

        m = int(payload.get("m", 129))
        return cls(
            kind=payload.get("kind", "annulus"),
            m=m,
            annulus=AnnulusSpec.from_payload(payload.get("annulus", {}), m),
            ellipses=EllipseSetSpec.from_payload(payload.get("ellipses", {}), m),
            bump=BumpSpec.from_payload(payload.get("bump", {}), m),
        )

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "annulus": self.annulus.to_payload(),
            "ellipses": self.ellipses.to_payload(),
            "bump": self.bump.to_payload(),
        }


def _annulus(spec: AnnulusSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    r = np.hypot(x1 - spec.center[0], x2 - spec.center[1])
    return ((r >= spec.r_inner) & (r <= spec.r_outer)).astype(float)


def _ellipses(spec: EllipseSetSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    generator = make_generator(spec.seed, STREAM_PHANTOM)
    x1_min, x1_max, x2_min, x2_max = spec.center_box
    centres = np.column_stack(
        [generator.uniform(x1_min, x1_max, spec.count), generator.uniform(x2_min, x2_max, spec.count)]
    )
    axes = generator.uniform(spec.axis_range[0], spec.axis_range[1], (spec.count, 2))
    values = np.zeros(x1.shape)
    for (c1, c2), (a1, a2) in zip(centres, axes):
        values += (((x1 - c1) / a1) ** 2 + ((x2 - c2) / a2) ** 2 < 1.0).astype(float)
    return values


def _bump(spec: BumpSpec, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    r2 = ((x1 - spec.center[0]) ** 2 + (x2 - spec.center[1]) ** 2) / spec.radius ** 2
    return np.clip(1.0 - r2, 0.0, None) ** 3


def make_phantom(spec: PhantomSpec) -> Image:
    """
    Rasterise a phantom at the pixel centres.

    Parameters
    ----------
        spec : PhantomSpec
            Phantom configuration.

    Returns
    -------
    Image with value 1 inside the annulus, the number of covering
    ellipses for the ellipse phantom or the bump values.

    Raises
    ------
    ValueError
        If the phantom reaches the half plane x2 <= 0.

    """

    grid = spec.grid
    x1 = grid.coords()[None, :]
    x2 = grid.row_x2()[:, None]
    x1, x2 = np.broadcast_arrays(x1, x2)
    if spec.kind == "annulus":
        matrix = _annulus(spec.annulus, x1, x2)
    elif spec.kind == "ellipses":
        matrix = _ellipses(spec.ellipses, x1, x2)
    else:
        matrix = _bump(spec.bump, x1, x2)

    if np.any(matrix[~grid.upper_rows(), :] != 0):
        raise ValueError(f"{spec.kind} phantom reaches the half plane x2 <= 0")
    logging.debug("created %s phantom of size %d with %d non-zero pixels", spec.kind, spec.m, np.count_nonzero(matrix))
    return Image.from_matrix(grid, matrix)
