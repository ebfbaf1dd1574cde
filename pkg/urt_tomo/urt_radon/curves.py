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
This file contains the integration curves of the forward operators: the
ellipses of the common offset geometry, the hyperbolas of the common
midpoint geometry and the generalized curves r(p, w) = (p - w)^(q/2) nu(p, w)
together with the named families of the shape function nu.

"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "CURVE_KINDS",
    "CurveSpec",
    "NuFunction",
    "NU_FAMILIES",
    "make_nu",
    "nu_derivative",
    "curve_points",
    "curve_length",
    "samples_for_curve",
]

CURVE_KINDS = ("ellipse", "hyperbola", "generalized")
MIN_SAMPLES = 16
SAMPLES_PER_CELL = 8

NuFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _nu_ellipse(s: float = 2.0) -> NuFunction:
    return lambda p, w: np.sqrt(s) * np.sqrt(p + w)


def _nu_sar(h: float = 1.0, d: float = 1.0) -> NuFunction:
    return lambda p, w: np.sqrt(p + w) * np.sqrt((p ** 2 + h ** 2) / (p ** 2 + h ** 2 + d ** 2))


def _nu_spheroid(c: float = 0.5) -> NuFunction:
    return lambda p, w: np.sqrt(p + w) * np.sqrt((p ** 2 - c ** 2) / p ** 2)


def _nu_cst() -> NuFunction:
    return lambda p, w: np.sqrt((p * w + 1.0) / p)


def _nu_teardrop() -> NuFunction:
    return lambda p, w: np.cos(2.0 * np.pi * (p - w))


NU_FAMILIES = {
    "ellipse": _nu_ellipse,
    "sar": _nu_sar,
    "spheroid": _nu_spheroid,
    "cst": _nu_cst,
    "teardrop": _nu_teardrop,
}


def make_nu(family: str, **params) -> NuFunction:
    """
    Create the shape function of a named curve family.

    Parameters
    ----------
        family : str
            One of "ellipse" (s), "sar" (h, d), "spheroid" (c), "cst" and
            "teardrop"; all of them use q = 1.

        params
            Family parameters.

    Returns
    -------
    Vectorised function nu(p, w).

    """

    if family not in NU_FAMILIES:
        raise ValueError(f"unknown curve family '{family}', expected one of {sorted(NU_FAMILIES)}")
    return NU_FAMILIES[family](**params)


def nu_derivative(nu: NuFunction, p, omega) -> np.ndarray:
    """
    Central difference of nu with respect to w.
    """
    step = np.finfo(float).eps ** (1.0 / 3.0) * np.maximum(1.0, np.abs(omega))
    return (nu(p, omega + step) - nu(p, omega - step)) / (2.0 * step)


@dataclass
class CurveSpec(object):
    """
    Dataclass describing the integration curves.

    Parameters
    ----------
        kind : str
            "ellipse" (j = 0), "hyperbola" (j = 1) or "generalized" (j = 0).

        j : int
            Curve orientation.

        s : float
            Shape parameter, s = 2 for the usual source-receiver offset.

        q : int
            Exponent of the generalized curves.

        family : str
            Named shape function of the generalized curves.

        params : dict
            Parameters of the named shape function.

        truncation : float
            Largest |x1 - y1| integrated along a hyperbola; the image width
            is used if omitted.
    """

    kind: str = None
    j: int = 0
    s: float = 2.0
    q: int = 1
    family: str = "ellipse"
    params: dict = field(default_factory=dict)
    truncation: Optional[float] = None
    nu: Optional[NuFunction] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind is None:
            self.kind = "ellipse" if self.j == 0 else "hyperbola"
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown curve kind '{self.kind}', expected one of {CURVE_KINDS}")
        if self.j not in (0, 1):
            raise ValueError(f"curve family j must be 0 or 1, got {self.j}")
        if self.kind == "hyperbola" and self.j != 1:
            raise ValueError("hyperbolas belong to the family j = 1")
        if self.kind in ("ellipse", "generalized") and self.j != 0:
            raise ValueError(f"{self.kind} curves belong to the family j = 0")
        if not self.s > 0:
            raise ValueError(f"shape parameter s must be positive, got {self.s}")
        if int(self.q) != self.q or self.q < 1:
            raise ValueError(f"exponent q must be a positive integer, got {self.q}")
        if self.kind == "generalized" and self.nu is None:
            self.nu = make_nu(self.family, **self.params)

    @classmethod
    def from_payload(cls, payload: dict):
        """
        Method to create the curve configuration from a payload dictionary.

        Parameters
        ----------
            payload : dict
                Dictionary with the "curve" section of the manifest.

        Returns
        -------
        Curve configuration.
        """

        return cls(
            kind=payload.get("kind", None),
            j=int(payload.get("j", 0)),
            s=float(payload.get("s", 2.0)),
            q=int(payload.get("q", 1)),
            family=payload.get("family", "ellipse"),
            params=dict(payload.get("params", {})),
            truncation=payload.get("truncation", None),
        )

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "j": self.j,
            "s": self.s,
            "q": self.q,
            "family": self.family,
            "params": dict(self.params),
            "truncation": self.truncation,
        }


def _ellipse_points(c: CurveSpec, p: float, samples: int) -> np.ndarray:
    t = c.s * p * p
    step = np.pi / samples
    phi = (np.arange(samples) + 0.5) * step
    x1 = np.sqrt(t) * np.cos(phi)
    x2 = p * np.sin(phi)
    weight = np.sqrt(t) * np.sqrt(np.sin(phi) ** 2 + np.cos(phi) ** 2 / c.s) * step
    return np.column_stack([x1, x2, weight])


def _hyperbola_limit(c: CurveSpec, p: float, truncation: float, x2_max: Optional[float]) -> float:
    root_t = np.sqrt(c.s) * p
    limit = np.arcsinh(truncation / root_t)
    if x2_max is not None and x2_max > p:
        limit = min(limit, np.arccosh(x2_max / p))
    return float(limit)


def _hyperbola_points(c: CurveSpec, p: float, samples: int, truncation: float, x2_max: Optional[float]) -> np.ndarray:
    root_t = np.sqrt(c.s) * p
    limit = _hyperbola_limit(c, p, truncation, x2_max)
    step = 2.0 * limit / samples
    u = -limit + (np.arange(samples) + 0.5) * step
    x1 = root_t * np.sinh(u)
    x2 = p * np.cosh(u)
    weight = root_t * np.sqrt(np.cosh(u) ** 2 + np.sinh(u) ** 2 / c.s) * step
    return np.column_stack([x1, x2, weight])


def _generalized_points(c: CurveSpec, p: float, samples: int) -> np.ndarray:
    # w = p (1 - tau^2) keeps the arc element bounded at the apex
    exponent = c.q / 2.0
    step = 1.0 / samples
    tau = (np.arange(samples) + 0.5) * step
    omega = p * (1.0 - tau ** 2)
    distance = p * tau ** 2
    nu = c.nu(p, omega)
    radius = distance ** exponent * nu
    domega = -2.0 * p * tau
    dradius = 2.0 * exponent * p ** exponent * tau ** (2.0 * exponent - 1.0) * nu
    dradius = dradius + distance ** exponent * nu_derivative(c.nu, p, omega) * domega
    weight = np.sqrt(domega ** 2 + dradius ** 2) * step
    return np.column_stack(
        [np.concatenate([radius, -radius]), np.concatenate([omega, omega]), np.concatenate([weight, weight])]
    )


def curve_points(
    c: CurveSpec,
    p: float,
    y1: float,
    samples: int,
    truncation: Optional[float] = None,
    x2_max: Optional[float] = None,
) -> np.ndarray:
    """
    Sample the upper half of an integration curve.

    Parameters
    ----------
        c : CurveSpec
            Curve family.

        p : float
            Curve parameter, p > 0.

        y1 : float
            Centre of the curve on the x1 axis.

        samples : int
            Number of quadrature nodes (per branch for generalized curves).

        truncation : float
            Largest |x1 - y1| on a hyperbola.

        x2_max : float
            Largest x2 of interest on a hyperbola.

    Returns
    -------
    Array with columns (x1, x2, arc_weight); the weights sum to the arc
    length of the sampled part.

    """

    if not p > 0:
        raise ValueError(f"curve parameter p must be positive, got {p}")
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    if c.kind == "ellipse":
        points = _ellipse_points(c, p, samples)
    elif c.kind == "hyperbola":
        limit = truncation if truncation is not None else c.truncation
        if limit is None:
            raise ValueError("hyperbolas need a truncation")
        points = _hyperbola_points(c, p, samples, float(limit), x2_max)
    else:
        points = _generalized_points(c, p, samples)
    points[:, 0] += y1
    return points


def curve_length(c: CurveSpec, p: float, truncation: Optional[float] = None, x2_max: Optional[float] = None) -> float:
    return float(curve_points(c, p, 0.0, 256, truncation, x2_max)[:, 2].sum())


def samples_for_curve(
    c: CurveSpec, p: float, spacing: float, truncation: Optional[float] = None, x2_max: Optional[float] = None
) -> int:
    """
    Number of quadrature nodes giving about eight nodes per pixel.
    """
    length = curve_length(c, p, truncation, x2_max)
    samples = max(MIN_SAMPLES, int(np.ceil(SAMPLES_PER_CELL * length / spacing)))
    if c.kind == "generalized":
        samples = max(MIN_SAMPLES, samples // 2)
    return samples
