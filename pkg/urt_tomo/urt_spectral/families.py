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
This file contains the kernels of the generalized curve transforms and
the registry of named kernel families used by the command line tool.

"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec
from urt_tomo.urt_radon.curves import NuFunction, make_nu, nu_derivative
from urt_tomo.urt_spectral.kernels import (
    cos_sqrt,
    ellipse_kernel_spec,
    sphere_factor,
    spherical_means_profile_spec,
    surface_nd_spec,
)

__all__ = ["generalized_kernel", "check_nu_diagonal", "KernelFamily", "KERNEL_FAMILIES", "build_kernel_family"]


def generalized_kernel(
    q: int,
    nu: NuFunction,
    n: int,
    xi_mag: float,
    nu_domega: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    name: str = "generalized",
) -> AbelKernelSpec:
    """
    Abel kernel of the transform over the curves r(p, w) = (p - w)^(q/2) nu(p, w).

    The kernel is K1 K2 K3 with the sphere factor K1 at
    z = |xi| (p - w)^(q/2) nu (2 cos z for n = 2), K2 = nu^(n - 2) and
    K3 = sqrt((p - w) + ((p - w) nu_w - nu / 2)^2) for q = 1 or
    K3 = sqrt(1 + (p - w)^(q - 2) ((p - w) nu_w - (q / 2) nu)^2) for q >= 2.
    The exponent is alpha = (n - 3) / 2 for q = 1 and (q / 2)(n - 2) otherwise.

    Parameters
    ----------
        q : int
            Curve exponent.

        nu : callable
            Shape function nu(p, w), non-zero on the diagonal.

        n : int
            Space dimension, at least 2.

        xi_mag : float
            Frequency magnitude.

        nu_domega : callable
            Optional analytic w-derivative of nu.

    Returns
    -------
    AbelKernelSpec with orientation j = 0.

    """

    if int(q) != q or q < 1:
        raise ValueError(f"exponent q must be a positive integer, got {q}")
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    exponent = q / 2.0
    alpha = (n - 3) / 2.0 if q == 1 else exponent * (n - 2)
    derivative = nu_domega if nu_domega is not None else (lambda p, w: nu_derivative(nu, p, w))

    def kernel(p, omega):
        p = np.asarray(p, dtype=float)
        omega = np.asarray(omega, dtype=float)
        distance = p - omega
        shape = nu(p, omega)
        z2 = xi_mag * xi_mag * distance ** int(q) * shape * shape
        if n == 2:
            k1 = 2.0 * cos_sqrt(1.0, z2)
        else:
            k1 = sphere_factor(n, z2)
        k2 = shape ** (n - 2)
        slope = distance * derivative(p, omega)
        if q == 1:
            k3 = np.sqrt(distance + (slope - 0.5 * shape) ** 2)
        else:
            k3 = np.sqrt(1.0 + distance ** int(q - 2) * (slope - exponent * shape) ** 2)
        return k1 * k2 * k3

    return AbelKernelSpec.from_alpha(0, alpha, kernel, name=name)


def check_nu_diagonal(nu: NuFunction, a: float, b: float, samples: int = 65) -> None:
    """
    Raise ValueError if nu(p, p) vanishes somewhere on [a, b].
    """
    p = np.linspace(a, b, samples)
    values = np.abs(nu(p, p))
    if not np.all(np.isfinite(values)) or np.any(values <= 1e-10 * max(np.max(values), 1.0)):
        raise ValueError(f"shape function vanishes on the diagonal of [{a}, {b}]")


@dataclass
class KernelFamily(object):
    """
    Dataclass naming an Abel kernel family and its parameters.

    Parameters
    ----------
        family : str
            Name registered in KERNEL_FAMILIES.

        alpha : float
            Exponent of the families with a free exponent.

        j : int
            Orientation of the families with a free orientation.

        params : dict
            Further family parameters, e.g. s, xi, n, l, h, d, c.
    """

    family: str = "sqrt_sum"
    alpha: float = 0.5
    j: int = 0
    params: dict = field(default_factory=dict)

    @classmethod
    def from_payload(cls, payload: dict):
        return cls(
            family=payload.get("family", "sqrt_sum"),
            alpha=float(payload.get("alpha", 0.5)),
            j=int(payload.get("j", 0)),
            params=dict(payload.get("params", {})),
        )

    def to_kernel_spec(self) -> AbelKernelSpec:
        return build_kernel_family(self)


def _simple(kernel):
    def build(family: KernelFamily) -> AbelKernelSpec:
        return AbelKernelSpec.from_alpha(family.j, family.alpha, kernel, name=family.family)

    return build


def _ellipse2d(family: KernelFamily) -> AbelKernelSpec:
    params = family.params
    return ellipse_kernel_spec(family.j, float(params.get("s", 2.0)), float(params.get("xi", 0.0)))


def _surface_nd(family: KernelFamily) -> AbelKernelSpec:
    params = family.params
    return surface_nd_spec(family.j, float(params.get("s", 2.0)), float(params.get("xi", 0.0)), int(params.get("n", 3)))


def _spherical_means(family: KernelFamily) -> AbelKernelSpec:
    params = family.params
    return spherical_means_profile_spec(int(params.get("l", 0)), int(params.get("n", 3)))


def _generalized(name: str, keys):
    def build(family: KernelFamily) -> AbelKernelSpec:
        params = family.params
        nu = make_nu(name, **{key: float(params[key]) for key in keys if key in params})
        return generalized_kernel(
            int(params.get("q", 1)), nu, int(params.get("n", 2)), float(params.get("xi", 0.0)), name=name
        )

    return build


KERNEL_FAMILIES = {
    "one": _simple(lambda p, w: np.ones(np.broadcast(p, w).shape)),
    "sum": _simple(lambda p, w: p + w),
    "sqrt_sum": _simple(lambda p, w: np.sqrt(p + w)),
    "ellipse2d": _ellipse2d,
    "surface_nd": _surface_nd,
    "spherical_means": _spherical_means,
    "sar": _generalized("sar", ("h", "d")),
    "spheroid": _generalized("spheroid", ("c",)),
    "cst": _generalized("cst", ()),
    "teardrop": _generalized("teardrop", ()),
    "ellipse_generalized": _generalized("ellipse", ("s",)),
}


def build_kernel_family(family: KernelFamily) -> AbelKernelSpec:
    """
    Create the Abel kernel of a named family.
    """
    if family.family not in KERNEL_FAMILIES:
        raise ValueError(f"unknown kernel family '{family.family}', expected one of {sorted(KERNEL_FAMILIES)}")
    return KERNEL_FAMILIES[family.family](family)
