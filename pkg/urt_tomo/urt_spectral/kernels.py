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
This file contains the kernels of the frequency-domain Abel equations:
the factored kernels of the 2-D and n-D ellipse and hyperbola
transforms, the kernels of the spherical means transform and the special
functions they are built from.

Square roots of the form cos(c sqrt(u)) are continued analytically to
u < 0 (cosh), so that difference quotients across the diagonal p = w stay
well defined.

"""

from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn
from scipy.special import iv, jv

from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec

__all__ = [
    "h_factor_2d",
    "kernel_2d",
    "kernel_2d_unfactored",
    "ellipse_kernel_spec",
    "sphere_area",
    "alpha_n",
    "sphere_factor",
    "kernel_nd",
    "surface_nd_spec",
    "gegenbauer",
    "gegenbauer_expansion",
    "spherical_means_kernel",
    "spherical_means_lambda",
    "spherical_means_profile_spec",
]


def cos_sqrt(scale, u) -> np.ndarray:
    """
    cos(scale sqrt(u)) continued to cosh(scale sqrt(-u)) for u < 0.
    """
    u = np.asarray(u, dtype=float)
    root = np.sqrt(np.abs(u))
    negative = u < 0
    return np.where(negative, np.cosh(scale * np.where(negative, root, 0.0)), np.cos(scale * root))


def _check_triangle(j: int, p, x2) -> None:
    p = np.asarray(p, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(p <= 0) or np.any(x2 < 0):
        raise ValueError("kernel arguments must satisfy p > 0 and x2 >= 0")
    gap = (p - x2) if j == 0 else (x2 - p)
    if np.any(gap < 0):
        raise ValueError(f"kernel evaluated outside the triangle T_{j}")


def h_factor_2d(j: int, s: float, xi: float, p, x2) -> np.ndarray:
    """
    Smooth factor H_j of the 2-D kernel,
    H_j = cos(xi sqrt(s) sqrt(u)) sqrt(u + s x2^2) / sqrt(p + x2)
    with u = (-1)^j (p^2 - x2^2). On the diagonal H_j(p, p) = sqrt(s p / 2).
    """
    p = np.asarray(p, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = (-1.0) ** j * (p * p - x2 * x2)
    return cos_sqrt(xi * np.sqrt(s), u) * np.sqrt(u + s * x2 * x2) / np.sqrt(p + x2)


def kernel_2d(j: int, s: float, xi: float, p, x2) -> np.ndarray:
    """
    Kernel K_j(p, x2; xi) of the 2-D transform in factored form,
    H_j / sqrt((-1)^j (p - x2)). Infinite on the diagonal.

    Parameters
    ----------
        j : int
            0 for ellipses, 1 for hyperbolas.

        s : float
            Shape parameter.

        xi : float
            Frequency dual to y1.

        p, x2 : float or ndarray
            Points of the triangle T_j.

    Returns
    -------
    Kernel values.

    """

    _check_triangle(j, p, x2)
    with np.errstate(divide="ignore"):
        return h_factor_2d(j, s, xi, p, x2) / np.sqrt((-1.0) ** j * (np.asarray(p) - np.asarray(x2)))


def kernel_2d_unfactored(j: int, s: float, xi: float, p, x2) -> np.ndarray:
    """
    The same kernel written as cos(xi sqrt(s) sqrt(u)) times the arc
    length factor sqrt((-1)^j s p^2 / (p^2 - x2^2) + 1 - (-1)^j s).
    """
    _check_triangle(j, p, x2)
    p = np.asarray(p, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    sign = (-1.0) ** j
    u = sign * (p * p - x2 * x2)
    with np.errstate(divide="ignore"):
        arc = np.sqrt(sign * s * p * p / (p * p - x2 * x2) + 1.0 - sign * s)
    return np.cos(xi * np.sqrt(s) * np.sqrt(u)) * arc


def ellipse_kernel_spec(j: int, s: float, xi: float, branches: int = 2) -> AbelKernelSpec:
    """
    Abel kernel of the frequency-domain 2-D transform.

    Both halves x1 - y1 = +-sqrt(s (p^2 - x2^2)) contribute, hence the
    factor `branches` in front of H_j; the exponent is alpha = -1/2.
    """
    if not s > 0:
        raise ValueError(f"shape parameter s must be positive, got {s}")

    def kernel(p, x2):
        return branches * h_factor_2d(j, s, xi, p, x2)

    return AbelKernelSpec(j=j, m_int=0, beta=0.5, kernel=kernel, name=f"ellipse2d(j={j},s={s:g},xi={xi:g})")


def sphere_area(d: int) -> float:
    """
    Area of the unit sphere S^d in R^(d + 1).
    """
    if d < 0:
        raise ValueError(f"sphere dimension must be non-negative, got {d}")
    return float(2.0 * np.pi ** ((d + 1) / 2.0) / gamma_fn((d + 1) / 2.0))


@lru_cache(maxsize=None)
def _sin_power_integral(power: int) -> float:
    value, _ = quad(lambda phi: np.sin(phi) ** power, 0.0, np.pi, epsabs=1e-14, epsrel=1e-14)
    return value


@lru_cache(maxsize=None)
def alpha_n(n: int) -> float:
    """
    Angular constant of the n-D kernel: 2 for n = 3, 2 pi for n = 4 and
    2 pi prod_{i=1}^{n-4} int_0^pi sin^i for n >= 5.
    """
    if n < 3:
        raise ValueError(f"dimension must be at least 3, got {n}")
    if n == 3:
        return 2.0
    value = 2.0 * np.pi
    for power in range(1, n - 3):
        value *= _sin_power_integral(power)
    return float(value)


def _bessel_ratio(order: float, z2: np.ndarray) -> np.ndarray:
    """
    (z / 2)^(-order) J_order(z) as an entire function of z^2.
    """
    z2 = np.asarray(z2, dtype=float)
    result = np.empty(z2.shape)
    small = np.abs(z2) < 1e-12
    result[small] = 1.0 / gamma_fn(order + 1.0) - z2[small] / (4.0 * gamma_fn(order + 2.0))
    positive = (z2 > 0) & ~small
    z = np.sqrt(z2[positive])
    result[positive] = jv(order, z) * (z / 2.0) ** (-order)
    negative = (z2 < 0) & ~small
    w = np.sqrt(-z2[negative])
    result[negative] = iv(order, w) * (w / 2.0) ** (-order)
    return result


def sphere_factor(n: int, z2) -> np.ndarray:
    """
    K1 = alpha_n int_0^pi cos(z cos phi) sin^(n-3) phi dphi for z^2 = z2,
    evaluated in closed form with Bessel functions of order (n - 3) / 2.
    """
    order = (n - 3) / 2.0
    return alpha_n(n) * np.sqrt(np.pi) * gamma_fn(order + 0.5) * _bessel_ratio(order, z2)


def kernel_nd(j: int, s: float, xi_mag: float, n: int, p, omega):
    """
    Factors (K1, K2, K3) of the n-D kernel.

    K1 is the sphere factor at z = sqrt(s) |xi| sqrt((-1)^j (p^2 - w^2)),
    K2 = (p + w)^alpha with alpha = (n - 3) / 2 and
    K3 = sqrt((-1)^j (p^2 - w^2) + s w^2). The product is finite on T_j and
    equals 2^alpha A_(n-2) sqrt(s) p^(alpha + 1) on the diagonal.
    """
    if n < 3:
        raise ValueError(f"dimension must be at least 3, got {n}")
    _check_triangle(j, p, omega)
    return _kernel_nd_factors(j, s, xi_mag, n, np.asarray(p, dtype=float), np.asarray(omega, dtype=float))


def _kernel_nd_factors(j, s, xi_mag, n, p, omega):
    u = (-1.0) ** j * (p * p - omega * omega)
    k1 = sphere_factor(n, s * xi_mag * xi_mag * u)
    k2 = (p + omega) ** ((n - 3) / 2.0)
    k3 = np.sqrt(u + s * omega * omega)
    return k1, k2, k3


def surface_nd_spec(j: int, s: float, xi_mag: float, n: int) -> AbelKernelSpec:
    """
    Abel kernel of the frequency-domain n-D transform,
    s^(alpha + 1/2) K1 K2 K3 with alpha = (n - 3) / 2.
    """
    if n < 3:
        raise ValueError(f"dimension must be at least 3, got {n}")
    alpha = (n - 3) / 2.0
    prefactor = s ** (alpha + 0.5)

    def kernel(p, omega):
        k1, k2, k3 = _kernel_nd_factors(j, s, xi_mag, n, np.asarray(p), np.asarray(omega))
        return prefactor * k1 * k2 * k3

    return AbelKernelSpec.from_alpha(j, alpha, kernel, name=f"surface{n}d(j={j},s={s:g},xi={xi_mag:g})")


def gegenbauer(l: int, gamma: float, x) -> np.ndarray:
    """
    Gegenbauer polynomial C_l^gamma(x) by the three-term recurrence
    C_(k+1) = (2 x (k + gamma) C_k - (k + 2 gamma - 1) C_(k-1)) / (k + 1).
    For gamma = 0 the limit (2 / l) T_l(x) is returned (1 for l = 0).
    """
    if l < 0:
        raise ValueError(f"degree must be non-negative, got {l}")
    x = np.asarray(x, dtype=float)
    if l == 0:
        return np.ones(x.shape)
    if gamma == 0.0:
        previous, current = np.ones(x.shape), x.copy()
        for _ in range(1, l):
            previous, current = current, 2.0 * x * current - previous
        return 2.0 / l * current
    previous, current = np.ones(x.shape), 2.0 * gamma * x
    for k in range(1, l):
        previous, current = current, (2.0 * x * (k + gamma) * current - (k + 2.0 * gamma - 1.0) * previous) / (k + 1.0)
    return current


def gegenbauer_expansion(l: int, gamma: float, x) -> np.ndarray:
    """
    Gegenbauer polynomial from its explicit power sum, gamma > 0.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape)
    for k in range(l // 2 + 1):
        coeff = (-1.0) ** k * gamma_fn(l - k + gamma) / (gamma_fn(gamma) * gamma_fn(k + 1) * gamma_fn(l - 2 * k + 1))
        total += coeff * (2.0 * x) ** (l - 2 * k)
    return total


def spherical_means_kernel(l: int, n: int, s_val, r) -> np.ndarray:
    """
    K_l(s, r) = r^(alpha + 1/2) (s + r)^alpha C_l^gamma(r / s) with
    gamma = (n - 2) / 2 and alpha = (n - 3) / 2, for 0 < r <= s.
    """
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    s_val = np.asarray(s_val, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r > s_val * (1.0 + 1e-12)):
        raise ValueError("spherical means kernel needs 0 < r <= s")
    return _spherical_means_kernel(l, n, s_val, r)


def _spherical_means_kernel(l, n, s_val, r):
    gamma = (n - 2) / 2.0
    alpha = (n - 3) / 2.0
    return r ** (alpha + 0.5) * (s_val + r) ** alpha * gegenbauer(l, gamma, r / s_val)


def spherical_means_lambda(l: int, n: int) -> float:
    """
    Normalisation 2 omega_(n-1) / (omega_n C_l^gamma(1)) with omega_k the
    area of the unit sphere in R^k.
    """
    gamma = (n - 2) / 2.0
    value_at_one = float(gegenbauer(l, gamma, 1.0))
    return 2.0 * sphere_area(n - 2) / (sphere_area(n - 1) * value_at_one)


def spherical_means_profile_spec(l: int, n: int) -> AbelKernelSpec:
    """
    Abel kernel of the l-th spherical harmonic profile of the spherical
    means transform, r^gamma K_l(s, r) with alpha = (n - 3) / 2.
    """
    gamma = (n - 2) / 2.0

    def kernel(s_val, r):
        return np.asarray(r) ** gamma * _spherical_means_kernel(l, n, np.asarray(s_val), np.asarray(r))

    return AbelKernelSpec.from_alpha(0, (n - 3) / 2.0, kernel, name=f"spherical_means(l={l},n={n})")
