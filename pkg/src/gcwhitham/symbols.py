"""Fourier symbols of the nondimensional gravity-capillary Whitham operator.

The multiplier is ``m(z) = ((1 + tau z^2) tanh(z) / z)^(1/2)`` and its reciprocal
``l(z) = 1/m(z)`` is the symbol of the smoothing operator.  Both are even and
analytic in the strip ``|Im z| < eta_star = min(1/sqrt(tau), pi/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.special import bernoulli

from .errors import BranchAmbiguity, DomainError, OrderTooHigh, StripViolation

TAYLOR_RADIUS = 1e-2
TAYLOR_TERMS = 10
CAUCHY_NODES = 64

_B = bernoulli(2 * TAYLOR_TERMS + 2)
# tanh(z)/z = sum_n TANHC[n] z^(2n)
TANHC = np.array(
    [
        2 ** (2 * n) * (2 ** (2 * n) - 1) * _B[2 * n] / factorial(2 * n)
        for n in range(1, TAYLOR_TERMS + 1)
    ]
)

BRANCHES = ("C2", "C3", "C4", "Generic")


def eta_star(tau):
    """Half-width of the analyticity strip of ``m`` and ``l``."""
    if tau <= 0:
        return np.pi / 2
    return min(1.0 / np.sqrt(tau), np.pi / 2)


def c2_alpha_beta(s):
    """(alpha, beta) on the Hamiltonian-Hopf curve, parametrized by s > 0."""
    sh = np.sinh(s)
    th = np.tanh(s)
    alpha = s**2 / (2 * sh**2) + s / (2 * th)
    beta = -1.0 / (2 * sh**2) + 1.0 / (2 * s * th)
    return alpha, beta


@dataclass(frozen=True)
class SymbolParams:
    """Physical and bifurcation parameters.

    ``alpha = 1/c0^2`` and ``beta = tau/c0^2`` are derived on access.  For the
    ``C2`` branch ``s`` holds the double-root location.
    """

    tau: float
    c0: float
    mu: float = 0.0
    branch: str = "Generic"
    s: float | None = field(default=None)

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise DomainError(f"unknown branch {self.branch!r}")
        if self.tau <= 0 or self.c0 <= 0:
            raise DomainError("tau and c0 must be positive")
        if self.branch == "C3":
            if self.c0 != 1.0 or not (0 < self.tau < 1 / 3):
                raise DomainError("C3 requires c0 = 1 and 0 < tau < 1/3")
        if self.branch == "C2":
            if self.s is None or self.s <= 0:
                raise DomainError("C2 requires s > 0")
            alpha, beta = c2_alpha_beta(self.s)
            c0 = alpha**-0.5
            tau = beta * c0**2
            if abs(self.c0 - c0) > 1e-12 * c0 or abs(self.tau - tau) > 1e-12 * tau:
                raise DomainError("(tau, c0) are not on C2 at this s")

    @property
    def alpha(self):
        return 1.0 / self.c0**2

    @property
    def beta(self):
        return self.tau / self.c0**2

    @property
    def eta_star(self):
        return eta_star(self.tau)

    @property
    def c(self):
        return self.c0 + self.mu

    @classmethod
    def c3(cls, tau, mu=0.0):
        return cls(tau=float(tau), c0=1.0, mu=float(mu), branch="C3")

    @classmethod
    def c2(cls, s, mu=0.0):
        alpha, beta = c2_alpha_beta(s)
        c0 = alpha**-0.5
        return cls(tau=beta * c0**2, c0=c0, mu=float(mu), branch="C2", s=float(s))

    @classmethod
    def generic(cls, tau, c0, mu=0.0):
        return cls(tau=float(tau), c0=float(c0), mu=float(mu))

    def to_dict(self):
        return {
            "tau": self.tau,
            "c0": self.c0,
            "mu": self.mu,
            "branch": self.branch,
            "s": self.s,
            "alpha": self.alpha,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class TaylorData:
    sigma: float
    ell4_0: float
    eta_star: float


@dataclass(frozen=True)
class C2Helpers:
    a: float
    b: float
    c: float
    d: float
    e: float


def _radicand(tau, z):
    """(1 + tau z^2) tanh(z)/z with the removable singularity filled in."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < TAYLOR_RADIUS
    zb = z[~small]
    out[~small] = (1 + tau * zb**2) * np.tanh(zb) / zb
    if small.any():
        zs = z[small]
        z2 = zs**2
        # Horner on the even series of tanh(z)/z
        acc = np.zeros_like(zs)
        for coef in TANHC[::-1]:
            acc = acc * z2 + coef
        out[small] = (1 + tau * z2) * acc
    return out


def _check_strip(tau, z):
    if np.any(np.abs(np.imag(z)) >= eta_star(tau)):
        raise StripViolation(f"|Im z| must be < eta_star = {eta_star(tau):.6g}")


def m_eval(tau, z):
    """Evaluate ``m_tau`` at real or complex ``z`` (principal square root).

    Real input gives real output.  Raises ``StripViolation`` outside the strip.
    """
    real_input = np.isrealobj(z)
    zc = np.asarray(z, dtype=complex)
    _check_strip(tau, zc)
    rad = _radicand(tau, zc)
    bad = (rad.real < 0) & (np.abs(rad.imag) <= 1e-12 * np.abs(rad))
    if np.any(bad):
        raise BranchAmbiguity("radicand on the negative real axis")
    val = np.sqrt(rad)
    if real_input:
        val = val.real
    return val if val.ndim else val[()]


def l_eval(tau, z):
    """Evaluate ``l_tau = 1/m_tau``."""
    return 1.0 / m_eval(tau, z)


def l_prime(tau, z):
    """First derivative of ``l`` in closed form (logarithmic derivative of m^2)."""
    z = np.asarray(z, dtype=complex)
    ell = l_eval(tau, z)
    small = np.abs(z) < TAYLOR_RADIUS
    g = np.empty_like(z)
    zb = z[~small]
    g[~small] = 2 * tau * zb / (1 + tau * zb**2) + 2 / np.sinh(2 * zb) - 1 / zb
    zs = z[small]
    # 2/sinh(2z) - 1/z = -2z/3 + 14 z^3/45 - ...
    g[small] = 2 * tau * zs / (1 + tau * zs**2) - 2 * zs / 3 + 14 * zs**3 / 45
    out = -0.5 * ell * g
    return out if out.ndim else out[()]


def l_deriv(tau, x, n):
    """n-th derivative of ``l_tau`` at real ``x`` by a Cauchy contour integral.

    The circle has radius ``min(eta_star/2, 1/2)`` and is discretized by the
    trapezoidal rule, which converges geometrically for analytic integrands.
    """
    if n > 4:
        raise OrderTooHigh("only derivatives up to order 4 are supported")
    if n < 0:
        raise DomainError("negative derivative order")
    x = np.asarray(x, dtype=float)
    if n == 0:
        return l_eval(tau, x)
    r = min(0.5 * eta_star(tau), 0.5)
    theta = 2 * np.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES
    w = r * np.exp(1j * theta)
    vals = l_eval(tau, x[..., None] + w)
    out = factorial(n) / r**n * np.mean(vals * np.exp(-1j * n * theta), axis=-1)
    out = out.real
    if n % 2 == 1:
        out = np.where(x == 0.0, 0.0, out)
    return out if out.ndim else float(out)


def taylor_data(tau):
    """sigma = 1/l''(0), l''''(0) and the strip half-width."""
    return TaylorData(
        sigma=1.0 / l_deriv(tau, 0.0, 2),
        ell4_0=l_deriv(tau, 0.0, 4),
        eta_star=eta_star(tau),
    )


def c2_helpers(s, params):
    """Helper constants a..e entering the modulated-wave coefficients."""
    if params.branch != "C2" or params.s is None or abs(params.s - s) > 1e-14 * s:
        raise DomainError("c2_helpers needs C2 parameters at the same s")
    tau, c0 = params.tau, params.c0
    l2 = l_eval(tau, 2 * s)
    l3 = l_eval(tau, 3 * s)
    den1, den2, den3 = 1 - c0, 1 - c0 * l2, 1 - c0 * l3
    if min(abs(den1), abs(den2), abs(den3)) < 1e-14:
        raise DomainError("vanishing denominator in C2 helpers")
    return C2Helpers(
        a=(1 - 1 / den1) / (2 * c0),
        b=(1 - 1 / den2) / (2 * c0),
        c=l_deriv(tau, 2 * s, 1) / den2**2,
        d=(1 - 1 / den3) / (2 * c0),
        e=1.0 / (c0**2 * l_deriv(tau, s, 2)),
    )
