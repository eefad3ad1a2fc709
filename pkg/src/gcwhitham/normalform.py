"""Normal-form coefficients, truncated normal-form fields and their explicit orbits."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import null_space

from .dispersion import solve_k0
from .errors import DomainError, RouteMismatch
from .reduction import CmCoeffs, cm_coeffs_ansatz
from .symbols import SymbolParams, l_deriv, l_eval, taylor_data

C3_ROUTE_TOL = 1e-10
C2_ROUTE_TOL = 1e-8


@dataclass(frozen=True)
class NfCoeffsC3:
    p0: float
    p1: float
    p2: float
    p3: float
    q0: float
    q1: float

    def structure_ok(self, tol=1e-10):
        s = max(abs(self.p1), 1.0)
        return (
            abs(self.p0) <= tol * s
            and abs(self.p1 + self.p2) <= tol * s
            and abs(self.p3 - 2 * self.p2) <= tol * s
            and abs(self.q1 + 2 * self.q0) <= tol * max(abs(self.q0), 1.0)
        )


@dataclass(frozen=True)
class NfCoeffsC2:
    q0: float
    q1: float
    route: str


@dataclass(frozen=True)
class NfBasis:
    L: np.ndarray
    vectors: dict

    def residuals(self):
        """Max-norm residuals of the defining eigen-identities."""
        v = self.vectors
        L = self.L
        if "xi0" in v:
            k0 = self.omega
            return {
                "L xi0 = 0": np.abs(L @ v["xi0"]).max(),
                "L xi1 = xi0": np.abs(L @ v["xi1"] - v["xi0"]).max(),
                "L zeta = i k0 zeta": np.abs(L @ v["zeta"] - 1j * k0 * v["zeta"]).max(),
            }
        s = self.omega
        Ls = L - 1j * s * np.eye(4)
        return {
            "(L - is) zeta0 = 0": np.abs(Ls @ v["zeta0"]).max(),
            "(L - is) zeta1 = zeta0": np.abs(Ls @ v["zeta1"] - v["zeta0"]).max(),
            "zeta1* annihilates range(L - is)": np.abs(v["zeta1_star"] @ Ls).max(),
            "<zeta1, zeta1*> = 1": abs(v["zeta1"] @ v["zeta1_star"] - 1),
            "<zeta0, zeta1*> = 0": abs(v["zeta0"] @ v["zeta1_star"]),
        }

    @property
    def omega(self):
        return self.vectors["omega"]


def nf_basis_C3(k0):
    L = np.array([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, k0], [0, 0, -k0, 0]], dtype=complex)
    return NfBasis(
        L=L,
        vectors={
            "omega": k0,
            "xi0": np.array([1, 0, 0, 0], dtype=complex),
            "xi1": np.array([0, 1, 0, 0], dtype=complex),
            "zeta": np.array([0, 0, 1, 1j]),
        },
    )


def nf_basis_C2(s):
    L = np.array([[0, 1, s, 0], [0, 0, 0, s], [-s, 0, 0, 1], [0, -s, 0, 0]], dtype=complex)
    return NfBasis(
        L=L,
        vectors={
            "omega": s,
            "zeta0": np.array([1, 0, 1j, 0]),
            "zeta1": np.array([0, 1, 0, 1j]),
            # paired through the bilinear form <u, v> = sum u_i v_i
            "zeta1_star": 0.5 * np.array([0, 1, 0, -1j]),
        },
    )


# ---------------------------------------------------------------- C3


def _H_c3(psi, U, V):
    x, y, z, w = U
    X, Y, Z, W = V
    return (
        psi["20000"] * x * X
        + psi["10100"] / 2 * (x * Z + z * X)
        + psi["02000"] * y * Y
        + psi["01010"] / 2 * (y * W + w * Y)
        + psi["00200"] * z * Z
        + psi["00020"] * w * W
    )


def _R20_c3(psi, k0, U, V):
    h = _H_c3(psi, U, V)
    return np.array([0, k0 * h, 0, -h]) / k0**3


def _R11_c3(psi, k0, U):
    x, _, z, _ = U
    h = psi["10001"] * x + psi["00101"] * z
    return np.array([0, k0 * h, 0, -h]) / k0**3


def _left_null(M):
    """Unit left null vector of a rank-deficient matrix."""
    ns = null_space(M.T)
    if ns.shape[1] != 1:
        raise DomainError(f"expected a one-dimensional left kernel, got {ns.shape[1]}")
    return ns[:, 0]


def nf_coeffs_C3_closed(tau):
    k0 = solve_k0(tau)
    sig = taylor_data(tau).sigma
    l1 = l_deriv(tau, k0, 1)
    return NfCoeffsC3(p0=0.0, p1=2 * sig, p2=-2 * sig, p3=-4 * sig, q0=-1 / l1, q1=2 / l1)


def nf_coeffs_C3_solvability(tau, psis: CmCoeffs):
    """Solvability conditions of the homological equations, evaluated numerically."""
    k0 = solve_k0(tau)
    B = nf_basis_C3(k0)
    L, v = B.L, B.vectors
    psi = psis.values
    # p-coefficients: pairing with the left kernel of L (which is e2)
    e = _left_null(L)
    e = e / (e @ v["xi1"])

    def p_of(vec):
        return float(np.real(e @ vec))

    p1 = p_of(_R11_c3(psi, k0, v["xi0"]))
    p2 = p_of(_R20_c3(psi, k0, v["xi0"], v["xi0"]))
    p3 = p_of(2 * _R20_c3(psi, k0, v["zeta"], np.conj(v["zeta"])))
    zs = _left_null(L - 1j * k0 * np.eye(4))
    norm = zs @ v["zeta"]

    def q_of(vec):
        return float(np.real((zs @ vec) / (1j * norm)))

    q0 = q_of(_R11_c3(psi, k0, v["zeta"]))
    q1 = q_of(2 * _R20_c3(psi, k0, v["xi0"], v["zeta"]))
    return NfCoeffsC3(p0=0.0, p1=p1, p2=p2, p3=p3, q0=q0, q1=q1)


def nf_coeffs_C3(tau, psis: CmCoeffs | None = None, tol=C3_ROUTE_TOL):
    """Both routes; raises RouteMismatch when they disagree."""
    if psis is None:
        psis = cm_coeffs_ansatz(SymbolParams.c3(tau))
    a = nf_coeffs_C3_closed(tau)
    b = nf_coeffs_C3_solvability(tau, psis)
    for name in ("p0", "p1", "p2", "p3", "q0", "q1"):
        x, y = getattr(a, name), getattr(b, name)
        if abs(x - y) > tol * max(abs(x), 1.0):
            raise RouteMismatch(f"{name}: closed {x!r} vs solvability {y!r}")
    return b


# ---------------------------------------------------------------- C2


def _H2_c2(psi, U, V):
    g = psi.get
    x, y, z, w = U
    X, Y, Z, W = V
    return (
        g("20000", 0.0) * x * X
        + g("02000", 0.0) * y * Y
        + g("00200", 0.0) * z * Z
        + g("00020", 0.0) * w * W
        + g("10010", 0.0) / 2 * (x * W + X * w)
        + g("01100", 0.0) / 2 * (y * Z + Y * z)
    )


def _H3_c2(psi, U, V, W):
    g = psi.get
    x, y, z, w = U
    X, Y, Z, Wv = V
    xh, yh, zh, wh = W
    out = g("30000", 0.0) * x * X * xh + g("00030", 0.0) * w * Wv * wh
    out += g("20010", 0.0) / 3 * (x * X * wh + x * xh * Wv + X * xh * w)
    out += g("12000", 0.0) / 3 * (x * Y * yh + X * y * yh + xh * y * Y)
    out += g("10200", 0.0) / 3 * (x * Z * zh + X * z * zh + xh * z * Z)
    out += g("10020", 0.0) / 3 * (x * Wv * wh + X * w * wh + xh * w * Wv)
    out += g("11100", 0.0) / 6 * (
        x * Y * zh + x * yh * Z + X * y * zh + X * yh * z + xh * y * Z + xh * Y * z
    )
    out += g("01110", 0.0) / 6 * (
        y * Z * wh + y * zh * Wv + Y * z * wh + Y * zh * w + yh * z * Wv + yh * Z * w
    )
    out += g("02010", 0.0) / 3 * (y * Y * wh + y * yh * Wv + Y * yh * w)
    out += g("00210", 0.0) / 3 * (z * Z * wh + z * zh * Wv + Z * zh * w)
    return out


def _lift_c2(s, h):
    return np.array([0, -s * h, h, 0]) / (2 * s**3)


def nf_coeffs_C2_psi(s, psis: CmCoeffs):
    """q0 and q1 from the (is)^2 normal-form projections onto zeta1*."""
    B = nf_basis_C2(s)
    L, v = B.L, B.vectors
    psi = psis.values
    z0, zb, zst = v["zeta0"], np.conj(v["zeta0"]), v["zeta1_star"]
    R20 = lambda U, V: _lift_c2(s, _H2_c2(psi, U, V))  # noqa: E731
    R30 = lambda U, V, W: _lift_c2(s, _H3_c2(psi, U, V, W))  # noqa: E731
    R11 = _lift_c2(s, psi["10001"] * z0[0] + psi.get("00011", 0.0) * z0[3])
    phi00001 = np.zeros(4, dtype=complex)  # R01 = 0
    phi10100 = np.linalg.solve(L, -2 * R20(z0, zb))
    phi20000 = np.linalg.solve(L - 2j * s * np.eye(4), -R20(z0, z0))
    q0 = (R11 + 2 * R20(z0, phi00001)) @ zst
    q1 = (2 * R20(z0, phi10100) + 2 * R20(zb, phi20000) + 3 * R30(z0, z0, zb)) @ zst
    return NfCoeffsC2(q0=float(np.real(q0)), q1=float(np.real(q1)), route="PsiFormula"), {
        "phi10100": phi10100,
        "phi20000": phi20000,
        "imag_q0": float(np.imag(q0)),
        "imag_q1": float(np.imag(q1)),
    }


def nf_coeffs_C2_closed(s):
    p = SymbolParams.c2(s)
    c0 = p.c0
    l2s = l_deriv(p.tau, s, 2)
    L2 = l_eval(p.tau, 2 * s)
    q0 = 2 / (c0**2 * l2s)
    q1 = (4 / (-c0 + 1 / L2) + 8 / (1 - c0)) / (c0**2 * l2s)
    return NfCoeffsC2(q0=q0, q1=q1, route="ClosedForm")


def q1_printed_display(s, psis: CmCoeffs):
    """The explicit psi-combination for q1 as tabulated (kept for comparison)."""
    v = psis.values
    p20, p002 = v["20000"], v["00200"]
    return (
        -(p20 + p002) / (2 * s**5) * (2 / s * p20 + v["10010"] / 2)
        - (p20 - p002) / (18 * s**6) * (p20 - p002 + 1.5 * s * v["01100"] - 0.75 * s * v["01100"])
        - 3 / (4 * s**2) * (v["30000"] + v["10200"] / 3)
    )


def nf_coeffs_C2(s, psis: CmCoeffs | None = None, tol=C2_ROUTE_TOL):
    if psis is None:
        psis = cm_coeffs_ansatz(SymbolParams.c2(s))
    a, _ = nf_coeffs_C2_psi(s, psis)
    b = nf_coeffs_C2_closed(s)
    for name in ("q0", "q1"):
        x, y = getattr(a, name), getattr(b, name)
        if abs(x - y) > tol * abs(y):
            raise RouteMismatch(f"{name}: psi route {x!r} vs closed {y!r}")
    return a


# ---------------------------------------------------------------- fields and orbits


def truncated_field_C3(state, mu, coeffs: NfCoeffsC3, k0):
    """Right-hand side of the quadratic normal form (A, B real, C complex)."""
    A, B, C = state
    dA = B
    dB = coeffs.p0 * mu + coeffs.p1 * mu * A + coeffs.p2 * A**2 + coeffs.p3 * np.abs(C) ** 2
    dC = 1j * k0 * C + 1j * C * (coeffs.q0 * mu + coeffs.q1 * A)
    return dA, dB, dC


@dataclass(frozen=True)
class GswOrbit:
    """Explicit orbit of the truncated C3 normal form.

    ``variant="printed"`` uses rho = 1 + 24k and the tabulated linear phase
    coefficient; ``"consistent"`` derives both from the coefficients so that
    the orbit solves the truncated field exactly.
    """

    tau: float
    mu: float
    k: float
    theta_star: float = 0.0
    variant: str = "printed"

    def __post_init__(self):
        if self.variant not in ("printed", "consistent"):
            raise DomainError("variant must be 'printed' or 'consistent'")
        if self.mu == 0:
            raise DomainError("mu must be nonzero")
        if self.rho <= 0:
            raise DomainError(f"rho = {self.rho} <= 0: no real orbit for k = {self.k}")

    @property
    def coeffs(self):
        return nf_coeffs_C3_closed(self.tau)

    @property
    def k0(self):
        return solve_k0(self.tau)

    @property
    def rho(self):
        if self.variant == "printed":
            return 1 + 24 * self.k
        c = nf_coeffs_C3_closed(self.tau)
        return 1 + 4 * c.p3 * self.k / c.p1

    @property
    def sigma(self):
        return taylor_data(self.tau).sigma

    @property
    def pedestal(self):
        return self.mu / 2 * (1 - np.sign(self.mu) * np.sqrt(self.rho))

    @property
    def beta(self):
        return self.rho**0.25 * abs(self.mu) ** 0.5 * self.sigma**0.5 / np.sqrt(2)

    @property
    def core(self):
        return 1.5 * abs(self.mu) * np.sqrt(self.rho)

    @property
    def linear_phase_rate(self):
        l1 = l_deriv(self.tau, self.k0, 1)
        mu, A0 = self.mu, self.pedestal
        if self.variant == "printed":
            return self.k0 - mu / l1 + 2 * mu / l1 * (1 - np.sign(mu) * np.sqrt(self.rho))
        c = self.coeffs
        return self.k0 + c.q0 * mu + c.q1 * A0

    @property
    def phase_shift_amplitude(self):
        l1 = l_deriv(self.tau, self.k0, 1)
        return 3 * np.sqrt(2) * self.rho**0.25 * abs(self.mu) ** 0.5 / (self.sigma**0.5 * l1)

    def A(self, t):
        return self.pedestal + self.core / np.cosh(self.beta * t) ** 2

    def dA(self, t):
        b = self.beta * t
        return -2 * self.core * self.beta * np.tanh(b) / np.cosh(b) ** 2

    def d2A(self, t):
        S = 1 / np.cosh(self.beta * t) ** 2
        return self.core * self.beta**2 * (4 * S - 6 * S**2)

    def theta(self, t):
        return (
            self.theta_star
            + self.linear_phase_rate * t
            + self.phase_shift_amplitude * np.tanh(self.beta * t)
        )

    def dtheta(self, t):
        return self.linear_phase_rate + self.phase_shift_amplitude * self.beta / np.cosh(self.beta * t) ** 2

    def C(self, t):
        return abs(self.mu) * np.sqrt(self.k) * np.exp(1j * self.theta(t))

    def dC(self, t):
        return 1j * self.dtheta(t) * self.C(t)

    def residual(self, t):
        """Pointwise max-norm residual in the truncated field, closed-form derivatives."""
        A, B, C = self.A(t), self.dA(t), self.C(t)
        fA, fB, fC = truncated_field_C3((A, B, C), self.mu, self.coeffs, self.k0)
        return np.maximum.reduce(
            [np.abs(self.dA(t) - fA), np.abs(self.d2A(t) - fB), np.abs(self.dC(t) - fC)]
        )


def truncated_field_C2(state, mu, coeffs: NfCoeffsC2, s, p0=0.0, p1=0.0, p2=0.0, q2=0.0):
    """Cubic (is)^2 normal form with P, Q expanded to first order in mu, |A|^2, and the
    mixed invariant ``(i/2)(A conj(B) - conj(A) B)``."""
    A, B = state
    inv = 0.5j * (A * np.conj(B) - np.conj(A) * B)
    P = p0 * mu + p1 * np.abs(A) ** 2 + p2 * inv
    Q = coeffs.q0 * mu + coeffs.q1 * np.abs(A) ** 2 + q2 * inv
    dA = 1j * s * A + B + 1j * A * P
    dB = 1j * s * B + 1j * B * P + A * Q
    return dA, dB


@dataclass(frozen=True)
class MswOrbit:
    """Homoclinic orbit r0 sech envelope of the cubic (is)^2 normal form."""

    s: float
    mu: float
    theta_star: float = 0.0
    p0: float = 0.0
    p1: float = 0.0
    coeffs: NfCoeffsC2 | None = None

    def __post_init__(self):
        if self.mu >= 0:
            raise DomainError("modulated solitary waves need mu < 0")
        if self.coeffs is None:
            object.__setattr__(self, "coeffs", nf_coeffs_C2_closed(self.s))

    @property
    def beta(self):
        return np.sqrt(self.coeffs.q0 * self.mu)

    @property
    def amplitude(self):
        return np.sqrt(-2 * self.coeffs.q0 * self.mu / self.coeffs.q1)

    def r0(self, t):
        return self.amplitude / np.cosh(self.beta * t)

    def dr0(self, t):
        b = self.beta * t
        return -self.amplitude * self.beta * np.tanh(b) / np.cosh(b)

    def d2r0(self, t):
        b = self.beta * t
        sech = 1 / np.cosh(b)
        return self.amplitude * self.beta**2 * (sech - 2 * sech**3)

    def theta0(self, t):
        return (
            self.p0 * self.mu * t
            - 2 * self.p1 * self.beta / self.coeffs.q1 * np.tanh(self.beta * t)
            + self.theta_star
        )

    def dtheta0(self, t):
        return self.p0 * self.mu + self.p1 * self.r0(t) ** 2

    def envelope_residual(self, t):
        r = self.r0(t)
        return np.abs(self.d2r0(t) - (self.coeffs.q0 * self.mu * r + self.coeffs.q1 * r**3))

    def state(self, t):
        ph = np.exp(1j * (self.s * t + self.theta0(t)))
        return self.r0(t) * ph, self.dr0(t) * ph

    def field_residual(self, t):
        """Residual of (A, B) in the full cubic field, derivatives in closed form."""
        A, B = self.state(t)
        ph = np.exp(1j * (self.s * t + self.theta0(t)))
        w = self.s + self.dtheta0(t)
        dA = (self.dr0(t) + 1j * w * self.r0(t)) * ph
        dB = (self.d2r0(t) + 1j * w * self.dr0(t)) * ph
        fA, fB = truncated_field_C2((A, B), self.mu, self.coeffs, self.s, self.p0, self.p1)
        return np.maximum(np.abs(dA - fA), np.abs(dB - fB))

    def phase_gap(self, t):
        """Theta1 - Theta0 modulo 2 pi, which is 0 or pi along the orbit."""
        A, B = self.state(t)
        return np.mod(np.angle(B) - np.angle(A), 2 * np.pi)


def nf_export(coeffs, params: SymbolParams):
    return json.dumps({"params": params.to_dict(), "coeffs": asdict(coeffs)}, indent=2, sort_keys=True)
