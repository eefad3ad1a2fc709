"""Periodic pseudo-spectral residual of M phi - c phi + phi^2 = b and Newton refinement.

Even profiles are represented by their values on the half grid x = 0, dx, ...,
L/2, where the multiplier acts through a type-I discrete cosine transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy import fft

from .errors import AliasingError, DomainError, NoConvergence, SingularJacobian
from .symbols import m_eval
from .waves import WaveProfile, gsw_orbit, GswParams

ALIAS_TOL = 1e-8
NEWTON_TOL = 1e-11
NEWTON_MAXIT = 25
EVEN_TOL = 1e-9
COMMENSURATE_TOL = 1e-6
# smallest LU pivot relative to max |J_ij| below which J counts as singular
SINGULAR_RTOL = 1e-13


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid with nodes x_j = -L/2 + j L / N."""

    N: int
    L: float

    def __post_init__(self):
        if self.N < 2 or self.N & (self.N - 1):
            raise DomainError("N must be a power of two")
        if self.L <= 0:
            raise DomainError("L must be positive")

    @property
    def x(self):
        return -self.L / 2 + self.L * np.arange(self.N) / self.N

    @property
    def dx(self):
        return self.L / self.N

    @property
    def wavenumbers(self):
        return 2 * np.pi * fft.fftfreq(self.N, d=self.dx)

    @property
    def half_wavenumbers(self):
        return 2 * np.pi * np.arange(self.N // 2 + 1) / self.L

    @classmethod
    def from_profile(cls, profile: WaveProfile):
        x = np.asarray(profile.x)
        N = x.size
        dx = x[1] - x[0]
        grid = cls(N, N * dx)
        if not np.allclose(x, grid.x, rtol=0, atol=1e-9 * grid.L):
            raise DomainError("profile abscissae are not the nodes -L/2 + jL/N")
        return grid


@dataclass
class ResidualReport:
    sup: float
    l2: float
    aliasing: float
    pointwise: np.ndarray = field(repr=False)
    c: float = 0.0
    b: float = 0.0

    @property
    def accepted(self):
        return self.aliasing < ALIAS_TOL

    def to_dict(self):
        return {
            "sup": float(self.sup),
            "l2": float(self.l2),
            "aliasing": float(self.aliasing),
            "accepted": bool(self.accepted),
            "c": float(self.c),
            "b": float(self.b),
        }


@dataclass
class NewtonLog:
    iterations: int
    history: list
    initial_residual: float
    final_residual: float
    linear_bound: float
    smallest_singular_value: float | None = None

    @property
    def reduction(self):
        if self.final_residual == 0:
            return np.inf
        return self.initial_residual / self.final_residual

    def to_dict(self):
        return {
            "iterations": int(self.iterations),
            "history": [float(h) for h in self.history],
            "initial_residual": float(self.initial_residual),
            "final_residual": float(self.final_residual),
            "reduction": float(self.reduction),
            "linear_bound": float(self.linear_bound),
        }


def aliasing_fraction(values):
    """Share of spectral energy in the top third of resolved wavenumbers."""
    v = np.fft.rfft(np.asarray(values, dtype=float))
    e = np.abs(v) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    cut = int(np.ceil(2 * (len(e) - 1) / 3))
    return float(e[cut:].sum() / total)


def apply_symbol(values, L, symbol):
    """Apply the even multiplier ``symbol(|k|)`` to periodic samples of period L."""
    values = np.asarray(values, dtype=float)
    N = values.size
    k = 2 * np.pi * np.fft.rfftfreq(N, d=L / N)
    return np.fft.irfft(symbol(k) * np.fft.rfft(values), n=N)


def apply_M(values, grid: PeriodicGrid, tau, check_aliasing=True, alias_tol=ALIAS_TOL):
    """M_tau applied spectrally; raises AliasingError for under-resolved input."""
    values = np.asarray(values, dtype=float)
    if values.size != grid.N:
        raise DomainError("values do not match the grid")
    if check_aliasing:
        a = aliasing_fraction(values)
        if a > alias_tol:
            raise AliasingError(f"top-third spectral energy fraction {a:.2e} exceeds {alias_tol:.0e}")
    return apply_symbol(values, grid.L, lambda k: m_eval(tau, k))


def residual_values(values, grid, c, tau, b=0.0):
    values = np.asarray(values, dtype=float)
    return apply_M(values, grid, tau, check_aliasing=False) - c * values + values**2 - b


def residual(profile: WaveProfile, c=None, tau=None, b=None):
    """Residual report of M phi - c phi + phi^2 - b on the profile grid."""
    grid = PeriodicGrid.from_profile(profile)
    c = profile.c if c is None else c
    tau = profile.tau if tau is None else tau
    b = profile.meta.get("b", 0.0) if b is None else b
    r = residual_values(profile.values, grid, c, tau, b)
    return ResidualReport(
        sup=float(np.max(np.abs(r))),
        l2=float(np.sqrt(grid.dx * np.sum(r**2))),
        aliasing=aliasing_fraction(profile.values),
        pointwise=r,
        c=float(c),
        b=float(b),
    )


def jacobian_apply(values, v, grid, c, tau):
    """Frechet derivative v -> M v - c v + 2 phi v."""
    v = np.asarray(v, dtype=float)
    return apply_M(v, grid, tau, check_aliasing=False) - c * v + 2 * np.asarray(values) * v


# ---------------------------------------------------------------- even subspace


def to_half(values):
    """Restrict an even periodic grid function to x = 0, ..., L/2."""
    values = np.asarray(values, dtype=float)
    N = values.size
    h = np.empty(N // 2 + 1)
    h[:-1] = values[N // 2 :]
    h[-1] = values[0]
    return h


def from_half(h):
    M = h.size - 1
    N = 2 * M
    out = np.empty(N)
    out[M:] = h[:-1]
    out[0] = h[-1]
    out[1:M] = h[1:M][::-1]
    return out


def even_defect(values):
    values = np.asarray(values, dtype=float)
    refl = np.roll(values[::-1], 1)
    return float(np.max(np.abs(values - refl)))


def half_multiplier_matrix(grid: PeriodicGrid, tau):
    """Dense matrix of M_tau acting on half-grid values of even functions."""
    m = m_eval(tau, grid.half_wavenumbers)
    eye = np.eye(grid.N // 2 + 1)
    coef = fft.dct(eye, type=1, axis=0)
    return fft.idct(m[:, None] * coef, type=1, axis=0)


def _check_commensurate(profile: WaveProfile, grid: PeriodicGrid):
    if profile.meta.get("kind") != "gsw":
        return
    params = GswParams(
        mu=profile.meta["mu"],
        kprime=profile.meta["kprime"],
        kappa=profile.meta["kappa"],
        theta_star=profile.meta["theta_star"],
    )
    rate = gsw_orbit(profile.tau, params).linear_phase_rate
    periods = grid.L * rate / (2 * np.pi)
    if abs(periods - round(periods)) > COMMENSURATE_TOL * max(1.0, periods):
        raise DomainError(
            f"box holds {periods:.6f} ripple wavelengths; use ripple_commensurate_length for an integer count"
        )


def newton_refine(
    initial: WaveProfile,
    c=None,
    tau=None,
    tol=NEWTON_TOL,
    max_iter=NEWTON_MAXIT,
    b=None,
    check_commensurate=True,
):
    """Newton iteration for an even solution of M phi - c phi + phi^2 = b.

    Parameters
    ----------
    initial : WaveProfile
        Even initial guess on a periodic grid.
    c, tau, b : float, optional
        Speed, Bond number and constant; default to the profile's own values.
    tol : float
        Stop once the sup-norm residual drops below ``tol``.
    max_iter : int
        Maximum number of Newton steps.

    Returns
    -------
    (WaveProfile, NewtonLog)

    Raises
    ------
    SingularJacobian
        The Jacobian on the even subspace is numerically singular.
    NoConvergence
        ``max_iter`` steps did not reach ``tol``; carries the best iterate.
    """
    grid = PeriodicGrid.from_profile(initial)
    c = initial.c if c is None else c
    tau = initial.tau if tau is None else tau
    b = initial.meta.get("b", 0.0) if b is None else b
    if not np.all(np.isfinite(initial.values)):
        raise DomainError("initial profile is not finite")
    scale = max(1.0, float(np.max(np.abs(initial.values))))
    if even_defect(initial.values) > EVEN_TOL * scale:
        raise DomainError("newton_refine needs even-symmetric initial data")
    if check_commensurate:
        _check_commensurate(initial, grid)

    Mh = half_multiplier_matrix(grid, tau)
    h = to_half(initial.values)

    def F(u):
        return Mh @ u - c * u + u * u - b

    def J(u):
        A = Mh - c * np.eye(u.size)
        A[np.diag_indices_from(A)] += 2 * u
        return A

    r = F(h)
    history = [float(np.max(np.abs(r)))]
    r0 = history[0]
    best, best_res = h.copy(), r0
    it = 0
    while history[-1] >= tol and it < max_iter:
        A = J(h)
        lu, piv = sla.lu_factor(A, check_finite=False)
        if np.abs(np.diag(lu)).min() <= SINGULAR_RTOL * np.abs(A).max():
            sv = sla.svdvals(A)
            raise SingularJacobian("Jacobian singular on the even subspace", smallest_singular_value=float(sv[-1]))
        h = h - sla.lu_solve((lu, piv), r, check_finite=False)
        r = F(h)
        it += 1
        res = float(np.max(np.abs(r)))
        history.append(res)
        if not np.isfinite(res):
            break
        if res < best_res:
            best, best_res = h.copy(), res
    if best_res >= tol:
        raise NoConvergence(
            f"residual {best_res:.3e} after {it} Newton steps",
            best=initial.with_values(from_half(best)),
            history=history,
        )
    Jinv = np.linalg.inv(J(best))
    bound = float(np.max(np.sum(np.abs(Jinv), axis=1))) * r0
    out = initial.with_values(from_half(best), refined=True, newton_iterations=it)
    out.c, out.tau = c, tau
    log = NewtonLog(
        iterations=it,
        history=history,
        initial_residual=r0,
        final_residual=best_res,
        linear_bound=bound,
    )
    return out, log
