"""Explicit small-amplitude wave profiles and the Galilean shift.

Generalized solitary waves (GSW) live on the C3 curve and carry a ripple of
wavenumber near k0; modulated solitary waves (MSW) live on the C2 curve and
consist of a sech envelope times a carrier of wavenumber s.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .dispersion import c2_point, solve_k0
from .errors import CeilingViolation, DomainError, PersistenceViolation
from .normalform import GswOrbit, MswOrbit, nf_coeffs_C2_closed

MU_CEILING = 0.05
GUARD_CONSTANT = 1.0
# relative slack so that the boundary case kappa = 0, k' = 1 passes the guard
GUARD_SLACK = 1e-12


@dataclass(frozen=True)
class GswParams:
    """Parameters of a generalized solitary wave.

    Parameters
    ----------
    mu : float
        Speed offset, c = 1 + mu.
    kprime : float
        Ripple scale k' > 0.
    kappa : float
        Exponent in [0, 1/2); k = k' |mu|^{-1-2 kappa}.
    theta_star : float
        Ripple phase at the origin.
    guard_constant : float
        Constant in the persistence guard |mu| sqrt(k) >= guard |mu|^{1/2}.
    """

    mu: float
    kprime: float = 1.0
    kappa: float = 0.0
    theta_star: float = 0.0
    guard_constant: float = GUARD_CONSTANT

    def __post_init__(self):
        if self.mu == 0:
            raise DomainError("mu must be nonzero")
        if self.kprime <= 0:
            raise DomainError("k' must be positive")
        if not 0 <= self.kappa < 0.5:
            raise DomainError("kappa must lie in [0, 1/2)")

    @property
    def k(self):
        return self.kprime * abs(self.mu) ** (-1 - 2 * self.kappa)

    @property
    def rho(self):
        return 1 + 24 * self.k

    @property
    def ripple(self):
        return abs(self.mu) * math.sqrt(self.k)

    def check_guard(self):
        bound = self.guard_constant * abs(self.mu) ** 0.5
        if self.ripple < bound * (1 - GUARD_SLACK):
            raise PersistenceViolation(
                f"ripple amplitude {self.ripple:.3e} below persistence bound {bound:.3e}"
            )


@dataclass
class WaveProfile:
    x: np.ndarray
    values: np.ndarray
    c: float
    tau: float
    meta: dict = field(default_factory=dict)

    @property
    def L(self):
        if self.x.size < 2:
            return 0.0
        return float(self.x.size * (self.x[1] - self.x[0]))

    def sup(self):
        return float(np.max(np.abs(self.values)))

    def with_values(self, values, **meta):
        return replace(self, values=np.asarray(values, dtype=float), meta={**self.meta, **meta})

    def metadata(self):
        return {"c": float(self.c), "tau": float(self.tau), "N": int(self.x.size), "L": self.L, **self.meta}

    def to_csv(self, path):
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "phi"])
            for xi, vi in zip(self.x, self.values):
                w.writerow([f"{xi:.17g}", f"{vi:.17g}"])
        path.with_suffix(".json").write_text(json.dumps(_jsonable(self.metadata()), indent=2, sort_keys=True) + "\n")
        return path

    @classmethod
    def from_csv(cls, path, c=None, tau=None):
        path = Path(path)
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        meta = {}
        side = path.with_suffix(".json")
        if side.exists():
            meta = json.loads(side.read_text())
        c = meta.pop("c", None) if c is None else c
        tau = meta.pop("tau", None) if tau is None else tau
        meta.pop("N", None)
        meta.pop("L", None)
        if c is None or tau is None:
            raise DomainError("speed and tau must be given or present in the sidecar")
        return cls(x=data[:, 0], values=data[:, 1], c=float(c), tau=float(tau), meta=meta)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(f"{float(obj):.17g}")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def periodic_grid(N, L):
    """Nodes x_j = -L/2 + j L / N."""
    return -L / 2 + L * np.arange(N) / N


def _check_ceiling(mu, ceiling, allow_large_mu):
    if abs(mu) > ceiling:
        if not allow_large_mu:
            raise CeilingViolation(f"|mu| = {abs(mu)} exceeds ceiling {ceiling}")
        warnings.warn(f"|mu| = {abs(mu)} above ceiling {ceiling}; asymptotics may be poor", stacklevel=3)


def _sech2(z):
    e = np.exp(-2 * np.abs(z))
    return 4 * e / (1 + e) ** 2


def gsw_orbit(tau, params: GswParams):
    return GswOrbit(tau=tau, mu=params.mu, k=params.k, theta_star=params.theta_star, variant="printed")


def gsw_profile(tau, params: GswParams, x, ceiling=MU_CEILING, allow_large_mu=False):
    """Generalized solitary wave on the C3 curve with speed 1 + mu."""
    if not 0 < tau < 1 / 3:
        raise DomainError("GSW needs 0 < tau < 1/3")
    _check_ceiling(params.mu, ceiling, allow_large_mu)
    params.check_guard()
    orb = gsw_orbit(tau, params)
    x = np.asarray(x, dtype=float)
    core = orb.core * _sech2(orb.beta * x)
    ripple = params.ripple * np.cos(orb.theta(x))
    values = core + orb.pedestal + ripple
    meta = {
        "branch": "C3",
        "kind": "gsw",
        "mu": params.mu,
        "k": params.k,
        "kprime": params.kprime,
        "kappa": params.kappa,
        "theta_star": params.theta_star,
        "rho": params.rho,
        "k0": orb.k0,
        "pedestal": orb.pedestal,
        "core_amplitude": orb.core,
        "ripple_amplitude": params.ripple,
        "linear_phase_rate": orb.linear_phase_rate,
        "galilean_v": 0.0,
    }
    return WaveProfile(x=x, values=values, c=1 + params.mu, tau=tau, meta=meta)


def gsw_parts(tau, params: GswParams, x):
    """(core, pedestal, ripple) such that their sum is the GSW profile."""
    orb = gsw_orbit(tau, params)
    x = np.asarray(x, dtype=float)
    return (
        orb.core * _sech2(orb.beta * x),
        np.full_like(x, orb.pedestal),
        params.ripple * np.cos(orb.theta(x)),
    )


def msw_profile(s, mu, theta_star, x, p0=0.0, p1=0.0, ceiling=MU_CEILING, allow_large_mu=False):
    """Modulated solitary wave on the C2 curve with speed c0 + mu.

    ``theta_star = 0`` gives the elevation wave and ``pi`` the depression wave.
    """
    if mu >= 0:
        raise DomainError("modulated solitary waves need mu < 0")
    ts = float(theta_star) % (2 * np.pi)
    if not (np.isclose(ts, 0.0) or np.isclose(ts, np.pi)):
        raise DomainError("theta_star must be 0 or pi")
    _check_ceiling(mu, ceiling, allow_large_mu)
    bp = c2_point(s)
    coeffs = nf_coeffs_C2_closed(s)
    orb = MswOrbit(s=s, mu=mu, theta_star=0.0, p0=p0, p1=p1, coeffs=coeffs)
    x = np.asarray(x, dtype=float)
    sign = 1.0 if np.isclose(ts, 0.0) else -1.0
    values = sign * 2 * orb.r0(x) * np.cos(s * x + orb.theta0(x))
    meta = {
        "branch": "C2",
        "kind": "msw",
        "s": s,
        "mu": mu,
        "theta_star": ts,
        "q0": coeffs.q0,
        "q1": coeffs.q1,
        "p0": p0,
        "p1": p1,
        "amplitude": 2 * orb.amplitude,
        "envelope_rate": orb.beta,
        "c0": bp.c0,
        "galilean_v": 0.0,
    }
    return WaveProfile(x=x, values=values, c=bp.c0 + mu, tau=bp.tau, meta=meta)


def galilean_shift(profile: WaveProfile, v):
    """Map a solution of M phi - c phi + phi^2 = 0 to one with speed c - 2v.

    The shifted values are phi - v.  With c' = c - 2v the equation acquires the
    constant v - c v + v^2 on its left-hand side, stored as ``meta["b"]``.
    """
    v = float(v)
    b_old = profile.meta.get("b", 0.0)
    c = profile.c
    meta = {
        **profile.meta,
        "galilean_v": profile.meta.get("galilean_v", 0.0) + v,
        "b": b_old - v + c * v - v * v,
    }
    return WaveProfile(x=profile.x, values=profile.values - v, c=c - 2 * v, tau=profile.tau, meta=meta)


def gsw_supercritical_shift(profile: WaveProfile):
    """Shift v = (mu/2)(1 + rho^{1/2}) turning a mu < 0 GSW into a supercritical one."""
    mu, rho = profile.meta["mu"], profile.meta["rho"]
    return galilean_shift(profile, 0.5 * mu * (1 + math.sqrt(rho)))


def ripple_commensurate_length(tau, params: GswParams, periods, min_length=None):
    """Box length holding an integer number of ripple wavelengths.

    The ripple wavenumber is the linear phase rate of the printed orbit; the
    returned length is the smallest multiple of its wavelength not below
    ``min_length`` (or exactly ``periods`` wavelengths when no minimum is set).
    """
    rate = gsw_orbit(tau, params).linear_phase_rate
    lam = 2 * np.pi / rate
    if min_length is not None:
        periods = max(periods, int(np.ceil(min_length / lam)))
    return periods * lam


def profile_dict(profile: WaveProfile):
    return {"x": profile.x.tolist(), "phi": profile.values.tolist(), **asdict(profile)["meta"]}
