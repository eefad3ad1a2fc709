"""Linear dispersion relation, bifurcation curves and complex root counting.

Zeros of ``f(z) = 1 - c0 l(z)`` inside the strip ``|Im z| < eta`` are counted by
the argument principle on the rectangle with vertices ``(+-R, +-i eta)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ContourThroughZero, DomainError, NonIntegerWinding, NoRoot
from .symbols import SymbolParams, c2_alpha_beta, eta_star, l_eval, l_prime, m_eval

log = logging.getLogger(__name__)

SNAP_TOL = 1e-3
ZERO_TOL = 1e-10
MAX_POINTS = 2**18
# asymmetric split so that roots on symmetry lines never sit on a cut
SPLIT_FRACTIONS = (0.5371, 0.4629, 0.6113, 0.3887)


@dataclass(frozen=True)
class BifurcationPoint:
    beta: float
    alpha: float
    curve: str
    param: float | None
    tau: float
    c0: float

    def params(self, mu=0.0):
        if self.curve == "C2":
            return SymbolParams.c2(self.param, mu)
        if self.curve == "C3":
            return SymbolParams.c3(self.tau, mu)
        return SymbolParams.generic(self.tau, self.c0, mu)


@dataclass
class RootReport:
    roots: list
    strip_eta: float
    winding: int
    contour_R: float
    arcs: dict = field(default_factory=dict)

    def multiplicities(self):
        return sum(m for _, m in self.roots)

    def to_dict(self):
        return {
            "roots": [
                {"re": float(z.real), "im": float(z.imag), "multiplicity": int(m)}
                for z, m in self.roots
            ],
            "strip_eta": float(self.strip_eta),
            "winding": int(self.winding),
            "contour_R": float(self.contour_R),
        }


def dispersion_residual(tau, xi):
    """(1 + tau xi^2) tanh(xi) - xi, which vanishes exactly where m_tau = 1."""
    return (1 + tau * xi**2) * np.tanh(xi) - xi


def solve_k0(tau):
    """Unique positive root of ``m_tau(xi) = 1`` for weak surface tension."""
    if not (0 < tau < 1 / 3):
        raise NoRoot("k0 exists only for 0 < tau < 1/3")
    grid = np.geomspace(1e-6, 50.0, 4000)
    vals = dispersion_residual(tau, grid)
    idx = np.nonzero(np.diff(np.sign(vals)) > 0)[0]
    if idx.size == 0:
        raise NoRoot(f"no sign change found for tau={tau}")
    a, b = grid[idx[0]], grid[idx[0] + 1]
    k = brentq(lambda x: dispersion_residual(tau, x), a, b, xtol=1e-15, rtol=1e-15)
    # Newton polish on m - 1 using dm = -l'/l^2
    for _ in range(3):
        g = m_eval(tau, k) - 1.0
        dm = -l_prime(tau, k).real / l_eval(tau, k) ** 2
        k -= g / dm
    return float(k)


def c2_point(s):
    """Point on the Hamiltonian-Hopf curve with double roots at +-s."""
    if s <= 0:
        raise DomainError("s must be positive")
    alpha, beta = c2_alpha_beta(s)
    c0 = alpha**-0.5
    tau = beta * c0**2
    ell = l_eval(tau, s)
    dl = l_prime(tau, s).real
    if abs(ell - 1 / c0) > 1e-10 or abs(dl) > 1e-10:
        raise DomainError(f"double-root certificate failed at s={s}")
    return BifurcationPoint(
        beta=float(beta), alpha=float(alpha), curve="C2", param=float(s), tau=float(tau), c0=float(c0)
    )


def c3_point(beta):
    if not (0 < beta < 1 / 3):
        raise DomainError("C3 needs 0 < beta < 1/3")
    return BifurcationPoint(beta=beta, alpha=1.0, curve="C3", param=solve_k0(beta), tau=beta, c0=1.0)


def c4_point(beta):
    if beta < 1 / 3:
        raise DomainError("C4 needs beta >= 1/3")
    return BifurcationPoint(beta=beta, alpha=1.0, curve="C4", param=None, tau=beta, c0=1.0)


# ---------------------------------------------------------------- contours


def _f(params, z):
    return 1.0 - params.c0 * l_eval(params.tau, z)


def _df(params, z):
    return -params.c0 * l_prime(params.tau, z)


def _edge(params, z0, z1, n, weight=None):
    """Trapezoidal integral of f'/f (optionally times weight(z)) along a segment."""
    t = np.linspace(0.0, 1.0, n + 1)
    z = z0 + (z1 - z0) * t
    fz = _f(params, z)
    if np.min(np.abs(fz)) < ZERO_TOL:
        raise ContourThroughZero(f"|1 - c0 l| < {ZERO_TOL} on the contour")
    g = _df(params, z) / fz
    if weight is not None:
        g = g * weight(z)
    h = (z1 - z0) / n
    return h * (g.sum() - 0.5 * (g[0] + g[-1]))


def _rect_edges(x0, x1, y0, y1):
    a, b, c, d = complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)
    return {"bottom": (a, b), "right": (b, c), "top": (c, d), "left": (d, a)}


def _rect_integrals(params, x0, x1, y0, y1, n0=512, weight=None):
    """Per-edge (1/2 pi i) integrals with doubling until the total snaps to an integer."""
    edges = _rect_edges(x0, x1, y0, y1)
    perim = 2 * ((x1 - x0) + (y1 - y0))
    prev = None
    n_unit = n0 / perim
    while True:
        parts = {}
        for name, (za, zb) in edges.items():
            n = max(16, int(np.ceil(n_unit * abs(zb - za))))
            parts[name] = _edge(params, za, zb, n, weight) / (2j * np.pi)
        total = sum(parts.values())
        if weight is not None:
            if prev is not None and abs(total - prev) < 1e-10 * max(1.0, abs(total)):
                return parts, total
        else:
            near = abs(total - round(total.real))
            if near < SNAP_TOL and prev is not None and abs(total - prev) < SNAP_TOL:
                return parts, total
        if n_unit * perim > MAX_POINTS:
            if weight is not None:
                return parts, total
            raise NonIntegerWinding(f"winding integral stuck at {total}")
        prev = total
        n_unit *= 2


def winding_number(params, eta, R):
    parts, total = _rect_integrals(params, -R, R, -eta, eta, n0=4096)
    return int(round(total.real)), parts


def residue_index_decomposition(params, eta, R):
    """The four arc contributions (1/2 pi i) int f'/f over bottom/right/top/left."""
    _, parts = winding_number(params, eta, R)
    return parts


def _locate(params, box, min_size, depth=0):
    x0, x1, y0, y1 = box
    _, total = _rect_integrals(params, x0, x1, y0, y1)
    w = int(round(total.real))
    if w == 0:
        return []
    size = max(x1 - x0, y1 - y0)
    if size <= min_size:
        # first and second moments of the zero distribution inside the box
        _, s1 = _rect_integrals(params, x0, x1, y0, y1, weight=lambda z: z)
        centre = s1 / w
        _, s2 = _rect_integrals(params, x0, x1, y0, y1, weight=lambda z: (z - centre) ** 2)
        if abs(s2) < 1e-6 or size <= min_size / 64:
            return [(complex(centre), w)]
    for frac in SPLIT_FRACTIONS:
        try:
            if x1 - x0 >= y1 - y0:
                xm = x0 + frac * (x1 - x0)
                halves = [(x0, xm, y0, y1), (xm, x1, y0, y1)]
            else:
                ym = y0 + frac * (y1 - y0)
                halves = [(x0, x1, y0, ym), (x0, x1, ym, y1)]
            found = []
            for hb in halves:
                found.extend(_locate(params, hb, min_size, depth + 1))
            return found
        except ContourThroughZero:
            continue
    raise ContourThroughZero("every subdivision line passes through a zero")


def _symmetrize(roots, tol=1e-6):
    """Snap tiny real/imaginary parts produced by quadrature noise."""
    out = []
    for z, m in roots:
        re = 0.0 if abs(z.real) < tol else z.real
        im = 0.0 if abs(z.imag) < tol else z.imag
        out.append((complex(re, im), m))
    out.sort(key=lambda p: (p[0].real, p[0].imag))
    return out


def expected_roots(params):
    """Root set in a thin strip predicted for the two bifurcation curves."""
    if params.branch == "C3":
        k0 = solve_k0(params.tau)
        return [(complex(-k0), 1), (0j, 2), (complex(k0), 1)]
    if params.branch == "C2":
        return [(complex(-params.s), 2), (complex(params.s), 2)]
    return None


def _same_roots(found, expected, tol=1e-5):
    if len(found) != len(expected):
        return False
    for (z, m), (ze, me) in zip(found, expected):
        if m != me or abs(z - ze) > tol * max(1.0, abs(ze)):
            return False
    return True


def default_R(params):
    exp = expected_roots(params)
    if exp:
        return max(abs(z) for z, _ in exp) + 5.0
    return 10.0


def roots_in_strip(params, eta, R=None, min_size=0.05):
    """Winding number and localized zeros of 1 - c0 l in the strip |Im z| < eta."""
    if not (0 < eta < params.eta_star):
        raise DomainError("need 0 < eta < eta_star")
    if R is None:
        R = default_R(params)
    w, parts = winding_number(params, eta, R)
    roots = _symmetrize(_locate(params, (-R, R, -eta, eta), min_size))
    return RootReport(roots=roots, strip_eta=eta, winding=w, contour_R=R, arcs=parts)


def certify_eta(params, R=None, step=0.05):
    """Largest eta = (1 - j step) eta_star whose strip holds exactly the predicted roots.

    Returns ``eta_star`` itself for parameter points without a prediction.
    """
    exp = expected_roots(params)
    es = params.eta_star
    if exp is None:
        return es
    for j in range(1, int(round(1 / step))):
        eta = (1 - j * step) * es
        try:
            rep = roots_in_strip(params, eta, R)
        except (ContourThroughZero, NonIntegerWinding):
            continue
        if rep.winding == sum(m for _, m in exp) and _same_roots(rep.roots, exp):
            return eta
        log.info("eta=%.4f gives roots %s", eta, rep.roots)
    raise NonIntegerWinding("no strip reproduces the predicted root set")


def auto_roots(params, R=None):
    """roots_in_strip at eta = 0.5 min(eta_star, certified eta)."""
    eta_tilde = certify_eta(params, R)
    eta = 0.5 * min(params.eta_star, eta_tilde)
    for shrink in (1.0, 0.97, 0.94):
        try:
            return roots_in_strip(params, eta * shrink, R)
        except ContourThroughZero:
            continue
    raise ContourThroughZero("could not find a zero-free contour")
