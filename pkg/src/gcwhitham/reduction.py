"""Projections onto ker T and the centre-manifold coefficients psi_pqlmn.

Each coefficient is available twice: from the tabulated closed forms and from
an independent undetermined-coefficient solve of the linear equations
``T Psi_alpha = source_alpha`` with ``Q Psi_alpha = 0``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .dispersion import solve_k0
from .errors import DomainError
from .symbols import SymbolParams, c2_helpers, l_deriv, l_eval, taylor_data
from .trigcalc import (
    TrigPoly,
    apply_multiplier,
    fourth_deriv_at_zero,
    id_minus_T_multiplier,
    jet,
    solve_T_equation,
    T_multiplier,
)

log = logging.getLogger(__name__)

C3_KEYS = ("10001", "00101", "20000", "10100", "02000", "01010", "00200", "00020")
C2_KEYS = ("10001", "20000", "00200", "10010", "01100", "30000", "10200")
# extra entries that only the ansatz route produces
C2_EXTRA = ("02000", "00020", "00011")


def idx(code):
    """'10200' -> (1, 0, 2, 0, 0)."""
    return tuple(int(ch) for ch in code)


def code(index):
    return "".join(str(i) for i in index)


@dataclass(frozen=True)
class ProjectionSpec:
    """Transition matrix taking the 3-jet at 0 to kernel coordinates (A, B, C, D)."""

    kind: str
    omega: float

    @property
    def matrix(self):
        w = self.omega
        if self.kind == "Q1":
            return np.array(
                [
                    [1.0, 0.0, w**-2, 0.0],
                    [0.0, 1.0, 0.0, w**-2],
                    [0.0, 0.0, -(w**-2), 0.0],
                    [0.0, 0.0, 0.0, -(w**-3)],
                ]
            )
        if self.kind == "Q2":
            return np.array(
                [
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, -0.5, 0.0, -0.5 / w**2],
                    [0.0, 1.5 / w, 0.0, 0.5 / w**3],
                    [0.5 * w, 0.0, 0.5 / w, 0.0],
                ]
            )
        raise DomainError(f"unknown projection {self.kind!r}")

    def basis(self):
        """Kernel basis as TrigPolys with base frequency omega."""
        w = self.omega
        if self.kind == "Q1":
            spec = [(0, 0, "c"), (1, 0, "c"), (0, 1, "c"), (0, 1, "s")]
        else:
            spec = [(0, 1, "c"), (1, 1, "c"), (0, 1, "s"), (1, 1, "s")]
        return [TrigPoly.monomial(w, *s) for s in spec]

    @property
    def kernel_freqs(self):
        return (0, 1) if self.kind == "Q1" else (1,)

    def wronskian(self):
        """Columns are the jets of the basis functions; matrix is its inverse."""
        return np.column_stack([jet(b) for b in self.basis()])

    def project(self, p: TrigPoly) -> TrigPoly:
        coords = projection_apply(self, jet(p))
        out = TrigPoly(self.omega)
        for c, b in zip(coords, self.basis()):
            out = out + b * float(c)
        return out

    @classmethod
    def for_params(cls, params):
        if params.branch == "C3":
            return cls("Q1", solve_k0(params.tau))
        if params.branch == "C2":
            return cls("Q2", params.s)
        raise DomainError("projections exist only on C2 and C3")


def projection_apply(spec: ProjectionSpec, jet_values):
    """(phi(0), phi'(0), phi''(0), phi'''(0)) -> (A, B, C, D)."""
    return spec.matrix @ np.asarray(jet_values, dtype=float)


@dataclass
class CmCoeffs:
    values: dict
    branch: str
    source: str
    params: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, key):
        return self.values[key if isinstance(key, str) else code(key)]

    def to_json(self):
        payload = {
            "branch": self.branch,
            "source": self.source,
            "params": self.params,
            "values": {k: float(v) for k, v in sorted(self.values.items())},
            "notes": self.notes,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


# ---------------------------------------------------------------- closed forms


def cm_coeffs_closed_C3(tau, reading="corrected"):
    """Tabulated generalized-solitary-wave coefficients.

    ``reading="printed"`` uses the factor 8 in psi_00200 and psi_00020 exactly as
    tabulated; ``"corrected"`` uses the factor 6 that the linear equations
    actually produce.  Every other entry is identical in both readings.
    """
    if reading not in ("printed", "corrected"):
        raise DomainError("reading must be 'printed' or 'corrected'")
    params = SymbolParams.c3(tau)
    k0 = solve_k0(tau)
    td = taylor_data(tau)
    sig = td.sigma
    l1 = l_deriv(tau, k0, 1)
    l2k = l_deriv(tau, k0, 2)
    L2 = l_eval(tau, 2 * k0)
    if abs(l1) < 1e-14:
        raise DomainError("l'(k0) vanishes")
    f = 8.0 if reading == "printed" else 6.0
    v = {
        "10001": 2 * sig * k0**2,
        "20000": -2 * sig * k0**2,
        "00101": -2 * k0**3 / l1,
        "10100": 4 * k0**3 / l1,
        "02000": -(td.ell4_0 - 6 / sig**2) / 3 * sig**2 * k0**2 - 4 * sig,
        "01010": 2 * (l2k - 2 * l1**2) / l1**2 * k0**3 - 10 / l1 * k0**2,
        "00200": f * L2 / (L2 - 1) * k0**4 - sig * k0**2,
        "00020": -f * L2 / (L2 - 1) * k0**4 - sig * k0**2,
    }
    return CmCoeffs(
        values=v,
        branch="C3",
        source=f"ClosedForm[{reading}]",
        params={**params.to_dict(), "k0": k0},
    )


def psi02000_from_prop(tau):
    """B^2 coefficient of the reduced system written with l''''(0) eliminated.

    Equal to psi_02000 once l''''(0) = 9 sigma^-2 - 4 sigma^-1 - 4/15 is used;
    the sign of the 4 sigma term is the one that makes the two agree.
    """
    k0 = solve_k0(tau)
    sig = taylor_data(tau).sigma
    return -((3 / sig**2 - 4 / sig - 4 / 15) / 3 * sig**2 * k0**2) - 4 * sig


def cm_coeffs_closed_C2(s, reading="bd"):
    """Tabulated modulated-solitary-wave coefficients.

    ``reading`` selects the ambiguous term of psi_10200: ``"bs"`` as printed
    (-256 b s) or ``"bd"`` (-256 b d).
    """
    if reading not in ("bs", "bd"):
        raise DomainError("reading must be 'bs' or 'bd'")
    params = SymbolParams.c2(s)
    h = c2_helpers(s, params)
    a, b, c, d, e = h.a, h.b, h.c, h.d, h.e
    amb = b * s if reading == "bs" else b * d
    v = {
        "10001": -8 * s**2 * e,
        "20000": s**4 * (a + 9 * b),
        "00200": s**4 * (a - 9 * b),
        "10010": 9 * s**4 * c - 48 * s**3 * b,
        "01100": 9 * s**4 * c - 48 * s**3 * b,
        "30000": (
            (-2 * a * (a + b) - 18 * b * (a + b) + 128 * b * d - 4.5 * s * (a - 3 * b) * c) * s**2
            + 24 * s**2 * b * (a - 3 * b)
            + 8 * (2 * a + b) * e
        )
        * s**2,
        "10200": (
            (-2 * a * (a - b) - 18 * b * (a - b) - 128 * b * d - 4.5 * s * (a + 3 * b) * c) * s**2
            + 24 * s**2 * b * (a + 3 * b)
            + 8 * (2 * a - b) * e
        )
        * s**2
        + ((-54 * s * b * c + 4 * a * b - 36 * b**2 - 256 * amb) * s**2 + 288 * s**2 * b**2 + 16 * b * e)
        * s**2,
    }
    return CmCoeffs(
        values=v,
        branch="C2",
        source=f"ClosedForm[{reading}]",
        params=params.to_dict(),
        notes={"helpers": {"a": a, "b": b, "c": c, "d": d, "e": e}},
    )


# ---------------------------------------------------------------- ansatz route


def _unit(i):
    return tuple(1 if k == i else 0 for k in range(4))


class CenterManifoldSolver:
    """Builds Psi_alpha order by order from T Psi = -(1/c0)(Id - T)[phi^2 - mu phi].

    Here ``phi = Q phi + Psi`` and ``Q phi = A e1 + B e2 + C e3 + D e4`` in the
    kernel basis of the branch.
    """

    def __init__(self, params: SymbolParams):
        self.params = params
        self.proj = ProjectionSpec.for_params(params)
        self.T = T_multiplier(params)
        self.IT = id_minus_T_multiplier(params)
        self.basis = self.proj.basis()
        self.cache = {}

    def _solve(self, source):
        rhs = apply_multiplier(self.IT, source) * (-1.0 / self.params.c0)
        return solve_T_equation(rhs, self.T, self.proj.matrix, self.proj.kernel_freqs)

    def psi(self, index):
        index = tuple(index)
        if index in self.cache:
            return self.cache[index]
        alpha, n = index[:4], index[4]
        order = sum(alpha)
        w = self.proj.omega
        if n == 1 and order == 1:
            # -mu Q phi contributes -e_i; the bracket is negated by the solve
            i = alpha.index(1)
            source = self.basis[i] * -1.0
        elif n == 0 and order == 2:
            nz = [i for i in range(4) if alpha[i]]
            if len(nz) == 1:
                source = self.basis[nz[0]] * self.basis[nz[0]]
            else:
                source = self.basis[nz[0]] * self.basis[nz[1]] * 2.0
        elif n == 0 and order == 3:
            source = TrigPoly(w)
            for i in range(4):
                if alpha[i] == 0:
                    continue
                rest = tuple(alpha[k] - (k == i) for k in range(4)) + (0,)
                source = source + self.basis[i] * self.psi(rest) * 2.0
        else:
            raise DomainError(f"index {code(index)} is outside the implemented orders")
        out = self._solve(source)
        self.cache[index] = out
        return out

    def value(self, index):
        return fourth_deriv_at_zero(self.psi(idx(index) if isinstance(index, str) else index))


def cm_coeffs_ansatz(params: SymbolParams, keys=None):
    """Coefficients psi_pqlmn from the undetermined-coefficient solves."""
    solver = CenterManifoldSolver(params)
    if keys is None:
        keys = C3_KEYS if params.branch == "C3" else C2_KEYS + C2_EXTRA
    values = {}
    functions = {}
    for k in keys:
        values[k] = solver.value(k)
        functions[k] = solver.psi(idx(k))
    extra = {**params.to_dict()}
    if params.branch == "C3":
        extra["k0"] = solver.proj.omega
    return CmCoeffs(values=values, branch=params.branch, source="AnsatzSolve", params=extra, functions=functions)


def all_quadratic_indices():
    out = []
    for alpha in product(range(3), repeat=4):
        if sum(alpha) == 2:
            out.append(alpha + (0,))
    for i in range(4):
        out.append(_unit(i) + (1,))
    return out


def compare(closed: CmCoeffs, ansatz: CmCoeffs, rtol=1e-8):
    """Per-key relative discrepancy between two coefficient tables."""
    report = {}
    for k, v in closed.values.items():
        if k not in ansatz.values:
            continue
        w = ansatz.values[k]
        rel = abs(v - w) / max(abs(w), 1e-300)
        report[k] = {"closed": v, "ansatz": w, "rel": rel, "ok": bool(rel <= rtol)}
        if rel > rtol:
            log.info("psi_%s: closed form %.12g vs ansatz %.12g", k, v, w)
    return report


def adjudicate_c2_reading(s, rtol=1e-8):
    """Compare both readings of psi_10200 against the ansatz value."""
    ans = CenterManifoldSolver(SymbolParams.c2(s)).value("10200")
    out = {}
    for reading in ("bs", "bd"):
        v = cm_coeffs_closed_C2(s, reading).values["10200"]
        out[reading] = {"value": v, "rel": abs(v - ans) / abs(ans)}
    out["ansatz"] = ans
    matching = [r for r in ("bs", "bd") if out[r]["rel"] <= rtol]
    out["verdict"] = matching[0] if len(matching) == 1 else ("both" if matching else "neither")
    return out
