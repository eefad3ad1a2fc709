"""Verification suites driven by ``gcwhitham verify``.

Every check returns a plain dict with a boolean ``passed`` entry; reports hold
no timings or other run-dependent data so repeated runs are byte-identical.
"""

from __future__ import annotations

import numpy as np

from .dispersion import auto_roots, expected_roots
from .kernel import kernel_diagnostics
from .normalform import GswOrbit, MswOrbit, nf_coeffs_C2, nf_coeffs_C3
from .reduction import (
    adjudicate_c2_reading,
    cm_coeffs_ansatz,
    cm_coeffs_closed_C2,
    cm_coeffs_closed_C3,
    compare,
)
from .symbols import SymbolParams
from .waves import GswParams, galilean_shift, gsw_parts, gsw_profile, msw_profile, periodic_grid

SUITES = ("kernel", "fredholm", "coeffs", "nf", "waves")
DEFAULTS = {"tau": (0.2,), "s": (1.0,)}


def _roots_match(found, expected, tol=1e-5):
    if len(found) != len(expected):
        return False
    return all(m == me and abs(z - ze) <= tol * max(1.0, abs(ze)) for (z, m), (ze, me) in zip(found, expected))


def check_fredholm(params: SymbolParams):
    rep = auto_roots(params)
    exp = expected_roots(params)
    ok = rep.winding == 4 and rep.multiplicities() == 4 and _roots_match(rep.roots, exp)
    return {"params": params.to_dict(), **rep.to_dict(), "passed": bool(ok)}


def check_kernel(tau):
    r = kernel_diagnostics(tau)
    sing_ok = abs(r.singularity_estimate / r.singularity_exact - 1) < 0.01
    decay_ok = 0.85 * r.eta_star <= r.decay_rate <= 1.15 * r.eta_star
    mass_ok = abs(r.mass - 1) < 1e-5
    return {
        "tau": tau,
        "singularity_estimate": r.singularity_estimate,
        "singularity_exact": r.singularity_exact,
        "singularity_at_1e-4": r.singularity_at_1e4,
        "decay_rate": r.decay_rate,
        "eta_star": r.eta_star,
        "mass": r.mass,
        "first_sign_change": r.sign_change_x,
        "passed": bool(sing_ok and decay_ok and mass_ok),
    }


def check_coeffs_c3(tau, rtol=1e-8):
    cmp = compare(cm_coeffs_closed_C3(tau), cm_coeffs_ansatz(SymbolParams.c3(tau)), rtol)
    return {"tau": tau, "entries": cmp, "passed": all(v["ok"] for v in cmp.values())}


def check_coeffs_c2(s, rtol=1e-8):
    cmp = compare(cm_coeffs_closed_C2(s), cm_coeffs_ansatz(SymbolParams.c2(s)), rtol)
    adj = adjudicate_c2_reading(s, rtol)
    ok = all(v["ok"] for v in cmp.values()) and adj["verdict"] == "bd"
    return {"s": s, "entries": cmp, "psi10200_reading": adj, "passed": bool(ok)}


def check_nf_c3(tau):
    c = nf_coeffs_C3(tau)
    return {"tau": tau, "coeffs": c.__dict__, "passed": bool(c.structure_ok())}


def check_nf_c2(s):
    c = nf_coeffs_C2(s)
    return {"s": s, "q0": c.q0, "q1": c.q1, "route": c.route, "passed": bool(c.q0 < 0 and c.q1 < 0)}


def check_waves(tau, s):
    t = np.linspace(-20, 20, 2001)
    out = {}
    msw = MswOrbit(s=s, mu=-1e-3)
    env = float(np.max(msw.envelope_residual(t)))
    fld = float(np.max(msw.field_residual(t)))
    out["msw_envelope_residual"] = {"value": env, "passed": env < 1e-12}
    out["msw_field_residual"] = {"value": fld, "passed": fld < 1e-12}

    cons = GswOrbit(tau=tau, mu=1e-2, k=0.01, variant="consistent")
    cres = float(np.max(cons.residual(t)))
    out["gsw_consistent_residual"] = {"value": cres, "passed": cres < 1e-12}

    x = periodic_grid(1024, 200.0)
    P = GswParams(mu=-1e-2)
    prof = gsw_profile(tau, P, x)
    core, ped, rip = gsw_parts(tau, P, x)
    split = float(np.max(np.abs(prof.values - (core + ped + rip))))
    ped_err = abs(ped[0] - 0.5 * P.mu * (1 - np.sign(P.mu) * np.sqrt(P.rho)))
    out["gsw_bookkeeping"] = {"split": split, "pedestal": ped_err, "passed": split == 0.0 and ped_err == 0.0}

    v = 0.5 * P.mu * (1 + np.sqrt(P.rho))
    shifted = galilean_shift(prof, v)
    target = 1 + abs(P.mu) * np.sqrt(P.rho)
    speed_err = abs(shifted.c - target)
    out["galilean_speed"] = {"c": shifted.c, "target": target, "error": speed_err, "passed": speed_err <= 4e-16 * target}

    xm = periodic_grid(1024, 400.0)
    up = msw_profile(s, -1e-3, 0.0, xm)
    dn = msw_profile(s, -1e-3, np.pi, xm)
    anti = float(np.max(np.abs(up.values + dn.values)))
    out["msw_elevation_depression"] = {"value": anti, "passed": anti == 0.0}
    return {"tau": tau, "s": s, "checks": out, "passed": all(c["passed"] for c in out.values())}


def run_suite(suite="all", taus=None, ss=None):
    """Run one or all suites and return (report, all_passed)."""
    taus = tuple(taus or DEFAULTS["tau"])
    ss = tuple(ss or DEFAULTS["s"])
    names = SUITES if suite == "all" else (suite,)
    report = {}
    for name in names:
        if name == "fredholm":
            items = [check_fredholm(SymbolParams.c3(t)) for t in taus]
            items += [check_fredholm(SymbolParams.c2(s)) for s in ss]
        elif name == "kernel":
            items = [check_kernel(t) for t in taus]
        elif name == "coeffs":
            items = [check_coeffs_c3(t) for t in taus] + [check_coeffs_c2(s) for s in ss]
        elif name == "nf":
            items = [check_nf_c3(t) for t in taus] + [check_nf_c2(s) for s in ss]
        elif name == "waves":
            items = [check_waves(t, s) for t in taus for s in ss]
        else:
            raise ValueError(f"unknown suite {name!r}")
        report[name] = {"checks": items, "passed": all(i["passed"] for i in items)}
    ok = all(v["passed"] for v in report.values())
    return {"suite": suite, "passed": ok, "results": report}, ok
