"""Newton refinement of explicit profiles; records convergence and distance to the start.

MSW runs use the elevation wave at s; GSW runs scan k' on a ripple-commensurate box.
"""

from dataclasses import asdict, dataclass

import numpy as np

from _common import parse_config, write_json
from gcwhitham.errors import NoConvergence, SingularJacobian
from gcwhitham.spectral import PeriodicGrid, newton_refine
from gcwhitham.waves import GswParams, gsw_profile, msw_profile, ripple_commensurate_length


@dataclass(frozen=True)
class NewtonConfig:
    s: float = 1.0
    msw_mus: tuple = (-4e-3, -2e-3, -1e-3, -5e-4)
    tau: float = 0.2
    gsw_mu: float = -1e-2
    gsw_kprimes: tuple = (1e-3, 1e-2, 1.0)
    guard_constant: float = 0.01
    N: int = 4096
    L: float = 400.0
    gsw_N: int = 2048
    gsw_min_length: float = 120.0
    max_iter: int = 25
    out: str = "results/newton_sweep.json"


def _run(start, max_iter):
    try:
        out, log = newton_refine(start, max_iter=max_iter)
    except (NoConvergence, SingularJacobian) as exc:
        return {"converged": False, "error": type(exc).__name__, "message": str(exc)}
    return {
        "converged": True,
        **log.to_dict(),
        "sup_distance": float(np.max(np.abs(out.values - start.values))),
        "refined_sup": out.sup(),
        "start_sup": start.sup(),
    }


def main():
    cfg = parse_config(NewtonConfig, __doc__)
    grid = PeriodicGrid(cfg.N, cfg.L)
    msw = []
    for mu in cfg.msw_mus:
        rec = {"mu": mu, **_run(msw_profile(cfg.s, mu, 0.0, grid.x), cfg.max_iter)}
        msw.append(rec)
        print(f"MSW mu={mu:+.1e}: {rec.get('iterations', rec.get('error'))} steps, "
              f"refined sup {rec.get('refined_sup', float('nan')):.3g} vs start {rec.get('start_sup', float('nan')):.3g}")
    gsw = []
    for kp in cfg.gsw_kprimes:
        P = GswParams(mu=cfg.gsw_mu, kprime=kp, guard_constant=cfg.guard_constant)
        L = ripple_commensurate_length(cfg.tau, P, 1, min_length=cfg.gsw_min_length)
        rec = {"kprime": kp, "L": L, **_run(gsw_profile(cfg.tau, P, PeriodicGrid(cfg.gsw_N, L).x), cfg.max_iter)}
        gsw.append(rec)
        print(f"GSW k'={kp:g}: converged={rec['converged']}")
    write_json(cfg.out, {"config": asdict(cfg), "msw": msw, "gsw": gsw})


if __name__ == "__main__":
    main()
