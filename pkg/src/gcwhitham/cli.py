"""Command-line entry point: ``gcwhitham <subcommand> ...``.

Exit codes: 0 ok, 2 validation failure, 3 numerical failure, 4 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import auto_roots, c2_point, roots_in_strip
from .errors import ArgumentError, DomainError, NumericalError, ValidationError, WhithamError
from .normalform import nf_coeffs_C2, nf_coeffs_C3
from .reduction import (
    adjudicate_c2_reading,
    cm_coeffs_ansatz,
    cm_coeffs_closed_C2,
    cm_coeffs_closed_C3,
    compare,
)
from .spectral import newton_refine, residual
from .symbols import SymbolParams
from .verify import SUITES, run_suite
from .waves import GswParams, WaveProfile, gsw_profile, msw_profile, periodic_grid

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_ARGS = 0, 2, 3, 4
THREADS_ENV = "GCWHITHAM_THREADS"


@dataclass
class RunConfig:
    """Resolved settings of one invocation; round-trips through JSON."""

    subcommand: str
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"
    seed: int = 0

    def to_json(self):
        return dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


# ---------------------------------------------------------------- output


def fmt(x):
    return f"{x:.17g}"


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return json.dumps(str(x))
        return fmt(x)
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def dumps(obj, indent=2):
    """JSON with sorted keys and floats pinned to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in r))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_ARGS)


def parse_range(text):
    """``start:stop:step`` inclusive of ``stop`` up to rounding; a bare number is one point."""
    parts = [float(p) for p in text.split(":")]
    if len(parts) == 1:
        return [parts[0]]
    if len(parts) != 3 or parts[2] <= 0:
        raise DomainError(f"bad range {text!r}; expected start:stop:step with step > 0")
    a, b, h = parts
    if b < a:
        return []
    n = int(math.floor((b - a) / h + 1e-9))
    return [round(a + i * h, 12) for i in range(n + 1)]


def _floats(text):
    return [float(v) for v in text.split(",") if v]


def load_config(path):
    """JSON object or ``key=value`` lines."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise DomainError("config JSON must be an object")
        return data
    except json.JSONDecodeError:
        out = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line {line!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k] = v
        return out


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    for k, v in load_config(args.config).items():
        key = k.replace("-", "_")
        if not hasattr(args, key):
            raise DomainError(f"unknown config key {k!r}")
        cur = getattr(args, key)
        if isinstance(v, str) and isinstance(cur, (int, float)) and not isinstance(cur, bool):
            v = type(cur)(v)
        setattr(args, key, v)
    return args


# ---------------------------------------------------------------- commands


def cmd_curves(args):
    if args.c2:
        rows = []
        for s in parse_range(args.s):
            if s <= 0:
                continue
            bp = c2_point(s)
            rows.append((s, bp.beta, bp.alpha, bp.tau, bp.c0))
        text = _csv(["s", "beta", "alpha", "tau0", "c0"], rows)
    else:
        rows = []
        for b in parse_range(args.beta):
            if args.c3 and not (0 <= b <= 1 / 3):
                continue
            if args.c4 and b < 1 / 3:
                continue
            rows.append((b, 1.0))
        text = _csv(["beta", "alpha"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    taus = _floats(args.tau) if args.tau else None
    ss = _floats(args.s) if args.s else None
    report, ok = run_suite(args.suite, taus, ss)
    _emit(dumps(report), args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_wave(args):
    x = periodic_grid(args.N, args.L)
    if args.kind == "gsw":
        P = GswParams(mu=args.mu, kprime=args.kprime, kappa=args.kappa, theta_star=args.theta, guard_constant=args.guard)
        prof = gsw_profile(args.tau, P, x, allow_large_mu=args.allow_large_mu)
    else:
        prof = msw_profile(args.s, args.mu, args.theta, x, allow_large_mu=args.allow_large_mu)
    if args.out:
        prof.to_csv(args.out)
    else:
        sys.stdout.write(_csv(["x", "phi"], zip(prof.x.tolist(), prof.values.tolist())))
    return EXIT_OK


def _load_profile(args):
    return WaveProfile.from_csv(args.input, c=args.c, tau=args.tau)


def cmd_residual(args):
    prof = _load_profile(args)
    rep = residual(prof)
    _emit(dumps(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_refine(args):
    prof = _load_profile(args)
    refined, log = newton_refine(prof, tol=args.tol, max_iter=args.max_iter)
    if args.out:
        refined.to_csv(args.out)
        Path(args.out).with_suffix(".log.json").write_text(dumps(log.to_dict()))
    else:
        sys.stdout.write(_csv(["x", "phi"], zip(refined.x.tolist(), refined.values.tolist())))
    sys.stderr.write(dumps(log.to_dict()))
    return EXIT_OK


def cmd_coeffs(args):
    if args.curve == "c3":
        closed = cm_coeffs_closed_C3(args.tau)
        ans = cm_coeffs_ansatz(SymbolParams.c3(args.tau))
        nf = nf_coeffs_C3(args.tau).__dict__
        rep = {"curve": "C3", "tau": args.tau, "psi": compare(closed, ans), "nf": nf}
    else:
        closed = cm_coeffs_closed_C2(args.s)
        ans = cm_coeffs_ansatz(SymbolParams.c2(args.s))
        c = nf_coeffs_C2(args.s)
        rep = {
            "curve": "C2",
            "s": args.s,
            "psi": compare(closed, ans),
            "psi10200_reading": adjudicate_c2_reading(args.s),
            "nf": {"q0": c.q0, "q1": c.q1, "route": c.route},
        }
    _emit(dumps(rep), args.out)
    return EXIT_OK


def _winding_params(tau, c0):
    if c0 == 1.0 and 0 < tau < 1 / 3:
        return SymbolParams.c3(tau)
    return SymbolParams.generic(tau, c0)


def cmd_winding(args):
    params = _winding_params(args.tau, args.c0)
    if args.eta == "auto":
        rep = auto_roots(params, args.R)
    else:
        rep = roots_in_strip(params, float(args.eta), args.R)
    if args.json:
        _emit(dumps(rep.to_dict()), args.out)
    else:
        _emit(f"{rep.winding}\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser():
    p = _Parser(prog="gcwhitham", description="Gravity-capillary Whitham centre-manifold toolkit")
    p.add_argument("--version", action="version", version=f"gcwhitham {__version__}")
    p.add_argument("--config", help="JSON or key=value file overriding flags")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("curves", help="bifurcation curve tables")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--c2", action="store_true")
    g.add_argument("--c3", action="store_true")
    g.add_argument("--c4", action="store_true")
    c.add_argument("--s", default="0.1:4:0.1")
    c.add_argument("--beta", default="0:0.3333:0.01")
    c.add_argument("--out")
    c.set_defaults(func=cmd_curves)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--tau", help="comma-separated Bond numbers (default 0.2)")
    v.add_argument("--s", help="comma-separated C2 parameters (default 1)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("wave", help="asymptotic wave profile")
    w.add_argument("kind", choices=("gsw", "msw"))
    w.add_argument("--tau", type=float, default=0.2)
    w.add_argument("--s", type=float, default=1.0)
    w.add_argument("--mu", type=float, required=True)
    w.add_argument("--kprime", type=float, default=1.0)
    w.add_argument("--kappa", type=float, default=0.0)
    w.add_argument("--theta", type=float, default=0.0)
    w.add_argument("--guard", type=float, default=1.0)
    w.add_argument("--N", type=int, default=4096)
    w.add_argument("--L", type=float, default=400.0)
    w.add_argument("--allow-large-mu", action="store_true")
    w.add_argument("--out")
    w.set_defaults(func=cmd_wave)

    for name, func, helptext in (("residual", cmd_residual, "spectral residual"), ("refine", cmd_refine, "Newton refinement")):
        r = sub.add_parser(name, help=helptext)
        r.add_argument("--input", required=True)
        r.add_argument("--c", type=float)
        r.add_argument("--tau", type=float)
        r.add_argument("--out")
        if name == "refine":
            r.add_argument("--tol", type=float, default=1e-11)
            r.add_argument("--max-iter", type=int, default=25)
        r.set_defaults(func=func)

    k = sub.add_parser("coeffs", help="centre-manifold and normal-form coefficients")
    k.add_argument("--curve", choices=("c2", "c3"), required=True)
    k.add_argument("--tau", type=float, default=0.2)
    k.add_argument("--s", type=float, default=1.0)
    k.add_argument("--out")
    k.set_defaults(func=cmd_coeffs)

    n = sub.add_parser("winding", help="winding number of 1 - c0 l along the strip boundary")
    n.add_argument("--tau", type=float, required=True)
    n.add_argument("--c0", type=float, default=1.0)
    n.add_argument("--eta", default="auto")
    n.add_argument("--R", type=float)
    n.add_argument("--json", action="store_true")
    n.add_argument("--out")
    n.set_defaults(func=cmd_winding)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get(THREADS_ENV)
    try:
        args = _apply_config(args, parser)
        if threads:
            from scipy import fft

            with fft.set_workers(int(threads)):
                return args.func(args)
        return args.func(args)
    except ArgumentError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_ARGS
    except ValidationError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_VALIDATION
    except (NumericalError, WhithamError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
