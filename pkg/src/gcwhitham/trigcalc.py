"""Calculus on trigonometric polynomials ``sum c x^k cos(j w x)``, ``x^k sin(j w x)``.

Frequencies are stored as non-negative integer multiples ``j`` of a base
frequency ``w`` so that product-to-sum identities keep dictionary keys exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable

import numpy as np

from .errors import NotSolvable, PowerOverflow, RankDeficient
from .symbols import l_deriv, l_eval

MAX_POWER = 8
COEF_TOL = 1e-300


class TrigPoly:
    """Finite sum of ``coef * x**k * trig(j*omega*x)`` with ``trig`` in {cos, sin}.

    Keys are ``(k, j, phase)`` with ``j >= 0`` and ``phase`` in ``{"c", "s"}``.
    """

    __slots__ = ("omega", "terms")

    def __init__(self, omega, terms=None):
        self.omega = float(omega)
        self.terms = {}
        for key, c in (terms or {}).items():
            self._add(key, c)

    # construction helpers
    @classmethod
    def monomial(cls, omega, k=0, j=0, phase="c", coef=1.0):
        return cls(omega, {(k, j, phase): coef})

    @classmethod
    def zero(cls, omega):
        return cls(omega)

    def _add(self, key, c):
        k, j, ph = key
        if k > MAX_POWER:
            raise PowerOverflow(f"power {k} exceeds {MAX_POWER}")
        if j < 0:
            j = -j
            if ph == "s":
                c = -c
        if ph == "s" and j == 0:
            return
        key = (k, j, ph)
        v = self.terms.get(key, 0.0) + c
        if abs(v) <= COEF_TOL:
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    def copy(self):
        return TrigPoly(self.omega, dict(self.terms))

    def _check(self, other):
        if not isinstance(other, TrigPoly):
            raise TypeError("TrigPoly arithmetic needs TrigPoly operands")
        if self.omega != other.omega:
            raise ValueError("base frequencies differ")

    # arithmetic
    def __add__(self, other):
        if np.isscalar(other):
            other = TrigPoly.monomial(self.omega, coef=float(other))
        self._check(other)
        out = self.copy()
        for key, c in other.terms.items():
            out._add(key, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return TrigPoly(self.omega, {k: other * v for k, v in self.terms.items()})
        self._check(other)
        out = TrigPoly(self.omega)
        for (k1, j1, p1), c1 in self.terms.items():
            for (k2, j2, p2), c2 in other.terms.items():
                k = k1 + k2
                h = 0.5 * c1 * c2
                if p1 == "c" and p2 == "c":
                    out._add((k, j1 - j2, "c"), h)
                    out._add((k, j1 + j2, "c"), h)
                elif p1 == "s" and p2 == "s":
                    out._add((k, j1 - j2, "c"), h)
                    out._add((k, j1 + j2, "c"), -h)
                elif p1 == "s":
                    out._add((k, j1 + j2, "s"), h)
                    out._add((k, j1 - j2, "s"), h)
                else:
                    out._add((k, j2 + j1, "s"), h)
                    out._add((k, j2 - j1, "s"), h)
        return out

    __rmul__ = __mul__

    # queries
    def max_power(self):
        return max((k for k, _, _ in self.terms), default=0)

    def frequencies(self):
        return sorted({j for _, j, _ in self.terms})

    def is_even(self):
        return all((k % 2 == 0) == (ph == "c") for k, _, ph in self.terms)

    def is_odd(self):
        return all((k % 2 == 1) == (ph == "c") for k, _, ph in self.terms)

    def even_part(self):
        return TrigPoly(
            self.omega,
            {key: c for key, c in self.terms.items() if (key[0] % 2 == 0) == (key[2] == "c")},
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for (k, j, ph), c in self.terms.items():
            trig = np.cos if ph == "c" else np.sin
            out = out + c * x**k * trig(j * self.omega * x)
        return out

    def derivative(self):
        out = TrigPoly(self.omega)
        for (k, j, ph), c in self.terms.items():
            y = j * self.omega
            if k:
                out._add((k - 1, j, ph), k * c)
            if j:
                out._add((k, j, "s" if ph == "c" else "c"), (-y if ph == "c" else y) * c)
        return out

    def max_abs_coef(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __repr__(self):
        parts = [f"{c:+.6g}*x^{k}*{'cos' if p == 'c' else 'sin'}({j}w x)" for (k, j, p), c in sorted(self.terms.items())]
        return f"TrigPoly(w={self.omega:.6g}: " + (" ".join(parts) or "0") + ")"


def deriv_at_zero(p: TrigPoly, n: int) -> float:
    """n-th derivative at the origin, using d^n[x^k f](0) = C(n,k) k! f^(n-k)(0)."""
    total = 0.0
    for (k, j, ph), c in p.terms.items():
        if k > n:
            continue
        r = n - k
        y = j * p.omega
        if ph == "c":
            fr = 0.0 if r % 2 else (-1) ** (r // 2) * y**r
        else:
            fr = (-1) ** ((r - 1) // 2) * y**r if r % 2 else 0.0
        total += c * comb(n, k) * factorial(k) * fr
    return total


def fourth_deriv_at_zero(p: TrigPoly) -> float:
    return deriv_at_zero(p, 4)


def jet(p: TrigPoly):
    """(p(0), p'(0), p''(0), p'''(0))."""
    return np.array([deriv_at_zero(p, n) for n in range(4)])


# ---------------------------------------------------------------- multipliers


@dataclass
class MultiplierSpec:
    """An even Fourier multiplier given through its derivatives ``deriv(y, n)``."""

    deriv: Callable[[float, int], float]
    name: str = "m"
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, y, n=0):
        key = (float(y), int(n))
        if key not in self._cache:
            if n % 2 == 1 and y == 0.0:
                val = 0.0
            else:
                val = float(self.deriv(float(y), int(n)))
            self._cache[key] = val
        return self._cache[key]

    def check_even(self, y=0.0, tol=1e-12):
        for n in (1, 3):
            if abs(float(self.deriv(y, n))) > tol:
                raise ValueError(f"{self.name} is not even: derivative {n} at 0 nonzero")


def identity_multiplier():
    return MultiplierSpec(lambda y, n: 1.0 if n == 0 else 0.0, name="Id")


def ell_multiplier(tau):
    def d(y, n):
        return l_eval(tau, y) if n == 0 else l_deriv(tau, y, n)

    return MultiplierSpec(d, name=f"l_tau={tau}")


def T_multiplier(params):
    """Symbol of ``T = 1 - c0 l(D)``."""
    ell = ell_multiplier(params.tau)
    c0 = params.c0
    return MultiplierSpec(lambda y, n: (1.0 if n == 0 else 0.0) - c0 * ell(y, n), name="T")


def id_minus_T_multiplier(params):
    """Symbol of ``Id - T = c0 l(D)``."""
    ell = ell_multiplier(params.tau)
    c0 = params.c0
    return MultiplierSpec(lambda y, n: c0 * ell(y, n), name="Id-T")


def apply_multiplier(m: MultiplierSpec, p: TrigPoly) -> TrigPoly:
    """Apply an even multiplier through the binomial rule.

    ``m(D)[x^k e^{iyx}] = sum_r C(k,r) (-i)^r m^(r)(y) x^(k-r) e^{iyx}``; the
    real and imaginary parts give the cosine and sine rows for every parity.
    """
    out = TrigPoly(p.omega)
    for (k, j, ph), c in p.terms.items():
        if k > 4:
            raise PowerOverflow("multiplier action supports powers up to 4")
        y = j * p.omega
        for r in range(k + 1):
            dr = m(y, r)
            if dr == 0.0:
                continue
            w = comb(k, r) * dr * c
            half, odd = divmod(r, 2)
            sgn = (-1) ** half
            if not odd:
                out._add((k - r, j, ph), sgn * w)
            elif ph == "c":
                out._add((k - r, j, "s"), sgn * w)
            else:
                out._add((k - r, j, "c"), -sgn * w)
    return out


# ---------------------------------------------------------------- T-solves


def _parity_ok(key, parity):
    if parity is None:
        return True
    even = (key[0] % 2 == 0) == (key[2] == "c")
    return even == (parity == "even")


def _ansatz_keys(rhs: TrigPoly, kernel_freqs, extra):
    # T preserves parity, so a pure-parity rhs only needs same-parity monomials
    parity = None
    if rhs.terms and rhs.is_even():
        parity = "even"
    elif rhs.terms and rhs.is_odd():
        parity = "odd"
    by_freq = {}
    for k, j, _ in rhs.terms:
        by_freq[j] = max(by_freq.get(j, 0), k)
    for j in kernel_freqs:
        by_freq.setdefault(j, 1)
    keys = []
    for j, kmax in sorted(by_freq.items()):
        for k in range(min(kmax + extra, 4) + 1):
            for ph in ("c", "s") if j else ("c",):
                if _parity_ok((k, j, ph), parity):
                    keys.append((k, j, ph))
    return keys


def solve_T_equation(rhs: TrigPoly, T: MultiplierSpec, constraint, kernel_freqs=(), tol=1e-10):
    """Solve ``T psi = rhs`` with ``constraint @ jet(psi) = 0``.

    Parameters
    ----------
    rhs : TrigPoly
        Right-hand side.
    T : MultiplierSpec
        Symbol of the linear operator.
    constraint : (4, 4) array
        Projection matrix acting on the jet; ``Q psi = 0`` means its image vanishes.
    kernel_freqs : iterable of int
        Frequency multiples of the kernel of ``T``; always included in the ansatz.

    Returns
    -------
    TrigPoly
        The unique solution in the ansatz space.
    """
    constraint = np.asarray(constraint, dtype=float)
    for extra in (2, 3):
        keys = _ansatz_keys(rhs, kernel_freqs, extra)
        images = [apply_multiplier(T, TrigPoly.monomial(rhs.omega, *key)) for key in keys]
        rows = sorted({key for im in images for key in im.terms} | set(rhs.terms))
        row_index = {key: i for i, key in enumerate(rows)}
        M = np.zeros((len(rows) + 4, len(keys)))
        b = np.zeros(len(rows) + 4)
        for col, im in enumerate(images):
            for key, c in im.terms.items():
                M[row_index[key], col] = c
            M[len(rows):, col] = constraint @ jet(TrigPoly.monomial(rhs.omega, *keys[col]))
        for key, c in rhs.terms.items():
            b[row_index[key]] = c
        scale = np.linalg.norm(M, axis=0)
        scale[scale == 0] = 1.0
        sol, _, rank, sv = np.linalg.lstsq(M / scale, b, rcond=None)
        if rank < len(keys):
            continue
        coef = sol / scale
        psi = TrigPoly(rhs.omega, dict(zip(keys, coef)))
        back = apply_multiplier(T, psi) - rhs
        # round-off scales with the largest term entering the reassembled sum
        ref = max(rhs.max_abs_coef(), float(np.max(np.abs(M[: len(rows)]) @ np.abs(coef))), 1e-300)
        if back.max_abs_coef() > tol * ref or np.max(np.abs(constraint @ jet(psi))) > tol * ref * 10:
            raise NotSolvable(
                f"T psi = rhs inconsistent: residual {back.max_abs_coef():.3e}"
            )
        return psi
    raise RankDeficient("ansatz space has a nontrivial kernel after enlargement")

