import numpy as np
import pytest
from scipy import integrate

from gcwhitham.errors import DomainError
from gcwhitham.kernel import (
    _basset,
    cut_density,
    decay_fit,
    kernel_eval,
    kernel_mass,
    singularity_fit,
)
from gcwhitham.spectral import apply_symbol
from gcwhitham.symbols import eta_star, l_eval


def test_methods_agree():
    x = np.array([0.01, 0.3, 1.0, 3.0, 10.0])
    a = kernel_eval(0.2, x, "split")
    b = kernel_eval(0.2, x, "branchcut")
    assert np.all(np.abs(a - b) <= 1e-5 * np.abs(b))


@pytest.mark.parametrize("nu", [-0.25, 0.75, 1.75])
def test_basset_closed_form(nu):
    x = 0.8
    ref, _ = integrate.quad(lambda t: (1 + t * t) ** -(nu + 0.5), 0, np.inf, weight="cos", wvar=x)
    assert _basset(nu, x) == pytest.approx(ref / np.pi, rel=1e-9)


@pytest.mark.parametrize("tau", [0.1, 0.2])
def test_singularity_constant(tau):
    exact = 1 / np.sqrt(2 * np.pi * tau)
    assert singularity_fit(tau) == pytest.approx(exact, rel=1e-2)


@pytest.mark.parametrize("tau", [0.1, 0.2])
def test_constant_correction_to_singularity(tau):
    # K(x) = 1/sqrt(2 pi tau x) + C0 + o(1) with C0 = (1/pi) int (l - (tau xi)^{-1/2})
    f = lambda t: l_eval(tau, t) - (tau * t) ** -0.5  # noqa: E731
    c0 = (integrate.quad(f, 0, 1, limit=200)[0] + integrate.quad(f, 1, np.inf, limit=200)[0]) / np.pi
    x = 1e-4
    pred = 1 / np.sqrt(2 * np.pi * tau) + c0 * np.sqrt(x)
    assert np.sqrt(x) * kernel_eval(tau, x) == pytest.approx(pred, rel=1e-5)
    assert c0 < 0


@pytest.mark.parametrize("tau", [0.1, 0.3])
def test_decay_band(tau):
    rate = decay_fit(tau)
    es = eta_star(tau)
    assert 0.85 * es <= rate <= 1.15 * es


def test_mass():
    assert kernel_mass(0.05) == pytest.approx(1.0, abs=1e-5)


def test_kernel_changes_sign():
    # positive near the origin, negative once the first cut singularity dominates
    assert kernel_eval(0.2, 0.1) > 0
    assert kernel_eval(0.2, 5.0) < 0
    assert np.all(cut_density(0.2, np.linspace(0.1, 1.5, 20)) == 0)
    assert np.all(cut_density(0.2, np.array([1.6, 2.0])) < 0)


def test_domain():
    with pytest.raises(DomainError):
        kernel_eval(0.2, 0.0)
    with pytest.raises(DomainError):
        kernel_eval(0.2, 1.0, method="nope")


def test_convolution_matches_multiplier():
    """Physical-space K * f against l(xi) f_hat on a period-80 grid, f Gaussian."""
    tau, L, N = 0.2, 80.0, 2048
    x = -L / 2 + L * np.arange(N) / N
    f = np.exp(-(x**2))
    spec = apply_symbol(f, L, lambda k: l_eval(tau, k))
    u, wu = np.polynomial.legendre.leggauss(80)
    u = 0.5 * (u + 1)
    wu = 0.5 * wu
    y2, w2 = np.polynomial.legendre.leggauss(80)
    y2 = 1 + 4 * (y2 + 1)
    w2 = 4 * w2
    Ku = kernel_eval(tau, u * u)
    K2 = kernel_eval(tau, y2)
    for j in (N // 2, N // 2 + 13, N // 2 + 38):
        x0 = x[j]
        g = lambda y: np.exp(-((x0 - y) ** 2)) + np.exp(-((x0 + y) ** 2))  # noqa: E731
        near = np.sum(wu * 2 * u * Ku * g(u * u))
        far = np.sum(w2 * K2 * g(y2))
        assert near + far == pytest.approx(spec[j], abs=1e-6)
