import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcwhitham.errors import OrderTooHigh, StripViolation
from gcwhitham.symbols import (
    SymbolParams,
    c2_alpha_beta,
    c2_helpers,
    eta_star,
    l_deriv,
    l_eval,
    l_prime,
    m_eval,
    taylor_data,
)

from conftest import k0_oracle

taus = st.floats(0.01, 0.6)


def test_m_at_zero():
    assert m_eval(0.2, 0.0) == 1.0
    assert l_eval(0.2, 0.0) == 1.0


@pytest.mark.parametrize("tau", [0.1, 0.2, 0.3])
def test_m_at_k0_is_one(tau):
    assert m_eval(tau, k0_oracle(tau)) == pytest.approx(1.0, abs=1e-14)


def test_m_matches_high_precision_oracle():
    mpmath.mp.dps = 40
    ref = mpmath.sqrt(mpmath.mpf("1.2") * mpmath.tanh(1))
    assert m_eval(0.2, 1.0) == pytest.approx(float(ref), rel=1e-15)


def test_l_decays_along_reals():
    x = np.linspace(10, 1000, 200)
    v = l_eval(0.2, x)
    assert np.all(np.diff(v) < 0) and v[-1] < 0.1


def test_l_is_reciprocal_off_axis():
    z = 2 + 0.3j
    assert l_eval(0.1, z) == pytest.approx(1 / m_eval(0.1, z), rel=1e-15)


def test_strip_violation():
    with pytest.raises(StripViolation):
        m_eval(0.2, 1 + 2j)


@given(taus, st.floats(-20, 20))
def test_m_even_and_real(tau, x):
    a, b = m_eval(tau, x), m_eval(tau, -x)
    assert np.isreal(a) and a == pytest.approx(b, rel=1e-14)


@given(taus, st.floats(-5, 5), st.floats(-0.9, 0.9))
def test_conjugate_symmetry(tau, x, frac):
    z = complex(x, frac * eta_star(tau))
    assert m_eval(tau, z.conjugate()) == pytest.approx(np.conj(m_eval(tau, z)), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("tau", [0.05, 0.1, 0.2, 0.3])
def test_second_derivative_at_zero(tau):
    assert l_deriv(tau, 0.0, 2) == pytest.approx(1 / 3 - tau, rel=1e-10)
    assert taylor_data(tau).sigma == pytest.approx(1 / (1 / 3 - tau), rel=1e-10)


@pytest.mark.parametrize("tau", [0.05, 0.1, 0.2, 0.3])
def test_fourth_derivative_at_zero(tau):
    sig = 1 / (1 / 3 - tau)
    assert l_deriv(tau, 0.0, 4) == pytest.approx(9 / sig**2 - 4 / sig - 4 / 15, rel=1e-9)


def test_odd_derivative_at_zero_vanishes():
    assert l_deriv(0.2, 0.0, 1) == 0.0
    assert l_deriv(0.2, 0.0, 3) == 0.0


@given(taus, st.floats(0.1, 8))
def test_l_prime_closed_form_matches_cauchy(tau, x):
    assert l_prime(tau, x).real == pytest.approx(l_deriv(tau, x, 1), rel=1e-9, abs=1e-12)


def test_order_too_high():
    with pytest.raises(OrderTooHigh):
        l_deriv(0.2, 1.0, 5)


def test_c2_helpers_signs():
    for s in (0.5, 1.0, 2.0):
        h = c2_helpers(s, SymbolParams.c2(s))
        assert np.isfinite(h.d) and h.d < 0
    p = SymbolParams.c2(1.0)
    h = c2_helpers(1.0, p)
    assert h.e < 0
    assert h.a == pytest.approx((1 - 1 / (1 - p.c0)) / (2 * p.c0), rel=1e-14)


def test_c2_alpha_above_one():
    alpha, beta = c2_alpha_beta(np.linspace(0.1, 4, 40))
    assert np.all(alpha > 1)


def test_params_round_trip():
    p = SymbolParams.c2(1.0, mu=-1e-3)
    d = p.to_dict()
    assert d["branch"] == "C2" and d["alpha"] == pytest.approx(1 / p.c0**2)
