import numpy as np
import pytest

from gcwhitham.dispersion import (
    auto_roots,
    c2_point,
    c3_point,
    dispersion_residual,
    residue_index_decomposition,
    roots_in_strip,
    solve_k0,
    winding_number,
)
from gcwhitham.errors import NoRoot
from gcwhitham.symbols import SymbolParams, l_eval, l_prime, m_eval

from conftest import k0_oracle


@pytest.mark.parametrize("tau", [0.05, 0.1, 0.2, 0.3])
def test_k0_matches_oracle(tau):
    k0 = solve_k0(tau)
    assert k0 == pytest.approx(k0_oracle(tau), rel=1e-13)
    assert m_eval(tau, k0) == pytest.approx(1.0, abs=1e-14)
    assert abs(dispersion_residual(tau, k0)) < 1e-12


def test_k0_reference_value():
    assert solve_k0(0.2) == pytest.approx(3.629409935955998, rel=1e-14)


def test_k0_no_root_at_one_third():
    with pytest.raises(NoRoot):
        solve_k0(1 / 3)


def test_k0_monotone_towards_one_third():
    ks = [solve_k0(t) for t in (0.25, 0.3, 0.32, 0.33, 0.333)]
    assert np.all(np.diff(ks) < 0)


def test_c2_point_double_root():
    bp = c2_point(1.0)
    assert bp.alpha > 1 and bp.c0 < 1
    assert l_eval(bp.tau, 1.0) == pytest.approx(1 / bp.c0, abs=1e-12)
    assert abs(l_prime(bp.tau, 1.0).real) < 1e-10


def test_c2_corner_limit():
    bp = c2_point(1e-3)
    assert bp.beta == pytest.approx(1 / 3, abs=1e-5)
    assert bp.alpha == pytest.approx(1.0, abs=1e-5)


def test_c3_point():
    bp = c3_point(0.2)
    assert bp.alpha == 1.0 and bp.param == pytest.approx(solve_k0(0.2))


def _assert_symmetric(rep):
    key = lambda p: (round(p[0].real, 6), round(p[0].imag, 6))  # noqa: E731
    pos = sorted(((z, m) for z, m in rep.roots), key=key)
    neg = sorted(((-z, m) for z, m in rep.roots), key=key)
    assert all(abs(a - b) < 1e-6 and m == n for (a, m), (b, n) in zip(pos, neg))


def test_c3_roots():
    rep = auto_roots(SymbolParams.c3(0.2))
    k0 = solve_k0(0.2)
    assert rep.winding == 4
    assert [m for _, m in rep.roots] == [1, 2, 1]
    assert rep.roots[0][0] == pytest.approx(-k0, abs=1e-6)
    assert rep.roots[1][0] == pytest.approx(0, abs=1e-6)
    _assert_symmetric(rep)


def test_c2_roots():
    rep = auto_roots(SymbolParams.c2(1.0))
    assert rep.winding == 4
    assert [m for _, m in rep.roots] == [2, 2]
    assert rep.roots[1][0] == pytest.approx(1.0, abs=1e-5)
    _assert_symmetric(rep)


def test_generic_winding_zero():
    p = SymbolParams.generic(0.2, 0.5)
    rep = roots_in_strip(p, 0.5 * p.eta_star, R=10.0)
    assert rep.winding == 0 and rep.roots == []
    parts = rep.arcs
    assert abs(sum(parts.values())) < 1e-6


def test_vertical_arcs_shrink_with_R():
    p = SymbolParams.c3(0.2)
    k0 = solve_k0(0.2)
    eta = 0.5 * p.eta_star
    vert = []
    for R in (k0 + 2, k0 + 6, k0 + 10):
        parts = residue_index_decomposition(p, eta, R)
        vert.append(abs(parts["left"]) + abs(parts["right"]))
    assert vert[0] > vert[1] > vert[2]


def test_c2_horizontal_arcs_sum_to_four():
    p = SymbolParams.c2(1.0)
    parts = residue_index_decomposition(p, 0.5 * p.eta_star, 60.0)
    assert (parts["top"] + parts["bottom"]).real == pytest.approx(4.0, abs=0.05)


def test_winding_is_integer_for_c3_grid():
    for tau in (0.1, 0.3):
        p = SymbolParams.c3(tau)
        w, _ = winding_number(p, 0.4, solve_k0(tau) + 2)
        assert w == 4
