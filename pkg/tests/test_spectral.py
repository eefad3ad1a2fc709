import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcwhitham.errors import AliasingError, DomainError, NoConvergence, SingularJacobian
from gcwhitham.spectral import (
    PeriodicGrid,
    apply_M,
    even_defect,
    from_half,
    half_multiplier_matrix,
    jacobian_apply,
    newton_refine,
    residual,
    residual_values,
    to_half,
)
from gcwhitham.symbols import m_eval
from gcwhitham.waves import (
    GswParams,
    WaveProfile,
    galilean_shift,
    gsw_profile,
    msw_profile,
    ripple_commensurate_length,
)

TAU = 0.2


def msw_start(mu=-1e-3, N=2048, L=400.0):
    return msw_profile(1.0, mu, 0.0, PeriodicGrid(N, L).x)


def test_grid_validation():
    with pytest.raises(DomainError):
        PeriodicGrid(1000, 10.0)
    with pytest.raises(DomainError):
        PeriodicGrid(64, -1.0)
    g = PeriodicGrid(64, 10.0)
    assert g.x[0] == -5.0 and g.dx == 10.0 / 64
    prof = WaveProfile(x=np.linspace(0, 1, 64), values=np.zeros(64), c=1.0, tau=TAU)
    with pytest.raises(DomainError):
        PeriodicGrid.from_profile(prof)


@pytest.mark.parametrize("n", [0, 1, 7, 40])
def test_eigenfunctions(n):
    g = PeriodicGrid(256, 30.0)
    k = 2 * np.pi * n / g.L
    v = np.cos(k * g.x)
    assert np.allclose(apply_M(v, g, TAU), m_eval(TAU, k) * v, atol=1e-13)


def test_constant_is_fixed():
    g = PeriodicGrid(128, 12.0)
    assert np.allclose(apply_M(np.full(128, 2.5), g, TAU), 2.5, atol=1e-14)


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_self_adjoint(seed):
    g = PeriodicGrid(128, 20.0)
    rng = np.random.default_rng(seed)
    # smooth random data so the aliasing guard stays quiet
    k = np.fft.rfftfreq(128, 1 / 128)
    def smooth():
        spec = (rng.normal(size=k.size) + 1j * rng.normal(size=k.size)) * np.exp(-k)
        return np.fft.irfft(spec, n=128)
    u, v = smooth(), smooth()
    lhs = np.dot(apply_M(u, g, TAU), v)
    rhs = np.dot(u, apply_M(v, g, TAU))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)


def test_aliasing_guard():
    g = PeriodicGrid(256, 10.0)
    noise = np.random.default_rng(1).normal(size=256)
    with pytest.raises(AliasingError):
        apply_M(noise, g, TAU)
    apply_M(noise, g, TAU, check_aliasing=False)


def test_zero_residual():
    g = PeriodicGrid(64, 10.0)
    prof = WaveProfile(x=g.x, values=np.zeros(64), c=0.9, tau=TAU)
    rep = residual(prof)
    assert rep.sup == 0.0 and rep.accepted


def test_msw_residual_is_small():
    prof = msw_start()
    rep = residual(prof)
    assert rep.accepted
    assert rep.sup / prof.sup() < 0.2


def test_jacobian_fd_collapse():
    prof = msw_start()
    g = PeriodicGrid.from_profile(prof)
    v = np.cos(g.x) * np.exp(-(g.x / 40) ** 2)
    F0 = residual_values(prof.values, g, prof.c, TAU)
    Jv = jacobian_apply(prof.values, v, g, prof.c, TAU)
    errs = []
    for h in (1e-4, 1e-5):
        Fh = residual_values(prof.values + h * v, g, prof.c, TAU)
        errs.append(np.max(np.abs(Fh - F0 - h * Jv)))
    assert errs[0] / errs[1] == pytest.approx(100.0, rel=0.05)


def test_half_grid_round_trip():
    g = PeriodicGrid(64, 10.0)
    v = np.cos(2 * np.pi * 3 * g.x / g.L) + np.cos(2 * np.pi * g.x / g.L) ** 2
    assert even_defect(v) < 1e-14
    assert np.array_equal(from_half(to_half(v)), v)
    Mh = half_multiplier_matrix(g, TAU)
    assert np.allclose(from_half(Mh @ to_half(v)), apply_M(v, g, TAU), atol=1e-13)


@pytest.fixture(scope="module")
def refined_msw():
    return newton_refine(msw_start())


def test_newton_msw(refined_msw):
    out, log = refined_msw
    assert log.final_residual < 1e-11
    assert log.reduction > 1e6
    assert out.meta["refined"]
    start = msw_start()
    assert np.max(np.abs(out.values - start.values)) <= 3 * log.linear_bound


def test_newton_fixed_point(refined_msw):
    out, _ = refined_msw
    again, log = newton_refine(out)
    assert log.iterations == 0
    assert np.array_equal(again.values, out.values)


def test_newton_galilean_consistency(refined_msw):
    out, _ = refined_msw
    v = 0.01
    shifted, log = newton_refine(galilean_shift(msw_start(), v))
    assert np.max(np.abs(shifted.values - (out.values - v))) < 1e-10
    assert shifted.c == pytest.approx(out.c - 2 * v, abs=1e-15)


def test_newton_rejects_odd_input():
    prof = msw_start()
    odd = prof.with_values(np.sin(prof.x / 10) * 1e-2)
    with pytest.raises(DomainError):
        newton_refine(odd)


def test_newton_no_convergence_carries_best():
    with pytest.raises(NoConvergence) as err:
        newton_refine(msw_start(), max_iter=1)
    assert len(err.value.history) == 2
    assert err.value.best.values.shape == (2048,)


def test_newton_singular_jacobian():
    g = PeriodicGrid(64, 2 * np.pi * 8)
    c = float(m_eval(TAU, 3 * 2 * np.pi / g.L))
    prof = WaveProfile(x=g.x, values=np.zeros(64), c=c, tau=TAU, meta={"b": 1e-3})
    with pytest.raises(SingularJacobian) as err:
        newton_refine(prof)
    assert err.value.smallest_singular_value < 1e-10


def test_gsw_needs_commensurate_box():
    P = GswParams(mu=-1e-2, kprime=1e-3, guard_constant=0.01)
    with pytest.raises(DomainError):
        newton_refine(gsw_profile(TAU, P, PeriodicGrid(2048, 120.0).x))


def test_gsw_small_ripple_refines():
    P = GswParams(mu=-1e-2, kprime=1e-3, guard_constant=0.01)
    L = ripple_commensurate_length(TAU, P, 1, min_length=120)
    prof = gsw_profile(TAU, P, PeriodicGrid(2048, L).x)
    out, log = newton_refine(prof)
    assert log.final_residual < 1e-11
    # the refined wave differs from the explicit one at the order of its own size
    assert np.max(np.abs(out.values - prof.values)) < prof.sup()
