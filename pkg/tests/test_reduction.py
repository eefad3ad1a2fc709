import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcwhitham.dispersion import solve_k0
from gcwhitham.reduction import (
    C3_KEYS,
    CenterManifoldSolver,
    ProjectionSpec,
    adjudicate_c2_reading,
    cm_coeffs_ansatz,
    cm_coeffs_closed_C2,
    cm_coeffs_closed_C3,
    compare,
    projection_apply,
    psi02000_from_prop,
)
from gcwhitham.symbols import SymbolParams, l_eval
from gcwhitham.trigcalc import TrigPoly, apply_multiplier, jet

from conftest import k0_oracle


def test_q1_examples():
    k0 = solve_k0(0.2)
    P = ProjectionSpec("Q1", k0)
    assert np.allclose(projection_apply(P, [1, 0, -(k0**2), 0]), [0, 0, 1, 0])
    expect = [1 + k0**-2, 1 + k0**-2, -(k0**-2), -(k0**-3)]
    assert np.allclose(projection_apply(P, [1, 1, 1, 1]), expect, rtol=1e-15)


def test_q2_example():
    s = 1.3
    P = ProjectionSpec("Q2", s)
    assert np.allclose(projection_apply(P, [0, 0, 2 * s, 0]), [0, 0, 0, 1])


@pytest.mark.parametrize("kind", ["Q1", "Q2"])
def test_matrix_inverts_wronskian(kind):
    P = ProjectionSpec(kind, 1.7)
    assert np.allclose(P.matrix @ P.wronskian(), np.eye(4), atol=1e-13)


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.sampled_from(["Q1", "Q2"]))
def test_projection_idempotent(coords, kind):
    P = ProjectionSpec(kind, 0.9)
    f = TrigPoly(0.9)
    for c, b in zip(coords, P.basis()):
        f = f + b * c
    g = P.project(f)
    assert np.allclose(jet(g), jet(f), atol=1e-9)
    assert np.allclose(projection_apply(P, jet(f)), coords, atol=1e-9)


@pytest.mark.parametrize("tau", [0.05, 0.1, 0.2, 0.3])
def test_c3_closed_vs_ansatz(tau):
    cmp = compare(cm_coeffs_closed_C3(tau), cm_coeffs_ansatz(SymbolParams.c3(tau)))
    assert set(cmp) == set(C3_KEYS)
    assert all(v["ok"] for v in cmp.values()), cmp


def test_c3_printed_reading_differs_only_in_two_entries():
    cmp = compare(cm_coeffs_closed_C3(0.2, "printed"), cm_coeffs_ansatz(SymbolParams.c3(0.2)))
    bad = {k for k, v in cmp.items() if not v["ok"]}
    assert bad == {"00200", "00020"}


@pytest.mark.parametrize("tau", [0.1, 0.2])
def test_c3_oracle_values(tau):
    k0 = k0_oracle(tau)
    sig = 1 / (1 / 3 - tau)
    v = cm_coeffs_ansatz(SymbolParams.c3(tau)).values
    assert v["10001"] == pytest.approx(2 * sig * k0**2, rel=1e-9)
    assert v["20000"] == pytest.approx(-2 * sig * k0**2, rel=1e-9)
    L2 = l_eval(tau, 2 * k0)
    assert v["00200"] == pytest.approx(6 * L2 / (L2 - 1) * k0**4 - sig * k0**2, rel=1e-9)
    assert v["02000"] == pytest.approx(psi02000_from_prop(tau), rel=1e-9)


def test_odd_index_vanishes():
    solver = CenterManifoldSolver(SymbolParams.c3(0.2))
    assert abs(solver.value((1, 1, 0, 0, 0))) < 1e-10


@pytest.mark.parametrize("tau", [0.1, 0.3])
def test_solutions_satisfy_equation_and_constraint(tau):
    params = SymbolParams.c3(tau)
    solver = CenterManifoldSolver(params)
    for k in ("10001", "00200", "01010"):
        code = tuple(int(c) for c in k)
        psi = solver.psi(code)
        assert np.allclose(solver.proj.matrix @ jet(psi), 0, atol=1e-9 * max(1, psi.max_abs_coef()))


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_c2_closed_vs_ansatz(s):
    cmp = compare(cm_coeffs_closed_C2(s), cm_coeffs_ansatz(SymbolParams.c2(s)))
    assert all(v["ok"] for v in cmp.values()), cmp


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_psi10200_adjudication(s):
    adj = adjudicate_c2_reading(s)
    assert adj["verdict"] == "bd"
    assert adj["bs"]["rel"] > 1e-3


def test_c2_psi10001_positive():
    assert cm_coeffs_closed_C2(1.0).values["10001"] > 0


def test_to_json_round_trip():
    import json

    c = cm_coeffs_closed_C3(0.2)
    d = json.loads(c.to_json())
    assert d["values"]["10001"] == pytest.approx(c.values["10001"], rel=1e-15)
