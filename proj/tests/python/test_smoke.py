import numpy as np
import pytest

import clusterperf as cp


def small(**overrides):
    args = dict(S=3, L=6, lambda_=1.0, mu=0.5, xi=0.01, xi_h=0.01, eta=0.5, eta_h=0.5)
    args.update(overrides)
    return cp.SystemParams(**args)


def test_solve_matches_exact():
    p = small()
    field, m, report = cp.solve(p, cp.SolverConfig(delta=1e-9))
    assert field.shape == (2, 3, 7)
    assert report["converged"]
    assert field.sum() == pytest.approx(1.0, abs=1e-12)
    exact_field, exact_m = cp.exact(p)
    assert m.mql == pytest.approx(exact_m.mql, rel=1e-6)
    assert np.abs(field - exact_field).max() < 1e-6
    assert cp.metrics(exact_field, p).thrp == pytest.approx(exact_m.thrp, rel=1e-14)


def test_plane_mass_and_flow():
    p = small(semantics=cp.FailureSemantics.PER_COMPUTING_NODE)
    field, m = cp.exact(p)
    assert field[1].sum() == pytest.approx(p.eta_h / (p.eta_h + p.xi_h), abs=1e-10)
    assert m.thrp == pytest.approx(p.lambda_ * (1 - m.p_block), rel=1e-10)


def test_transitions():
    p = small(S=2, L=4, mu=0.25, xi=0.001, xi_h=0.001)
    arcs = sorted(cp.transitions(p, 1, 2, 4))
    assert arcs == sorted([(1, 2, 3, 0.5), (1, 1, 4, 0.002), (0, 1, 4, 0.001)])


def test_validation_errors():
    with pytest.raises(cp.ParameterError, match="L >= S"):
        small(S=2, L=1)
    with pytest.raises(ValueError):
        small(mu_h=0.3)
    with pytest.raises(cp.OracleCapExceeded):
        cp.exact(small(S=1000, L=2000))


def test_simulate_and_compare():
    p = small()
    r = cp.simulate(p, cp.SimConfig(horizon=5e3, replications=4, seed=3))
    assert r["mql"]["half_width"] > 0
    assert r["thrp"]["mean"] == pytest.approx(cp.exact(p)[1].thrp, rel=0.1)
    c = cp.compare(p, ["iterative", "exact"], cp.SolverConfig(delta=1e-10))
    assert c["all_pass"]
    assert {d["metric"] for d in c["discrepancies"]} == {"mql", "thrp", "mrt"}


def test_initial_field_is_normalized():
    f = cp.initial_field(small(S=4, L=9))
    assert f.shape == (2, 4, 10)
    assert f.sum() == pytest.approx(1.0, abs=1e-12)
