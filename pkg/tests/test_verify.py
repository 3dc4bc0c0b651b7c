import json
import math

import numpy as np
import pytest

from geoperiod.errors import DomainError, HypothesisNotMet
from geoperiod.forms import FormParams
from geoperiod.repr import RepParams, bump, dilate
from geoperiod.verify import (IdentityReport, check_fact44, check_u_family, fact44_sweep,
                              oscillation, random_fact44_instance, residual, sweep, unit_bump,
                              u_family_exponent, verify_A1, verify_A2, verify_A3, verify_A4,
                              verify_A5, verify_L33, verify_L34, verify_P31)


def test_residual_absolute_fallback():
    assert residual(1.0 + 1e-9, 1.0) == pytest.approx(1e-9)
    assert residual(3e-13, 1e-13) == pytest.approx(2e-13)
    r = IdentityReport("A1", {"x": 1 + 2j}, 1.0, 1.0, 0.0, 1e-7, True)
    d = r.as_dict()
    assert d["pass"] is True and d["params"]["x"] == {"re": 1.0, "im": 2.0}
    json.dumps(d)


@pytest.mark.parametrize("args", [(1, 1, 0, 1), (2, 0.5, 0.5, 1.25)])
def test_A1_examples(args):
    rep = verify_A1(*args, tol=1e-8)
    assert rep.passed and rep.rel_residual < 1e-8


def test_A1_order_difference_zero_and_domain():
    rep = verify_A1(1.5, 0.8, 0.7, 0.7)
    assert rep.passed
    with pytest.raises(DomainError):
        verify_A1(1.0, 1.0, 2.0, 0.1)
    with pytest.raises(DomainError):
        verify_A1(-1.0, 1.0, 0.0, 1.0)


def test_A2_examples():
    assert verify_A2(2, 1, 1, 0.3, 0).rel_residual < 1e-7
    rep = verify_A2(2, 1, 1, 0.2 + 1j, 0, tol=1e-6)
    assert rep.passed and rep.tol == 1e-6
    skip = verify_A2(2, 0.0, 1, 0.3, 0)
    assert skip.passed and skip.params["skipped"]
    with pytest.raises(DomainError):
        verify_A2(2, 1, 0.5, 1.2, 0.5)


def test_A3_examples():
    assert verify_A3(2, 1, 0.3, 0.4, 2).rel_residual < 1e-7
    assert verify_A3(1, 2, 0.3, 0.4, 2).rel_residual < 1e-7
    assert verify_A3(1.3, 1.3, 0.3, 0.4, 2).rel_residual < 1e-7
    assert verify_A3(2, 1, 1j, 0.5j, 2.5).rel_residual < 1e-6
    with pytest.raises(DomainError):
        verify_A3(2, 1, 1.0, 1.0, 1.5)


def test_A4_examples():
    rep = verify_A4(0.7, 1.2, 2.5, 0.0)
    assert abs(rep.lhs - 1) < 1e-15 and abs(rep.rhs - 1) < 1e-9
    assert verify_A4(0.7, 1.2, 2.5, -3).rel_residual < 1e-8
    assert verify_A4(1.1, 0.9, 3.0, 0.5).rel_residual < 1e-8
    assert verify_A4(0.3, 0.9, 3.0, 1.0).rel_residual < 1e-8
    with pytest.raises(DomainError):
        verify_A4(1.0, 2.0, 1.5, 0.2)
    with pytest.raises(DomainError):
        verify_A4(1.0, 0.5, 1.5, 1.0)


def test_A5_examples():
    rep = verify_A5(1.5, 2.0, 1.0, 3.0, 1.0)
    g = math.gamma
    ratio = g(1.0) * g(3.5) * g(4.0) / (g(3.0) * g(5.5))
    assert abs(rep.rhs - ratio) < 1e-14 and rep.passed
    assert verify_A5(1.5, 2.0, 1.0, 3.0, 2.0).rel_residual < 1e-7
    assert verify_A5(2.2, 1.1, 0.8, 3.5, 0.5).rel_residual < 1e-7
    with pytest.raises(DomainError):
        verify_A5(0.1, 2.0, 1.0, 0.5, 1.0)


@pytest.mark.parametrize("key", ["A1", "A2", "A3", "A4", "A5"])
def test_sweeps_reproducible(key):
    a = sweep(key, draws=6, seed=3)
    b = sweep(key, draws=6, seed=3)
    assert [r.as_dict() for r in a] == [r.as_dict() for r in b]
    assert all(r.passed for r in a)
    assert sum(r.tol == 1e-6 for r in a) == 2


def test_spherical_vector_identities():
    assert verify_L34(4, 0.3 + 0.2j, 1.1).passed
    assert verify_P31(FormParams(4, 2, 3.5, 1.0)).passed
    assert verify_L33(FormParams(4, 2, 1.5, 0.1)).passed


def test_oscillation_is_hull_diameter():
    z = np.array([0, 1, 1j, 0.5 + 0.5j, 0.2 + 0.1j])
    assert oscillation(z) == pytest.approx(math.sqrt(2))
    rng = np.random.default_rng(0)
    w = rng.normal(size=50) + 1j * rng.normal(size=50)
    brute = np.max(np.abs(w[:, None] - w[None, :]))
    assert oscillation(w) == pytest.approx(brute, rel=1e-14)
    assert oscillation([2.0]) == 0.0


def test_fact44_constant_and_callables():
    pts = np.linspace(0, 1, 11)
    w = np.full(11, 1 / 11)
    rep = check_fact44(lambda x: np.full(x.shape, 2 - 1j), lambda x: np.ones_like(x), w,
                       points=pts)
    assert rep.passed and abs(rep.lhs - abs(2 - 1j)) < 1e-12
    with pytest.raises(DomainError):
        check_fact44(lambda x: x, np.ones(3), np.ones(3))


def test_fact44_hypotheses_rejected():
    w = np.ones(2) / 2
    with pytest.raises(HypothesisNotMet):
        check_fact44([1.0, 1.0], [3.0, -1.0], w)
    with pytest.raises(HypothesisNotMet):
        check_fact44([1.0, 1.0], [1.0, 2.0], w)
    with pytest.raises(HypothesisNotMet):
        check_fact44([1.0, -1.0], [1.0, 1.0], w)


def test_fact44_boundary_instances_are_tight():
    rng = np.random.default_rng(9)
    ratios = []
    for _ in range(50):
        f, phi, w = random_fact44_instance(rng, boundary=True)
        assert oscillation(f) <= 0.5 * np.max(np.abs(f)) * (1 + 1e-12)
        rep = check_fact44(f, phi, w, tol=1e-9)
        assert rep.passed
        ratios.append(abs(rep.lhs) / abs(rep.rhs))
    assert min(ratios) < 1 + 1e-9


def test_fact44_sweep_small():
    reps, bad = fact44_sweep(100, seed=1)
    assert bad == 0 and len(reps) == 100


def test_u_family_properties():
    p = RepParams(3, 0.0)
    x0 = np.array([0.3, -0.2])
    u1 = unit_bump(x0, 3)
    assert check_u_family(1.0, x0, u1, p).passed
    rep = check_u_family(5.0, x0, u1, p)
    assert rep.passed and rep.params["support_ok"]
    assert abs(rep.params["mass"] - 1) < 1e-8
    base = check_u_family(1.0, x0, u1, p).lhs
    assert abs(rep.lhs / base - 25.0) < 1e-6
    with pytest.raises(DomainError):
        check_u_family(0.5, x0, u1, p)


def test_u_family_complementary_exponent():
    p = RepParams(3, 0.5)
    x0 = np.array([0.3, 0.3])
    assert check_u_family(4.0, x0, unit_bump(x0, 3), p).passed
    slope, _ = u_family_exponent(p)
    assert abs(slope - 1.0) < 0.05
