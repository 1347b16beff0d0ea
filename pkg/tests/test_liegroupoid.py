import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradred import ActionData, PoissonBivector, parse_graded, parse_polynomial
from gradred import _kernels
from gradred.liegroupoid import (
    NotComposable,
    NumericField,
    PairGroupoidAction,
    PairGroupoidPoint,
    check_flow_agreement,
    check_group_axioms,
    hamiltonian_function,
    identity_crossed_module,
    matrix_group,
    mw_quotient_pair,
    pair_bivector,
    semidirect_identity,
    semidirect_inv,
    semidirect_mul,
    two_group_compose,
    two_group_source,
    two_group_target,
    vector_crossed_module,
    vector_group,
    verify_kxky,
)

Y4 = ("y1", "y2", "y3", "y4")
SO3_BASIS = [
    [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
    [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
    [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
]


def close(a, b, tol=1e-9):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) <= tol


@pytest.fixture(scope="module")
def so3_module():
    return identity_crossed_module(matrix_group(SO3_BASIS, "SO(3)"))


@pytest.fixture(scope="module")
def line_action():
    pi = PoissonBivector(Y4, {(0, 1): 1, (2, 3): 1})
    data = ActionData([parse_polynomial("y4", Y4)], [parse_graded("-th3", Y4)], pi)
    return PairGroupoidAction(data, vector_crossed_module([[1]]))


# -- groups and crossed modules -------------------------------------------

def test_vector_group_axioms():
    assert check_group_axioms(vector_group(3))["ok"]


def test_matrix_group_axioms():
    G = matrix_group(SO3_BASIS)
    res = check_group_axioms(G)
    assert res["ok"], res
    v = np.array([0.3, -0.2, 0.5])
    assert close(G.log(G.exp(v)), v)


def test_crossed_module_axioms(so3_module):
    assert so3_module.check_axioms()["ok"]
    assert vector_crossed_module([[1.0, 2.0]]).check_axioms()["ok"]


def test_crossed_module_peiffer_violation():
    bad = vector_crossed_module([[1.0]], lam=[[[1.0]]])
    res = bad.check_axioms()
    assert not res["ok"]
    assert res["deviations"]["peiffer"] > 1e-3


def test_delta_must_be_a_matrix():
    with pytest.raises(ValueError):
        vector_crossed_module([1.0, 2.0])


def _sample_k(rng, cm):
    return cm.H.sample(rng, 0.5), cm.G.sample(rng, 0.5)


def _kclose(a, b, cm, tol=1e-9):
    return cm.H.distance(a[0], b[0]) <= tol and cm.G.distance(a[1], b[1]) <= tol


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_semidirect_group_laws(so3_module, seed):
    cm = so3_module
    rng = np.random.default_rng(seed)
    a, b, c = (_sample_k(rng, cm) for _ in range(3))
    e = semidirect_identity(cm)
    assert _kclose(semidirect_mul(semidirect_mul(a, b, cm), c, cm), semidirect_mul(a, semidirect_mul(b, c, cm), cm), cm)
    assert _kclose(semidirect_mul(a, e, cm), a, cm)
    assert _kclose(semidirect_mul(e, a, cm), a, cm)
    assert _kclose(semidirect_mul(a, semidirect_inv(a, cm), cm), e, cm)


def _composable_pair(rng, cm):
    h1, h2, g2 = cm.H.sample(rng, 0.5), cm.H.sample(rng, 0.5), cm.G.sample(rng, 0.5)
    return (h1, cm.G.mul(cm.partial(h2), g2)), (h2, g2)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_two_group_composition(so3_module, seed):
    cm = so3_module
    rng = np.random.default_rng(seed)
    k1, k2 = _composable_pair(rng, cm)
    k = two_group_compose(k1, k2, cm, 1e-8)
    assert cm.G.distance(two_group_source(k, cm), two_group_source(k2, cm)) <= 1e-9
    assert cm.G.distance(two_group_target(k, cm), two_group_target(k1, cm)) <= 1e-9
    unit = (cm.H.identity, two_group_source(k1, cm))
    assert _kclose(two_group_compose(k1, unit, cm, 1e-8), k1, cm)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_interchange_law(so3_module, seed):
    cm = so3_module
    rng = np.random.default_rng(seed)
    k1, k2 = _composable_pair(rng, cm)
    k1p, k2p = _composable_pair(rng, cm)
    left = two_group_compose(semidirect_mul(k1, k1p, cm), semidirect_mul(k2, k2p, cm), cm, 1e-8)
    right = semidirect_mul(two_group_compose(k1, k2, cm, 1e-8), two_group_compose(k1p, k2p, cm, 1e-8), cm)
    assert _kclose(left, right, cm, 1e-8)


def test_not_composable(so3_module):
    cm = so3_module
    rng = np.random.default_rng(1)
    k1, k2 = _sample_k(rng, cm), _sample_k(rng, cm)
    with pytest.raises(NotComposable):
        two_group_compose(k1, k2, cm)


# -- pair groupoid --------------------------------------------------------

def test_pair_groupoid_composition():
    x = PairGroupoidPoint(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    y = PairGroupoidPoint(np.array([3.0, 4.0]), np.array([5.0, 6.0]))
    z = x.compose(y)
    assert close(z.target, x.target) and close(z.source, y.source)
    with pytest.raises(NotComposable):
        y.compose(x)
    assert close(PairGroupoidPoint.from_vector(x.vector()).vector(), x.vector())


def test_pair_bivector_layout():
    V = ("a", "b")
    P = pair_bivector(PoissonBivector(V, {(0, 1): 1}), sign=1)
    assert P.vars == ("x1", "x2", "y1", "y2")
    assert str(P) == "(-1) dx1^dx2 + (1) dy1^dy2"


def test_hamiltonian_function():
    pi = PoissonBivector(Y4, {(0, 1): 1, (2, 3): 1})
    assert hamiltonian_function(pi, parse_graded("-th3", Y4)) == parse_polynomial("y4", Y4)
    with pytest.raises(ValueError, match="not hamiltonian"):
        hamiltonian_function(pi, parse_graded("y1*th1", Y4))


# -- flows ----------------------------------------------------------------

@settings(max_examples=30)
@given(st.integers(0, 2**32))
def test_affine_flow_exact_vs_rk4(seed):
    rng = np.random.default_rng(seed)
    V = ("a", "b", "c")
    comps = []
    for _ in range(3):
        c = rng.integers(-2, 3, size=4)
        comps.append(parse_polynomial(f"{c[0]}*a + {c[1]}*b + {c[2]}*c + {c[3]}", V))
    F = NumericField(comps)
    assert F.affine
    z = rng.normal(size=3)
    exact, rk = F.flow_exact(z, 0.5), F.flow_rk4(z, 0.5)
    assert close(exact, rk, 1e-9 * max(1.0, float(np.max(np.abs(exact)))))


def test_nonlinear_flow_matches_closed_form():
    F = NumericField([parse_polynomial("x^2", ("x",))])
    assert not F.affine
    z = F.flow(np.array([0.5]), 1.0)
    assert close(z, [0.5 / (1 - 0.5)], 1e-10)
    with pytest.raises(ValueError):
        F.flow_exact([0.5])


def test_blow_up_is_reported():
    F = NumericField([parse_polynomial("x^2", ("x",))])
    with pytest.raises(_kernels.FlowError):
        F.flow_rk4(np.array([2.0]), 1.0)


def test_field_evaluation():
    V = ("a", "b")
    F = NumericField([parse_polynomial("a*b + 1", V), parse_polynomial("-3*a^2", V)])
    assert close(F([2.0, 3.0]), [7.0, -12.0], 0)
    G = NumericField.combine([F, F], [0.5, 1.5])
    assert close(G([2.0, 3.0]), [14.0, -24.0], 1e-12)


# -- the lifted action ----------------------------------------------------

def test_calibration(line_action):
    cal = line_action.calibration
    assert cal["sign"] == 1
    assert cal["deviation"] <= 1e-9
    assert cal["deviations"][-1] > 1e-3


def test_moment_map(line_action):
    assert [str(p) for p in line_action.moment_map()] == ["-x4", "-x4 + y4"]
    assert line_action.check_moment_map() <= 1e-6


def test_flow_agreement(line_action):
    assert check_flow_agreement(line_action) <= 1e-9


def test_kxky(line_action):
    stats = verify_kxky(line_action, samples=100, seed=0)
    assert stats["classification_errors"] == 0
    assert stats["composable_samples"] == 50
    for key in ("max_deviation", "source_deviation", "target_deviation", "kxy_deviation", "interchange_deviation"):
        assert stats[key] <= 1e-8, key


def test_mw_quotient(line_action):
    out = mw_quotient_pair(line_action)
    g, mw = out["global"], out["mw"]
    expected = "(-1) dx1^dx2 + (1) dy1^dy2"
    assert g.quotient_coords == ("x1", "x2", "x4", "y1", "y2", "y4")
    assert str(g.bivector) == expected
    assert g.multiplicative == "PASS"
    assert mw.quotient_coords == ("x1", "x2", "y1", "y2")
    assert str(mw.bivector) == expected


def test_translation_without_h():
    V = ("q", "p")
    data = ActionData([], [parse_graded("th1", V)], PoissonBivector(V, {(0, 1): 1}))
    act = PairGroupoidAction(data, vector_crossed_module(np.zeros((1, 0))))
    out = mw_quotient_pair(act)
    assert str(out["mw"].bivector) == "(1) dy1^dy2"
    assert out["global"].multiplicative == "UNKNOWN"


def test_non_affine_data_rejected():
    pi = PoissonBivector(Y4, {(0, 1): 1, (2, 3): 1})
    data = ActionData([parse_polynomial("y4^2", Y4)], [parse_graded("-2*y4*th3", Y4)], pi)
    act = PairGroupoidAction(data, vector_crossed_module([[1]]), sign=1)
    with pytest.raises(ValueError, match="affine"):
        mw_quotient_pair(act)


def test_dimension_mismatch():
    pi = PoissonBivector(Y4, {(0, 1): 1, (2, 3): 1})
    data = ActionData([parse_polynomial("y4", Y4)], [parse_graded("-th3", Y4)], pi)
    with pytest.raises(ValueError):
        PairGroupoidAction(data, vector_crossed_module([[1, 0]]))


# -- numba fallback -------------------------------------------------------

PROBE = """
import json, numpy as np
from gradred import _kernels
from gradred.liegroupoid import NumericField
from gradred import parse_polynomial
F = NumericField([parse_polynomial("y", ("x", "y")), parse_polynomial("-x^3", ("x", "y"))])
z = F.flow_rk4(np.array([1.0, 0.0]), 2.0)
print(json.dumps({"numba": _kernels.using_numba(), "z": z.tolist(), "f": F([1.5, -2.0]).tolist()}))
"""


def _probe(flag):
    env = dict(os.environ, GRADRED_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_numpy_fallback_matches_compiled():
    plain = _probe("1")
    assert plain["numba"] is False
    try:
        import numba  # noqa: F401
    except ImportError:
        pytest.skip("numba not installed; only the fallback path is available")
    fast = _probe("0")
    assert fast["numba"] is True
    assert close(plain["z"], fast["z"], 1e-12)
    assert plain["f"] == fast["f"]
