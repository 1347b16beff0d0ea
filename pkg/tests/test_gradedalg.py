import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _gen import graded, names, polys, rand_bivector, rand_graded, rand_poly
from gradred import (
    GradedFunction,
    PoissonBivector,
    Polynomial,
    derived_bracket,
    graded_mul,
    jacobi_defect,
    lie_derivative_bivector,
    parse_graded,
    parse_polynomial,
    schouten_bracket,
)
from gradred.gradedalg import apply_vector_field

V2, V3, V4 = names(2), names(3), names(4)


def G(text, V=V4):
    return parse_graded(text, V)


def fn(p):
    return GradedFunction.function(p)


# -- naive oracles --------------------------------------------------------

def naive_mul(a, b):
    """Concatenate odd index lists and bubble sort, counting swaps."""
    out = GradedFunction.zero(a.vars)
    for I, p in a.terms.items():
        for J, q in b.terms.items():
            seq = list(I) + list(J)
            if len(set(seq)) < len(seq):
                continue
            swaps = 0
            for i in range(len(seq)):
                for j in range(len(seq) - 1 - i):
                    if seq[j] > seq[j + 1]:
                        seq[j], seq[j + 1] = seq[j + 1], seq[j]
                        swaps += 1
            c = p * q
            out = out + GradedFunction(a.vars, {tuple(seq): -c if swaps % 2 else c})
    return out


def contraction(pi, f, g):
    n = pi.n
    return sum(
        (pi(i, j) * f.diff_index(i) * g.diff_index(j) for i in range(n) for j in range(n)),
        Polynomial.zero(pi.vars),
    )


def commutator(X, Y):
    Xc, Yc = X.as_vector(), Y.as_vector()
    n = len(Xc)
    comps = []
    for j in range(n):
        c = Polynomial.zero(X.vars)
        for i in range(n):
            c = c + Xc[i] * Yc[j].diff_index(i) - Yc[i] * Xc[j].diff_index(i)
        comps.append(c)
    return GradedFunction.vector_field(comps, X.vars)


def lie_derivative_direct(X, pi):
    Xc = X.as_vector()
    n = pi.n
    ent = {}
    for i, j in itertools.combinations(range(n), 2):
        v = Polynomial.zero(pi.vars)
        for k in range(n):
            v = v + Xc[k] * pi(i, j).diff_index(k)
            v = v - pi(k, j) * Xc[i].diff_index(k) - pi(i, k) * Xc[j].diff_index(k)
        ent[(i, j)] = v
    return PoissonBivector(pi.vars, ent)


def sgn(k):
    return -1 if k % 2 else 1


def deg(a):
    return a.homogeneous_degree()


# -- product --------------------------------------------------------------

def test_anticommutation():
    assert graded_mul(G("th1"), G("th2")) == G("th1*th2")
    assert graded_mul(G("th2"), G("th1")) == G("-th1*th2")
    assert graded_mul(G("th1"), G("th1")).is_zero()


def test_reordering_sign():
    assert graded_mul(G("x1*th3"), G("th2")) == G("-x1*th2*th3")
    assert graded_mul(G("x1*th3"), G("th2")) == naive_mul(G("x1*th3"), G("th2"))


@given(st.data())
def test_mul_matches_oracle(data):
    a, b = data.draw(graded(V4)), data.draw(graded(V4))
    assert graded_mul(a, b) == naive_mul(a, b)


@given(st.data())
def test_graded_commutativity(data):
    a, b = data.draw(graded(V4)), data.draw(graded(V4))
    assert graded_mul(a, b) == graded_mul(b, a) * sgn(deg(a) * deg(b))


def test_noncanonical_monomial_rejected():
    with pytest.raises(ValueError):
        GradedFunction(V2, {(1, 0): Polynomial.constant(V2, 1)})


def test_homogeneity_query():
    assert G("th1*th2 + x1*th3*th4").homogeneous_degree() == 2
    mixed = G("x1 + th1")
    assert mixed.homogeneous_degree() is None
    with pytest.raises(ValueError):
        mixed.require_degree(1)


# -- calibration anchors --------------------------------------------------

def test_anchor_coordinate_pair():
    assert schouten_bracket(G("th1"), G("x1")) == G("1")
    assert schouten_bracket(G("x1"), G("th1")) == G("-1")


@given(st.data())
def test_anchor_functions_commute(data):
    f, g = data.draw(polys(V3)), data.draw(polys(V3))
    assert schouten_bracket(fn(f), fn(g)).is_zero()


@given(st.data())
def test_anchor_vector_on_function(data):
    X, f = data.draw(graded(V3, 1)), data.draw(polys(V3))
    Xf = sum((c * f.diff_index(i) for i, c in enumerate(X.as_vector())), Polynomial.zero(V3))
    assert schouten_bracket(X, fn(f)) == fn(Xf)
    assert schouten_bracket(fn(f), X) == -fn(Xf)


@given(st.data())
def test_anchor_vector_commutator(data):
    X, Y = data.draw(graded(V3, 1)), data.draw(graded(V3, 1))
    assert schouten_bracket(X, Y) == commutator(X, Y)


@given(st.data())
def test_anchor_sharp(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    pi, f = rand_bivector(rng, V3), rand_poly(rng, V3)
    df = [f.diff_index(i) for i in range(3)]
    assert schouten_bracket(pi.to_function(), fn(f)) == GradedFunction.vector_field(pi.sharp(df), V3)


# -- worked brackets ------------------------------------------------------

def test_counterexample_bracket():
    alpha = parse_polynomial("x1^2*x3 + 2*x2*x3 - x1", V4)
    S = G("th1*th2 + th3*th4")
    X = G("th4") + fn(alpha) * G("th1")
    got = schouten_bracket(S, X)
    expected = -(fn(alpha.diff("x1")) * G("th2") + fn(alpha.diff("x3")) * G("th4")) * G("th1")
    assert got == expected


def test_constant_structure_is_poisson():
    S = G("th1*th2 + th3*th4")
    assert schouten_bracket(S, S).is_zero()


def test_derived_bracket_constant():
    S = G("th1*th2", V2)
    pi = PoissonBivector(V2, {(0, 1): 1})
    x1, x2 = G("x1", V2), G("x2", V2)
    assert derived_bracket(S, x1, x2) == contraction(pi, x1.as_function(), x2.as_function())
    assert derived_bracket(S, x1, x2) == Polynomial.constant(V2, 1)
    assert derived_bracket(S, x1, x1).is_zero()


def test_derived_bracket_linear():
    # dual of the 2-dimensional nonabelian Lie algebra: {x1, x2} = x2
    pi = PoissonBivector(V2, {(0, 1): parse_polynomial("x2", V2)})
    assert derived_bracket(pi.to_function(), G("x1", V2), G("x2", V2)) == parse_polynomial("x2", V2)


def test_derived_bracket_degree_checks():
    with pytest.raises(ValueError):
        derived_bracket(G("th1"), G("x1"), G("x2"))
    with pytest.raises(ValueError):
        derived_bracket(G("th1*th2"), G("th1"), G("x2"))


@given(st.data())
def test_derived_bracket_is_contraction(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    V = names(rng.randint(2, 4))
    pi, f, g = rand_bivector(rng, V), rand_poly(rng, V), rand_poly(rng, V)
    assert derived_bracket(pi.to_function(), fn(f), fn(g)) == contraction(pi, f, g)


# -- bivectors and Jacobi -------------------------------------------------

@given(st.data())
def test_bivector_function_round_trip(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    pi = rand_bivector(rng, V4)
    assert PoissonBivector.from_function(pi.to_function()) == pi
    S = rand_graded(rng, V4, 2)
    assert PoissonBivector.from_function(S).to_function() == S


def test_bivector_antisymmetry_is_structural():
    pi = PoissonBivector(V2, {(1, 0): 3})
    assert pi(0, 1) == Polynomial.constant(V2, -3)
    assert pi(1, 0) == Polynomial.constant(V2, 3)
    with pytest.raises(ValueError):
        PoissonBivector(V2, {(0, 0): 1})


def test_jacobi_constant_is_zero():
    pi = PoissonBivector(V4, {(0, 1): 1, (2, 3): -2, (0, 3): 5})
    assert jacobi_defect(pi).is_zero()


def test_jacobi_counterexample():
    alpha = parse_polynomial("x1*x2 + x1^2*x3 - x3", V4)
    S = G("th1") * (G("th2") + fn(alpha) * G("th3"))
    expected = fn(alpha.diff("x1")) * G("th1*th2*th3") * -2
    assert jacobi_defect(S) == expected


def test_jacobi_linear_from_lie_algebra():
    # so(3)^*: {x_i, x_j} = eps_ijk x_k
    V = V3
    x = [parse_polynomial(v, V) for v in V]
    pi = PoissonBivector(V, {(0, 1): x[2], (1, 2): x[0], (2, 0): x[1]})
    assert jacobi_defect(pi).is_zero()


@given(st.data())
def test_jacobi_defect_vs_scalar_jacobiator(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    V = names(rng.randint(3, 4))
    pi = rand_bivector(rng, V, 1)
    scalar_zero = all(pi.jacobiator(*t).is_zero() for t in itertools.combinations(range(len(V)), 3))
    assert jacobi_defect(pi).is_zero() == scalar_zero


def test_jacobi_equivalence_both_directions():
    V = V3
    poisson = PoissonBivector(V, {(0, 1): parse_polynomial("x3^2", V)})
    not_poisson = PoissonBivector(V, {(0, 1): 1, (0, 2): parse_polynomial("x1", V)})
    for pi, ok in ((poisson, True), (not_poisson, False)):
        assert jacobi_defect(pi).is_zero() is ok
        assert pi.jacobiator(0, 1, 2).is_zero() is ok


# -- Lie derivative -------------------------------------------------------

def test_lie_derivative_constant():
    X = G("th1")
    pi = PoissonBivector(V4, {(0, 1): 1, (2, 3): 1})
    assert lie_derivative_bivector(X, pi).is_zero()


def test_lie_derivative_two_ways():
    X = G("x1*th2", V2)
    pi = PoissonBivector(V2, {(0, 1): 1})
    got = PoissonBivector.from_function(lie_derivative_bivector(X, pi))
    assert got == lie_derivative_direct(X, pi)


@given(st.data())
def test_lie_derivative_matches_direct_formula(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    V = names(rng.randint(2, 4))
    X, pi = rand_graded(rng, V, 1), rand_bivector(rng, V)
    assert PoissonBivector.from_function(lie_derivative_bivector(X, pi)) == lie_derivative_direct(X, pi)


def xfg_defect(X, f, g, pi):
    L = PoissonBivector.from_function(lie_derivative_bivector(X, pi))
    Xf, Xg = apply_vector_field(X, f), apply_vector_field(X, g)
    return (
        apply_vector_field(X, pi.contract(f, g))
        - L.contract(f, g)
        - pi.contract(Xf, g)
        - pi.contract(f, Xg)
    )


@given(st.data())
def test_xfg_identity(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    V = names(rng.randint(1, 4))
    X = rand_graded(rng, V, 1)
    f, g, pi = rand_poly(rng, V), rand_poly(rng, V), rand_bivector(rng, V)
    assert xfg_defect(X, f, g, pi).is_zero()


def test_degree_checks():
    with pytest.raises(ValueError):
        lie_derivative_bivector(G("th1*th2"), PoissonBivector(V4, {}))


def test_context_mismatch():
    with pytest.raises(ValueError):
        schouten_bracket(G("th1", V2), G("x1", V3))


# -- graded Lie algebra laws (shifted degree |a| - 1) ---------------------

def triple(data, V=V3):
    return [data.draw(graded(V, degree=2)) for _ in range(3)]


@given(st.data())
def test_graded_skew_symmetry(data):
    a, b, _ = triple(data)
    s = sgn((deg(a) - 1) * (deg(b) - 1))
    assert schouten_bracket(a, b) == -schouten_bracket(b, a) * s


@given(st.data())
def test_graded_jacobi(data):
    a, b, c = triple(data)
    s = sgn((deg(a) - 1) * (deg(b) - 1))
    lhs = schouten_bracket(a, schouten_bracket(b, c))
    rhs = schouten_bracket(schouten_bracket(a, b), c) + schouten_bracket(b, schouten_bracket(a, c)) * s
    assert lhs == rhs


@given(st.data())
def test_leibniz_right_form(data):
    a, b, c = triple(data)
    lhs = schouten_bracket(a, b * c)
    rhs = b * schouten_bracket(a, c) + schouten_bracket(a, b) * c * sgn((deg(a) - 1) * deg(c))
    assert lhs == rhs


def test_literal_left_leibniz_contradicts_anchors():
    # The anchor {S, f} = sharp(df) gives {th1*th2, x1} = th2, and graded
    # skew-symmetry then forces {x1, th1*th2} = th2.  The left-derivation form
    # {a, bc} = {a,b}c + (-1)^((|a|-1)|b|) b{a,c} predicts -th2 instead.
    a, b, c = G("x1"), G("th1"), G("th2")
    lhs = schouten_bracket(a, b * c)
    literal = schouten_bracket(a, b) * c + b * schouten_bracket(a, c) * sgn((deg(a) - 1) * deg(b))
    right = b * schouten_bracket(a, c) + schouten_bracket(a, b) * c * sgn((deg(a) - 1) * deg(c))
    assert schouten_bracket(b * c, a) == G("th2")
    assert lhs == G("th2") == right
    assert literal == G("-th2")
