import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _gen import graded, names, rand_graded
from gradred import (
    DistributionSpec,
    GradedFunction,
    PoissonBivector,
    SubmanifoldSpec,
    bracket_matrix_rank_probe,
    graph_form,
    parse_graded,
    parse_polynomial,
    schouten_bracket,
)
from gradred.subman import geometric_objects, in_ideal, restrict

V3, V4 = names(3), names(4)


def G(text, V=V4):
    return parse_graded(text, V)


def vec(V, *comps):
    return [parse_polynomial(str(c), V) for c in comps]


def counterexample(alpha="x2*x3 - x1^2"):
    return SubmanifoldSpec(V4, {"x4": "0"}, {"th4": f"-({alpha})*th1"})


# -- restriction ----------------------------------------------------------

def test_restrict_counterexample_structure():
    alpha = "x1*x3 + x2"
    C = counterexample(alpha)
    S = G("th1*th2 + th3*th4")
    expected = G("th1") * (G("th2") + G(f"({alpha})*th3"))
    assert restrict(S, C) == expected


def test_restrict_generator_is_zero():
    C = SubmanifoldSpec(V4, {"x4": "x1^2 - x3"}, {})
    assert restrict(G("x4 - x1^2 + x3"), C).is_zero()


def test_restrict_drinfeld_first_summand():
    V = ("x1", "x2", "y1", "y2")
    entries = {("x1", "x2"): "x2", ("y1", "y2"): "y1", ("x1", "y1"): "x2",
               ("x1", "y2"): "-x1 - y2", ("x2", "y2"): "y1"}
    pi = PoissonBivector(V, {k: parse_polynomial(v, V) for k, v in entries.items()})
    C = SubmanifoldSpec(V, {"y1": "0", "y2": "0"}, {"th3": "0", "th4": "0"})
    assert C.restrict(pi.to_function()) == parse_graded("x2*th1*th2", V)


def test_ideal_membership_examples():
    C = counterexample("x2")
    assert in_ideal(G("x4"), C)
    assert in_ideal(G("th4 + x2*th1"), C)
    assert not in_ideal(G("x1"), C)
    assert not in_ideal(G("th4"), C)


@given(st.data())
def test_restrict_is_algebra_morphism(data):
    C = counterexample()
    a, b = data.draw(graded(V4, degree=2)), data.draw(graded(V4, degree=2))
    assert C.restrict(a * b) == C.restrict(a) * C.restrict(b)
    assert C.restrict(a + b) == C.restrict(a) + C.restrict(b)


@given(st.data())
def test_ideal_absorbs_products(data):
    C = counterexample()
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    member = C.generators()[rng.randrange(len(C.generators()))]
    other = rand_graded(rng, V4, rng.randint(0, 3))
    assert C.in_ideal(member * other)
    assert C.in_ideal(other * member)


def test_coisotropic_generators_close():
    # C = {x4 = 0}, E = span(d/dx3) = sharp(N*C) for dx1^dx2 + dx3^dx4
    C = SubmanifoldSpec(V4, {"x4": "0"}, {"th3": "0"})
    S = G("th1*th2 + th3*th4")
    gens = C.generators()
    assert len(gens) == 2
    for a in gens:
        assert C.in_ideal(schouten_bracket(S, a))
        for b in gens:
            assert C.in_ideal(schouten_bracket(a, b))


# -- construction errors --------------------------------------------------

def test_cyclic_even_assignment():
    with pytest.raises(ValueError, match="cyclic"):
        SubmanifoldSpec(V3, {"x1": "x2", "x2": "x1"})


def test_cyclic_odd_relation():
    with pytest.raises(ValueError, match="cyclic"):
        SubmanifoldSpec(V3, {}, {"th1": "th2", "th2": "th1"})


def test_chained_relations_resolve():
    C = SubmanifoldSpec(V3, {"x1": "x2", "x2": "x3^2"}, {"th1": "th2", "th2": "x3*th3"})
    assert C.solved_even["x1"] == parse_polynomial("x3^2", V3)
    assert C.restrict(parse_graded("th1", V3)) == parse_graded("x3*th3", V3)


def test_unknown_coordinate():
    with pytest.raises(KeyError):
        SubmanifoldSpec(V3, {"z": "0"})


def test_quotient_coords_must_be_retained():
    with pytest.raises(ValueError):
        SubmanifoldSpec(V3, {"x1": "0"}, quotient_coords=["x1"])


def test_generator_without_constant_pivot():
    with pytest.raises(ValueError, match="pivot"):
        SubmanifoldSpec(V3, extra_degree1_generators=["x1*th1 + x2*th2"])


# -- graph form -----------------------------------------------------------

def test_graph_form_solves_linear_variables():
    out = graph_form([parse_polynomial("x4 - x1^2", V4), parse_polynomial("2*x3 + x1*x2", V4)])
    assert out == {"x4": parse_polynomial("x1^2", V4), "x3": parse_polynomial("-1/2*x1*x2", V4)}


def test_graph_form_rejects_nonlinear():
    with pytest.raises(ValueError, match="graph form"):
        graph_form([parse_polynomial("x1*x2", V4)])


# -- rank probe -----------------------------------------------------------

def test_presym_zero_not_presymplectic():
    C = SubmanifoldSpec(V3, extra_degree1_generators=["th1", "th2 - x1*th3"])
    probe = bracket_matrix_rank_probe(C)
    assert [[str(e) for e in row] for row in probe.matrix] == [["0", "-th3"], ["th3", "0"]]
    assert probe.degree0.generic == 0
    assert probe.verdict == "NOT_CONSTANT"


def test_presym_full_presymplectic():
    C = SubmanifoldSpec(V3, {"x2": "0"}, extra_degree1_generators=["th1", "th2 - x1*th3"])
    probe = bracket_matrix_rank_probe(C)
    assert len(probe.matrix) == 3
    assert probe.verdict == "CONSTANT"


def test_whole_space_trivially_constant():
    probe = bracket_matrix_rank_probe(SubmanifoldSpec(V3))
    assert probe.degree0.generic == 0
    assert probe.verdict == "CONSTANT"


# -- geometric objects ----------------------------------------------------

def test_contact_kernel_not_involutive():
    C = SubmanifoldSpec(V3, extra_degree1_generators=["th1", "th2 - x1*th3"])
    geo = geometric_objects(C)
    assert len(geo["F"]) == len(geo["E"]) == 2
    probe = bracket_matrix_rank_probe(C)
    assert not probe.gamma_in_ideal
    assert probe.gamma_witness


def test_transversal_distribution_has_zero_f():
    geo = geometric_objects(counterexample("x1*x3"))
    assert geo["F"] == []
    assert geo["F_rank"] == 0
    assert geo["E"] == [vec(V4, "x1*x3", 0, 0, 1)]
    assert geo["NC"] == [vec(V4, 0, 0, 0, 1)]


def test_distribution_inside_tangent_space():
    C = SubmanifoldSpec(V3, {}, {"th3": "0"})
    geo = geometric_objects(C)
    assert geo["F"] == geo["E"] == [vec(V3, 0, 0, 1)]
    assert geo["E_ann"] == [vec(V3, 1, 0, 0), vec(V3, 0, 1, 0)]
    assert geo["NC"] == []


def test_annihilator_pairs_to_zero():
    C = counterexample("x1*x2 - x3")
    for xi in C.e_annihilator():
        for X in C.e_frame():
            total = sum((a * b for a, b in zip(xi, X)), parse_polynomial("0", V4))
            assert C.restrict_poly(total).is_zero()


def test_distribution_rank():
    D = DistributionSpec.parse(V4, ["th1", "x1*th2"])
    info = D.rank(counterexample().samples(4))
    assert info.generic == 2
    assert all(r <= 2 for r in info.sampled)


def test_samples_are_seeded():
    C = counterexample()
    assert C.samples(5, seed=3) == C.samples(5, seed=3)
    assert C.samples(5, seed=3) != C.samples(5, seed=4)
