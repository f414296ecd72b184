import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from surfbu import homz2, oracle
from surfbu.nilpotent import engine, eval_word, project_qbar, qbar_b_only
from surfbu.presentations import REFUTED, VERIFIED, surface_group
from surfbu.words import IDENTITY, parse_word


def case(domain, genus, theta, target, tgenus=1, **kw):
    return oracle.make_case(domain, genus, theta, target, tgenus, **kw)


@pytest.mark.parametrize("domain,genus,theta,target,tgenus,kw,outcome", [
    ("nonorientable", 3, {"v": 1, "a1": 1}, "orientable", 2, {}, oracle.HOLDS),
    ("nonorientable", 3, {"v": 1, "a2": 1}, "orientable", 1, {}, oracle.HOLDS),
    ("nonorientable", 3, {"v": 1}, "orientable", 2, {}, oracle.FAILS),
    ("nonorientable", 3, {"a1": 1}, "orientable", 1, {}, oracle.FAILS),
    ("nonorientable", 2, {"alpha": 1}, "orientable", 3, {}, oracle.HOLDS),
    ("nonorientable", 2, {"alpha": 1, "beta": 1}, "orientable", 1, {}, oracle.HOLDS),
    ("nonorientable", 2, {"beta": 1}, "orientable", 2, {}, oracle.FAILS),
    ("nonorientable", 4, {"alpha": 1}, "orientable", 1, {}, oracle.FAILS),
    ("nonorientable", 5, {"v": 1, "a1": 1}, "orientable", 1, {}, oracle.FAILS),
    ("orientable", 1, {"a1": 1}, "orientable", 2, {}, oracle.FAILS),
    ("nonorientable", 3, {"v": 1, "a1": 1}, "nonorientable", 2, {}, oracle.FAILS),
    ("nonorientable", 1, None, "orientable", 2, {}, oracle.HOLDS),
    ("nonorientable", 1, None, "nonorientable", 3, {}, oracle.HOLDS),
    ("finite", 0, None, "orientable", 1, {}, oracle.HOLDS),
    ("finite", 0, None, "rp2", 0, {"dim_x": 3, "quotient_z2": True}, oracle.HOLDS),
    ("finite", 0, None, "rp2", 0, {"dim_x": 3}, oracle.OUT_OF_SCOPE),
    ("orientable", 2, {"a3": 1}, "rp2", 0, {"dim_x": 2}, oracle.FAILS),
    ("orientable", 2, {"a3": 1}, "rp2", 0, {"dim_x": 4}, oracle.OUT_OF_SCOPE),
    ("orientable", 1, {"a1": 1}, "sphere", 0, {"dim_x": 2}, oracle.FAILS),
    ("orientable", 1, {"a1": 1}, "sphere", 0, {"dim_x": 5}, oracle.DEPENDS_ON_X),
    ("finite", 0, None, "sphere", 0, {"special_x": "S3"}, oracle.HOLDS),
    ("finite", 0, None, "sphere", 0, {"special_x": "RP3"}, oracle.FAILS),
])
def test_decision_table(domain, genus, theta, target, tgenus, kw, outcome):
    v = oracle.decide(case(domain, genus, theta, target, tgenus, **kw))
    assert v.outcome == outcome
    assert v.citation in oracle.RULES
    if outcome == oracle.FAILS and target != "sphere":
        assert v.certificate.verified
    if outcome == oracle.HOLDS:
        assert v.certificate.replay()


def test_phi_relators_verified_by_word_search():
    cert = oracle.build_phi(case("nonorientable", 3, {"v": 1}, "orientable", 2))
    assert cert.hom.status == VERIFIED
    assert all(cert.perm_check.values())
    methods = {c.evidence["method"] for c in cert.hom.verification}
    assert methods <= {"word search", "free reduction"}


def test_no_construction_for_holds_cases():
    with pytest.raises(oracle.NoConstruction):
        oracle.build_phi(case("finite", 0, None, "orientable", 2))
    with pytest.raises(oracle.NoConstruction):
        oracle.build_phi(case("orientable", 1, {"a1": 1}, "sphere", 0, dim_x=2))


def test_b2_oracle_refutes_odd_words():
    orc = oracle.b2_oracle(1)
    assert orc(parse_word("s"))[0] == REFUTED
    assert orc(parse_word("r1_1"))[0] == REFUTED
    assert orc(parse_word("s^2 B^-1"))[0] == VERIFIED


@pytest.mark.parametrize("bad", [
    {"domain": {"kind": "torus"}, "target": {"kind": "orientable", "genus": 1}},
    {"domain": {"kind": "orientable", "genus": 1}, "target": {"kind": "orientable", "genus": 0}},
    {"domain": {"kind": "orientable", "genus": 1}, "theta": {"v": 1}, "target": {"kind": "sphere"}},
    {"domain": {"kind": "orientable", "genus": 1}, "target": {"kind": "rp2"}, "special_x": "S3"},
    {"target": {"kind": "rp2"}},
])
def test_invalid_cases(bad):
    with pytest.raises(oracle.InvalidCase):
        oracle.case_from_dict(bad)


def test_trivial_theta_rejected():
    with pytest.raises((oracle.InvalidCase, homz2.NotSurjective)):
        oracle.decide(case("orientable", 1, {}, "orientable", 1))


def test_case_json_round_trip():
    c = case("nonorientable", 3, {"v": 1, "a1": 1}, "orientable", 2, dim_x=4)
    back = oracle.case_from_json(json.dumps(c.to_dict()))
    assert back.to_dict() == c.to_dict()


def test_verdict_json():
    v = oracle.decide(case("nonorientable", 2, {"alpha": 1}, "orientable", 1))
    d = json.loads(v.to_json())
    assert d["outcome"] == "holds"
    assert d["citation"] == "klein-alpha-odd"
    assert d["certificate"]["ok"] is True


SURFACES = [("orientable", 1), ("orientable", 2), ("nonorientable", 2), ("nonorientable", 3),
            ("nonorientable", 4)]


@settings(max_examples=30)
@given(st.sampled_from(SURFACES), st.sampled_from([("orientable", 1), ("orientable", 2), ("nonorientable", 2)]),
       st.data())
def test_verdict_is_constant_on_classes(surface, target, data):
    pres = surface_group(*surface)
    theta = data.draw(st.sampled_from(homz2.surjective_homs(pres)))
    rep, _, _ = homz2.canonicalize(theta)
    a = oracle.decide(case(*surface, theta.to_dict(), *target))
    b = oracle.decide(case(*surface, rep.to_dict(), *target))
    assert (a.outcome, a.citation) == (b.outcome, b.citation)


def test_case4_certificate():
    cert = oracle.case4_obstruction(2, samples=50)
    assert cert.data["ok"]
    assert cert.data["odd_b_exponent_of_alpha_squared"] == 50
    assert cert.replay()


def test_constraints_are_enforced():
    g = 1
    r1, r2 = parse_word("r1_1"), parse_word("r2_1^-1")
    w1, w2 = parse_word("r1_2"), parse_word("r2_2")
    assert oracle.solution_constraints(r1, r2, w1, w2, g)
    with pytest.raises(oracle.ConstraintViolated) as err:
        oracle.solution_constraints(r1, parse_word("r2_1"), w1, w2, g)
    assert err.value.which == "rho"
    with pytest.raises(oracle.ConstraintViolated):
        oracle.solution_constraints(r1, r2, w1, parse_word("r2_1"), g)
    with pytest.raises(oracle.ConstraintViolated):
        oracle.solution_constraints(parse_word("r2_1"), r2, w1, w2, g)


@given(st.integers(1, 3), st.integers(0, 2 ** 32))
def test_regrouping_stages_agree(g, seed):
    rng = random.Random(seed)
    words = oracle.regrouping_words(*oracle.random_constrained(rng, g))
    assert words["expanded"] == words["commutators"]
    ev = {k: eval_word(w, g) for k, w in words.items()}
    assert ev["commutators"] == ev["regrouped"]
    assert project_qbar(ev["regrouped"]) == project_qbar(ev["final"])


@pytest.mark.parametrize("g", [1, 2, 3])
def test_case5_grid_has_no_solution(g):
    cert = oracle.case5_obstruction(g)
    assert cert.data["ok"]
    assert cert.data["search_space"] == 2 ** (4 * g)
    assert cert.data["solutions"] == []
    assert cert.replay()


def test_qbar_target_is_b_alone():
    assert qbar_b_only(1).b_bar == 1
    assert not any(qbar_b_only(3).e_bits)
