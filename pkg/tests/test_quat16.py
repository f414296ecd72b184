import pytest
from hypothesis import given, strategies as st

from surfbu import homz2
from surfbu.presentations import surface_group
from surfbu.quat16 import (
    ELEMENTS,
    IDENTITY_Q,
    X,
    Y,
    build_phi_rp2,
    eval_q16,
    parse_q16,
    perm_matches,
    q16_order,
    q16_perm,
)
from surfbu.presentations import VERIFIED, q16_presentation
from surfbu.words import substitute

elements = st.sampled_from(ELEMENTS)


def test_defining_relations():
    assert X ** 4 == Y ** 2
    assert Y * X * Y.inverse() == X.inverse()
    images = {g: e.to_word() for g, e in zip(q16_presentation().alphabet, (X, Y))}
    for rel in q16_presentation().relators:
        assert eval_q16(substitute(rel, images)) == IDENTITY_Q


def test_orders():
    assert q16_order(X) == 8
    assert q16_order(Y) == 4
    assert [str(u) for u in ELEMENTS if q16_order(u) == 2] == ["x^4"]


def test_parse_and_print():
    for u in ELEMENTS:
        assert parse_q16(str(u)) == u
    assert parse_q16("x^-1") == X ** 7
    assert parse_q16("x y") == X * Y


@given(elements, elements, elements)
def test_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * IDENTITY_Q == u
    assert u * u.inverse() == IDENTITY_Q


@given(elements, elements)
def test_perm_is_a_homomorphism(u, v):
    assert q16_perm(u * v) == (q16_perm(u) + q16_perm(v)) % 2


@pytest.mark.parametrize("kind,genus", [("orientable", 1), ("orientable", 2), ("nonorientable", 2),
                                        ("nonorientable", 3), ("nonorientable", 4), ("nonorientable", 5)])
def test_factorisation_for_every_theta(kind, genus):
    for theta in homz2.surjective_homs(surface_group(kind, genus)):
        hom = build_phi_rp2(kind, genus, theta)
        assert hom.status == VERIFIED
        assert perm_matches(hom, theta)
