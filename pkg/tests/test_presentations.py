import json

import pytest

from surfbu.presentations import (
    BadGenus,
    Presentation,
    b2_presentation,
    p2_presentation,
    q16_presentation,
    scott_relation_set,
    surface_group,
)
from surfbu.words import format_word


def test_surface_relators():
    assert format_word(surface_group("orientable", 2).relators[0]) == "a1*a2*a1^-1*a2^-1*a3*a4*a3^-1*a4^-1"
    assert format_word(surface_group("nonorientable", 3).relators[0]) == "v^2*a1*a2*a1^-1*a2^-1"
    even = surface_group("nonorientable", 4)
    assert [str(g) for g in even.alphabet] == ["alpha", "beta", "a1", "a2"]
    assert format_word(even.relators[0]) == "alpha*beta*alpha*beta^-1*a1*a2*a1^-1*a2^-1"
    assert format_word(surface_group("nonorientable", 2).relators[0]) == "alpha*beta*alpha*beta^-1"


def test_bad_genus():
    with pytest.raises(BadGenus):
        surface_group("orientable", 0)
    with pytest.raises(BadGenus):
        p2_presentation(0)
    with pytest.raises(BadGenus):
        scott_relation_set(1)


def test_b2_extends_p2():
    for g in (1, 2):
        p2, b2 = p2_presentation(g), b2_presentation(g)
        assert set(p2.relators) <= set(b2.relators)
        assert len(b2.relators) == len(p2.relators) + 1 + 4 * g


def test_scott_set_is_marked_incomplete():
    assert not scott_relation_set(3).complete
    assert b2_presentation(1).complete


@pytest.mark.parametrize("pres", [p2_presentation(2), b2_presentation(1), scott_relation_set(2),
                                  q16_presentation(), surface_group("nonorientable", 5)])
def test_json_round_trip(pres):
    back = Presentation.from_dict(json.loads(pres.to_json()))
    assert back == pres
    assert back.to_json() == pres.to_json()
