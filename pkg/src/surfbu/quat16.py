"""The generalised quaternion group of order 16, modelling B2(RP^2).

Elements are ``x^a y^b`` with ``a`` mod 8 and ``b`` mod 2, subject to
``y x^c = x^-c y`` and ``y^2 = x^4``.

The permutation map to Z2 sends x to 1 and y to 0.  It is forced by the
factorisations below: ``a_i -> x`` whenever theta(a_i) = 1 needs pi(x) = 1,
and ``a_2 -> y`` with theta(a_2) = 0 needs pi(y) = 0.  Its kernel is the
quaternion subgroup <x^2, y>, which contains the full twist x^4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .presentations import (
    SURFACE_NONOR_EVEN,
    SURFACE_NONOR_ODD,
    SURFACE_ORIENTABLE,
    VERIFIED,
    REFUTED,
    GroupHom,
    Presentation,
    Q16_PRESENTATION,
    surface_group,
    verify_hom,
    ALPHA_GEN,
    BETA_GEN,
    V_GEN,
    a_gen,
)
from .words import Generator, Word, abstract


class NotSurjective(ValueError):
    pass


class TrivialDomainUnsupported(ValueError):
    """pi_1 of the quotient is Z2: no factorisation through B2(RP^2) exists."""


X_GEN = abstract("x")
Y_GEN = abstract("y")


@dataclass(frozen=True, order=True)
class Q16Element:
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % 8)
        object.__setattr__(self, "b", self.b % 2)

    def __mul__(self, other: "Q16Element") -> "Q16Element":
        return q16_mul(self, other)

    def inverse(self) -> "Q16Element":
        return q16_inv(self)

    def __pow__(self, n: int) -> "Q16Element":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY_Q
        for _ in range(abs(n)):
            out = out * base
        return out

    def __str__(self) -> str:
        if self.a == 0 and self.b == 0:
            return "e"
        parts = []
        if self.a:
            parts.append("x" if self.a == 1 else f"x^{self.a}")
        if self.b:
            parts.append("y")
        return "*".join(parts)

    def to_word(self) -> Word:
        return Word(((X_GEN, self.a), (Y_GEN, self.b)))


IDENTITY_Q = Q16Element(0, 0)
X = Q16Element(1, 0)
Y = Q16Element(0, 1)
ELEMENTS: Tuple[Q16Element, ...] = tuple(Q16Element(a, b) for b in (0, 1) for a in range(8))


def q16_mul(u: Q16Element, v: Q16Element) -> Q16Element:
    sign = -1 if u.b else 1
    twist = 4 if (u.b and v.b) else 0
    return Q16Element(u.a + sign * v.a + twist, u.b + v.b)


def q16_inv(u: Q16Element) -> Q16Element:
    if u.b == 0:
        return Q16Element(-u.a, 0)
    # (x^a y)^-1 = y^-1 x^-a = x^4 y x^-a = x^(4+a) y
    return Q16Element(u.a + 4, 1)


def q16_order(u: Q16Element) -> int:
    p, n = u, 1
    while p != IDENTITY_Q:
        p, n = p * u, n + 1
    return n


def q16_perm(u: Q16Element) -> int:
    return u.a % 2


def parse_q16(text: str) -> Q16Element:
    """Accepts ``e``, ``x^3*y``, ``x y``, ``x^-1`` and similar."""
    text = text.strip().replace(" ", "*")
    if text in ("", "e", "1"):
        return IDENTITY_Q
    out = IDENTITY_Q
    for tok in filter(None, text.split("*")):
        base, _, exp = tok.partition("^")
        n = int(exp) if exp else 1
        if base == "x":
            out = out * X ** n
        elif base == "y":
            out = out * Y ** n
        elif base in ("e", "1"):
            continue
        else:
            raise ValueError(f"not a Q16 element: {tok!r}")
    return out


def eval_q16(w: Word) -> Q16Element:
    out = IDENTITY_Q
    for g, e in w.syllables:
        if g == X_GEN:
            out = out * X ** e
        elif g == Y_GEN:
            out = out * Y ** e
        else:
            raise ValueError(f"generator {g} is not x or y")
    return out


def q16_oracle(w: Word):
    value = eval_q16(w)
    if value == IDENTITY_Q:
        return VERIFIED, {"method": "Q16 multiplication"}
    return REFUTED, {"method": "Q16 multiplication", "value": str(value)}


def mul_table() -> List[List[Q16Element]]:
    return [[u * v for v in ELEMENTS] for u in ELEMENTS]


# -------------------------------------------------------------- factorisations

# Images of (a1, a2) when theta(v) = 1 on an odd nonorientable surface, keyed
# by (theta(a1), theta(a2)).  Each pair has commutator x^4 = (xy)^2.
_ODD_PAIR_TABLE: Dict[Tuple[int, int], Tuple[Q16Element, Q16Element]] = {
    (1, 1): (Q16Element(7, 1), Q16Element(1, 1)),
    (0, 0): (Q16Element(2, 0), Q16Element(0, 1)),
    (1, 0): (Q16Element(1, 1), Q16Element(2, 0)),
    (0, 1): (Q16Element(2, 0), Q16Element(1, 1)),
}


def _default_image(bit: int) -> Q16Element:
    return X if bit else Q16Element(2, 0)


def _theta_values(theta) -> Dict[Generator, int]:
    values = getattr(theta, "values", theta)
    return {g: int(v) % 2 for g, v in values.items()}


def _relator_value(pres: Presentation, images: Mapping[Generator, Q16Element]) -> Q16Element:
    out = IDENTITY_Q
    for g, e in pres.relators[0].syllables:
        out = out * images[g] ** e
    return out


def _search_images(
    pres: Presentation, theta: Mapping[Generator, int], fixed: Mapping[Generator, Q16Element]
) -> Optional[Dict[Generator, Q16Element]]:
    free = [g for g in pres.alphabet if g not in fixed]
    pools = [[u for u in ELEMENTS if q16_perm(u) == theta[g]] for g in free]
    for choice in itertools.product(*pools):
        images = dict(fixed)
        images.update(zip(free, choice))
        if _relator_value(pres, images) == IDENTITY_Q:
            return images
    return None


def even_search(pres: Presentation, theta: Mapping[Generator, int]) -> Dict[Generator, Q16Element]:
    """Exhaustive search for the even nonorientable construction.

    The handle generators are first pinned to the orientable rule, leaving 8 x 8
    candidates for (alpha, beta); a full search over all generators runs only
    if that fails.
    """
    pinned = {g: _default_image(theta[g]) for g in pres.alphabet if g not in (ALPHA_GEN, BETA_GEN)}
    found = _search_images(pres, theta, pinned)
    if found is None:
        found = _search_images(pres, theta, {})
    if found is None:
        raise RuntimeError("no Q16 factorisation found")
    return found


def build_phi_rp2(kind: str, genus: int, theta) -> GroupHom:
    """Factorisation of theta through B2(RP^2) = Q16, verified exactly."""
    if kind == "nonorientable" and genus == 1:
        raise TrivialDomainUnsupported(
            "pi_1 is Z2: the only homomorphism compatible with theta is trivial, so no factorisation exists"
        )
    pres = surface_group(kind, genus)
    values = _theta_values(theta)
    if set(values) != set(pres.alphabet):
        raise ValueError("theta must assign a value to every generator")
    if not any(values.values()):
        raise NotSurjective("theta is trivial")

    if pres.tag == SURFACE_ORIENTABLE:
        images = {g: _default_image(values[g]) for g in pres.alphabet}
    elif pres.tag == SURFACE_NONOR_ODD:
        images = {g: _default_image(values[g]) for g in pres.alphabet}
        if values[V_GEN]:
            images[V_GEN] = Q16Element(1, 1)
            a1, a2 = a_gen(1), a_gen(2)
            images[a1], images[a2] = _ODD_PAIR_TABLE[(values[a1], values[a2])]
        else:
            images[V_GEN] = IDENTITY_Q
    else:
        images = even_search(pres, values)

    hom = GroupHom(pres, {g: u.to_word() for g, u in images.items()}, Q16_PRESENTATION)
    verify_hom(hom, q16_oracle)
    return hom


def perm_matches(hom: GroupHom, theta) -> bool:
    values = _theta_values(theta)
    return all(q16_perm(eval_q16(hom.images[g])) == values[g] for g in hom.source.alphabet)
