"""Finite presentations of surface groups and two-string surface braid groups.

Every presentation carries a tag saying which family it instantiates.  The
pure braid presentation keeps the full twist ``B`` as a generator bound by
its two defining relators, so derived words can be written down literally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .words import (
    B_GEN,
    IDENTITY,
    SIGMA_GEN,
    Generator,
    MissingImage,
    Word,
    abstract,
    commutator,
    format_word,
    parse_generator,
    parse_word,
    product,
    rho,
    substitute,
)

SURFACE_ORIENTABLE = "SurfaceOrientable"
SURFACE_NONOR_ODD = "SurfaceNonorientableOdd"
SURFACE_NONOR_EVEN = "SurfaceNonorientableEven"
P2_ORIENTABLE = "P2Orientable"
B2_ORIENTABLE = "B2Orientable"
Q16_PRESENTATION = "Q16Presentation"
B2_SCOTT = "B2NonorientableScott"

SURFACE_TAGS = (SURFACE_ORIENTABLE, SURFACE_NONOR_ODD, SURFACE_NONOR_EVEN)


class BadGenus(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    tag: str
    param: int
    alphabet: Tuple[Generator, ...]
    relators: Tuple[Word, ...]
    labels: Tuple[str, ...]
    complete: bool = True

    def __post_init__(self):
        alpha = set(self.alphabet)
        if len(alpha) != len(self.alphabet):
            raise ValueError("duplicate generators in alphabet")
        for r in self.relators:
            extra = r.generators() - alpha
            if extra:
                raise ValueError(f"relator uses generators outside the alphabet: {extra}")

    @property
    def name(self) -> str:
        return f"{self.tag}({self.param})" if self.param else self.tag

    def relator(self, label: str) -> Word:
        return self.relators[self.labels.index(label)]

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "param": self.param,
            "complete": self.complete,
            "alphabet": [str(g) for g in self.alphabet],
            "relators": [
                {"label": lab, "word": format_word(r)}
                for lab, r in zip(self.labels, self.relators)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Presentation":
        return cls(
            tag=d["tag"],
            param=d["param"],
            alphabet=tuple(parse_generator(s) for s in d["alphabet"]),
            relators=tuple(parse_word(r["word"]) for r in d["relators"]),
            labels=tuple(r["label"] for r in d["relators"]),
            complete=d.get("complete", True),
        )


def _g(x: Generator, e: int = 1) -> Word:
    return Word.gen(x, e)


# ------------------------------------------------------------ surface groups


def a_gen(i: int) -> Generator:
    return abstract(f"a{i}")


V_GEN = abstract("v")
ALPHA_GEN = abstract("alpha")
BETA_GEN = abstract("beta")


def _pairs(count: int) -> Word:
    return product(commutator(_g(a_gen(2 * i - 1)), _g(a_gen(2 * i))) for i in range(1, count + 1))


def surface_group(kind: str, genus: int) -> Presentation:
    """``kind`` is ``orientable`` or ``nonorientable``."""
    if kind == "orientable":
        if genus < 1:
            raise BadGenus(f"orientable genus must be >= 1, got {genus}")
        gens = tuple(a_gen(i) for i in range(1, 2 * genus + 1))
        return Presentation(SURFACE_ORIENTABLE, genus, gens, (_pairs(genus),), ("surface",))
    if kind == "nonorientable":
        if genus < 2:
            raise BadGenus(f"nonorientable genus must be >= 2 here, got {genus}")
        if genus % 2 == 1:
            gens = (V_GEN,) + tuple(a_gen(i) for i in range(1, genus))
            rel = _g(V_GEN, 2) * _pairs((genus - 1) // 2)
            return Presentation(SURFACE_NONOR_ODD, genus, gens, (rel,), ("surface",))
        # Even genus l: Klein bottle part plus (l-2)/2 handles, Euler
        # characteristic 2 - l.
        npairs = (genus - 2) // 2
        gens = (ALPHA_GEN, BETA_GEN) + tuple(a_gen(i) for i in range(1, 2 * npairs + 1))
        klein = _g(ALPHA_GEN) * _g(BETA_GEN) * _g(ALPHA_GEN) * _g(BETA_GEN, -1)
        return Presentation(SURFACE_NONOR_EVEN, genus, gens, (klein * _pairs(npairs),), ("surface",))
    raise ValueError(f"unknown surface kind {kind!r}")


def surface_from_tag(tag: str, genus: int) -> Presentation:
    if tag == SURFACE_ORIENTABLE:
        return surface_group("orientable", genus)
    return surface_group("nonorientable", genus)


# ------------------------------------------------- P2 and B2 of S_g (g >= 1)


def _r(k: int, i: int, e: int = 1) -> Word:
    return _g(rho(k, i), e)


_B = _g(B_GEN)
_Binv = _g(B_GEN, -1)


def commute_applies(l: int, j: int) -> bool:
    """rho_{2,l} commutes with rho_{1,j}: j < l for odd l, j < l-1 for even l."""
    return j < l if l % 2 == 1 else j < l - 1


def cross_applies(l: int, j: int) -> bool:
    """Pairs l < j except (l, j) = (2t-1, 2t)."""
    return l < j and not (l % 2 == 1 and j == l + 1)


def surface_commutator_word(k: int, g: int) -> Word:
    """[r_k1, r_k2^-1] ... [r_k,2g-1, r_k,2g^-1], equal to B."""
    return product(commutator(_r(k, 2 * i - 1), _r(k, 2 * i, -1)) for i in range(1, g + 1))


def _conj_rel(x: Word, y: Word, rhs: Word) -> Word:
    return x * y * x.inverse() * rhs.inverse()


def p2_relators(g: int) -> List[Tuple[str, Word]]:
    if g < 1:
        raise BadGenus(f"genus must be >= 1, got {g}")
    n = 2 * g
    rels: List[Tuple[str, Word]] = [
        ("surf.1", surface_commutator_word(1, g) * _Binv),
        ("surf.2", surface_commutator_word(2, g) * _Binv),
    ]
    for l in range(1, n + 1):
        for j in range(1, n + 1):
            if commute_applies(l, j):
                rels.append((f"comm.{l}.{j}", commutator(_r(2, l), _r(1, j))))
    for k in range(1, n + 1):
        a = _r(1, k)
        rels.append((f"self.{k}+", _conj_rel(_r(2, k), a, a * commutator(a.inverse(), _B))))
        rels.append((f"self.{k}-", _conj_rel(_r(2, k, -1), a, a * commutator(_Binv, a))))
    for k in range(1, n + 1, 2):
        a, b = _r(1, k), _r(1, k + 1)
        rels.append((f"next.{k}+", _conj_rel(_r(2, k), b, _B * b * commutator(a.inverse(), _B))))
        rels.append(
            (
                f"next.{k}-",
                _conj_rel(_r(2, k, -1), b, _Binv * commutator(_B, a) * b * commutator(_Binv, a)),
            )
        )
    for k in range(1, n + 1, 2):
        a, b = _r(1, k), _r(1, k + 1)
        rels.append((f"prev.{k}+", _conj_rel(_r(2, k + 1), a, a * _Binv)))
        rels.append((f"prev.{k}-", _conj_rel(_r(2, k + 1, -1), a, a * _B * commutator(_Binv, b))))
    for l in range(1, n + 1):
        for j in range(1, n + 1):
            if cross_applies(l, j):
                c, x = _r(1, l), _r(1, j)
                rels.append(
                    (
                        f"cross.{l}.{j}+",
                        _conj_rel(_r(2, l), x, commutator(_B, c.inverse()) * x * commutator(c.inverse(), _B)),
                    )
                )
                rels.append(
                    (
                        f"cross.{l}.{j}-",
                        _conj_rel(_r(2, l, -1), x, commutator(c, _Binv) * x * commutator(_Binv, c)),
                    )
                )
    return rels


def rho_alphabet(g: int) -> Tuple[Generator, ...]:
    return tuple(rho(k, i) for k in (1, 2) for i in range(1, 2 * g + 1))


def p2_presentation(g: int) -> Presentation:
    rels = p2_relators(g)
    return Presentation(
        P2_ORIENTABLE,
        g,
        rho_alphabet(g) + (B_GEN,),
        tuple(w for _, w in rels),
        tuple(lab for lab, _ in rels),
    )


def sigma_relators(g: int) -> List[Tuple[str, Word]]:
    s = _g(SIGMA_GEN)
    rels = [("S.sq", _g(SIGMA_GEN, 2) * _Binv)]
    for i in range(1, 2 * g + 1):
        rels.append((f"S.1.{i}", _conj_rel(s, _r(1, i), _r(2, i))))
    for i in range(1, 2 * g + 1):
        rels.append((f"S.2.{i}", _conj_rel(s, _r(2, i), _B * _r(1, i) * _Binv)))
    return rels


def b2_presentation(g: int) -> Presentation:
    rels = p2_relators(g) + sigma_relators(g)
    return Presentation(
        B2_ORIENTABLE,
        g,
        rho_alphabet(g) + (SIGMA_GEN, B_GEN),
        tuple(w for _, w in rels),
        tuple(lab for lab, _ in rels),
    )


def eliminate_b(w: Word, g: int) -> Word:
    """Replace B by the strand-1 commutator product of its defining relator."""
    return substitute(w, {**{x: _g(x) for x in rho_alphabet(g)}, B_GEN: surface_commutator_word(1, g),
                          SIGMA_GEN: _g(SIGMA_GEN)})


# ------------------------------------------------------ nonorientable target


def scott_relation_set(m: int) -> Presentation:
    """Relations known to hold in B2(N_m); not a full presentation.

    Braids are multiplied left to right, the reverse of the right-to-left
    composition often used for these relations.  Because the list is incomplete, a
    derivation from it proves a word trivial, but failing to find one proves
    nothing.
    """
    if m < 2:
        raise BadGenus(f"nonorientable target genus must be >= 2, got {m}")
    r11, r21, s = _r(1, 1), _r(2, 1), _g(SIGMA_GEN)
    rels = [
        ("N.1", _conj_rel(r21, r11, r11 * _Binv)),
        ("N.sq", _g(SIGMA_GEN, 2) * _Binv),
        ("N.s1", _conj_rel(s, r11, r21)),
        ("N.s2", _conj_rel(s, r21, _B * r11 * _Binv)),
        ("N.B", _conj_rel(r21, _B, _B * r11.inverse() * _Binv * r11 * _Binv)),
    ]
    return Presentation(
        B2_SCOTT,
        m,
        (rho(1, 1), rho(2, 1), SIGMA_GEN, B_GEN),
        tuple(w for _, w in rels),
        tuple(lab for lab, _ in rels),
        complete=False,
    )


def q16_presentation() -> Presentation:
    x, y = abstract("x"), abstract("y")
    rels = (
        ("Q.1", _g(x, 4) * _g(y, -2)),
        ("Q.2", _g(y) * _g(x) * _g(y, -1) * _g(x)),
    )
    return Presentation(Q16_PRESENTATION, 0, (x, y), tuple(w for _, w in rels), tuple(l for l, _ in rels))


# --------------------------------------------------------- homomorphisms

VERIFIED = "Verified"
NECESSARY_ONLY = "NecessaryConditionOnly"
UNKNOWN = "Unknown"
REFUTED = "Refuted"

# An equality oracle takes a word in the target alphabet and returns
# (status, evidence).  evidence is any JSON-friendly object.
Oracle = Callable[[Word], Tuple[str, object]]


def free_reduction_oracle(w: Word) -> Tuple[str, object]:
    if not w.syllables:
        return VERIFIED, {"method": "free reduction"}
    return UNKNOWN, {"method": "free reduction", "residue": format_word(w)}


@dataclass
class RelatorCheck:
    label: str
    image: Word
    status: str
    evidence: object = None

    def to_dict(self) -> dict:
        return {
            "relator": self.label,
            "image": format_word(self.image),
            "status": self.status,
            "evidence": self.evidence,
        }


@dataclass
class GroupHom:
    source: Presentation
    images: Dict[Generator, Word]
    target_tag: str
    verification: List[RelatorCheck] = field(default_factory=list)

    def __post_init__(self):
        for gen in self.source.alphabet:
            if gen not in self.images:
                raise MissingImage(gen)

    @property
    def status(self) -> str:
        if not self.verification:
            return UNKNOWN
        statuses = {c.status for c in self.verification}
        if statuses == {VERIFIED}:
            return VERIFIED
        if REFUTED in statuses:
            return REFUTED
        if UNKNOWN in statuses:
            return UNKNOWN
        return NECESSARY_ONLY

    def image_of(self, w: Word) -> Word:
        return substitute(w, self.images)

    def to_dict(self) -> dict:
        return {
            "source": self.source.name,
            "target": self.target_tag,
            "images": {str(g): format_word(self.images[g]) for g in self.source.alphabet},
            "status": self.status,
            "relators": [c.to_dict() for c in self.verification],
        }


def verify_hom(hom: GroupHom, oracle: Oracle) -> List[RelatorCheck]:
    report = []
    for label, rel in zip(hom.source.labels, hom.source.relators):
        img = substitute(rel, hom.images)
        status, evidence = oracle(img)
        report.append(RelatorCheck(label, img, status, evidence))
    hom.verification = report
    return report
