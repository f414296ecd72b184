"""Decision procedure for the Borsuk-Ulam property of (X, tau, S).

The input is algebraic: the type of pi_1(X/tau), the homomorphism theta to
Z2 given by the double cover, and the target surface S.  A ``fails`` verdict
carries an explicit factorisation phi of theta through B2(S), checked
relator by relator.  A ``holds`` verdict carries an obstruction whose
computation can be re-run.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import homz2
from .homz2 import NotSurjective, NotWellDefined, Z2Hom, canonicalize, classify_by_invariants
from .nilpotent import (
    B_INDEX,
    b_exponent,
    conj_b,
    cross_commutator,
    engine,
    eval_b2,
    eval_word,
    iota_sigma,
    nil_commutator,
    project_qbar,
    qbar_b_only,
    random_rho_word,
)
from .presentations import (
    ALPHA_GEN,
    BETA_GEN,
    B2_ORIENTABLE,
    B2_SCOTT,
    NECESSARY_ONLY,
    REFUTED,
    SURFACE_NONOR_EVEN,
    SURFACE_NONOR_ODD,
    SURFACE_ORIENTABLE,
    UNKNOWN,
    VERIFIED,
    V_GEN,
    GroupHom,
    Presentation,
    a_gen,
    b2_presentation,
    scott_relation_set,
    surface_group,
    verify_hom,
)
from .quat16 import ELEMENTS, IDENTITY_Q, build_phi_rp2, eval_q16, q16_perm
from .words import (
    B_GEN,
    IDENTITY,
    RHO,
    SIGMA_GEN,
    Generator,
    Word,
    commutator,
    exponent_sum,
    format_word,
    rho,
    substitute,
    tilde,
)
from .wordsearch import DEFAULT_LIMITS, SearchLimits, derive_identity, push_sigma


class InvalidCase(ValueError):
    pass


class NoConstruction(ValueError):
    pass


class ConstraintViolated(ValueError):
    def __init__(self, index: int, which: str, detail: str = ""):
        super().__init__(f"exponent constraint on {which} fails at i={index}{': ' + detail if detail else ''}")
        self.index = index
        self.which = which


class TooLarge(ValueError):
    pass


HOLDS = "holds"
FAILS = "fails"
DEPENDS_ON_X = "depends_on_x"
OUT_OF_SCOPE = "out_of_scope"

DOMAIN_KINDS = ("finite", "orientable", "nonorientable")
TARGET_KINDS = ("sphere", "rp2", "orientable", "nonorientable")

# Each verdict names the rule that produced it.
RULES: Dict[str, str] = {
    "finite-pi1": "pi_1(X) finite and S aspherical: B2(S) is torsion free, so theta cannot factor",
    "rp2-quotient": "pi_1(X/tau) = Z2 and B2(S) torsion free: only the trivial map squares to 1",
    "orientable-quotient": "pi_1(X/tau) orientable surface group: odd and even powers of sigma factor theta",
    "nonorientable-into-nonorientable": "nonorientable quotient, nonorientable target: explicit factorisation",
    "klein-alpha-odd": "Klein bottle quotient with theta(alpha) = 1: full-twist parity obstruction",
    "klein-alpha-even": "Klein bottle quotient with theta(alpha) = 0: explicit factorisation",
    "n3-torsion-class": "N3 quotient in the class of theta(v)=theta(a1)=1, theta(a2)=0: mod-2 class-two obstruction",
    "n3-other-class": "N3 quotient outside that class: explicit factorisation",
    "large-nonorientable": "nonorientable quotient of genus >= 4: factorisation using a theta-trivial handle",
    "rp2-target-simply-connected": "target RP2, X simply connected: the only order-2 element of Q16 is pure",
    "rp2-target-nonsimply-connected": "target RP2, X not simply connected: factorisation through Q16",
    "rp2-target-dimension": "target RP2 needs dim X <= 3 for the algebraic criterion",
    "rp2-target-finite-unknown": "target RP2 with finite pi_1 other than a Z2 quotient is not covered",
    "sphere-target-2d": "target S2 and dim X <= 2: the property never holds",
    "sphere-target-s3": "target S2, X = S3: the property holds",
    "sphere-target-rp3": "target S2, X = RP3: the property fails",
    "sphere-target-r3": "target S2: equivalent to the property for (X, tau, R3), which depends on X",
}


# --------------------------------------------------------------- inputs


@dataclass
class CaseInput:
    domain: str
    domain_genus: int = 0
    theta: Optional[Z2Hom] = None
    target: str = "orientable"
    target_genus: int = 1
    dim_x: Optional[int] = None
    special_x: Optional[str] = None
    quotient_z2: bool = False  # for finite pi_1: declares pi_1(X/tau) = Z2

    @property
    def source(self) -> Presentation:
        return surface_group(self.domain, self.domain_genus)

    def to_dict(self) -> dict:
        out: dict = {"domain": {"kind": self.domain}}
        if self.domain != "finite":
            out["domain"]["genus"] = self.domain_genus
        else:
            out["domain"]["quotient_z2"] = self.quotient_z2
        if self.theta is not None:
            out["theta"] = self.theta.to_dict()
        out["target"] = {"kind": self.target}
        if self.target in ("orientable", "nonorientable"):
            out["target"]["genus"] = self.target_genus
        if self.dim_x is not None:
            out["dim_x"] = self.dim_x
        if self.special_x is not None:
            out["special_x"] = self.special_x
        return out


def case_from_dict(data: Mapping) -> CaseInput:
    try:
        dom = data["domain"]
        tgt = data["target"]
        kind = dom["kind"]
    except (KeyError, TypeError) as exc:
        raise InvalidCase(f"missing field {exc}") from None
    case = CaseInput(
        domain=kind,
        domain_genus=int(dom.get("genus", 0)),
        target=tgt.get("kind"),
        target_genus=int(tgt.get("genus", 1)),
        dim_x=data.get("dim_x"),
        special_x=data.get("special_x"),
        quotient_z2=bool(dom.get("quotient_z2", False)),
    )
    if kind not in DOMAIN_KINDS:
        raise InvalidCase(f"unknown domain kind {kind!r}")
    theta = data.get("theta")
    if theta is not None and kind != "finite":
        src = case.source
        vals = {g: 0 for g in src.alphabet}
        names = {str(g): g for g in src.alphabet}
        for k, v in theta.items():
            if k not in names:
                raise InvalidCase(f"theta names {k!r}, not a generator of {src.name}")
            vals[names[k]] = int(v)
        case.theta = Z2Hom(src, vals)
    validate(case)
    return case


def case_from_json(text: str) -> CaseInput:
    return case_from_dict(json.loads(text))


def make_case(domain: str, genus: int = 0, theta: Optional[Mapping] = None, target: str = "orientable",
              target_genus: int = 1, **kw) -> CaseInput:
    data = {"domain": {"kind": domain, "genus": genus, "quotient_z2": kw.pop("quotient_z2", False)},
            "target": {"kind": target, "genus": target_genus}}
    if theta is not None:
        data["theta"] = {str(k): v for k, v in theta.items()}
    data.update(kw)
    return case_from_dict(data)


def validate(case: CaseInput) -> None:
    if case.target not in TARGET_KINDS:
        raise InvalidCase(f"unknown target kind {case.target!r}")
    if case.target == "orientable" and case.target_genus < 1:
        raise InvalidCase("orientable target genus must be >= 1 (use kind 'sphere' for S2)")
    if case.target == "nonorientable" and case.target_genus < 2:
        raise InvalidCase("nonorientable target genus must be >= 2 (use kind 'rp2' for RP2)")
    if case.dim_x is not None and (not isinstance(case.dim_x, int) or case.dim_x < 1):
        raise InvalidCase("dim_x must be a positive integer")
    if case.special_x not in (None, "S3", "RP3"):
        raise InvalidCase(f"special_x must be S3 or RP3, got {case.special_x!r}")
    if case.special_x is not None:
        if case.target != "sphere":
            raise InvalidCase("special_x is only meaningful for the sphere target")
        if case.dim_x is not None and case.dim_x != 3:
            raise InvalidCase("S3 and RP3 have dimension 3")
    if case.domain == "finite":
        if case.theta is not None:
            raise InvalidCase("theta is not used for a finite fundamental group")
        return
    if case.domain == "orientable" and case.domain_genus < 1:
        raise InvalidCase("orientable domain needs genus >= 1 (a simply connected quotient is a finite case)")
    if case.domain == "nonorientable" and case.domain_genus < 1:
        raise InvalidCase("nonorientable domain needs genus >= 1")
    if case.domain == "nonorientable" and case.domain_genus == 1:
        if case.theta is not None:
            raise InvalidCase("theta is determined for pi_1 = Z2 and must be omitted")
        return
    if case.theta is None:
        raise InvalidCase("theta is required for a surface-group quotient")
    if not case.theta.well_defined:
        raise NotWellDefined(f"theta={case.theta} does not kill the relator")
    if not case.theta.surjective:
        raise NotSurjective(f"theta={case.theta} is trivial")


# ---------------------------------------------------------- certificates


@dataclass
class PhiCert:
    hom: GroupHom
    construction: str
    perm_check: Dict[str, bool]
    class_id: Optional[str] = None
    moves: List[dict] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.hom.status == VERIFIED and all(self.perm_check.values())

    def to_dict(self) -> dict:
        return {
            "kind": "factorisation",
            "construction": self.construction,
            "class": self.class_id,
            "moves_from_representative": self.moves,
            "phi": self.hom.to_dict(),
            "perm_matches_theta": self.perm_check,
            "verified": self.verified,
        }


@dataclass
class ObstructionCert:
    kind: str
    summary: str
    data: dict
    rerun: Callable[[], dict]
    computational: bool = True

    def replay(self) -> bool:
        """Re-run the computation and compare with the stored result."""
        fresh = self.rerun()
        return fresh == self.data and bool(fresh.get("ok", False))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "summary": self.summary, "computational": self.computational, **self.data}


@dataclass
class Verdict:
    outcome: str
    citation: str
    certificate: Optional[object] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        cert = self.certificate.to_dict() if self.certificate is not None else None
        return {"outcome": self.outcome, "citation": self.citation, "rule": RULES[self.citation],
                "certificate": cert, "notes": list(self.notes)}

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


# ------------------------------------------------------------- oracles


def b2_oracle(g: int, limits: SearchLimits = DEFAULT_LIMITS):
    """Word search in B2(S_g), plus two class-two checks that must agree."""
    pres = b2_presentation(g)

    def oracle(w: Word):
        p_semi, eps_semi = eval_b2(w, g)
        p_word, eps_word = push_sigma(w, g)
        p_push = eval_word(p_word, g)
        if (p_semi, eps_semi) != (p_push, eps_word):
            raise AssertionError("class-two routes disagree")
        nil = {"sigma_parity": eps_semi, "class_two_trivial": p_semi.is_identity}
        if eps_semi or not p_semi.is_identity:
            return REFUTED, {"method": "class-two quotient", **nil, "value": p_semi.to_dict()}
        res = derive_identity(pres, w, limits)
        if res.verified:
            return VERIFIED, {"method": "word search", "class_two": nil, **res.certificate.to_dict(),
                              "diagnostics": res.diagnostics}
        return NECESSARY_ONLY, {"method": "class-two quotient only", "class_two": nil,
                                "diagnostics": res.diagnostics}

    return oracle


def scott_oracle(m: int, limits: SearchLimits = DEFAULT_LIMITS):
    pres = scott_relation_set(m)

    def oracle(w: Word):
        res = derive_identity(pres, w, limits)
        if res.verified:
            return VERIFIED, {"method": "word search", **res.certificate.to_dict(), "diagnostics": res.diagnostics}
        return UNKNOWN, {"method": "word search", "diagnostics": res.diagnostics}

    return oracle


# -------------------------------------------------------- constructions

_S = Word.gen(SIGMA_GEN)
_E = IDENTITY


def _r(k: int, i: int, e: int = 1) -> Word:
    return Word.gen(rho(k, i), e)


def _power_images(src: Presentation, theta: Mapping[Generator, int], even: Word) -> Dict[Generator, Word]:
    """sigma for theta = 1, ``even`` for theta = 0."""
    return {g: (_S if theta[g] else even) for g in src.alphabet}


def _handle_pairs(src: Presentation) -> List[Tuple[Generator, Generator]]:
    hs = [g for g in src.alphabet if g.name[:1] == "a" and g.name[1:].isdigit()]
    return [(hs[2 * i], hs[2 * i + 1]) for i in range(len(hs) // 2)]


def _zero_pair(theta: Z2Hom) -> Optional[Tuple[Generator, Generator]]:
    for a, b in _handle_pairs(theta.source):
        if not theta.values[a] and not theta.values[b]:
            return a, b
    return None


def _compose(phi_star: Dict[Generator, Word], cert: homz2.MoveCertificate) -> Dict[Generator, Word]:
    psi = cert.composite()
    return {g: substitute(psi[g], phi_star) for g in cert.source.alphabet}


def _from_representative(theta: Z2Hom, build: Callable[[Z2Hom, str], Dict[Generator, Word]]):
    rep, cls, cert = canonicalize(theta)
    if not cert.check(rep, theta):
        raise AssertionError("move certificate does not replay")
    return _compose(build(rep, cls), cert), cls, cert.to_list()


def _sigma_parity_check(src: Presentation, images: Mapping[Generator, Word], theta: Z2Hom) -> Dict[str, bool]:
    return {str(g): exponent_sum(images[g], SIGMA_GEN) % 2 == theta.values[g] for g in src.alphabet}


def _phi_nonorientable_target(theta: Z2Hom):
    """Factorisations into B2(N_m)."""
    src = theta.source
    t = theta.values
    if src.tag == SURFACE_ORIENTABLE:
        return _power_images(src, t, _S ** 2), "sigma powers", None, []
    if src.tag == SURFACE_NONOR_EVEN:
        images = _power_images(src, t, _S ** 2)
        if not t[ALPHA_GEN]:
            images[ALPHA_GEN] = _E
            images[BETA_GEN] = _S if t[BETA_GEN] else _E
            return images, "alpha trivial, sigma powers", None, []
        images[ALPHA_GEN] = _S
        images[BETA_GEN] = _r(2, 1) * _r(1, 1) * (_S if t[BETA_GEN] else _E)
        return images, "alpha to sigma, beta through rho21 rho11", None, []
    if not t[V_GEN]:
        images = _power_images(src, t, _S ** 2)
        images[V_GEN] = _E
        return images, "v trivial, sigma powers", None, []

    def build(rep: Z2Hom, cls: str) -> Dict[Generator, Word]:
        images = _power_images(src, rep.values, _S ** 2)
        images[V_GEN] = _S
        if cls == homz2.NODD2:
            images[a_gen(1)] = _r(1, 1, -1)
            images[a_gen(2)] = _r(2, 1)
        else:
            images[a_gen(1)] = _S.inverse()
            images[a_gen(2)] = _r(2, 1) * _r(1, 1)
        return images

    images, cls, moves = _from_representative(theta, build)
    return images, "v to sigma on the class representative", cls, moves


def _pair_trick(src: Presentation, t: Mapping[Generator, int], pair) -> Dict[Generator, Word]:
    images = _power_images(src, t, _E)
    images[pair[0]] = _r(1, 1, -1)
    images[pair[1]] = _r(2, 2)
    return images


def _phi_orientable_target(theta: Z2Hom):
    """Factorisations into B2(S_g); only called for failing cases."""
    src = theta.source
    t = theta.values
    if src.tag == SURFACE_ORIENTABLE:
        return _power_images(src, t, _S ** 2), "sigma powers", None, []
    if src.tag == SURFACE_NONOR_EVEN:
        if not t[ALPHA_GEN]:
            images = _power_images(src, t, _S ** 2)
            images[ALPHA_GEN] = _E
            images[BETA_GEN] = _S if t[BETA_GEN] else _E
            return images, "alpha trivial, beta to sigma", None, []
        if src.param == 2:
            raise NoConstruction("theta(alpha) = 1 on the Klein bottle: the property holds")

        def build(rep: Z2Hom, cls: str) -> Dict[Generator, Word]:
            images = _pair_trick(src, rep.values, _zero_pair(rep))
            images[ALPHA_GEN] = _S
            images[BETA_GEN] = _S if rep.values[BETA_GEN] else _E
            return images

        pair = _zero_pair(theta)
        if pair is not None:
            return build(theta, classify_by_invariants(theta)), "alpha to sigma, theta-trivial handle to rho11^-1, rho22", None, []
        images, cls, moves = _from_representative(theta, build)
        return images, "alpha to sigma, theta-trivial handle to rho11^-1, rho22", cls, moves
    # odd
    if not t[V_GEN]:
        images = _power_images(src, t, _S ** 2)
        images[V_GEN] = _E
        return images, "v trivial, sigma powers", None, []
    if src.param == 3 and classify_by_invariants(theta) == homz2.NODD3:
        raise NoConstruction("theta in the torsion class of N3: the property holds")

    def build(rep: Z2Hom, cls: str) -> Dict[Generator, Word]:
        images = _pair_trick(src, rep.values, _zero_pair(rep))
        images[V_GEN] = _S
        return images

    if _zero_pair(theta) is not None:
        return build(theta, ""), "v to sigma, theta-trivial handle to rho11^-1, rho22", None, []
    images, cls, moves = _from_representative(theta, build)
    return images, "v to sigma, theta-trivial handle to rho11^-1, rho22", cls, moves


def build_phi(case: CaseInput, limits: SearchLimits = DEFAULT_LIMITS) -> PhiCert:
    validate(case)
    if case.domain == "finite" or (case.domain == "nonorientable" and case.domain_genus == 1):
        raise NoConstruction("pi_1(X/tau) is finite here: no factorisation exists")
    if case.target == "sphere":
        raise NoConstruction("sphere target verdicts are not certified by a factorisation")
    theta = case.theta
    src = theta.source
    cls = classify_by_invariants(theta) if src.tag != SURFACE_ORIENTABLE else homz2.OR1
    if case.target == "rp2":
        if case.dim_x is None or case.dim_x > 3:
            raise NoConstruction("outside the dimension range of the algebraic criterion")
        hom = build_phi_rp2(case.domain, case.domain_genus, theta)
        perm = {str(g): q16_perm(eval_q16(hom.images[g])) == theta.values[g] for g in src.alphabet}
        return PhiCert(hom, "Q16 images", perm, cls)
    if case.target == "nonorientable":
        images, name, rep_cls, moves = _phi_nonorientable_target(theta)
        hom = GroupHom(src, images, B2_SCOTT)
        verify_hom(hom, scott_oracle(case.target_genus, limits))
    else:
        images, name, rep_cls, moves = _phi_orientable_target(theta)
        hom = GroupHom(src, images, B2_ORIENTABLE)
        verify_hom(hom, b2_oracle(case.target_genus, limits))
    return PhiCert(hom, name, _sigma_parity_check(src, images, theta), rep_cls or cls, moves)


# ---------------------------------------------------------- obstructions

DEFAULT_SEED = 20240611


def _letters(g: int, strand: int) -> List[Generator]:
    return [rho(strand, i) for i in range(1, 2 * g + 1)]


def admissible_gamma(rng: random.Random, g: int, max_len: int) -> Tuple[Word, List[dict]]:
    """Random gamma in P2(S_g) with gamma sigma gamma sigma^-1 in N.

    gamma = w1 n1 tilde(w1)^-1 n2 with n1, n2 built from conjugates of B and
    cross-strand commutators; its image in P1 x P1 is (w1, w1^-1).
    """
    w1 = random_rho_word(rng, g, rng.randint(0, max_len), strands=(1,))
    parts = []
    for _ in range(2):
        if rng.random() < 0.5:
            parts.append(conj_b(random_rho_word(rng, g, rng.randint(0, max_len)), rng.choice((-1, 1))))
        else:
            parts.append(cross_commutator(random_rho_word(rng, g, rng.randint(0, max_len // 2), strands=(1,)),
                                          random_rho_word(rng, g, rng.randint(0, max_len // 2), strands=(2,))))
    gamma = w1 * parts[0].word * tilde(w1).inverse() * parts[1].word
    cert = [{"w1": format_word(w1)}] + parts[0].certificate() + parts[1].certificate()
    return gamma, cert


def _case4_data(g: int, samples: int, seed: int, max_len: int) -> dict:
    rng = random.Random(seed)
    eng = engine(g)
    b = eval_word(Word.gen(B_GEN), g)
    odd, exps, central = 0, [], 0
    for _ in range(samples):
        gamma, _ = admissible_gamma(rng, g, max_len)
        p = eval_word(gamma, g)
        sq = eng.mul(eng.mul(p, iota_sigma(p)), b)
        central += sq.is_central
        val = b_exponent(sq)
        exps.append(val)
        odd += val % 2
    # conjugation leaves the B-exponent of elements of N unchanged
    conj_ok = 0
    for _ in range(samples):
        eta = random_rho_word(rng, g, rng.randint(0, max_len))
        beta = random_rho_word(rng, g, rng.randint(0, max_len), with_b=True)
        x = conj_b(eta, rng.choice((-1, 1))).word
        same = b_exponent(eval_word(beta * x * beta.inverse(), g)) == b_exponent(eval_word(x, g))
        conj_ok += same
    k = rng.randint(1, 2 * g)
    lhs = _r(2, k) * Word.gen(B_GEN) * _r(2, k, -1)
    rhs = Word.gen(B_GEN) * _r(1, k, -1) * Word.gen(B_GEN) * _r(1, k) * Word.gen(B_GEN, -1)
    twist_ok = eval_word(lhs, g) == eval_word(rhs, g) and b_exponent(eval_word(lhs, g)) == 1
    ok = odd == samples and central == samples and conj_ok == samples and twist_ok
    return {
        "ok": ok,
        "genus": g,
        "seed": seed,
        "samples": samples,
        "odd_b_exponent_of_alpha_squared": odd,
        "alpha_squared_central": central,
        "b_exponents_head": exps[:10],
        "conjugation_invariant": conj_ok,
        "twist_conjugation_identity": twist_ok,
        "conclusion": (
            "beta alpha^2 beta^-1 = alpha^-2 and conjugation invariance force an even, in fact zero, "
            "B-exponent for alpha^2, while alpha = gamma sigma gives an odd one"
        ),
    }


def case4_obstruction(g: int, samples: int = 200, seed: int = DEFAULT_SEED, max_len: int = 20) -> ObstructionCert:
    if g < 1:
        raise InvalidCase("target genus must be >= 1")
    data = _case4_data(g, samples, seed, max_len)
    return ObstructionCert(
        "twist-parity",
        "alpha odd in B2(S_g) has alpha^2 with odd B-exponent; the Klein relation needs it zero",
        data,
        lambda: _case4_data(g, samples, seed, max_len),
    )


def solution_constraints(rho1: Word, rho2: Word, w1: Word, w2: Word, g: int,
                         v1: Optional[Word] = None, v2: Optional[Word] = None) -> bool:
    """Strand alphabets and the exponent-sum constraints on rho and w."""
    for name, word, strand in (("rho1", rho1, 1), ("rho2", rho2, 2), ("w1", w1, 1), ("w2", w2, 2),
                               ("v1", v1, 1), ("v2", v2, 2)):
        if word is None:
            continue
        for gen, _ in word.syllables:
            if gen.family != RHO or gen.k != strand or gen.i > 2 * g:
                raise ConstraintViolated(0, name, f"{gen} is not a strand-{strand} letter of genus {g}")
    for i in range(1, 2 * g + 1):
        if exponent_sum(rho1, rho(1, i)) != -exponent_sum(rho2, rho(2, i)):
            raise ConstraintViolated(i, "rho", "|rho1|_{1,i} != -|rho2|_{2,i}")
        if exponent_sum(w1, rho(1, i)) != exponent_sum(w2, rho(2, i)):
            raise ConstraintViolated(i, "w", "|w1|_{1,i} != |w2|_{2,i}")
    return True


def _with_sums(rng: random.Random, g: int, strand: int, length: int, sums: Sequence[int]) -> Word:
    """Random strand word whose exponent sums are ``sums``."""
    base = random_rho_word(rng, g, length, strands=(strand,))
    letters = []
    for i, target in enumerate(sums, start=1):
        need = target - exponent_sum(base, rho(strand, i))
        letters.extend([(rho(strand, i), 1 if need > 0 else -1)] * abs(need))
    syl = list(base.syllables) + letters
    rng.shuffle(syl)
    out = Word(syl)
    # shuffling preserves exponent sums
    return out


def random_constrained(rng: random.Random, g: int, max_len: int = 8):
    n = 2 * g
    rho1 = random_rho_word(rng, g, rng.randint(0, max_len), strands=(1,))
    rho2 = _with_sums(rng, g, 2, rng.randint(0, max_len), [-exponent_sum(rho1, rho(1, i)) for i in range(1, n + 1)])
    v1 = random_rho_word(rng, g, rng.randint(0, max_len), strands=(1,))
    v2 = random_rho_word(rng, g, rng.randint(0, max_len), strands=(2,))
    w1 = random_rho_word(rng, g, rng.randint(0, max_len), strands=(1,))
    w2 = _with_sums(rng, g, 2, rng.randint(0, max_len), [exponent_sum(w1, rho(1, i)) for i in range(1, n + 1)])
    solution_constraints(rho1, rho2, w1, w2, g, v1, v2)
    return rho1, rho2, v1, v2, w1, w2


def regrouping_words(rho1, rho2, v1, v2, w1, w2) -> Dict[str, Word]:
    """Right-hand sides of the equation for B at three stages of regrouping."""
    B = Word.gen(B_GEN)
    Bi = B.inverse()
    t1, t2 = tilde(rho1), tilde(rho2)
    tv1, tv2, tw1, tw2 = tilde(v1), tilde(v2), tilde(w1), tilde(w2)
    inv = lambda x: x.inverse()
    expanded = (t1 * B * t2 * Bi * rho1 * rho2 * tv1 * B * tv2 * Bi * tw1 * B * tw2 * inv(tv2) * Bi * inv(tv1)
             * inv(w2) * inv(w1))
    X = B * t2 * Bi * rho1
    Y = t1 * rho2 * tv1
    last1 = t1 * rho2 * tv1 * tw1 * inv(tv1) * inv(w2)
    last2 = X * B * tv2 * tw2 * inv(tv2) * Bi * inv(w1)
    comm = (
        commutator(t1, X)
        * (X * commutator(Y, B * tv2 * Bi) * inv(X))
        * (X * B * tv2 * Bi * commutator(Y * tw1, B * tw2 * inv(tv2) * Bi) * B * inv(tv2) * Bi * inv(X))
        * commutator(X * B * tv2 * tw2 * inv(tv2) * Bi, last1)
        * last1
        * last2
    )
    regrouped = (commutator(tv1, tw2) * commutator(tw1, inv(tv2)) * last1
                * (t2 * rho1 * tv2 * tw2 * inv(tv2) * inv(w1)))
    final = commutator(tv1 * tv2, tw1 * tw2)
    return {"expanded": expanded, "commutators": comm, "regrouped": regrouped, "final": final}


def qbar_grid(g: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]]:
    """Qbar value of [V, W] over all mod-2 classes.

    W has exponent vector c on both strands (the w constraint); by
    bilinearity only the sum d of V's two strand vectors matters mod 2, so
    V is taken on strand 1 alone.
    """
    n = 2 * g
    out = []
    for ccode in range(2 ** n):
        c = tuple((ccode >> t) & 1 for t in range(n))
        W = Word([(rho(1, i + 1), c[i]) for i in range(n)] + [(rho(2, i + 1), c[i]) for i in range(n)])
        for dcode in range(2 ** n):
            d = tuple((dcode >> t) & 1 for t in range(n))
            V = Word([(rho(1, i + 1), d[i]) for i in range(n)])
            out.append((c, d, project_qbar(nil_commutator(V, W, g)).bits))
    return out


def _mod2_class(v: Word, w: Word, g: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    n = 2 * g
    c = tuple(exponent_sum(w, rho(1, i)) % 2 for i in range(1, n + 1))
    d = tuple((exponent_sum(v, rho(1, i)) + exponent_sum(v, rho(2, i))) % 2 for i in range(1, n + 1))
    return c, d


def _case5_data(g: int, samples: int, seed: int, max_len: int) -> dict:
    rng = random.Random(seed)
    red_ok = regroup_free = regroup_nil = 0
    lift_ok = 0
    grid = {(c, d): bits for c, d, bits in qbar_grid(g)}
    for _ in range(samples):
        args = random_constrained(rng, g, max_len)
        words = regrouping_words(*args)
        regroup_free += not (words["expanded"] * words["commutators"].inverse()).syllables
        regroup_nil += eval_word(words["commutators"], g) == eval_word(words["regrouped"], g)
        q_prod = project_qbar(eval_word(words["regrouped"], g))
        q_final = project_qbar(eval_word(words["final"], g))
        red_ok += q_prod == q_final
        _, _, v1, v2, w1, w2 = args
        V, W = tilde(v1) * tilde(v2), tilde(w1) * tilde(w2)
        lift_ok += grid[_mod2_class(V, W, g)] == q_final.bits
    target = qbar_b_only(g).bits
    solutions = [(list(c), list(d)) for (c, d), bits in grid.items() if bits == target]
    b_coeffs = sorted({bits[-1] for bits in grid.values()})
    ok = red_ok == regroup_free == regroup_nil == lift_ok == samples and not solutions
    return {
        "ok": ok,
        "genus": g,
        "seed": seed,
        "samples": samples,
        "regrouping_free_identity": regroup_free,
        "regrouping_class_two": regroup_nil,
        "reduction_matches": red_ok,
        "grid_lifts_match": lift_ok,
        "search_space": len(grid),
        "solutions": solutions,
        "bbar_values_seen": b_coeffs,
    }


@lru_cache(maxsize=None)
def _case5_cached(g: int, samples: int, seed: int, max_len: int) -> str:
    return json.dumps(_case5_data(g, samples, seed, max_len), sort_keys=True)


def case5_obstruction(g: int, samples: int = 200, seed: int = DEFAULT_SEED, max_len: int = 8,
                      max_genus: int = 3) -> ObstructionCert:
    if g < 1:
        raise InvalidCase("target genus must be >= 1")
    if g > max_genus:
        raise TooLarge(f"exhaustive search over 2^{4 * g} classes exceeds the bound g <= {max_genus}")
    data = json.loads(_case5_cached(g, samples, seed, max_len))
    return ObstructionCert(
        "qbar-exhaustive",
        "mod-2 class-two image of the N3 equation reduces to Bbar = [V, W]; no exponent class solves it",
        data,
        lambda: _case5_data(g, samples, seed, max_len),
    )


def _q16_square_data() -> dict:
    odd = [u for u in ELEMENTS if q16_perm(u) == 1]
    bad = [str(u) for u in odd if u * u == IDENTITY_Q]
    return {"ok": not bad, "odd_elements": len(odd), "odd_square_to_identity": bad}


def _torsion_data(g: int, samples: int = 200, seed: int = DEFAULT_SEED) -> dict:
    # (gamma sigma)^2 = gamma iota(gamma) B is never trivial in the class-two quotient
    rng = random.Random(seed)
    eng = engine(g)
    b = eval_word(Word.gen(B_GEN), g)
    nontrivial = 0
    for _ in range(samples):
        p = eval_word(random_rho_word(rng, g, rng.randint(0, 20), with_b=True), g)
        nontrivial += not eng.mul(eng.mul(p, iota_sigma(p)), b).is_identity
    return {"ok": nontrivial == samples, "genus": g, "seed": seed, "samples": samples, "nontrivial_squares": nontrivial}


def _cited(summary: str, premise: dict) -> ObstructionCert:
    return ObstructionCert("cited", summary, {"ok": True, **premise}, lambda: {"ok": True, **premise},
                           computational=False)


# ------------------------------------------------------------- decide


def decide(case: CaseInput, limits: SearchLimits = DEFAULT_LIMITS) -> Verdict:
    validate(case)
    notes = []
    if case.dim_x is not None and case.target in ("orientable", "nonorientable"):
        notes.append(f"dim_x={case.dim_x} recorded; X is assumed finite dimensional")
    finite_quotient = case.domain == "finite" or (case.domain == "nonorientable" and case.domain_genus == 1)
    z2_quotient = case.domain == "nonorientable" or case.quotient_z2

    if case.target == "sphere":
        if case.special_x == "S3":
            return Verdict(HOLDS, "sphere-target-s3", _cited("verdict taken from the classification", {}), notes)
        if case.special_x == "RP3":
            return Verdict(FAILS, "sphere-target-rp3", None, notes)
        if case.dim_x is not None and case.dim_x <= 2:
            return Verdict(FAILS, "sphere-target-2d", None, notes)
        return Verdict(DEPENDS_ON_X, "sphere-target-r3", None,
                       notes + ["decided by the Borsuk-Ulam property of (X, tau, R3)"])

    if case.target == "rp2":
        if case.dim_x is None or case.dim_x > 3:
            return Verdict(OUT_OF_SCOPE, "rp2-target-dimension", None, notes)
        if finite_quotient:
            if not z2_quotient:
                return Verdict(OUT_OF_SCOPE, "rp2-target-finite-unknown", None, notes)
            cert = ObstructionCert("q16-square", "no odd element of Q16 squares to the identity",
                                   _q16_square_data(), _q16_square_data)
            return Verdict(HOLDS, "rp2-target-simply-connected", cert, notes)
        return Verdict(FAILS, "rp2-target-nonsimply-connected", build_phi(case, limits), notes)

    # aspherical targets
    if case.domain == "finite":
        cert = _cited("B2(S) is torsion free, so a finite group maps trivially",
                      {"quotient_z2_declared": case.quotient_z2})
        return Verdict(HOLDS, "finite-pi1", cert, notes)
    if case.domain == "nonorientable" and case.domain_genus == 1:
        if case.target == "orientable":
            data = _torsion_data(case.target_genus)
            cert = ObstructionCert("torsion", "odd elements of B2(S_g) have nontrivial square",
                                   data, lambda: _torsion_data(case.target_genus))
        else:
            cert = _cited("B2(N_m) is torsion free", {})
        return Verdict(HOLDS, "rp2-quotient", cert, notes)

    src = case.theta.source
    if src.tag == SURFACE_ORIENTABLE:
        return Verdict(FAILS, "orientable-quotient", build_phi(case, limits), notes)
    if case.target == "nonorientable":
        return Verdict(FAILS, "nonorientable-into-nonorientable", build_phi(case, limits), notes)
    l = case.domain_genus
    g = case.target_genus
    if l == 2:
        if case.theta.values[ALPHA_GEN]:
            return Verdict(HOLDS, "klein-alpha-odd", case4_obstruction(g), notes)
        return Verdict(FAILS, "klein-alpha-even", build_phi(case, limits), notes)
    if l == 3:
        if classify_by_invariants(case.theta) == homz2.NODD3:
            try:
                cert = case5_obstruction(g)
            except TooLarge as exc:
                cert = _cited("exhaustive grid skipped at this genus", {"reason": str(exc)})
            return Verdict(HOLDS, "n3-torsion-class", cert, notes)
        return Verdict(FAILS, "n3-other-class", build_phi(case, limits), notes)
    return Verdict(FAILS, "large-nonorientable", build_phi(case, limits), notes)
