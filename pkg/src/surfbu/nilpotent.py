"""Exact arithmetic in the class-two quotient G / Gamma_3(G), G = P2(S_g).

An element is stored as ``rho_{1,1}^{u_1} ... rho_{2,2g}^{u_{4g}}`` times a
central word, the latter written on the basis

    e_{k,i,j} = [rho_{k,i}, rho_{k,j}]   (k = 1, 2;  i < j;  i != 2g-1)
    B

Products are computed by collection: moving ``x_q^t`` left across ``x_p^s``
(``p > q``) contributes ``[x_p, x_q]^{st}``.  The table of generator
commutators is

* same strand, ``i < j``, ``(i, j) != (2g-1, 2g)``: ``e_{k,i,j}``;
* same strand, ``(2g-1, 2g)``: ``e_{k,1,2}^-1 ... e_{k,2g-3,2g-2}^-1 B^-1``,
  forced by the defining relator of B;
* across strands: ``[rho_{1,2t-1}, rho_{2,2t}] = [rho_{2,2t-1}, rho_{1,2t}] = B``,
  every other cross pair commutes.

The relator suite in the tests (every P2(S_g) relator evaluates to the
identity) is what pins down these signs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .words import (
    B_GEN,
    RHO,
    SIGMA,
    Generator,
    Word,
    commutator,
    exponent_sum,
    format_word,
    product,
    rho,
    tilde,
)


class AlphabetError(ValueError):
    pass


class GenusMismatch(ValueError):
    pass


class NotCentral(ValueError):
    pass


@dataclass(frozen=True)
class CentralIndex:
    """``E(k, i, j)`` when ``k`` is 1 or 2, the B coordinate when ``k == 0``."""

    k: int
    i: int = 0
    j: int = 0

    @property
    def is_b(self) -> bool:
        return self.k == 0

    def __str__(self) -> str:
        return "B" if self.is_b else f"e{self.k}_{self.i}_{self.j}"


B_INDEX = CentralIndex(0)


@dataclass(frozen=True)
class NilElement:
    genus: int
    u: Tuple[int, ...]
    c: Tuple[int, ...]

    def __mul__(self, other: "NilElement") -> "NilElement":
        return nil_mul(self, other)

    def inverse(self) -> "NilElement":
        return engine(self.genus).inverse(self)

    @property
    def is_central(self) -> bool:
        return not any(self.u)

    @property
    def is_identity(self) -> bool:
        return not any(self.u) and not any(self.c)

    def central_dict(self) -> Dict[str, int]:
        basis = engine(self.genus).basis
        return {str(b): x for b, x in zip(basis, self.c) if x}

    def to_dict(self) -> dict:
        return {"genus": self.genus, "u": list(self.u), "c": list(self.c),
                "central": self.central_dict()}


class Engine:
    """Structure constants and basis for one genus."""

    def __init__(self, g: int):
        if g < 1:
            raise ValueError("genus must be >= 1")
        self.g = g
        self.n = 4 * g
        n2 = 2 * g
        self.basis: List[CentralIndex] = [
            CentralIndex(k, i, j)
            for k in (1, 2)
            for i in range(1, n2 + 1)
            for j in range(i + 1, n2 + 1)
            if i != n2 - 1
        ] + [B_INDEX]
        self.pos = {b: t for t, b in enumerate(self.basis)}
        self.rank = len(self.basis)
        self.b_pos = self.pos[B_INDEX]
        # comm[p][q]: sparse central vector of [x_p, x_q]
        self.comm: List[List[Tuple[Tuple[int, int], ...]]] = [
            [self._gen_commutator(p, q) for q in range(self.n)] for p in range(self.n)
        ]
        self.swap = [self.pos[CentralIndex(3 - b.k, b.i, b.j)] if not b.is_b else t
                     for t, b in enumerate(self.basis)]

    def gen_index(self, k: int, i: int) -> int:
        return (k - 1) * 2 * self.g + (i - 1)

    def index_gen(self, p: int) -> Tuple[int, int]:
        return (p // (2 * self.g) + 1, p % (2 * self.g) + 1)

    def _same_strand(self, k: int, i: int, j: int) -> Dict[int, int]:
        """[rho_{k,i}, rho_{k,j}] for i < j."""
        n2 = 2 * self.g
        if (i, j) != (n2 - 1, n2):
            return {self.pos[CentralIndex(k, i, j)]: 1}
        out = {self.pos[CentralIndex(k, 2 * t - 1, 2 * t)]: -1 for t in range(1, self.g)}
        out[self.b_pos] = -1
        return out

    def _gen_commutator(self, p: int, q: int) -> Tuple[Tuple[int, int], ...]:
        if p == q:
            return ()
        (k1, i1), (k2, i2) = self.index_gen(p), self.index_gen(q)
        if k1 == k2:
            if i1 < i2:
                vec = self._same_strand(k1, i1, i2)
            else:
                vec = {t: -x for t, x in self._same_strand(k1, i2, i1).items()}
            return tuple(sorted(vec.items()))
        # cross strand: [rho_{a,2t-1}, rho_{b,2t}] = B for a != b
        lo, hi = (i1, i2) if i1 < i2 else (i2, i1)
        if not (lo % 2 == 1 and hi == lo + 1):
            return ()
        sign = 1 if i1 < i2 else -1
        return ((self.b_pos, sign),)

    # --- group operations

    def identity(self) -> NilElement:
        return NilElement(self.g, (0,) * self.n, (0,) * self.rank)

    def mul(self, x: NilElement, y: NilElement) -> NilElement:
        if x.genus != self.g or y.genus != self.g:
            raise GenusMismatch(f"genus {x.genus} vs {y.genus}")
        c = list(x.c)
        for t in range(self.rank):
            c[t] += y.c[t]
        xu = x.u
        for q in range(self.n):
            t = y.u[q]
            if t:
                for p in range(q + 1, self.n):
                    s = xu[p]
                    if s:
                        for idx, coeff in self.comm[p][q]:
                            c[idx] += coeff * s * t
        u = tuple(a + b for a, b in zip(x.u, y.u))
        return NilElement(self.g, u, tuple(c))

    def inverse(self, x: NilElement) -> NilElement:
        c = [-v for v in x.c]
        for q in range(self.n):
            if x.u[q]:
                for p in range(q + 1, self.n):
                    if x.u[p]:
                        for idx, coeff in self.comm[p][q]:
                            c[idx] += coeff * x.u[p] * x.u[q]
        return NilElement(self.g, tuple(-a for a in x.u), tuple(c))

    def eval_word(self, w: Word) -> NilElement:
        u = [0] * self.n
        c = [0] * self.rank
        for gen, e in w.syllables:
            if gen == B_GEN:
                c[self.b_pos] += e
                continue
            if gen.family != RHO or gen.i > 2 * self.g:
                raise AlphabetError(f"{gen} is not a generator of P2(S_{self.g})")
            q = self.gen_index(gen.k, gen.i)
            for p in range(q + 1, self.n):
                s = u[p]
                if s:
                    for idx, coeff in self.comm[p][q]:
                        c[idx] += coeff * s * e
            u[q] += e
        return NilElement(self.g, tuple(u), tuple(c))

    def exponents(self, w: Word) -> List[int]:
        out = [0] * self.n
        for gen, e in w.syllables:
            if gen == B_GEN:
                continue
            if gen.family != RHO or gen.i > 2 * self.g:
                raise AlphabetError(f"{gen} is not a generator of P2(S_{self.g})")
            out[self.gen_index(gen.k, gen.i)] += e
        return out

    def central_vector(self, x: NilElement) -> Dict[CentralIndex, int]:
        return {b: v for b, v in zip(self.basis, x.c)}


@lru_cache(maxsize=None)
def engine(g: int) -> Engine:
    return Engine(g)


# ------------------------------------------------------------ module API


def nil_mul(p: NilElement, q: NilElement) -> NilElement:
    if p.genus != q.genus:
        raise GenusMismatch(f"genus {p.genus} vs {q.genus}")
    return engine(p.genus).mul(p, q)


def eval_word(w: Word, g: int) -> NilElement:
    return engine(g).eval_word(w)


def nil_commutator(v: Word, w: Word, g: int) -> NilElement:
    return eval_word(commutator(v, w), g)


def _det(a: int, b: int, c: int, d: int) -> int:
    return a * d - b * c


def coefficient_formulas(v: Word, w: Word, g: int) -> Tuple[int, ...]:
    """Central vector of [v, w] predicted from exponent sums alone."""
    eng = engine(g)
    ev, ew = eng.exponents(v), eng.exponents(w)

    def ex(vec, k, i):
        return vec[eng.gen_index(k, i)]

    def d(k, i, j):
        return _det(ex(ev, k, i), ex(ev, k, j), ex(ew, k, i), ex(ew, k, j))

    def a(t):
        i, j = 2 * t - 1, 2 * t
        return _det(ex(ev, 2, i), ex(ev, 2, j), ex(ew, 1, i), ex(ew, 1, j)) + _det(
            ex(ev, 1, i), ex(ev, 1, j), ex(ew, 2, i), ex(ew, 2, j)
        )

    n2 = 2 * g
    out = []
    for b in eng.basis:
        if b.is_b:
            out.append(-d(1, n2 - 1, n2) - d(2, n2 - 1, n2) + sum(a(t) for t in range(1, g + 1)))
        elif b.i % 2 == 1 and b.j == b.i + 1:
            out.append(d(b.k, b.i, b.j) - d(b.k, n2 - 1, n2))
        else:
            out.append(d(b.k, b.i, b.j))
    return tuple(out)


def iota_sigma(p: NilElement) -> NilElement:
    """Conjugation by sigma: the class of w goes to the class of tilde(w).

    The strand-swapped normal-form word is re-collected, since strand-2
    letters now precede strand-1 letters.  The central part maps by the
    basis swap e_{k,i,j} -> e_{k',i,j}, B -> B.
    """
    eng = engine(p.genus)
    n2 = 2 * p.genus
    swapped = Word((rho(2 if t < n2 else 1, t % n2 + 1), x) for t, x in enumerate(p.u))
    c = [0] * eng.rank
    for t, v in enumerate(p.c):
        c[eng.swap[t]] = v
    return eng.mul(eng.eval_word(swapped), NilElement(p.genus, (0,) * eng.n, tuple(c)))


@dataclass(frozen=True)
class QBarElement:
    genus: int
    bits: Tuple[int, ...]  # ebar_{i,j} in basis order, then Bbar

    @property
    def b_bar(self) -> int:
        return self.bits[-1]

    @property
    def e_bits(self) -> Tuple[int, ...]:
        return self.bits[:-1]

    def labels(self) -> List[str]:
        return qbar_labels(self.genus)

    def to_dict(self) -> Dict[str, int]:
        return dict(zip(self.labels(), self.bits))

    def __add__(self, other: "QBarElement") -> "QBarElement":
        return QBarElement(self.genus, tuple((a + b) % 2 for a, b in zip(self.bits, other.bits)))


def qbar_labels(g: int) -> List[str]:
    eng = engine(g)
    return [f"ebar{b.i}_{b.j}" for b in eng.basis if b.k == 1] + ["Bbar"]


def qbar_b_only(g: int) -> QBarElement:
    dim = g * (2 * g - 1)
    return QBarElement(g, (0,) * (dim - 1) + (1,))


def project_qbar(p: NilElement) -> QBarElement:
    if not p.is_central:
        raise NotCentral("only central elements project to Qbar")
    eng = engine(p.genus)
    bits = []
    for t, b in enumerate(eng.basis):
        if b.k == 1:
            bits.append((p.c[t] + p.c[eng.swap[t]]) % 2)
    bits.append(p.c[eng.b_pos] % 2)
    return QBarElement(p.genus, tuple(bits))


def b_exponent(p: NilElement) -> int:
    """B coordinate; equals exp o lambda when p comes from the normal closure of B."""
    return p.c[engine(p.genus).b_pos]


# --------------------------------------------- normal-closure membership

@dataclass(frozen=True)
class NMember:
    """A word built syntactically inside the normal closure N of B.

    ``factors`` records how it was made: ``("conjB", eta, sign)`` for
    ``eta B^sign eta^-1`` or ``("cross", u, v)`` for ``[u, v]`` with u over
    strand-1 letters and v over strand-2 letters.
    """

    word: Word
    factors: Tuple[Tuple, ...]

    def certificate(self) -> List[dict]:
        out = []
        for f in self.factors:
            if f[0] == "conjB":
                out.append({"kind": "conjugate of B", "conjugator": format_word(f[1]), "sign": f[2]})
            else:
                out.append({"kind": "cross-strand commutator", "u": format_word(f[1]), "v": format_word(f[2])})
        return out


def _strand_only(w: Word, k: int) -> bool:
    return all(g.family == RHO and g.k == k for g, _ in w.syllables)


def conj_b(eta: Word, sign: int = 1) -> NMember:
    return NMember(eta * Word.gen(B_GEN, sign) * eta.inverse(), (("conjB", eta, sign),))


def cross_commutator(u: Word, v: Word) -> NMember:
    if not (_strand_only(u, 1) and _strand_only(v, 2)):
        raise ValueError("cross commutators need a strand-1 word and a strand-2 word")
    return NMember(commutator(u, v), (("cross", u, v),))


def n_product(members: Sequence[NMember]) -> NMember:
    return NMember(product(m.word for m in members), tuple(f for m in members for f in m.factors))


def b_exponent_member(m: NMember, g: int) -> int:
    return b_exponent(eval_word(m.word, g))


# --------------------------------------------------------- random words


def random_rho_word(rng: random.Random, g: int, length: int, strands=(1, 2), with_b: bool = False) -> Word:
    letters = [rho(k, i) for k in strands for i in range(1, 2 * g + 1)]
    if with_b:
        letters.append(B_GEN)
    return Word((rng.choice(letters), rng.choice((-1, 1))) for _ in range(length))


# ------------------------------------------------ B2(S_g) modulo Gamma_3


def eval_b2(w: Word, g: int) -> Tuple[NilElement, int]:
    """Image of a word over sigma, rho and B as (p, eps), meaning p * sigma^eps.

    Uses the semidirect structure directly: sigma acts by iota_sigma and
    sigma^2 = B.  This is independent of the rewriting in push_sigma.
    """
    eng = engine(g)
    b = eng.eval_word(Word.gen(B_GEN))
    b_inv = eng.inverse(b)
    p, eps = eng.eval_word(Word()), 0
    for gen, e in w.syllables:
        if gen.family == SIGMA:
            for _ in range(abs(e)):
                if e > 0:
                    # p s^eps * s
                    if eps:
                        p = eng.mul(p, b)
                    eps ^= 1
                else:
                    # s^-1 = B^-1 s
                    p = eng.mul(p, iota_sigma(b_inv) if eps else b_inv)
                    if eps:
                        p = eng.mul(p, b)
                    eps ^= 1
        else:
            q = eng.eval_word(Word.gen(gen, e))
            p = eng.mul(p, iota_sigma(q) if eps else q)
    return p, eps
