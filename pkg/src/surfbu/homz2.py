"""Z2-valued homomorphisms on surface groups and their equivalence classes.

Two homomorphisms are equivalent when they differ by an automorphism of the
source.  The automorphisms used here are the substitution moves below, each
of which fixes the surface relator as a free-group word.  Classes are found
two ways, by orbits of the moves and by invariants, and the two must agree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .presentations import (
    ALPHA_GEN,
    BETA_GEN,
    SURFACE_NONOR_EVEN,
    SURFACE_NONOR_ODD,
    SURFACE_ORIENTABLE,
    V_GEN,
    Presentation,
    a_gen,
    surface_group,
)
from .words import (
    Generator,
    Word,
    abstract,
    commutator,
    exponent_sum,
    format_word,
    parse_generator,
    parse_word,
    substitute,
    twisted_commutator,
)


class NotSurjective(ValueError):
    pass


class NotWellDefined(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Z2Hom:
    source: Presentation
    values: Mapping[Generator, int]

    def __post_init__(self):
        if set(self.values) != set(self.source.alphabet):
            missing = set(self.source.alphabet) - set(self.values)
            raise ValueError(f"theta must assign every generator; missing {sorted(map(str, missing))}")
        object.__setattr__(self, "values", {g: int(v) % 2 for g, v in self.values.items()})

    def value(self, w: Word) -> int:
        return sum(e * self.values[g] for g, e in w.syllables) % 2

    @property
    def well_defined(self) -> bool:
        return all(self.value(r) == 0 for r in self.source.relators)

    @property
    def surjective(self) -> bool:
        return any(self.values.values())

    def bits(self) -> Tuple[int, ...]:
        return tuple(self.values[g] for g in self.source.alphabet)

    def to_dict(self) -> Dict[str, int]:
        return {str(g): self.values[g] for g in self.source.alphabet}

    def __str__(self) -> str:
        return ",".join(f"{g}={self.values[g]}" for g in self.source.alphabet)


def z2hom(source: Presentation, values: Mapping) -> Z2Hom:
    vals = {}
    for k, v in values.items():
        g = parse_generator(k) if isinstance(k, str) else k
        vals[g] = v
    return Z2Hom(source, vals)


def z2hom_from_bits(source: Presentation, bits: Sequence[int]) -> Z2Hom:
    return Z2Hom(source, dict(zip(source.alphabet, bits)))


def parse_theta(source: Presentation, text: str) -> Z2Hom:
    """``v=1,a1=1,a2=0``; generators left out default to 0."""
    vals = {g: 0 for g in source.alphabet}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition("=")
        g = parse_generator(key.strip())
        if g not in vals:
            raise ValueError(f"{key} is not a generator of {source.name}")
        vals[g] = int(val)
    return Z2Hom(source, vals)


# ------------------------------------------------------------------ moves

_A, _B, _C, _D = (Word.gen(abstract(n)) for n in "abcd")


def _inv(w: Word) -> Word:
    return w.inverse()


MOVE_FORMULAS: Dict[str, Tuple[Word, ...]] = {
    # (a, b) -> (a, ba)
    "move1": (_A, _B * _A),
    # (a, b) -> (a b a^-1, a^-1)
    "move2": (_A * _B * _inv(_A), _inv(_A)),
    # swap two handles
    "move3": (commutator(_A, _B) * _C * commutator(_B, _A), commutator(_A, _B) * _D * commutator(_B, _A), _A, _B),
    # clears d when theta(a)=theta(c)=0, theta(b)=theta(d)=1
    "move4": (_A * _C, _inv(_C) * _B * _C, _inv(_C) * _B * _C * _inv(_B) * _C, _D * _inv(_C) * _inv(_B) * _C),
    # Klein bottle part: (alpha, beta) -> (alpha, beta alpha)
    "klein": (_A, _B * _A),
    # Klein part plus one handle
    "klein_handle": (
        _A * _C * _A * _inv(_C) * _inv(_A),
        _A * _C * _inv(_A) * _inv(_C) * _B * _A * _inv(_C) * _inv(_A),
        _A * _C * _inv(_A),
        _D * _inv(_A),
    ),
}

# word each move must preserve, over the abstract letters a, b, c, d
MOVE_INVARIANT: Dict[str, Word] = {
    "move1": commutator(_A, _B),
    "move2": commutator(_A, _B),
    "move3": commutator(_A, _B) * commutator(_C, _D),
    "move4": commutator(_A, _B) * commutator(_C, _D),
    "klein": twisted_commutator(_A, _B),
    "klein_handle": twisted_commutator(_A, _B) * commutator(_C, _D),
}


def move_identities_check() -> Dict[str, bool]:
    """Each move fixes its word, checked by free reduction."""
    letters = [abstract(n) for n in "abcd"]
    out = {}
    for name, images in MOVE_FORMULAS.items():
        sub = {g: Word.gen(g) for g in letters}
        sub.update(zip(letters, images))
        target = MOVE_INVARIANT[name]
        out[name] = not (substitute(target, sub) * target.inverse()).syllables
    return out


@dataclass(frozen=True)
class Move:
    name: str
    slots: Tuple[Generator, ...]

    def images(self, pres: Presentation) -> Dict[Generator, Word]:
        letters = [abstract(n) for n in "abcd"][: len(self.slots)]
        rename = {l: Word.gen(s) for l, s in zip(letters, self.slots)}
        out = {g: Word.gen(g) for g in pres.alphabet}
        for slot, formula in zip(self.slots, MOVE_FORMULAS[self.name]):
            out[slot] = substitute(formula, rename)
        return out

    def to_dict(self, pres: Presentation) -> dict:
        imgs = self.images(pres)
        return {
            "move": self.name,
            "slots": [str(s) for s in self.slots],
            "images": {str(s): format_word(imgs[s]) for s in self.slots},
        }


def _is_handle(g: Generator) -> bool:
    return g.name[:1] == "a" and g.name[1:].isdigit()


def _handle_pairs(pres: Presentation) -> List[Tuple[Generator, Generator]]:
    gens = [g for g in pres.alphabet if _is_handle(g)]
    return [(gens[2 * i], gens[2 * i + 1]) for i in range(len(gens) // 2)]


def available_moves(pres: Presentation) -> List[Move]:
    moves: List[Move] = []
    pairs = _handle_pairs(pres)
    for a, b in pairs:
        moves.append(Move("move1", (a, b)))
        moves.append(Move("move2", (a, b)))
    for (a, b), (c, d) in zip(pairs, pairs[1:]):
        moves.append(Move("move3", (a, b, c, d)))
        moves.append(Move("move4", (a, b, c, d)))
    if pres.tag == SURFACE_NONOR_EVEN:
        moves.append(Move("klein", (ALPHA_GEN, BETA_GEN)))
        if pairs:
            moves.append(Move("klein_handle", (ALPHA_GEN, BETA_GEN) + pairs[0]))
    return moves


def apply_move(theta: Z2Hom, move: Move) -> Z2Hom:
    """theta composed with the move's substitution."""
    imgs = move.images(theta.source)
    return Z2Hom(theta.source, {g: theta.value(imgs[g]) for g in theta.source.alphabet})


@dataclass
class MoveCertificate:
    source: Presentation
    moves: List[Move] = field(default_factory=list)

    def composite(self) -> Dict[Generator, Word]:
        total = {g: Word.gen(g) for g in self.source.alphabet}
        for mv in self.moves:
            step = mv.images(self.source)
            total = {g: substitute(step[g], total) for g in self.source.alphabet}
        return total

    def check(self, start: Z2Hom, target: Z2Hom) -> bool:
        """Every move fixes the relator, and start composed with all moves is target."""
        rel = self.source.relators[0]
        for mv in self.moves:
            if substitute(rel, mv.images(self.source)) != rel:
                return False
        total = self.composite()
        if substitute(rel, total) != rel:
            return False
        return all(start.value(total[g]) == target.values[g] for g in self.source.alphabet)

    def to_list(self) -> List[dict]:
        return [m.to_dict(self.source) for m in self.moves]


# -------------------------------------------------------- representatives

OR1 = "Or1"
NODD1, NODD2, NODD3 = "NOdd1", "NOdd2", "NOdd3"
NEVEN1, NEVEN2, NEVEN3 = "NEven1", "NEven2", "NEven3"


def representatives(pres: Presentation) -> Dict[str, Z2Hom]:
    def make(**vals):
        base = {g: 0 for g in pres.alphabet}
        for k, v in vals.items():
            base[abstract(k)] = v
        return Z2Hom(pres, base)

    if pres.tag == SURFACE_ORIENTABLE:
        return {OR1: make(a1=1)}
    if pres.tag == SURFACE_NONOR_ODD:
        return {NODD1: make(a1=1), NODD2: make(v=1), NODD3: make(v=1, a1=1)}
    if pres.param == 2:
        return {NEVEN1: make(beta=1), NEVEN2: make(alpha=1)}
    return {NEVEN1: make(beta=1), NEVEN2: make(a1=1), NEVEN3: make(alpha=1)}


def _check_theta(theta: Z2Hom) -> None:
    if not theta.well_defined:
        raise NotWellDefined(f"theta={theta} does not kill the relator")
    if not theta.surjective:
        raise NotSurjective(f"theta={theta} is trivial")


def classify_by_invariants(theta: Z2Hom) -> str:
    """Class from theta on the torsion-type generator and on the handle span."""
    _check_theta(theta)
    pres = theta.source
    vals = theta.values
    handles_nonzero = any(vals[g] for g in pres.alphabet if _is_handle(g))
    if pres.tag == SURFACE_ORIENTABLE:
        return OR1
    if pres.tag == SURFACE_NONOR_ODD:
        if not vals[V_GEN]:
            return NODD1
        return NODD3 if handles_nonzero else NODD2
    if vals[ALPHA_GEN]:
        return NEVEN2 if pres.param == 2 else NEVEN3
    if pres.param == 2:
        return NEVEN1
    return NEVEN2 if handles_nonzero else NEVEN1


def _bfs_moves(start: Z2Hom, goal) -> Tuple[Z2Hom, List[Move]]:
    """Shortest move path from start to the first hom accepted by goal."""
    moves = available_moves(start.source)
    parent: Dict[Tuple[int, ...], Tuple[Optional[Tuple[int, ...]], Optional[Move]]] = {start.bits(): (None, None)}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if goal(cur):
            path: List[Move] = []
            key = cur.bits()
            while parent[key][0] is not None:
                prev, mv = parent[key]
                path.append(mv)
                key = prev
            path.reverse()
            return cur, path
        for mv in moves:
            nxt = apply_move(cur, mv)
            if nxt.bits() not in parent:
                parent[nxt.bits()] = (cur.bits(), mv)
                queue.append(nxt)
    raise RuntimeError(f"no target reachable from {start}")


def canonicalize(theta: Z2Hom) -> Tuple[Z2Hom, str, MoveCertificate]:
    """Representative of theta's class, its class id and a move certificate.

    The certificate's moves compose to an automorphism Psi with
    rep o Psi = theta.  Both searches are breadth-first over an orbit of at
    most 2^n homs for n generators.
    """
    _check_theta(theta)
    pres = theta.source
    reps = {r.bits(): name for name, r in representatives(pres).items()}
    rep, _ = _bfs_moves(theta, lambda h: h.bits() in reps)
    target = theta.bits()
    _, path = _bfs_moves(rep, lambda h: h.bits() == target)
    return rep, reps[rep.bits()], MoveCertificate(pres, path)


def surjective_homs(pres: Presentation, max_generators: int = 12) -> List[Z2Hom]:
    n = len(pres.alphabet)
    if n > max_generators:
        raise TooLarge(f"{n} generators exceeds the enumeration bound {max_generators}")
    out = []
    for code in range(1, 2 ** n):
        bits = [(code >> t) & 1 for t in range(n)]
        theta = z2hom_from_bits(pres, bits)
        if theta.well_defined:
            out.append(theta)
    return out


def move_orbits(pres: Presentation, homs: Sequence[Z2Hom]) -> List[List[Tuple[int, ...]]]:
    moves = available_moves(pres)
    seen: Dict[Tuple[int, ...], int] = {}
    orbits: List[List[Tuple[int, ...]]] = []
    for theta in homs:
        if theta.bits() in seen:
            continue
        idx = len(orbits)
        orbit = []
        queue = deque([theta])
        seen[theta.bits()] = idx
        while queue:
            cur = queue.popleft()
            orbit.append(cur.bits())
            for mv in moves:
                nxt = apply_move(cur, mv)
                if nxt.bits() not in seen:
                    seen[nxt.bits()] = idx
                    queue.append(nxt)
        orbits.append(orbit)
    return orbits


def enumerate_and_count(pres: Presentation, max_generators: int = 12) -> Tuple[int, int]:
    homs = surjective_homs(pres, max_generators)
    orbits = move_orbits(pres, homs)
    by_invariant: Dict[str, set] = {}
    for theta in homs:
        by_invariant.setdefault(classify_by_invariants(theta), set()).add(theta.bits())
    orbit_sets = sorted(map(frozenset, orbits), key=sorted)
    inv_sets = sorted(map(frozenset, by_invariant.values()), key=sorted)
    if orbit_sets != inv_sets:
        raise AssertionError(
            f"move orbits ({len(orbits)}) and invariant classes ({len(by_invariant)}) disagree on {pres.name}"
        )
    return len(homs), len(orbits)
