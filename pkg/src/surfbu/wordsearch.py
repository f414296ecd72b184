"""Bounded, sound word-problem search with replayable certificates.

A certificate is a list of steps applied to the input word:

* ``insert``: splice a cyclic rotation of a relator (or its inverse) into the
  word at a position, then freely reduce;
* ``conjugate``: replace the word ``w`` by ``c w c^-1``.

Both steps preserve triviality in any group satisfying the relators, so a
certificate that ends at the empty word proves the input is trivial.

Two engines produce certificates.  The rewriting strategy sorts letters by a
priority level, pushing high letters to the right with conjugation rules read
off the relators (``x y x^-1 = Z`` gives ``x y -> Z x``).  When it gets
stuck, a breadth-first search over relator insertions takes over from the
word it reached.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .presentations import (
    B2_ORIENTABLE,
    B2_SCOTT,
    P2_ORIENTABLE,
    Presentation,
    b2_presentation,
)
from .words import B_GEN, RHO, SIGMA, SIGMA_GEN, Generator, Word, format_word

Letters = Tuple[int, ...]


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class SearchLimits:
    max_word_length: int = 48
    max_states: int = 2_000_000
    max_depth: int = 24
    max_seconds: Optional[float] = 60.0

    def __post_init__(self):
        for name in ("max_word_length", "max_states", "max_depth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_LIMITS = SearchLimits()


@dataclass
class Step:
    kind: str  # "insert" or "conjugate"
    pos: int = 0
    relator: str = ""
    sign: int = 1
    offset: int = 0
    conjugator: Letters = ()

    def to_dict(self, coder: "Coder") -> dict:
        if self.kind == "insert":
            return {"kind": "insert", "pos": self.pos, "relator": self.relator,
                    "sign": self.sign, "offset": self.offset}
        return {"kind": "conjugate", "by": format_word(coder.decode(self.conjugator))}


@dataclass
class DerivationCertificate:
    presentation: str
    word: Word
    steps: List[Step]
    coder: "Coder" = field(repr=False)
    engine: str = ""

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation,
            "word": format_word(self.word),
            "engine": self.engine,
            "steps": [s.to_dict(self.coder) for s in self.steps],
        }


@dataclass
class SearchResult:
    status: str  # "Verified" or "Unknown"
    certificate: Optional[DerivationCertificate] = None
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    def to_dict(self) -> dict:
        out = {"status": self.status, "diagnostics": self.diagnostics}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


# ------------------------------------------------------------- letter coding


def _red(seq) -> Letters:
    out: List[int] = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _inv(t: Letters) -> Letters:
    return tuple(-x for x in reversed(t))


class Coder:
    """Integer letters for one presentation, plus its rotated relators."""

    def __init__(self, pres: Presentation):
        self.pres = pres
        self.gens: List[Generator] = list(pres.alphabet)
        self.index = {g: t + 1 for t, g in enumerate(self.gens)}
        self.relators: Dict[str, Letters] = {
            lab: self.encode(r) for lab, r in zip(pres.labels, pres.relators)
        }
        # (label, sign, offset) -> rotated word
        self.rotations: List[Tuple[str, int, int, Letters]] = []
        for lab, r in self.relators.items():
            for sign in (1, -1):
                base = r if sign == 1 else _inv(r)
                for off in range(len(base)):
                    self.rotations.append((lab, sign, off, base[off:] + base[:off]))

    def encode(self, w: Word) -> Letters:
        out = []
        for g, e in w.syllables:
            if g not in self.index:
                raise AlphabetError(f"{g} is not in the alphabet of {self.pres.name}")
            x = self.index[g]
            out.extend([x if e > 0 else -x] * abs(e))
        return tuple(out)

    def decode(self, t: Letters) -> Word:
        return Word((self.gens[abs(x) - 1], 1 if x > 0 else -1) for x in t)

    def rotation(self, label: str, sign: int, offset: int) -> Letters:
        r = self.relators[label]
        base = r if sign == 1 else _inv(r)
        return base[offset:] + base[:offset]


def apply_step(coder: Coder, w: Letters, step: Step) -> Letters:
    if step.kind == "insert":
        if not 0 <= step.pos <= len(w):
            raise ValueError(f"insert position {step.pos} outside word of length {len(w)}")
        rot = coder.rotation(step.relator, step.sign, step.offset)
        return _red(w[: step.pos] + rot + w[step.pos:])
    if step.kind == "conjugate":
        c = step.conjugator
        return _red(c + w + _inv(c))
    raise ValueError(f"unknown step kind {step.kind!r}")


def replay(cert: DerivationCertificate) -> bool:
    """Re-run every step from scratch; True iff the result is the empty word."""
    coder = Coder(cert.coder.pres)
    w = coder.encode(cert.word)
    for step in cert.steps:
        w = apply_step(coder, w, step)
    return len(w) == 0


# ------------------------------------------------------------------- rules


@dataclass(frozen=True)
class Rule:
    lhs: Letters
    rhs: Letters
    label: str
    sign: int
    offset: int


def _gen_of(x: int) -> int:
    return abs(x)


class RuleBook:
    """Rewrite rules ``lhs -> rhs`` with ``rhs lhs^-1`` a relator rotation."""

    def __init__(self, coder: Coder):
        self.coder = coder
        self.conj: Dict[Tuple[int, int], Rule] = {}
        self.square: Dict[int, Rule] = {}
        self.single: Dict[int, List[Rule]] = {}
        for lab, sign, off, rot in coder.rotations:
            m = len(rot)
            for ulen in (1, 2):
                if ulen >= m:
                    continue
                lhs = _inv(rot[m - ulen:])
                rhs = rot[: m - ulen]
                rule = Rule(lhs, rhs, lab, sign, off)
                if ulen == 2:
                    x, y = lhs
                    gx = _gen_of(x)
                    if gx != _gen_of(y) and rhs and rhs[-1] == x and all(_gen_of(z) != gx for z in rhs[:-1]):
                        key = (x, y)
                        if key not in self.conj or len(rhs) < len(self.conj[key].rhs):
                            self.conj[key] = rule
                    if x == y and all(_gen_of(z) != gx for z in rhs):
                        if x not in self.square or len(rhs) < len(self.square[x].rhs):
                            self.square[x] = rule
                else:
                    self.single.setdefault(lhs[0], []).append(rule)

    def expansion(self, x: int, allowed) -> Optional[Rule]:
        """Shortest single-letter rule for x whose rhs avoids x and uses allowed letters."""
        best = None
        for rule in self.single.get(x, ()):
            if any(_gen_of(z) == _gen_of(x) for z in rule.rhs):
                continue
            if not all(allowed(z) for z in rule.rhs):
                continue
            if best is None or len(rule.rhs) < len(best.rhs):
                best = rule
        return best

    def escape(self, x: int, allowed) -> Optional[Rule]:
        """Rule x -> Z x' where x' is the opposite letter of the same generator."""
        best = None
        for rule in self.single.get(x, ()):
            rhs = rule.rhs
            if not rhs or rhs[-1] != -x:
                continue
            if any(_gen_of(z) == _gen_of(x) for z in rhs[:-1]):
                continue
            if not all(allowed(z) for z in rhs[:-1]):
                continue
            if best is None or len(rhs) < len(best.rhs):
                best = rule
        return best


class Session:
    """A word under rewriting, with the steps taken so far."""

    def __init__(self, coder: Coder, w: Letters, steps: Optional[List[Step]] = None):
        self.coder = coder
        self.w = w
        self.steps: List[Step] = list(steps or [])

    def rewrite(self, pos: int, rule: Rule) -> None:
        assert self.w[pos: pos + len(rule.lhs)] == rule.lhs
        step = Step("insert", pos, rule.label, rule.sign, rule.offset)
        self.w = apply_step(self.coder, self.w, step)
        self.steps.append(step)


def _levels_for(pres: Presentation, coder: Coder) -> Dict[int, int]:
    lv = {}
    for g, idx in coder.index.items():
        if g.family == SIGMA:
            lv[idx] = 2
        elif g.family == RHO and g.k == 2:
            lv[idx] = 1
        else:
            lv[idx] = 0
    return lv


def sort_strategy(
    session: Session,
    book: RuleBook,
    level: Dict[int, int],
    max_steps: int = 20000,
    max_len: int = 5000,
    finish: bool = True,
) -> bool:
    """Bubble high-level letters rightwards.  Returns True when the word is empty."""
    lv = lambda x: level[_gen_of(x)]
    for _ in range(max_steps):
        w = session.w
        if not w:
            return True
        if len(w) > max_len:
            return False
        acted = False
        for t in range(len(w) - 1):
            a, b = w[t], w[t + 1]
            if a == b and a in book.square and lv(a) == max(level.values()):
                session.rewrite(t, book.square[a])
                acted = True
                break
            if lv(a) <= lv(b):
                continue
            rule = book.conj.get((a, b))
            if rule is not None:
                session.rewrite(t, rule)
                acted = True
                break
            sq = book.square.get(a)
            back = book.expansion(b, lambda z, ga=_gen_of(a): _gen_of(z) == ga) if sq else None
            if back is not None and len(back.rhs) == 2:
                # b is a square of a's generator: write it as one, and the
                # square rule folds it back on the far side of a
                session.rewrite(t + 1, back)
                acted = True
                break
            exp = book.expansion(b, lambda z: lv(z) == 0)
            if exp is None:
                exp = book.expansion(b, lambda z, la=lv(a): lv(z) < la)
            if exp is not None:
                session.rewrite(t + 1, exp)
                acted = True
                break
            esc = book.escape(a, lambda z, la=lv(a): lv(z) < la)
            if esc is not None:
                session.rewrite(t, esc)
                acted = True
                break
        if acted:
            continue
        if not finish:
            return not session.w
        # the word is sorted; clean up the top-level tail and expand low letters
        w = session.w
        for t in range(len(w)):
            x = w[t]
            if lv(x) == max(level.values()) and x < 0 and t == len(w) - 1:
                esc = book.escape(x, lambda z, la=lv(x): lv(z) < la)
                if esc is not None:
                    session.rewrite(t, esc)
                    acted = True
                    break
            if lv(x) == 0:
                exp = book.expansion(x, lambda z: lv(z) == 0)
                if exp is not None:
                    session.rewrite(t, exp)
                    acted = True
                    break
        if not acted:
            return not session.w
    return not session.w


# -------------------------------------------------------------------- BFS


def _cyclic_reduce(w: Letters) -> Tuple[Letters, Letters]:
    """Return (core, c) with w = c core c^-1."""
    n = 0
    while n < len(w) // 2 and w[n] == -w[len(w) - 1 - n]:
        n += 1
    return w[n: len(w) - n], w[:n]


def bfs_search(coder: Coder, start: Letters, limits: SearchLimits, deadline: Optional[float] = None):
    """Breadth-first search over cyclically reduced words.

    Returns (steps or None, diagnostics).  Each state records its parent so
    the path can be turned into insert and conjugate steps.
    """
    core, c = _cyclic_reduce(start)
    steps0: List[Step] = [Step("conjugate", conjugator=_inv(c))] if c else []
    if not core:
        return steps0, {"states": 1, "depth": 0}
    parent: Dict[Letters, Tuple[Optional[Letters], Optional[Tuple]]] = {core: (None, None)}
    frontier = deque([(core, 0)])
    rotations = coder.rotations
    states = 1
    max_len = limits.max_word_length
    depth_reached = 0
    while frontier:
        w, depth = frontier.popleft()
        depth_reached = max(depth_reached, depth)
        if depth >= limits.max_depth:
            continue
        if deadline is not None and time.monotonic() > deadline:
            return None, {"states": states, "depth": depth_reached, "stopped": "time"}
        n = len(w)
        for pos in range(n + 1 if n else 1):
            left, right = w[:pos], w[pos:]
            for lab, sign, off, rot in rotations:
                nw = _red(left + rot + right)
                if len(nw) > max_len:
                    continue
                core2, c2 = _cyclic_reduce(nw)
                if core2 in parent:
                    continue
                parent[core2] = (w, (pos, lab, sign, off, c2))
                states += 1
                if not core2:
                    return steps0 + _path_steps(parent, core2), {"states": states, "depth": depth + 1}
                if states >= limits.max_states:
                    return None, {"states": states, "depth": depth_reached, "stopped": "states"}
                frontier.append((core2, depth + 1))
    return None, {"states": states, "depth": depth_reached, "stopped": "exhausted"}


def _path_steps(parent, end: Letters) -> List[Step]:
    chain = []
    node = end
    while True:
        prev, move = parent[node]
        if prev is None:
            break
        chain.append(move)
        node = prev
    steps: List[Step] = []
    for pos, lab, sign, off, c2 in reversed(chain):
        steps.append(Step("insert", pos, lab, sign, off))
        if c2:
            steps.append(Step("conjugate", conjugator=_inv(c2)))
    return steps


# ------------------------------------------------------------------ API


_CODERS: Dict[Tuple, Tuple[Coder, RuleBook]] = {}


def _coder_for(pres: Presentation) -> Tuple[Coder, RuleBook]:
    key = (pres.tag, pres.param, pres.relators)
    if key not in _CODERS:
        coder = Coder(pres)
        _CODERS[key] = (coder, RuleBook(coder))
    return _CODERS[key]


def derive_identity(relations: Presentation, w: Word, limits: SearchLimits = DEFAULT_LIMITS) -> SearchResult:
    coder, book = _coder_for(relations)
    start = coder.encode(w)
    t0 = time.monotonic()
    deadline = t0 + limits.max_seconds if limits.max_seconds else None

    session = Session(coder, start)
    engine = "rewrite"
    ok = sort_strategy(session, book, _levels_for(relations, coder))
    steps = session.steps
    diag: Dict[str, object] = {"rewrite_steps": len(steps)}
    if not ok:
        residue = session.w
        bfs_from = residue if len(residue) <= limits.max_word_length else start
        prefix = steps if bfs_from is residue else []
        found, bdiag = bfs_search(coder, bfs_from, limits, deadline)
        diag.update(bdiag)
        diag["bfs_start"] = format_word(coder.decode(bfs_from))
        if found is None:
            return SearchResult("Unknown", None, diag)
        steps = prefix + found
        engine = "rewrite+bfs" if prefix else "bfs"
    cert = DerivationCertificate(relations.name, w, steps, coder, engine)
    if not replay(cert):
        raise AssertionError("internal error: certificate does not replay")
    diag["steps"] = len(steps)
    return SearchResult("Verified", cert, diag)


def verify_equality(relations: Presentation, lhs: Word, rhs: Word, limits: SearchLimits = DEFAULT_LIMITS) -> SearchResult:
    return derive_identity(relations, lhs * rhs.inverse(), limits)


def push_sigma(w: Word, g: int) -> Tuple[Word, int]:
    """Rewrite a B2(S_g) word as p * s^eps with p over the rho letters and B."""
    p, eps, _ = push_sigma_certified(w, g)
    return p, eps


def push_sigma_certified(w: Word, g: int):
    pres = b2_presentation(g)
    coder, book = _coder_for(pres)
    sig = coder.index[SIGMA_GEN]
    level = {idx: (1 if idx == sig else 0) for idx in coder.index.values()}
    session = Session(coder, coder.encode(w))
    sort_strategy(session, book, level, finish=False)
    t = session.w
    # trailing s^-1 becomes B^-1 s
    if t and t[-1] == -sig:
        esc = book.escape(-sig, lambda z: z != sig and z != -sig)
        session.rewrite(len(t) - 1, esc)
        t = session.w
    eps = 0
    if t and t[-1] == sig:
        eps, t = 1, t[:-1]
    if any(abs(x) == sig for x in t):
        raise AssertionError("sigma letters left after pushing")
    return coder.decode(t), eps, session.steps


def search_oracle(relations: Presentation, limits: SearchLimits = DEFAULT_LIMITS):
    def oracle(w: Word):
        res = derive_identity(relations, w, limits)
        if res.verified:
            return "Verified", {"method": "word search", **res.certificate.to_dict(), "diagnostics": res.diagnostics}
        return "Unknown", {"method": "word search", "diagnostics": res.diagnostics}

    return oracle
