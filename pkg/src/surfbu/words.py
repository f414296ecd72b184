"""Free-group words stored as run-length syllables.

A word is a tuple of ``(Generator, exponent)`` pairs that is always freely
reduced: neighbouring syllables carry different generators and no exponent
is zero.  Commutators follow ``[a, b] = a b a^-1 b^-1``.

Text syntax (used by the CLI and by test fixtures)::

    word    := term (('*' | whitespace) term)*  |  '1'  |  'e'  |  ''
    term    := atom ('^' integer)?
    atom    := generator | '(' word ')' | '[' word ',' word ']' "'"?
    generator := r<k>_<i>   rho generator of strand k, index i
               | s          the half twist sigma
               | B          the full twist
               | name       any other identifier (abstract generator)

``[x,y]'`` is the twisted commutator ``x y x y^-1``.  The names ``s``, ``B``,
``e`` and the ``r<k>_<i>`` pattern are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

RHO = "rho"
SIGMA = "sigma"
BSYM = "B"
ABSTRACT = "abstract"

_FAMILY_RANK = {SIGMA: 0, RHO: 1, BSYM: 2, ABSTRACT: 3}


class MissingImage(KeyError):
    """A substitution was asked to map a generator it has no image for."""

    def __init__(self, generator: "Generator"):
        super().__init__(generator)
        self.generator = generator

    def __str__(self) -> str:
        return f"no image given for generator {self.generator}"


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Generator:
    family: str
    k: int = 0
    i: int = 0
    name: str = ""

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"unknown generator family {self.family!r}")
        if self.family == RHO and (self.k not in (1, 2) or self.i < 1):
            raise ValueError(f"bad rho indices ({self.k}, {self.i})")
        if self.family == ABSTRACT and not self.name:
            raise ValueError("abstract generators need a name")

    def sort_key(self) -> Tuple:
        return (_FAMILY_RANK[self.family], self.k, self.i, self.name)

    def __lt__(self, other: "Generator") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.family == RHO:
            return f"r{self.k}_{self.i}"
        if self.family == SIGMA:
            return "s"
        if self.family == BSYM:
            return "B"
        return self.name

    def __repr__(self) -> str:
        return f"Generator({self})"


def rho(k: int, i: int) -> Generator:
    return Generator(RHO, k, i)


SIGMA_GEN = Generator(SIGMA)
B_GEN = Generator(BSYM)


def abstract(name: str) -> Generator:
    return Generator(ABSTRACT, name=name)


Syllable = Tuple[Generator, int]


def _reduce_into(out: List[List], syllables: Iterable[Syllable]) -> None:
    for gen, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])


class Word:
    """Immutable freely reduced word."""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[Syllable] = (), _trusted: bool = False):
        if _trusted:
            self.syllables = tuple(syllables)
        else:
            out: List[List] = []
            _reduce_into(out, syllables)
            self.syllables = tuple((g, e) for g, e in out)
        self._hash = None

    @classmethod
    def gen(cls, g: Generator, exp: int = 1) -> "Word":
        return cls(((g, exp),))

    @classmethod
    def from_letters(cls, letters: Iterable[Tuple[Generator, int]]) -> "Word":
        return cls(letters)

    def __iter__(self):
        return iter(self.syllables)

    def __len__(self) -> int:
        """Letter length (sum of absolute exponents)."""
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.syllables)
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        out = [list(s) for s in self.syllables]
        _reduce_into(out, other.syllables)
        return Word(((g, e) for g, e in out), _trusted=True)

    def inverse(self) -> "Word":
        return Word(((g, -e) for g, e in reversed(self.syllables)), _trusted=True)

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        result = Word()
        for _ in range(abs(n)):
            result = result * base
        return result

    def generators(self) -> set:
        return {g for g, _ in self.syllables}

    def letters(self) -> List[Tuple[Generator, int]]:
        """Expand into single letters with exponent +1 or -1."""
        out = []
        for g, e in self.syllables:
            sgn = 1 if e > 0 else -1
            out.extend([(g, sgn)] * abs(e))
        return out

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


IDENTITY = Word()


def free_reduce(raw: Iterable[Syllable]) -> Word:
    return Word(raw)


def substitute(w: Word, images: Mapping[Generator, Word]) -> Word:
    out: List[List] = []
    for g, e in w.syllables:
        try:
            img = images[g]
        except KeyError:
            raise MissingImage(g) from None
        piece = img if e > 0 else img.inverse()
        for _ in range(abs(e)):
            _reduce_into(out, piece.syllables)
    return Word(((g, e) for g, e in out), _trusted=True)


def exponent_sum(w: "Word | Sequence[Syllable]", g: Generator) -> int:
    sylls = w.syllables if isinstance(w, Word) else w
    return sum(e for h, e in sylls if h == g)


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


def twisted_commutator(a: Word, b: Word) -> Word:
    return a * b * a * b.inverse()


def product(words: Iterable[Word]) -> Word:
    out: List[List] = []
    for w in words:
        _reduce_into(out, w.syllables)
    return Word(((g, e) for g, e in out), _trusted=True)


def tilde(w: Word) -> Word:
    """Swap the strand index of every rho generator; other letters are kept."""
    return Word(
        ((rho(3 - g.k, g.i) if g.family == RHO else g, e) for g, e in w.syllables),
        _trusted=True,
    )


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(r[12]_\d+)|([A-Za-z][A-Za-z0-9_]*)|(-?\d+)|(\S))")


def parse_generator(tok: str) -> Generator:
    m = re.fullmatch(r"r([12])_(\d+)", tok)
    if m:
        return rho(int(m.group(1)), int(m.group(2)))
    if tok == "s":
        return SIGMA_GEN
    if tok == "B":
        return B_GEN
    if tok == "e":
        raise WordSyntaxError("'e' denotes the identity, not a generator")
    return abstract(tok)


class _Parser:
    def __init__(self, text: str):
        self.toks: List[Tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise WordSyntaxError(f"cannot tokenize near {text[pos:]!r}")
            pos = m.end()
            if m.group(1):
                self.toks.append(("gen", m.group(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2)))
            elif m.group(3):
                self.toks.append(("int", m.group(3)))
            elif m.group(4):
                self.toks.append(("sym", m.group(4)))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, sym=None):
        tok = self.peek()
        if tok[0] is None:
            raise WordSyntaxError("unexpected end of input")
        if sym is not None and tok != ("sym", sym):
            raise WordSyntaxError(f"expected {sym!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def word(self) -> Word:
        terms: List[Word] = []
        while True:
            kind, val = self.peek()
            if kind is None or (kind == "sym" and val in ",)]"):
                break
            if kind == "sym" and val == "*":
                self.take()
                continue
            terms.append(self.term())
        return product(terms)

    def term(self) -> Word:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind == "sym" and val in "+-":
                kind2, val2 = self.take()
                if kind2 != "int":
                    raise WordSyntaxError("expected an integer exponent")
                val = val + val2
                kind = "int"
            if kind != "int":
                raise WordSyntaxError("expected an integer exponent")
            base = base ** int(val)
        return base

    def atom(self) -> Word:
        kind, val = self.take()
        if kind == "gen":
            return Word.gen(parse_generator(val))
        if kind == "name":
            if val == "e":
                return IDENTITY
            return Word.gen(parse_generator(val))
        if kind == "int" and val == "1":
            return IDENTITY
        if kind == "sym" and val == "(":
            w = self.word()
            self.take(")")
            return w
        if kind == "sym" and val == "[":
            a = self.word()
            self.take(",")
            b = self.word()
            self.take("]")
            if self.peek() == ("sym", "'"):
                self.take()
                return twisted_commutator(a, b)
            return commutator(a, b)
        raise WordSyntaxError(f"unexpected token {val!r}")


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    if p.pos != len(p.toks):
        raise WordSyntaxError(f"trailing input at token {p.toks[p.pos][1]!r}")
    return w


def format_word(w: Word) -> str:
    if not w.syllables:
        return "1"
    parts = []
    for g, e in w.syllables:
        parts.append(str(g) if e == 1 else f"{g}^{e}")
    return "*".join(parts)


def images_from_text(mapping: Mapping[str, str]) -> Dict[Generator, Word]:
    return {parse_generator(k): parse_word(v) for k, v in mapping.items()}
