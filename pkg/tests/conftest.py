from hypothesis import settings, strategies as st

from surfbu.words import B_GEN, SIGMA_GEN, Word, abstract, rho

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def letters(g: int, strands=(1, 2), extra=()):
    gens = [rho(k, i) for k in strands for i in range(1, 2 * g + 1)] + list(extra)
    return st.tuples(st.sampled_from(gens), st.sampled_from([-2, -1, 1, 2]))


def rho_words(g: int, max_size: int = 12, strands=(1, 2), with_b: bool = False):
    extra = (B_GEN,) if with_b else ()
    return st.lists(letters(g, strands, extra), max_size=max_size).map(Word)


def b2_words(g: int, max_size: int = 10):
    return st.lists(letters(g, extra=(B_GEN, SIGMA_GEN)), max_size=max_size).map(Word)


def free_words(names="abcd", max_size: int = 12):
    gens = [abstract(n) for n in names]
    return st.lists(st.tuples(st.sampled_from(gens), st.integers(-3, 3)), max_size=max_size).map(Word)
