import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qaverify.braid import BraidWord, permutation
from qaverify.invariants import closure_component_count

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def words(draw, max_strands=5, max_len=12, min_strands=2, min_len=0):
    n = draw(st.integers(min_strands, max_strands))
    gens = st.integers(1, n - 1).flatmap(lambda g: st.sampled_from((g, -g)))
    letters = draw(st.lists(gens, min_size=min_len, max_size=max_len))
    return BraidWord(n, tuple(letters))


@st.composite
def word_pairs(draw, max_strands=5, max_len=12):
    """Two words on the same strand count."""
    w = draw(words(max_strands=max_strands, max_len=max_len))
    gens = st.integers(1, w.strands - 1).flatmap(lambda g: st.sampled_from((g, -g)))
    a = draw(st.lists(gens, max_size=max_len))
    return w, BraidWord(w.strands, tuple(a))


# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@st.composite
def knot_words(draw):
    """Random words closing to knots: a short random word, then transpositions merging cycles."""
    w = draw(words(max_strands=5, max_len=8))
    letters = list(w.letters)
    n = w.strands
    while closure_component_count(BraidWord(n, tuple(letters))) > 1:
        cyc = permutation(BraidWord(n, tuple(letters))).cycles()
        where = {p: k for k, c in enumerate(cyc) for p in c}
        i = next(i for i in range(1, n) if where[i] != where[i + 1])
        letters.append(draw(st.sampled_from((i, -i))))
    return BraidWord(n, tuple(letters))
