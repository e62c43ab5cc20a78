import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multbound.pc import PcPresentation, PresentationError, materialize_table, parse_presentation

HEIS3 = "p 3 / n 3 / comm 2 1 : g3 1"


def test_parse_cyclic():
    pres = parse_presentation("p 3 / n 1")
    assert pres.order == 3
    assert pres.powers == {} and pres.commutators == {}


def test_parse_heisenberg_consistent():
    pres = parse_presentation(HEIS3)
    assert pres.is_consistent()
    g = materialize_table(pres)
    assert g.order == 27 and not g.is_abelian


def test_parse_multiline_with_comments():
    text = """
    # Z9 x Z3
    p 3
    n 3
    pow 1 : g2 1   # g1^3 = g2
    """
    pres = parse_presentation(text)
    assert pres.powers == {0: (0, 1, 0)}


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p 3 / n 2 / comm 1 2 : g2 1", "need n >= j > i"),
        ("p 4 / n 2", "not prime"),
        ("p 3 / n 2 / pow 1 : g2 3", "out of range"),
        ("p 3 / n 3 / comm 3 1 : g2 1", "index above"),
        ("p 3 / n 2 / pow 1 : g1 1", "index above"),
        ("p 3 / n 2 / pow 1 g2 1", "missing ':'"),
        ("p 3 / n 2 / pow 1 : g2 1 / pow 1 : g2 2", "duplicate"),
        ("p 3 / n 2 / frob 1 : g2 1", "unknown statement"),
        ("n 3 / p 3", "expected 'p <int>'"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(PresentationError, match=fragment):
        parse_presentation(text)


def test_parse_error_reports_line():
    with pytest.raises(PresentationError) as exc:
        parse_presentation("p 3\nn 2\n\npow 1 : g2 7\n")
    assert exc.value.line == 4


def test_collect_examples():
    ab = parse_presentation("p 3 / n 2")
    assert ab.collect([1, 0]) == (1, 1)
    heis = parse_presentation(HEIS3)
    assert heis.collect([1, 0]) == (1, 1, 1)
    z9 = parse_presentation("p 3 / n 2 / pow 1 : g2 1")
    assert z9.collect([0, 0, 0]) == (0, 1)


def test_collect_inverse_letters():
    heis = parse_presentation(HEIS3)
    word = [0, 1, (0, -1), (1, -1)]  # g1 g2 g1^-1 g2^-1 = [g1^-1, g2^-1]
    assert heis.collect(word) == heis.commutator(heis.inverse((1, 0, 0)), heis.inverse((0, 1, 0)))
    with pytest.raises(PresentationError):
        heis.collect([5])


def _unitriangular(p):
    """Heisenberg group as 3x3 unitriangular matrices mod p, the independent model."""
    X = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    Y = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 1]])

    def inv(m):
        return np.round(np.linalg.inv(m)).astype(int) % p

    Z = inv(Y) @ inv(X) @ Y @ X % p  # [Y, X]
    return X, Y, Z


@pytest.mark.parametrize("p", [3, 5])
def test_heisenberg_arithmetic_matches_matrices(p):
    pres = parse_presentation(f"p {p} / n 3 / comm 2 1 : g3 1")
    X, Y, Z = _unitriangular(p)

    def mat(w):
        a, b, c = w
        return np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Y, b) @ np.linalg.matrix_power(Z, c) % p

    words = list(itertools.product(range(p), repeat=3))
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b = (words[i] for i in rng.integers(len(words), size=2))
        assert np.array_equal(mat(pres.multiply(a, b)), mat(a) @ mat(b) % p)


def test_element_arithmetic_laws():
    pres = parse_presentation("p 2 / n 3 / pow 1 : g3 1 / pow 2 : g3 1 / comm 2 1 : g3 1")  # Q8
    e = pres.identity()
    for a in itertools.product(range(2), repeat=3):
        assert pres.multiply(a, e) == a
        assert pres.multiply(a, pres.inverse(a)) == e
        assert pres.multiply(pres.inverse(a), a) == e
        assert pres.power(a, 4) == e
        assert pres.power(a, -1) == pres.inverse(a)


def test_collection_is_idempotent():
    pres = parse_presentation(HEIS3)
    for w in itertools.product(range(3), repeat=3):
        letters = [k for k, x in enumerate(w) for _ in range(x)]
        assert pres.collect(letters) == w


def test_consistency_detects_bad_presentation():
    # g1^2 = g2 must commute with g1, but [g2, g1] = g3 says otherwise
    bad = parse_presentation("p 2 / n 3 / pow 1 : g2 1 / comm 2 1 : g3 1")
    ok, failing = bad.consistency_check()
    assert not ok and failing is not None
    with pytest.raises(PresentationError, match="inconsistent"):
        materialize_table(bad)


def test_consistency_all_builtins_small():
    from multbound.families import default_corpus

    for b in default_corpus(max_order=32):
        for pres in [b.presentation] if b.presentation else [f.presentation for f in b.factors]:
            assert pres.is_consistent(), b.id


def test_table_cap():
    pres = PcPresentation(2, 12)
    with pytest.raises(PresentationError, match="cap"):
        materialize_table(pres, cap=2048)


def test_to_text_round_trip():
    from multbound.families import extraspecial, modular

    for b in (extraspecial(3, 1, "p2"), modular(2, 5)):
        again = parse_presentation(b.presentation.to_text())
        assert again == b.presentation


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=40))
def test_table_agrees_with_collection(letters):
    # modular(2, 6) has generators g1..g6; the table must agree with direct collection
    from multbound.families import modular

    pres = modular(2, 6).presentation
    g = materialize_table(pres)
    index = {w: i for i, w in enumerate(g.labels)}
    out = index[pres.identity()]
    for k in letters:
        out = g.table[out, index[pres.generator(k)]]
    assert g.labels[out] == pres.collect(letters)
