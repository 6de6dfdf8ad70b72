from itertools import combinations, product

import pytest

from ybh.complex import (
    CappedQuotient,
    Final,
    Full,
    Kunneth,
    KunnethQuotient,
    SpecError,
    TopCapped,
    UseTop,
    boundary,
    boundary_of,
    boundary_terms,
    enumerate_basis,
    face,
    face_left,
    face_right,
    format_spec,
    is_closed,
    parse_spec,
    verify_boundary_squared,
    verify_precubic,
)
from ybh.counting import s_tilde
from ybh.ring import ONE, ONE_MINUS_T, T, ZERO
from ybh.ybop import Weights, boltzmann_weight


# -- an independent face-map oracle ------------------------------------------------
# d_i^l deletes the first letter after braiding position i down to position 1;
# d_i^r deletes the last letter after braiding position i up to position n.

def _braid(vec, pos, m):
    out = {}
    for word, coef in vec.items():
        a, b = word[pos], word[pos + 1]
        for c, d in product(range(1, m + 1), repeat=2):
            w = boltzmann_weight(a, b, c, d)
            if w:
                key = word[:pos] + (c, d) + word[pos + 2:]
                out[key] = out.get(key, ZERO) + coef * w
    return {k: v for k, v in out.items() if v}


def oracle_left(i, word, m):
    vec = {tuple(word): ONE}
    for pos in range(i - 2, -1, -1):
        vec = _braid(vec, pos, m)
    out = {}
    for w, c in vec.items():
        out[w[1:]] = out.get(w[1:], ZERO) + c
    return {k: v for k, v in out.items() if v}


def oracle_right(i, word, m):
    n = len(word)
    vec = {tuple(word): ONE}
    for pos in range(i - 1, n - 1):
        vec = _braid(vec, pos, m)
    out = {}
    for w, c in vec.items():
        out[w[:-1]] = out.get(w[:-1], ZERO) + c
    return {k: v for k, v in out.items() if v}


def example_expansion(a, b, c, d):
    u = ONE_MINUS_T
    t = T
    return {
        (b, c, d): u * u * u,
        (a, c, d): t * u * u,
        (c, b, d): t * u * u,
        (a, b, d): t * t * u,
        (b, d, c): t * u * u,
        (a, d, c): t * t * u,
        (d, b, c): t * t * u,
        (a, b, c): t * t * t,
    }


# -- bases --------------------------------------------------------------------------

def test_final3_bases():
    assert enumerate_basis(Final(3), 2) == ((2, 3), (3, 2))
    assert enumerate_basis(Final(3), 3) == (
        (1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 2, 3), (2, 3, 1), (2, 3, 2),
        (2, 3, 3), (3, 1, 2), (3, 2, 1), (3, 2, 2), (3, 2, 3), (3, 3, 2))
    four = enumerate_basis(Final(3), 4)
    assert len(four) == 50
    assert four[:4] == ((1, 1, 2, 3), (1, 1, 3, 2), (1, 2, 1, 3), (1, 2, 2, 3))
    assert four[-1] == (3, 3, 3, 2)


@pytest.mark.parametrize("m,n", [(1, 3), (2, 4), (3, 3)])
def test_full_counts(m, n):
    assert len(enumerate_basis(Full(m), n)) == m ** n


def test_basis_sorted_and_unique():
    for spec in (Final(4), TopCapped(3, 1), Kunneth(3, 1), UseTop(5, 2, 1)):
        words = enumerate_basis(spec, 4)
        assert list(words) == sorted(set(words))


def test_basis_counts_match_s_tilde():
    for m in range(1, 5):
        for u in range(m):
            for l in range(1, m - u + 1):
                for n in range(6):
                    assert len(enumerate_basis(UseTop(m, u, l), n)) == s_tilde(n, l + u, u)


# -- face maps ------------------------------------------------------------------------

def test_wall_deletions():
    assert face_left(1, (3, 1, 2)) == {(1, 2): ONE}
    assert face_right(3, (3, 1, 2)) == {(3, 1): ONE}


def test_small_faces():
    assert face_left(2, (1, 2)) == {(2,): ONE_MINUS_T, (1,): T}
    assert face_right(1, (1, 2)) == {(1,): ONE_MINUS_T, (2,): T}


def test_example_expansion_m4():
    for word in combinations(range(1, 5), 4):
        assert face_left(4, word) == example_expansion(*word)


def test_example_expansion_longer_alphabets():
    for m in (5, 6):
        for word in combinations(range(1, m + 1), 4):
            assert face_left(4, word) == example_expansion(*word)


@pytest.mark.parametrize("m,n", [(2, 4), (3, 4), (4, 3)])
def test_faces_match_oracle(m, n):
    for word in product(range(1, m + 1), repeat=n):
        for i in range(1, n + 1):
            assert face_left(i, word) == oracle_left(i, word, m)
            assert face_right(i, word) == oracle_right(i, word, m)


def test_face_index_errors():
    with pytest.raises(IndexError):
        face_left(0, (1, 2))
    with pytest.raises(IndexError):
        face_right(3, (1, 2))
    with pytest.raises(ValueError):
        face("x", 1, (1,))


def test_specialized_faces_are_evaluations():
    w = Weights.at(9)
    for word in product(range(1, 4), repeat=4):
        for i in range(1, 5):
            sym = face_left(i, word)
            num = face_left(i, word, w)
            assert {k: v.evaluate(9) for k, v in sym.items() if v.evaluate(9)} == num


# -- boundaries ---------------------------------------------------------------------------

def test_boundary_one_vanishes():
    for m in (1, 2, 3):
        assert boundary(Full(m), 1).is_zero()


def test_duality_example_signs():
    # a < b < c: d(a, c, b) and d(b, a, c) on three letters
    a, b, c = 1, 2, 3
    u, t = ONE_MINUS_T, T
    minus_d_acb = {(b, c): u, (a, c): -u, (c, b): t * u, (c, a): -(t * u)}
    assert boundary_of((a, c, b)) == {k: -v for k, v in minus_d_acb.items()}
    minus_d_bac = {(a, b): -u, (a, c): u, (b, a): -(t * u), (c, a): t * u}
    assert boundary_of((b, a, c)) == {k: -v for k, v in minus_d_bac.items()}


def test_final3_d3_matrix():
    A = boundary(Final(3), 3)
    assert A.shape == (2, 12)
    u, t = ONE_MINUS_T, T
    # displayed matrix, column by column (rows (2,3), (3,2))
    shown = {0: (u, t * u), 1: (u, t * u), 3: (u, t * u), 6: (-u, -(t * u))}
    # the display and the boundary formula differ by an overall sign
    for sign in (1, -1):
        want = [[ZERO] * 12 for _ in range(2)]
        for j, (x, y) in shown.items():
            want[0][j] = x if sign > 0 else -x
            want[1][j] = y if sign > 0 else -y
        if A.to_dense() == want:
            break
    else:
        pytest.fail("d_3 of C^{3f} differs from the displayed matrix beyond a sign")
    # first column up to that sign: (1 - y^2)(2,3) + y^2 (1 - y^2)(3,2)
    first = A.cols[0]
    assert first[1] == first[0] * T


@pytest.mark.parametrize("spec,top", [
    (Full(1), 6), (Full(2), 6), (Full(3), 5), (Final(3), 6), (Final(4), 5),
    (TopCapped(3, 1), 5), (CappedQuotient(3, 1), 5), (Kunneth(3, 1), 5),
    (KunnethQuotient(3, 1), 5), (UseTop(4, 1, 2), 4),
])
def test_boundary_squared(spec, top):
    for n in range(2, top + 1):
        assert verify_boundary_squared(spec, n)


def test_boundary_squared_specialized():
    assert verify_boundary_squared(Final(3), 5, Weights.at(4))


@pytest.mark.parametrize("m,n", [(1, 4), (2, 3), (2, 5), (3, 4)])
def test_precubic(m, n):
    assert verify_precubic(Full(m), n)


def test_precubic_requires_two():
    with pytest.raises(ValueError):
        verify_precubic(Full(2), 1)
    with pytest.raises(ValueError):
        verify_boundary_squared(Full(2), 1)


def test_subcomplexes_are_closed():
    for n in range(1, 5):
        assert is_closed(Kunneth(3, 1), n)
        assert is_closed(Kunneth(4, 2), n)
    assert not is_closed(Final(3), 3)      # a quotient: faces leave the span


def test_boundary_terms_project():
    for word in enumerate_basis(Final(3), 3):
        terms = boundary_terms(Final(3), word)
        assert all(Final(3).admits(w) for w in terms)


def test_empty_modules():
    A = boundary(Final(5), 3)
    assert A.shape == (0, 0)
    assert boundary(Final(4), 3).shape == (0, 6)


def test_specialized_boundary_is_evaluation():
    sym = boundary(Final(3), 4)
    num = boundary(Final(3), 4, Weights.at(4))
    assert sym.evaluate(4) == num


# -- spec strings ---------------------------------------------------------------------------

def test_parse_spec_examples():
    assert parse_spec("final:m=3") == Final(3)
    assert parse_spec("usetop:m=4,u=3,l=1") == Final(4)
    assert parse_spec("full:m=2") == UseTop(2, 0, 2)
    assert parse_spec("capped:m=3,cap=1") == TopCapped(3, 1)
    assert parse_spec("kunneth:m=3,split=1") == Kunneth(3, 1)
    with pytest.raises(SpecError, match="u \\+ l <= m"):
        parse_spec("usetop:m=3,u=2,l=2")


@pytest.mark.parametrize("text", [
    "full:m=3", "final:m=4", "usetop:m=5,u=2,l=1", "capped:m=3,cap=2",
    "capquot:m=3,cap=1", "kunneth:m=4,split=2", "kunquot:m=3,split=1",
])
def test_spec_roundtrip(text):
    assert format_spec(parse_spec(text)) == text


@pytest.mark.parametrize("text", [
    "", "final", "final:m=", "final:m=x", "bogus:m=2", "full:m=2,m=2",
    "full:q=2", "usetop:m=3,u=1", "kunneth:m=3,split=3", "capped:m=3,cap=0",
])
def test_bad_specs(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_spec_error_reports_position():
    with pytest.raises(SpecError, match="position 11"):
        parse_spec("usetop:m=4,u=x,l=1")


def test_spec_keys():
    assert Final(4).key == "m4u3l1"
    assert UseTop(4, 3, 1).key == "m4u3l1"
    assert TopCapped(3, 1).key != CappedQuotient(3, 1).key
    assert Kunneth(3, 1).key != KunnethQuotient(3, 1).key
