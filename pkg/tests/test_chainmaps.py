from itertools import combinations, product

import pytest

from ybh.chainmaps import (
    COR_F,
    COR_G,
    COR_G_PRIME,
    LetterMap,
    gap_map,
    induced_chain_map,
    is_left_inverse,
    shift_map,
    split_complexes,
    splitting_pair,
    tau,
    tau_vector,
    verify_chain_map,
    verify_face_naturality,
    verify_gap_map,
    verify_letter_map_naturality,
    verify_split,
    verify_tau_duality,
)
from ybh.complex import SparseMatrix, UseTop, boundary_of
from ybh.ring import ONE, ONE_MINUS_T, T, ZERO


def test_tau_examples():
    assert tau((1, 2, 3), 3) == (1, 2, 3)
    assert tau((1, 1, 2), 2) == (1, 2, 2)
    for word in product(range(1, 4), repeat=4):
        assert tau(tau(word, 3), 3) == word


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_tau_duality(m, n):
    assert verify_tau_duality(m, n)


def test_tau_carries_the_worked_pair():
    # tau_3 sends (a,c,b) to (b,a,c); the odd degree flips the sign
    lhs = tau_vector(boundary_of((1, 3, 2)), 3)
    assert tau((1, 3, 2), 3) == (2, 1, 3)
    assert lhs == {w: -c for w, c in boundary_of((2, 1, 3)).items()}
    u, t = ONE_MINUS_T, T
    minus = {(1, 2): -u, (1, 3): u, (2, 1): -(t * u), (3, 1): t * u}
    assert boundary_of((2, 1, 3)) == {w: -c for w, c in minus.items()}


def test_letter_map_validation():
    with pytest.raises(ValueError):
        LetterMap(2, 2, (1,))
    with pytest.raises(ValueError):
        LetterMap(2, 2, (1, 3))
    assert LetterMap(3, 2, (1, 1, 2)).is_weakly_order_preserving
    assert not LetterMap(3, 2, (1, 1, 2)).is_strict
    assert not LetterMap(2, 2, (2, 1)).is_weakly_order_preserving


def test_identity_induces_identity():
    f = LetterMap.identity(3)
    M = induced_chain_map(f, 3)
    assert M == SparseMatrix.identity(27, ONE, ZERO)


def test_non_monotone_rejected():
    with pytest.raises(ValueError):
        induced_chain_map(LetterMap(2, 2, (2, 1)), 2)


def test_compose():
    assert COR_G.compose(COR_F).image == (1, 2, 3)
    assert COR_G_PRIME.compose(COR_F).image == (1, 2, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cor_left_inverses(n):
    assert is_left_inverse(COR_G, COR_F, n)
    assert is_left_inverse(COR_G_PRIME, COR_F, n)
    assert verify_chain_map(COR_F, n)
    assert verify_chain_map(COR_G, n)
    assert verify_chain_map(COR_G_PRIME, n)


def test_not_a_left_inverse():
    assert not is_left_inverse(LetterMap(4, 3, (1, 1, 1, 3)), COR_F, 2)


def test_shift_commutes_with_faces():
    for m in (2, 3, 4):
        assert verify_letter_map_naturality(shift_map(m), 3)


def test_strict_maps_natural():
    for image in combinations(range(1, 6), 3):
        assert verify_letter_map_naturality(LetterMap(3, 5, image), 3)


def test_weak_maps_are_chain_maps():
    for image in [(1, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 1)]:
        f = LetterMap(3, 2, image)
        for n in (1, 2, 3, 4):
            assert verify_chain_map(f, n)


def test_non_monotone_map_breaks_naturality():
    flip = lambda w: tuple(3 - a for a in w)
    assert not verify_face_naturality(flip, product((1, 2), repeat=2))


def test_gap_map():
    assert gap_map((1, 3), 2) == (2, 3)
    with pytest.raises(ValueError):
        gap_map((1, 2), 2)
    for k in (2, 3):
        assert verify_gap_map(3, k, 3)
    with pytest.raises(ValueError):
        verify_gap_map(3, 1, 2)


def test_splitting_pair_data():
    f, g = splitting_pair(3, 1)
    assert f.image == (1, 3)
    assert g.image == (1, 1, 2)
    f, g = splitting_pair(2, 0)
    assert f.image == (1,)
    assert g.image == (1, 1)
    assert split_complexes(3, 1) == (UseTop(2, 1, 1), UseTop(3, 1, 2))


@pytest.mark.parametrize("m,u", [(4, 3), (3, 2), (2, 1)])
def test_splitting_precondition(m, u):
    with pytest.raises(ValueError):
        splitting_pair(m, u)


@pytest.mark.parametrize("m,u,n", [(2, 0, 3), (3, 0, 3), (3, 1, 2), (3, 1, 4), (4, 1, 3)])
def test_split(m, u, n):
    assert verify_split(m, u, n)
