import random
from collections import Counter
from itertools import combinations
from math import gcd

import pytest

from ybh.complex import Final, SparseMatrix, boundary
from ybh.ring import ONE_MINUS_T, T, ZERO, IntPoly, is_unimodular
from ybh.smith import (
    QtDomain,
    _smith,
    _to_rat_matrix,
    certify_over_Zt,
    divisibility_chain_holds,
    materialize_P,
    materialize_Q,
    rank_mod_p,
    rank_over_Qt,
    snf_integer,
    snf_polyQ,
    torsion_invariants,
    verify_residual,
    verify_residual_dense,
)

P2 = IntPoly([1, 0, -1])


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        if M[0][j]:
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * M[0][j] * _det(minor)
    return total


def determinantal_invariants(rows):
    """Invariant factors from gcds of k x k minors (brute force oracle)."""
    nr, nc = len(rows), len(rows[0])
    prev, out = 1, []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                g = gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_identity():
    dec = snf_integer([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert dec.diagonal == [1, 1, 1] and dec.rank == 3
    assert dec.residual_ok


def test_classic_integer_example():
    dec = snf_integer([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert dec.diagonal == [2, 6, 12]
    assert divisibility_chain_holds(dec)


def test_zero_matrices():
    assert snf_integer([[0, 0], [0, 0]]).rank == 0
    Z = SparseMatrix(3, 4, zero=ZERO)
    dec = snf_polyQ(Z)
    assert dec.rank == 0 and dec.certified_over_Zt
    assert rank_over_Qt(Z) == 0


def test_random_integer_against_minors():
    rng = random.Random(2024)
    for _ in range(60):
        nr, nc = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.choice([0, 0, 1, -1, 2, 3, -4, 6, 9]) for _ in range(nc)] for _ in range(nr)]
        dec = snf_integer(rows)
        assert dec.residual_ok
        assert dec.diagonal == determinantal_invariants(rows)
        assert all(d > 0 for d in dec.diagonal)
        assert divisibility_chain_holds(dec)
        assert verify_residual_dense(SparseMatrix.from_dense(rows), dec)
        assert abs(dec.det_P()) == 1 and abs(dec.det_Q()) == 1


def test_final3_d3():
    A = boundary(Final(3), 3)
    dec = snf_polyQ(A)
    assert dec.rank == 1
    assert dec.certified_over_Zt and dec.residual_ok
    assert dec.diagonal[0].normalized() == ONE_MINUS_T
    assert rank_over_Qt(A) == 1


def test_final3_d4():
    A = boundary(Final(3), 4)
    dec = snf_polyQ(A)
    assert dec.domain == "Z[t]"
    assert dec.rank == 10 and rank_over_Qt(A) == 10
    assert Counter(torsion_invariants(dec)) == Counter({ONE_MINUS_T: 8, P2: 2})
    assert dec.certified_over_Zt and dec.residual_ok
    assert divisibility_chain_holds(dec)
    P, Q = materialize_P(dec), materialize_Q(dec)
    assert is_unimodular(P.to_dense()) and is_unimodular(Q.to_dense())
    assert verify_residual_dense(A, dec)


def test_residual_detects_tampering():
    A = boundary(Final(3), 4)
    dec = snf_polyQ(A)
    dec.diagonal[0] = dec.diagonal[0] * IntPoly([1, 1])
    assert not verify_residual(A, dec)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_permutation_invariance(seed):
    A = boundary(Final(3), 4)
    rng = random.Random(seed)
    rp = list(range(A.nrows))
    cp = list(range(A.ncols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    cols = [{rp[i]: v for i, v in A.cols[j].items()} for j in cp]
    B = SparseMatrix(A.nrows, A.ncols, cols, zero=ZERO)
    a, b = snf_polyQ(A), snf_polyQ(B)
    assert Counter(torsion_invariants(a)) == Counter(torsion_invariants(b))
    assert a.rank == b.rank


@pytest.mark.parametrize("spec,n", [(Final(3), 3), (Final(3), 4), (Final(3), 5),
                                    (Final(4), 4), (Final(2), 5)])
@pytest.mark.parametrize("c", [4, 9])
def test_specialization_commutes(spec, n, c):
    A = boundary(spec, n)
    sym = snf_polyQ(A)
    num = snf_integer(A.evaluate(c), at=c)
    assert num.rank == sym.rank
    evaluated = sorted(abs(d.evaluate(c)) for d in sym.diagonal)
    ints = sorted(num.diagonal)
    # both lists are divisibility chains; compare them position by position
    for a, b in zip(ints, evaluated):
        assert b % a == 0
    assert rank_mod_p(A, c) == sym.rank


def test_qt_route_certifies_boundary():
    A = boundary(Final(3), 4)
    dec = _smith(_to_rat_matrix(A), QtDomain)
    assert dec.domain == "Q[t]" and not dec.certified_over_Zt
    assert certify_over_Zt(dec, A)
    assert dec.domain == "Z[t]"
    assert Counter(torsion_invariants(dec)) == Counter({ONE_MINUS_T: 8, P2: 2})
    assert verify_residual(A, dec)


def test_non_principal_ideal_is_flagged():
    # (2, t) is not principal in Z[t]: no unimodular reduction exists
    A = SparseMatrix.from_dense([[IntPoly([2]), T]], zero=ZERO)
    dec = snf_polyQ(A)
    assert dec.domain == "Q[t]"
    assert not dec.certified_over_Zt
    assert any("fell back" in note for note in dec.notes)
    assert dec.residual_ok


def test_diagonal_form_without_chain():
    # already diagonal over Z[t]; certified, though 2 does not divide t
    A = SparseMatrix.from_dense([[IntPoly([2]), ZERO], [ZERO, T]], zero=ZERO)
    dec = snf_polyQ(A)
    assert dec.certified_over_Zt
    assert sorted(torsion_invariants(dec), key=lambda p: p.coeffs) == [IntPoly([0, 1]), IntPoly([2])]
    assert not divisibility_chain_holds(dec)


def test_torsion_sign_normalization():
    A = SparseMatrix.from_dense([[IntPoly([-1, 1])]], zero=ZERO)
    assert torsion_invariants(snf_polyQ(A)) == [ONE_MINUS_T]
    assert torsion_invariants(snf_integer([[-15]])) == [15]
    assert torsion_invariants(snf_integer([[-1]])) == []


def test_larger_integer_matrix():
    # d_6 of C^{3f} at t = 4 (180 x 602)
    A = boundary(Final(3), 6).evaluate(4)
    dec = snf_integer(A, at=4)
    assert dec.residual_ok
    assert divisibility_chain_holds(dec)
