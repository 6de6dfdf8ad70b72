"""Structural chain maps: the duality tau, maps induced by order-preserving
letter maps, and the splitting pair behind C^{m,u} = C^{m-1,u} + C^{m,u+1}.

All verifications are exhaustive symbolic checks at a fixed degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .complex import (
    ComplexSpec,
    Full,
    SparseMatrix,
    SpecError,
    UseTop,
    basis_index,
    boundary,
    boundary_of,
    enumerate_basis,
    face_left,
    face_right,
)
from .ring import ONE, ZERO
from .ybop import SYMBOLIC


# -- duality -----------------------------------------------------------------------

def tau(x, m):
    """Reverse the word and complement every letter: a -> m + 1 - a."""
    return tuple(m + 1 - a for a in reversed(x))


def tau_vector(vec, m):
    return {tau(w, m): c for w, c in vec.items()}


def verify_tau_duality(m: int, n: int, weights=SYMBOLIC) -> bool:
    """tau d = (-1)^n d tau, and tau d_i^l = d_{n+1-i}^r tau, on all of C_n^m."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for x in product(range(1, m + 1), repeat=n):
        tx = tau(x, m)
        lhs = tau_vector(boundary_of(x, weights), m)
        rhs = boundary_of(tx, weights)
        if n % 2:
            rhs = {w: -c for w, c in rhs.items()}
        if lhs != rhs:
            return False
        for i in range(1, n + 1):
            if tau_vector(face_left(i, x, weights), m) != face_right(n + 1 - i, tx, weights):
                return False
            if tau_vector(face_right(i, x, weights), m) != face_left(n + 1 - i, tx, weights):
                return False
    return True


# -- letter maps ---------------------------------------------------------------------

@dataclass(frozen=True)
class LetterMap:
    """A map of ordered alphabets {1..m_from} -> {1..m_to}; image[i-1] is the
    target of letter i."""

    m_from: int
    m_to: int
    image: tuple

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.image) != self.m_from:
            raise ValueError("image must list one target per source letter")
        if any(not 1 <= b <= self.m_to for b in self.image):
            raise ValueError("image letter out of range")

    @classmethod
    def from_dict(cls, mapping, m_to):
        m_from = max(mapping)
        return cls(m_from, m_to, tuple(mapping[i] for i in range(1, m_from + 1)))

    def __call__(self, a):
        return self.image[a - 1]

    def apply(self, word):
        return tuple(self.image[a - 1] for a in word)

    @property
    def is_weakly_order_preserving(self):
        return all(x <= y for x, y in zip(self.image, self.image[1:]))

    @property
    def is_strict(self):
        return all(x < y for x, y in zip(self.image, self.image[1:]))

    def compose(self, other):
        """self after other."""
        if other.m_to != self.m_from:
            raise ValueError("alphabet mismatch")
        return LetterMap(other.m_from, self.m_to, tuple(self(b) for b in other.image))

    @classmethod
    def identity(cls, m):
        return cls(m, m, tuple(range(1, m + 1)))


def shift_map(m):
    """s: words avoiding the top letter -> words avoiding 1, a -> a + 1."""
    return LetterMap(m - 1, m, tuple(range(2, m + 1)))


def gap_map(word, k):
    """Move a gap at letter k down to k - 1: letters below k go up by one."""
    if k in word:
        raise ValueError(f"word {word} uses the gap letter {k}")
    return tuple(a if a > k else a + 1 for a in word)


def induced_chain_map(f: LetterMap, n: int, source: ComplexSpec | None = None,
                      target: ComplexSpec | None = None) -> SparseMatrix:
    """Matrix of f^{(x)n} from source_n to target_n (Full complexes by default);
    images not admitted by the target are zero (quotient projection)."""
    if not f.is_weakly_order_preserving:
        raise ValueError(f"{f} is not weakly order-preserving")
    source = source or Full(f.m_from)
    target = target or Full(f.m_to)
    if source.size != f.m_from or target.size != f.m_to:
        raise SpecError("letter map does not match the alphabets of the complexes")
    cols = []
    index = basis_index(target, n)
    for w in enumerate_basis(source, n):
        r = index.get(f.apply(w))
        cols.append({} if r is None else {r: ONE})
    return SparseMatrix(len(enumerate_basis(target, n)), len(cols), cols,
                        enumerate_basis(target, n), enumerate_basis(source, n), ZERO)


def verify_chain_map(f: LetterMap, n: int, source: ComplexSpec | None = None,
                     target: ComplexSpec | None = None) -> bool:
    """d f_n == f_{n-1} d from source_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    source = source or Full(f.m_from)
    target = target or Full(f.m_to)
    lhs = boundary(target, n) @ induced_chain_map(f, n, source, target)
    rhs = induced_chain_map(f, n - 1, source, target) @ boundary(source, n)
    return (lhs - rhs).is_zero()


def _apply_vec(f, vec):
    out = {}
    for w, c in vec.items():
        k = f(w)
        out[k] = out.get(k, ZERO) + c
    return {k: v for k, v in out.items() if v}


def verify_face_naturality(f, words, weights=SYMBOLIC) -> bool:
    """f d_i^e == d_i^e f on every given word; f acts on words."""
    for x in words:
        fx = f(x)
        for i in range(1, len(x) + 1):
            if _apply_vec(f, face_left(i, x, weights)) != face_left(i, fx, weights):
                return False
            if _apply_vec(f, face_right(i, x, weights)) != face_right(i, fx, weights):
                return False
    return True


def verify_letter_map_naturality(f: LetterMap, n: int) -> bool:
    return verify_face_naturality(f.apply, product(range(1, f.m_from + 1), repeat=n))


def verify_gap_map(m: int, k: int, n: int) -> bool:
    """The gap-moving map commutes with every face map on words avoiding k."""
    if not 1 < k <= m:
        raise ValueError("need 1 < k <= m")
    letters = [a for a in range(1, m + 1) if a != k]
    return verify_face_naturality(lambda w: gap_map(w, k), product(letters, repeat=n))


def is_left_inverse(g: LetterMap, f: LetterMap, n: int) -> bool:
    """g_# f_# == id on C_n^{m_from(f)}."""
    prod = induced_chain_map(g, n) @ induced_chain_map(f, n)
    size = f.m_from ** n
    return prod == SparseMatrix.identity(size, ONE, ZERO)


# -- the splitting of C^{m,u} ----------------------------------------------------------------

def _check_split_args(m, u):
    if not 0 <= u < m - 1:
        raise ValueError(f"splitting needs 0 <= u < m - 1; got m={m}, u={u}")


def splitting_pair(m: int, u: int):
    """(f, g): f includes X_{m-1} into X_m skipping letter m - u, g is the
    left inverse collapsing m - u onto m - u - 1."""
    _check_split_args(m, u)
    cut = m - u
    f = LetterMap(m - 1, m, tuple(i if i < cut else i + 1 for i in range(1, m)))
    g = LetterMap(m, m - 1, tuple(i if i < cut else i - 1 for i in range(1, m + 1)))
    return f, g


def split_complexes(m: int, u: int):
    """(C^{m-1,u}, C^{m,u}) as specs."""
    _check_split_args(m, u)
    return UseTop(m - 1, u, m - 1 - u), UseTop(m, u, m - u)


def verify_split(m: int, u: int, n: int) -> bool:
    """alpha = f_#: C^{m-1,u} -> C^{m,u} and alpha_bar = g_# back are chain
    maps at degree n, and alpha_bar alpha = id."""
    f, g = splitting_pair(m, u)
    small, big = split_complexes(m, u)
    if not verify_chain_map(f, n, small, big):
        return False
    if not verify_chain_map(g, n, big, small):
        return False
    prod = induced_chain_map(g, n, big, small) @ induced_chain_map(f, n, small, big)
    size = len(enumerate_basis(small, n))
    return prod == SparseMatrix.identity(size, ONE, ZERO)


# worked example of a strict map with two different left inverses
COR_F = LetterMap(3, 4, (1, 3, 4))
COR_G = LetterMap(4, 3, (1, 1, 2, 3))
COR_G_PRIME = LetterMap(4, 3, (1, 2, 2, 3))
