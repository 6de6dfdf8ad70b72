"""The normalized Yang-Baxter operator R_(m) whose homology is studied here.

Letters are the integers 1..m with their natural order.  The Boltzmann
weights only depend on how the two input letters compare, which is what
makes the face-map recursion in :mod:`ybh.complex` cheap: ``R(a, b)`` has
one term when ``a >= b`` and two terms when ``a < b``.

The q-weighted operator (entries q, 1, q - 1/q) becomes this one after
dividing every column by its sum and substituting y^2 = 1/(1 + q - 1/q);
only the normalized operator is implemented.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import product

from .ring import ONE, ONE_MINUS_T, T, ZERO


class Weights:
    """The three Boltzmann weight values 1, t, 1 - t in a coefficient ring.

    Face maps are evaluated with whichever ring the weights live in: the
    symbolic ring Z[t] (``SYMBOLIC``) or the integers after specializing
    t to a number (``Weights.at(4)`` for y = 2).  Each instance owns the
    memo tables of the face-map recursion.
    """

    def __init__(self, one, t, one_minus_t, zero, label):
        self.one = one
        self.t = t
        self.one_minus_t = one_minus_t
        self.zero = zero
        self.label = label
        self.left_memo = {}
        self.right_memo = {}

    _specialized = {}

    @classmethod
    def at(cls, c):
        w = cls._specialized.get(c)
        if w is None:
            w = cls._specialized[c] = cls(1, c, 1 - c, 0, f"t={c}")
        return w

    def __repr__(self):
        return f"Weights({self.label})"


SYMBOLIC = Weights(ONE, T, ONE_MINUS_T, ZERO, "Z[t]")


def boltzmann_weight(a, b, c, d, weights=SYMBOLIC):
    """Matrix coefficient R^{ab}_{cd}: the weight of (c, d) in R(a, b)."""
    if d == a and b == c:
        return weights.one if a >= b else weights.t
    if c == a and d == b and a < b:
        return weights.one_minus_t
    return weights.zero


def apply_R(a, b, weights=SYMBOLIC):
    """R applied to the pair (a, b), as a tuple of ((c, d), weight) terms."""
    if a >= b:
        return (((b, a), weights.one),)
    return (((a, b), weights.one_minus_t), ((b, a), weights.t))


def r_matrix(m, weights=SYMBOLIC):
    """Dense m^2 x m^2 matrix of R_(m); rows and columns indexed by pairs in
    lexicographic order, column (a, b) holding R(a, b)."""
    pairs = list(product(range(1, m + 1), repeat=2))
    return [[boltzmann_weight(a, b, c, d, weights) for (a, b) in pairs] for (c, d) in pairs]


def _apply_at(vec, pos, weights):
    # apply R to tensor positions (pos, pos + 1) of every basis word in vec
    out = defaultdict(lambda: weights.zero)
    for word, coef in vec.items():
        for (c, d), w in apply_R(word[pos], word[pos + 1], weights):
            out[word[:pos] + (c, d) + word[pos + 2:]] += coef * w
    return {k: v for k, v in out.items() if v}


def verify_ybe(m, weights=SYMBOLIC):
    """(R x Id)(Id x R)(R x Id) == (Id x R)(R x Id)(Id x R) on all m^3 basis
    words, i.e. column by column as m^3 x m^3 matrices."""
    for word in product(range(1, m + 1), repeat=3):
        lhs = {word: weights.one}
        for pos in (0, 1, 0):
            lhs = _apply_at(lhs, pos, weights)
        rhs = {word: weights.one}
        for pos in (1, 0, 1):
            rhs = _apply_at(rhs, pos, weights)
        if lhs != rhs:
            return False
    return True


def verify_column_unital(m, weights=SYMBOLIC):
    """Every column of R_(m) sums to 1."""
    for a, b in product(range(1, m + 1), repeat=2):
        total = weights.zero
        for c, d in product(range(1, m + 1), repeat=2):
            total = total + boltzmann_weight(a, b, c, d, weights)
        if total != weights.one:
            return False
    return True


__all__ = [
    "SYMBOLIC",
    "Weights",
    "apply_R",
    "boltzmann_weight",
    "r_matrix",
    "verify_column_unital",
    "verify_ybe",
]
