"""Chain modules, face maps and boundary matrices.

The chain module C_n^m is free on n-letter words over the ordered alphabet
1..m.  A face map d_i^l slides the i-th letter to the left wall through R
crossings and deletes it there; d_i^r slides it to the right wall.  Both
are computed by a memoized recursion on the part of the word they actually
touch (the prefix a_1..a_i for d_i^l, the suffix a_i..a_n for d_i^r); the
rest of the word is carried along unchanged.

All complexes handled here are subquotients of a full complex C^k: the
basis is the set of words a spec *admits*, and the boundary of an admitted
word is the full boundary with every non-admitted output dropped.  For a
quotient this is the quotient boundary; for a subcomplex nothing is ever
dropped (see :func:`is_closed`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

from .ybop import SYMBOLIC, apply_R


# -- complex descriptions -------------------------------------------------------

class SpecError(ValueError):
    """Raised for malformed or inconsistent complex descriptions."""


@dataclass(frozen=True)
class ComplexSpec:
    """Base class; subclasses define the alphabet size and the admitted words."""

    @property
    def size(self) -> int:
        raise NotImplementedError

    def admits(self, word) -> bool:
        raise NotImplementedError

    @property
    def is_subcomplex(self) -> bool:
        """True when the admitted words span a subcomplex of the full complex."""
        return False

    @property
    def key(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return format_spec(self)


@dataclass(frozen=True)
class UseTop(ComplexSpec):
    """C^{m,u,l}: words on the l bottom and u top letters that use every top
    letter at least once.  Stored on the consecutive alphabet 1..l+u; m is
    kept only as a label."""

    m: int
    u: int
    l: int

    def __post_init__(self):
        if self.u < 0 or self.l < 0 or self.u + self.l < 1:
            raise SpecError(f"need u >= 0, l >= 0, u + l >= 1; got u={self.u}, l={self.l}")
        if self.u + self.l > self.m:
            raise SpecError(f"need u + l <= m; got m={self.m}, u={self.u}, l={self.l}")

    @property
    def size(self):
        return self.l + self.u

    @cached_property
    def required(self):
        return frozenset(range(self.l + 1, self.l + self.u + 1))

    def admits(self, word):
        return self.required.issubset(word)

    @property
    def is_subcomplex(self):
        return self.u == 0

    @property
    def key(self):
        return f"m{self.m}u{self.u}l{self.l}"


def Full(m):
    """C^m, the complex of R_(m) itself."""
    return UseTop(m, 0, m)


def Final(m):
    """C^{mf} = C^{m,m-1,1}: every letter above the bottom one is required."""
    if m < 1:
        raise SpecError("m must be >= 1")
    return UseTop(m, m - 1, 1)


@dataclass(frozen=True)
class TopCapped(ComplexSpec):
    """C^{mf,cap}: words of C^{mf} using the top letter m at most cap times
    (a subcomplex of C^{mf})."""

    m: int
    cap: int

    def __post_init__(self):
        if self.m < 2 or self.cap < 1:
            raise SpecError("capped complexes need m >= 2 and cap >= 1")

    @property
    def size(self):
        return self.m

    def admits(self, word):
        return (word.count(self.m) <= self.cap
                and all(x in word for x in range(2, self.m + 1)))

    @property
    def is_subcomplex(self):
        # a subcomplex of the quotient C^{mf}; dropping is still required
        return False

    @property
    def key(self):
        return f"m{self.m}f-cap{self.cap}"


@dataclass(frozen=True)
class CappedQuotient(ComplexSpec):
    """C^{mf} / C^{mf,cap}: words of C^{mf} using the top letter more than cap times."""

    m: int
    cap: int

    def __post_init__(self):
        if self.m < 2 or self.cap < 1:
            raise SpecError("capped complexes need m >= 2 and cap >= 1")

    @property
    def size(self):
        return self.m

    def admits(self, word):
        return (word.count(self.m) > self.cap
                and all(x in word for x in range(2, self.m + 1)))

    @property
    def key(self):
        return f"m{self.m}f-capq{self.cap}"


def _is_split_word(word, split):
    seen_low = False
    for x in word:
        if x <= split:
            seen_low = True
        elif seen_low:
            return False
    return True


@dataclass(frozen=True)
class Kunneth(ComplexSpec):
    """Words (u, w) with u on the letters above ``split`` and w on the letters
    at or below it; a subcomplex of C^m isomorphic to C^{m-split} (x) C^{split}."""

    m: int
    split: int

    def __post_init__(self):
        if not 1 <= self.split < self.m:
            raise SpecError(f"need 1 <= split < m; got m={self.m}, split={self.split}")

    @property
    def size(self):
        return self.m

    def admits(self, word):
        return _is_split_word(word, self.split)

    @property
    def is_subcomplex(self):
        return True

    @property
    def key(self):
        return f"m{self.m}-kun{self.split}"


@dataclass(frozen=True)
class KunnethQuotient(ComplexSpec):
    """C^m modulo the Kunneth subcomplex."""

    m: int
    split: int

    def __post_init__(self):
        if not 1 <= self.split < self.m:
            raise SpecError(f"need 1 <= split < m; got m={self.m}, split={self.split}")

    @property
    def size(self):
        return self.m

    def admits(self, word):
        return not _is_split_word(word, self.split)

    @property
    def key(self):
        return f"m{self.m}-kunq{self.split}"


# -- spec strings ---------------------------------------------------------------

_SPEC_FIELDS = {
    "full": ("m",),
    "usetop": ("m", "u", "l"),
    "final": ("m",),
    "capped": ("m", "cap"),
    "capquot": ("m", "cap"),
    "kunneth": ("m", "split"),
    "kunquot": ("m", "split"),
}

_SPEC_RE = re.compile(r"^([a-z]+):(.*)$")


def parse_spec(text: str) -> ComplexSpec:
    """Parse e.g. ``final:m=3`` or ``usetop:m=4,u=3,l=1``."""
    s = text.strip()
    m = _SPEC_RE.match(s)
    if not m:
        raise SpecError(f"expected '<kind>:<k>=<v>,...' at position 0 of {text!r}")
    kind, rest = m.group(1), m.group(2)
    if kind not in _SPEC_FIELDS:
        raise SpecError(f"unknown complex kind {kind!r} at position 0 of {text!r}")
    values = {}
    pos = len(kind) + 1
    for part in rest.split(","):
        name, eq, val = part.partition("=")
        if not eq or not re.fullmatch(r"-?\d+", val.strip()):
            raise SpecError(f"bad field {part!r} at position {pos} of {text!r}")
        name = name.strip()
        if name not in _SPEC_FIELDS[kind]:
            raise SpecError(f"unexpected field {name!r} at position {pos} of {text!r}")
        if name in values:
            raise SpecError(f"duplicate field {name!r} at position {pos} of {text!r}")
        values[name] = int(val)
        pos += len(part) + 1
    missing = [f for f in _SPEC_FIELDS[kind] if f not in values]
    if missing:
        raise SpecError(f"missing field(s) {', '.join(missing)} in {text!r}")
    if kind == "full":
        return Full(values["m"])
    if kind == "final":
        return Final(values["m"])
    if kind == "usetop":
        return UseTop(values["m"], values["u"], values["l"])
    if kind == "capped":
        return TopCapped(values["m"], values["cap"])
    if kind == "capquot":
        return CappedQuotient(values["m"], values["cap"])
    if kind == "kunneth":
        return Kunneth(values["m"], values["split"])
    return KunnethQuotient(values["m"], values["split"])


def format_spec(spec: ComplexSpec) -> str:
    if isinstance(spec, UseTop):
        if spec.u == 0 and spec.l == spec.m:
            return f"full:m={spec.m}"
        if spec.u == spec.m - 1 and spec.l == 1:
            return f"final:m={spec.m}"
        return f"usetop:m={spec.m},u={spec.u},l={spec.l}"
    if isinstance(spec, TopCapped):
        return f"capped:m={spec.m},cap={spec.cap}"
    if isinstance(spec, CappedQuotient):
        return f"capquot:m={spec.m},cap={spec.cap}"
    if isinstance(spec, Kunneth):
        return f"kunneth:m={spec.m},split={spec.split}"
    if isinstance(spec, KunnethQuotient):
        return f"kunquot:m={spec.m},split={spec.split}"
    raise SpecError(f"unknown spec {spec!r}")


# -- bases ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_basis(spec: ComplexSpec, n: int):
    """Admitted n-letter words in lexicographic order."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    return tuple(w for w in product(range(1, spec.size + 1), repeat=n) if spec.admits(w))


@lru_cache(maxsize=None)
def basis_index(spec: ComplexSpec, n: int):
    return {w: i for i, w in enumerate(enumerate_basis(spec, n))}


def rank(spec: ComplexSpec, n: int) -> int:
    return len(enumerate_basis(spec, n))


# -- face maps ------------------------------------------------------------------

def _left(prefix, w):
    memo = w.left_memo
    hit = memo.get(prefix)
    if hit is not None:
        return hit
    if len(prefix) == 1:
        out = (((), w.one),)
    else:
        zero = w.zero
        acc = {}
        head = prefix[:-2]
        for (c, d), wt in apply_R(prefix[-2], prefix[-1], w):
            for y, coef in _left(head + (c,), w):
                k = y + (d,)
                acc[k] = acc.get(k, zero) + wt * coef
        out = tuple((k, v) for k, v in acc.items() if v)
    memo[prefix] = out
    return out


def _right(suffix, w):
    memo = w.right_memo
    hit = memo.get(suffix)
    if hit is not None:
        return hit
    if len(suffix) == 1:
        out = (((), w.one),)
    else:
        zero = w.zero
        acc = {}
        tail = suffix[2:]
        for (c, d), wt in apply_R(suffix[0], suffix[1], w):
            for y, coef in _right((d,) + tail, w):
                k = (c,) + y
                acc[k] = acc.get(k, zero) + wt * coef
        out = tuple((k, v) for k, v in acc.items() if v)
    memo[suffix] = out
    return out


def _check_index(i, word):
    if not 1 <= i <= len(word):
        raise IndexError(f"face index {i} out of range for a word of length {len(word)}")


def face_left(i, word, weights=SYMBOLIC):
    """d_i^l(word) as a dict word -> coefficient."""
    word = tuple(word)
    _check_index(i, word)
    rest = word[i:]
    return {y + rest: c for y, c in _left(word[:i], weights)}


def face_right(i, word, weights=SYMBOLIC):
    """d_i^r(word) as a dict word -> coefficient."""
    word = tuple(word)
    _check_index(i, word)
    head = word[:i - 1]
    return {head + y: c for y, c in _right(word[i - 1:], weights)}


def face(side, i, word, weights=SYMBOLIC):
    if side == "l":
        return face_left(i, word, weights)
    if side == "r":
        return face_right(i, word, weights)
    raise ValueError(f"side must be 'l' or 'r', not {side!r}")


def boundary_of(word, weights=SYMBOLIC):
    """Full boundary sum_i (-1)^i (d_i^l - d_i^r) of a single word."""
    word = tuple(word)
    zero = weights.zero
    acc = {}
    for i in range(1, len(word) + 1):
        rest = word[i:]
        head = word[:i - 1]
        if i % 2:
            for y, c in _left(word[:i], weights):
                k = y + rest
                acc[k] = acc.get(k, zero) - c
            for y, c in _right(word[i - 1:], weights):
                k = head + y
                acc[k] = acc.get(k, zero) + c
        else:
            for y, c in _left(word[:i], weights):
                k = y + rest
                acc[k] = acc.get(k, zero) + c
            for y, c in _right(word[i - 1:], weights):
                k = head + y
                acc[k] = acc.get(k, zero) - c
    return {k: v for k, v in acc.items() if v}


# -- sparse matrices --------------------------------------------------------------

class SparseMatrix:
    """Column-major sparse matrix with IntPoly (or int) entries.

    Column j holds the image of the j-th column basis element expressed in
    the row basis ("relations in columns").
    """

    __slots__ = ("nrows", "ncols", "cols", "row_basis", "col_basis", "zero")

    def __init__(self, nrows, ncols, cols=None, row_basis=None, col_basis=None, zero=0):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]
        self.row_basis = row_basis
        self.col_basis = col_basis
        self.zero = zero

    @classmethod
    def from_dense(cls, rows, zero=0):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols, zero=zero)

    @classmethod
    def identity(cls, n, one, zero=0):
        return cls(n, n, [{j: one} for j in range(n)], zero=zero)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, rc):
        r, c = rc
        return self.cols[c].get(r, self.zero)

    def entries(self):
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                yield i, j, v

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def rows(self):
        """Row-major copy: list of dicts col -> value."""
        out = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def to_dense(self):
        d = [[self.zero] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            d[i][j] = v
        return d

    def map(self, fn, zero=0):
        cols = []
        for col in self.cols:
            new = {}
            for i, v in col.items():
                x = fn(v)
                if x:
                    new[i] = x
            cols.append(new)
        return SparseMatrix(self.nrows, self.ncols, cols, self.row_basis, self.col_basis, zero)

    def evaluate(self, c):
        """Specialize t = c entrywise (IntPoly entries -> ints)."""
        return self.map(lambda p: p.evaluate(c) if hasattr(p, "evaluate") else p, 0)

    def transpose(self):
        return SparseMatrix(self.ncols, self.nrows, self.rows(), self.col_basis,
                            self.row_basis, self.zero)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = self.zero
        cols = []
        mine = self.cols
        for col in other.cols:
            acc = {}
            for k, b in col.items():
                for i, a in mine[k].items():
                    acc[i] = acc.get(i, zero) + a * b
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols, self.row_basis, other.col_basis, zero)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self.cols, other.cols):
            acc = dict(a)
            for i, v in b.items():
                acc[i] = acc.get(i, self.zero) - v
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, self.ncols, cols, self.row_basis, self.col_basis, self.zero)

    def is_zero(self):
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# kept for readers who know the matrices by their role in the homology code
SparsePolyMatrix = SparseMatrix


# -- boundary -------------------------------------------------------------------------

def _project(vec, spec):
    return {w: c for w, c in vec.items() if spec.admits(w)}


@lru_cache(maxsize=256)
def boundary(spec: ComplexSpec, n: int, weights=SYMBOLIC) -> SparseMatrix:
    """Matrix of the boundary from degree n to degree n-1 of ``spec``."""
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    col_basis = enumerate_basis(spec, n)
    row_basis = enumerate_basis(spec, n - 1)
    index = basis_index(spec, n - 1)
    cols = []
    for word in col_basis:
        col = {}
        for w, c in boundary_of(word, weights).items():
            r = index.get(w)
            if r is not None:
                col[r] = c
        cols.append(col)
    return SparseMatrix(len(row_basis), len(col_basis), cols, row_basis, col_basis, weights.zero)


def is_closed(spec: ComplexSpec, n: int, weights=SYMBOLIC) -> bool:
    """No boundary output of an admitted degree-n word falls outside the spec
    (the admitted words span a subcomplex of the ambient complex)."""
    for word in enumerate_basis(spec, n):
        for w in boundary_of(word, weights):
            if not spec.admits(w):
                return False
    return True


def verify_boundary_squared(spec: ComplexSpec, n: int, weights=SYMBOLIC) -> bool:
    """boundary_{n-1} o boundary_n == 0 as a symbolic matrix product."""
    if n < 2:
        raise ValueError("need n >= 2")
    return (boundary(spec, n - 1, weights) @ boundary(spec, n, weights)).is_zero()


def _compose(first, side, i, spec, w, memo):
    # apply the projected face (side, i) to every term of first
    zero = w.zero
    acc = {}
    for word, c in first.items():
        key = (side, i, word)
        img = memo.get(key)
        if img is None:
            img = memo[key] = _project(face(side, i, word, w), spec)
        for y, d in img.items():
            acc[y] = acc.get(y, zero) + c * d
    return {k: v for k, v in acc.items() if v}


def verify_precubic(spec: ComplexSpec, n: int, weights=SYMBOLIC) -> bool:
    """d_i^e d_j^f == d_{j-1}^f d_i^e for all i < j <= n and sides e, f,
    on every admitted degree-n word (faces projected to the spec)."""
    if n < 2:
        raise ValueError("need n >= 2")
    memo = {}
    for word in enumerate_basis(spec, n):
        single = {}
        for side in "lr":
            for i in range(1, n + 1):
                single[side, i] = _project(face(side, i, word, weights), spec)
        for j in range(2, n + 1):
            for i in range(1, j):
                for e in "lr":
                    for f in "lr":
                        lhs = _compose(single[f, j], e, i, spec, weights, memo)
                        rhs = _compose(single[e, i], f, j - 1, spec, weights, memo)
                        if lhs != rhs:
                            return False
    return True


def boundary_terms(spec: ComplexSpec, word, weights=SYMBOLIC):
    """Projected boundary of one admitted word, as a dict."""
    return _project(boundary_of(word, weights), spec)
