"""Smith normal form over Z, Z[t] and Q[t].

One sparse elimination engine runs over a small domain adapter.  Pivots
are chosen smallest-first (absolute value over Z, (degree, height) over
polynomials, Markowitz fill estimate as tie-break), so the many unit
entries of boundary matrices are eliminated before anything expensive
happens.  When a pivot does not divide an entry in its row or column the
engine either takes a Euclidean step (leading coefficient a unit) or a
2x2 Bezout transform of determinant 1.

Over Z[t] a Bezout transform only exists when the Q[t] Bezout
coefficients happen to be integral.  If that ever fails the whole matrix
is redone over Q[t] and the result is flagged uncertified until
:func:`certify_over_Zt` manages to rescale P and Q back into Z[t].

P and Q are stored as operation logs rather than matrices; they are
materialized on demand.  :func:`verify_residual` replays the logs
independently of the engine, one row of D at a time.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .complex import SparseMatrix
from .ring import ONE, ZERO, IntPoly, NotDivisible, RatPoly, rat_xgcd


class NotBezout(ArithmeticError):
    """No unimodular 2x2 transform over this domain was found."""


# -- domains ----------------------------------------------------------------------

def _int_xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class IntDomain:
    tag = "Z"
    zero = 0
    one = 1

    @staticmethod
    def key(a):
        return abs(a)

    @staticmethod
    def is_unit(a):
        return a == 1 or a == -1

    @staticmethod
    def quo(b, a):
        q, r = divmod(b, a)
        return None if r else q

    @staticmethod
    def euclid(b, a):
        """Symmetric division: b = k a + r with |r| <= |a| / 2."""
        k, r = divmod(b, a)
        if 2 * abs(r) > abs(a):
            k += 1
            r -= a
        return k, r

    @staticmethod
    def bezout(a, b):
        g, s, u = _int_xgcd(a, b)
        return g, s, u, a // g, b // g

    @staticmethod
    def divides(a, b):
        return b % a == 0

    @staticmethod
    def normalizer(a):
        """Unit c with c*a in normal form."""
        return -1 if a < 0 else 1

    @staticmethod
    def unit_inverse(c):
        return c


class ZtDomain:
    """Z[t]; Bezout via Q[t] xgcd, accepted only when integral."""

    tag = "Z[t]"
    zero = ZERO
    one = ONE

    @staticmethod
    def key(a):
        return (a.degree, a.height())

    @staticmethod
    def is_unit(a):
        return a.is_unit()

    @staticmethod
    def quo(b, a):
        try:
            return b.exact_div(a)
        except NotDivisible:
            return None

    @staticmethod
    def euclid(b, a):
        lead = a.leading()
        if lead != 1 and lead != -1:
            return None
        return b.divmod_monic_free(a)

    @staticmethod
    def bezout(a, b):
        g, s, u = rat_xgcd(a.to_rat(), b.to_rat())
        c = gcd(a.content(), b.content())
        G, _ = g.primitive_int()
        G = G * c
        lam = Fraction(G.leading())  # g is monic, so G = lam * g
        s = s * RatPoly._raw((lam,))
        u = u * RatPoly._raw((lam,))
        if not (s.is_integral() and u.is_integral()):
            raise NotBezout(f"({a}, {b}) is not a principal ideal step over Z[t]")
        try:
            ag, bg = a.exact_div(G), b.exact_div(G)
        except NotDivisible:
            raise NotBezout(f"gcd of ({a}, {b}) not integral") from None
        return G, s.to_int(), u.to_int(), ag, bg

    @staticmethod
    def divides(a, b):
        return a.divides(b)

    @staticmethod
    def normalizer(a):
        return ONE if a.normalized() == a else -ONE

    @staticmethod
    def unit_inverse(c):
        return c


_RONE = RatPoly._raw((Fraction(1),))
_RZERO = RatPoly._raw(())


class QtDomain:
    """Q[t], a Euclidean domain."""

    tag = "Q[t]"
    zero = _RZERO
    one = _RONE

    @staticmethod
    def key(a):
        return (a.degree, max(len(str(x)) for x in a.coeffs))

    @staticmethod
    def is_unit(a):
        return a.degree == 0

    @staticmethod
    def quo(b, a):
        q, r = divmod(b, a)
        return None if r else q

    @staticmethod
    def euclid(b, a):
        return divmod(b, a)

    @staticmethod
    def bezout(a, b):
        g, s, u = rat_xgcd(a, b)
        return g, s, u, a.exact_div(g), b.exact_div(g)

    @staticmethod
    def divides(a, b):
        return a.divides(b)

    @staticmethod
    def normalizer(a):
        target = a.normalized()
        return RatPoly._raw((target.leading() / a.leading(),))

    @staticmethod
    def unit_inverse(c):
        return RatPoly._raw((1 / c.leading(),))


DOMAINS = {"Z": IntDomain, "Z[t]": ZtDomain, "Q[t]": QtDomain}


# -- decomposition record -----------------------------------------------------------

@dataclass
class SmithDecomposition:
    """D = P A Q with P, Q kept as operation logs.

    ``row_ops``/``col_ops`` are applied in order; ``row_perm[k]``/``col_perm[k]``
    give the original row/column that lands in position k of D.
    """

    nrows: int
    ncols: int
    diagonal: list
    domain: str
    row_ops: list = field(default_factory=list, repr=False)
    col_ops: list = field(default_factory=list, repr=False)
    row_perm: list = field(default_factory=list, repr=False)
    col_perm: list = field(default_factory=list, repr=False)
    at: int | None = None
    certified_over_Zt: bool = False
    residual_ok: bool | None = None
    row_scale: dict = field(default_factory=dict, repr=False)
    col_scale: dict = field(default_factory=dict, repr=False)
    notes: list = field(default_factory=list)

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def dom(self):
        return DOMAINS[self.domain]

    def elementary_divisors(self):
        return list(self.diagonal)

    @property
    def D(self):
        cols = [dict() for _ in range(self.ncols)]
        for k, d in enumerate(self.diagonal):
            cols[k] = {k: d}
        return SparseMatrix(self.nrows, self.ncols, cols, zero=self.dom.zero)

    @property
    def P(self):
        return materialize_P(self)

    @property
    def Q(self):
        return materialize_Q(self)

    def det_P(self):
        return _ops_det(self.row_ops, self.row_perm, self.dom, self.row_scale)

    def det_Q(self):
        return _ops_det(self.col_ops, self.col_perm, self.dom, self.col_scale)


def _perm_sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _ops_det(ops, perm, dom, scale):
    det = dom.one
    for op in ops:
        kind = op[0]
        if kind == "2":
            _, i, j, s, u, v, w = op
            det = det * (s * w - u * v)
        elif kind == "s":
            det = det * op[2]
    for c in scale.values():
        det = det * c
    return det * _perm_sign(perm)


# -- the engine -----------------------------------------------------------------------

class _Engine:
    def __init__(self, A: SparseMatrix, dom):
        self.dom = dom
        self.nrows, self.ncols = A.nrows, A.ncols
        self.rows = {}
        self.colsets = {}
        for j, col in enumerate(A.cols):
            for i, v in col.items():
                if v:
                    self.rows.setdefault(i, {})[j] = v
                    self.colsets.setdefault(j, set()).add(i)
        self.row_ops = []
        self.col_ops = []
        self.heap = []
        for i, row in self.rows.items():
            for j, v in row.items():
                self._push(i, j, v)

    def _cost(self, i, j):
        return (len(self.rows[i]) - 1) * (len(self.colsets[j]) - 1)

    def _push(self, i, j, v):
        heapq.heappush(self.heap, (self.dom.key(v), self._cost(i, j), i, j))

    def _set(self, i, j, v):
        row = self.rows.setdefault(i, {})
        if v:
            old = row.get(j)
            row[j] = v
            self.colsets.setdefault(j, set()).add(i)
            if old is None or self.dom.key(old) != self.dom.key(v):
                self._push(i, j, v)
        else:
            row.pop(j, None)
            cs = self.colsets.get(j)
            if cs is not None:
                cs.discard(i)

    def _rebuild_heap(self):
        self.heap = [(self.dom.key(v), self._cost(i, j), i, j)
                     for i, row in self.rows.items() for j, v in row.items()]
        heapq.heapify(self.heap)

    # row_i += c * row_j
    def radd(self, i, j, c):
        zero = self.dom.zero
        ri = self.rows.get(i, {})
        for col, v in list(self.rows[j].items()):
            self._set(i, col, ri.get(col, zero) + c * v)
        self.row_ops.append(("a", i, j, c))

    def cadd(self, i, j, c):
        zero = self.dom.zero
        for r in list(self.colsets.get(j, ())):
            row = self.rows[r]
            self._set(r, i, row.get(i, zero) + c * row[j])
        self.col_ops.append(("a", i, j, c))

    # (row_i, row_j) <- (s row_i + u row_j, v row_i + w row_j)
    def r2(self, i, j, s, u, v, w):
        zero = self.dom.zero
        ri = dict(self.rows.get(i, {}))
        rj = dict(self.rows.get(j, {}))
        for col in set(ri) | set(rj):
            a, b = ri.get(col, zero), rj.get(col, zero)
            self._set(i, col, s * a + u * b)
            self._set(j, col, v * a + w * b)
        self.row_ops.append(("2", i, j, s, u, v, w))

    def c2(self, i, j, s, u, v, w):
        zero = self.dom.zero
        touched = set(self.colsets.get(i, ())) | set(self.colsets.get(j, ()))
        for r in touched:
            row = self.rows[r]
            a, b = row.get(i, zero), row.get(j, zero)
            self._set(r, i, s * a + u * b)
            self._set(r, j, v * a + w * b)
        self.col_ops.append(("2", i, j, s, u, v, w))

    def _next_pivot(self):
        """Smallest key first; among equal keys the lowest current Markowitz
        cost (stored costs are refreshed lazily when popped)."""
        dom = self.dom
        nnz = sum(len(r) for r in self.rows.values())
        if len(self.heap) > 4 * nnz + 1024:
            self._rebuild_heap()
        heap = self.heap
        while heap:
            key, cost, i, j = heapq.heappop(heap)
            row = self.rows.get(i)
            if row is None:
                continue
            v = row.get(j)
            if v is None or dom.key(v) != key:
                continue
            fresh = self._cost(i, j)
            if fresh > cost and heap and heap[0][:2] < (key, fresh):
                heapq.heappush(heap, (key, fresh, i, j))
                continue
            return i, j
        return None

    def _reduce(self, p, q):
        """Clear column q and row p around the pivot; returns final (p, q).

        Entries the pivot does not divide are replaced by remainders and the
        pivot moves to the smallest one; a Bezout transform is used only
        when no division with remainder exists.
        """
        while True:
            p, moved = self._sweep_column(p, q)
            if moved:
                continue
            q, moved = self._sweep_row(p, q)
            if not moved:
                return p, q

    def _sweep_column(self, p, q):
        dom = self.dom
        best, moved = None, False
        for i in list(self.colsets[q]):
            if i == p:
                continue
            a = self.rows[p][q]
            b = self.rows[i][q]
            k = dom.quo(b, a)
            if k is not None:
                self.radd(i, p, -k)
                continue
            step = dom.euclid(b, a)
            if step is not None:
                k, r = step
                if k:
                    self.radd(i, p, -k)
                if best is None or dom.key(r) < dom.key(self.rows[best][q]):
                    best = i
                continue
            g, s, u, ag, bg = dom.bezout(a, b)
            self.r2(p, i, s, u, -bg, ag)
            moved = True
        if best is not None and best in self.colsets[q]:
            return best, True
        return p, moved

    def _sweep_row(self, p, q):
        dom = self.dom
        best, moved = None, False
        for j in list(self.rows[p]):
            if j == q:
                continue
            a = self.rows[p][q]
            b = self.rows[p][j]
            k = dom.quo(b, a)
            if k is not None:
                self.cadd(j, q, -k)
                continue
            step = dom.euclid(b, a)
            if step is not None:
                k, r = step
                if k:
                    self.cadd(j, q, -k)
                if best is None or dom.key(r) < dom.key(self.rows[p][best]):
                    best = j
                continue
            g, s, u, ag, bg = dom.bezout(a, b)
            self.c2(q, j, s, u, -bg, ag)
            moved = True
        if best is not None and best in self.rows[p]:
            return best, True
        return q, moved

    def _retire(self, p, q):
        for j in self.rows.pop(p):
            self.colsets[j].discard(p)
        del self.colsets[q]

    def run(self):
        pivots = []
        while True:
            nxt = self._next_pivot()
            if nxt is None:
                break
            p, q = self._reduce(*nxt)
            pivots.append([p, q, self.rows[p][q]])
            self._retire(p, q)
        return pivots


def _fix_chain(pivots, eng):
    """Enforce d_1 | d_2 | ... by gcd/lcm swaps on pairs of pivots."""
    dom = eng.dom
    pivots.sort(key=lambda x: dom.key(x[2]))
    n = len(pivots)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = pivots[i][2], pivots[j][2]
            if dom.is_unit(a) or dom.divides(a, b):
                continue
            p1, q1, _ = pivots[i]
            p2, q2, _ = pivots[j]
            g, s, u, ag, bg = dom.bezout(a, b)
            # row p1 += row p2; column Bezout; clear the (p2, q1) entry
            eng.row_ops.append(("a", p1, p2, dom.one))
            eng.col_ops.append(("2", q1, q2, s, u, -bg, ag))
            eng.row_ops.append(("a", p2, p1, -(u * bg)))
            pivots[i][2] = g
            pivots[j][2] = ag * b
    return pivots


def _normalize(pivots, eng):
    dom = eng.dom
    for piv in pivots:
        c = dom.normalizer(piv[2])
        if c != dom.one:
            eng.row_ops.append(("s", piv[0], c))
            piv[2] = c * piv[2]


def _smith(A: SparseMatrix, dom, at=None) -> SmithDecomposition:
    eng = _Engine(A, dom)
    pivots = eng.run()
    _fix_chain(pivots, eng)
    _normalize(pivots, eng)
    used_r = [p for p, _, _ in pivots]
    used_c = [q for _, q, _ in pivots]
    sr, sc = set(used_r), set(used_c)
    row_perm = used_r + [i for i in range(A.nrows) if i not in sr]
    col_perm = used_c + [j for j in range(A.ncols) if j not in sc]
    return SmithDecomposition(
        nrows=A.nrows, ncols=A.ncols, diagonal=[d for _, _, d in pivots],
        domain=dom.tag, row_ops=eng.row_ops, col_ops=eng.col_ops,
        row_perm=row_perm, col_perm=col_perm, at=at,
        certified_over_Zt=(dom is ZtDomain),
    )


# -- public entry points ----------------------------------------------------------------

def _as_sparse(A, zero=0):
    if isinstance(A, SparseMatrix):
        return A
    return SparseMatrix.from_dense(A, zero)


def snf_integer(A, at=None, check=True) -> SmithDecomposition:
    """SNF over Z.  ``A`` is a SparseMatrix of ints or a list of rows;
    ``at`` only labels the specialization the matrix came from."""
    A = _as_sparse(A)
    dec = _smith(A, IntDomain, at)
    dec.certified_over_Zt = False
    if check:
        dec.residual_ok = verify_residual(A, dec)
        if not dec.residual_ok:
            raise AssertionError("SNF residual PAQ - D is nonzero")
    return dec


def _to_rat_matrix(A):
    return A.map(lambda p: p.to_rat() if isinstance(p, IntPoly) else RatPoly((p,)), _RZERO)


def snf_polyQ(A, check=True, certify=True) -> SmithDecomposition:
    """SNF of an IntPoly matrix.

    Tries the Z[t] engine first; a successful run is already a Z[t]
    decomposition (every operation integral with unit determinant).  On a
    failed Bezout step the computation restarts over Q[t].
    """
    A = _as_sparse(A, ZERO)
    try:
        dec = _smith(A, ZtDomain)
    except NotBezout as exc:
        dec = _smith(_to_rat_matrix(A), QtDomain)
        dec.certified_over_Zt = False
        dec.notes.append(f"Z[t] engine fell back to Q[t]: {exc}")
        if certify:
            certify_over_Zt(dec, A)
    if check:
        src = A if dec.domain == "Z[t]" else _to_rat_matrix(A)
        dec.residual_ok = verify_residual(src, dec)
        if not dec.residual_ok:
            raise AssertionError("SNF residual PAQ - D is nonzero")
        if dec.certified_over_Zt:
            det_p, det_q = dec.det_P(), dec.det_Q()
            if not (_is_pm_one(det_p) and _is_pm_one(det_q)):
                raise AssertionError("certified decomposition with non-unit determinant")
    return dec


def _is_pm_one(x):
    if isinstance(x, int):
        return x in (1, -1)
    return x.degree == 0 and x.coeffs[0] in (1, -1)


def certify_over_Zt(dec: SmithDecomposition, A=None) -> bool:
    """Try to move a decomposition into GL(Z[t]).

    A Z[t]-engine result is certified by construction (integral operations,
    unit structural determinant), which is re-checked here.  A Q[t] result
    is materialized, each row of P and column of Q is rescaled by a
    rational constant to its primitive integral form, and the result is
    accepted when the rescaled P, Q and D are integral and det P, det Q are
    +-1.  On success the decomposition is converted to Z[t] in place.
    """
    if dec.domain == "Z":
        dec.certified_over_Zt = False
        return False
    if dec.domain == "Z[t]":
        ok = _is_pm_one(dec.det_P()) and _is_pm_one(dec.det_Q())
        if ok and A is not None:
            ok = verify_residual(A, dec)
        dec.certified_over_Zt = ok
        return ok
    P = materialize_P(dec)
    Q = materialize_Q(dec)
    row_scale = {}
    for i, row in enumerate(P.rows()):
        row_scale[i] = _primitive_factor(row.values())
    col_scale = {}
    for j, col in enumerate(Q.cols):
        col_scale[j] = _primitive_factor(col.values())
    new_diag = []
    for k, d in enumerate(dec.diagonal):
        dd = d * RatPoly._raw((row_scale[k] * col_scale[k],))
        if not dd.is_integral():
            dec.certified_over_Zt = False
            return False
        new_diag.append(dd)
    detp = dec.det_P().leading() if dec.det_P() else 0
    detq = dec.det_Q().leading() if dec.det_Q() else 0
    for c in row_scale.values():
        detp *= c
    for c in col_scale.values():
        detq *= c
    if abs(detp) != 1 or abs(detq) != 1:
        dec.certified_over_Zt = False
        dec.notes.append("rescaled P or Q has non-unit determinant")
        return False
    Pi = SparseMatrix(P.nrows, P.ncols, [
        {i: v * RatPoly._raw((row_scale[i],)) for i, v in col.items()} for col in P.cols
    ], zero=_RZERO)
    Qi = SparseMatrix(Q.nrows, Q.ncols, [
        {i: v * RatPoly._raw((col_scale[j],)) for i, v in col.items()}
        for j, col in enumerate(Q.cols)
    ], zero=_RZERO)
    if not all(v.is_integral() for _, _, v in Pi.entries()):
        return False
    if not all(v.is_integral() for _, _, v in Qi.entries()):
        return False
    if A is not None:
        prod = Pi @ _to_rat_matrix(A) @ Qi
        expect = {(k, k): d for k, d in enumerate(new_diag)}
        got = {(i, j): v for i, j, v in prod.entries()}
        if got != expect:
            return False
    # rewrite as an explicit Z[t] decomposition with materialized P, Q
    to_int = lambda v: v.to_int()
    dec.domain = "Z[t]"
    dec.diagonal = [d.to_int() for d in new_diag]
    dec.row_ops = [("M", Pi.map(to_int, ZERO))]
    dec.col_ops = [("M", Qi.map(to_int, ZERO))]
    dec.row_perm = list(range(dec.nrows))
    dec.col_perm = list(range(dec.ncols))
    dec.row_scale = {0: ONE if detp == 1 else -ONE}
    dec.col_scale = {0: ONE if detq == 1 else -ONE}
    dec.certified_over_Zt = True
    dec.notes.append("certified by constant rescaling of the Q[t] decomposition")
    return True


def _primitive_factor(values):
    # rational c such that c * (row) is integral and primitive
    den = 1
    for v in values:
        for a in v.coeffs:
            den = den * a.denominator // gcd(den, a.denominator)
    g = 0
    for v in values:
        for a in v.coeffs:
            g = gcd(g, int(a * den))
    return Fraction(den, g) if g else Fraction(1)


# -- materialization and residual checks ------------------------------------------------------

def _apply_row_op_to_rows(rows, op, zero):
    kind = op[0]
    if kind == "a":
        _, i, j, c = op
        ri = rows[i]
        for col, v in rows[j].items():
            x = ri.get(col, zero) + c * v
            if x:
                ri[col] = x
            else:
                ri.pop(col, None)
    elif kind == "2":
        _, i, j, s, u, v, w = op
        ri, rj = rows[i], rows[j]
        ni, nj = {}, {}
        for col in set(ri) | set(rj):
            a, b = ri.get(col, zero), rj.get(col, zero)
            x, y = s * a + u * b, v * a + w * b
            if x:
                ni[col] = x
            if y:
                nj[col] = y
        rows[i], rows[j] = ni, nj
    elif kind == "s":
        _, i, c = op
        rows[i] = {col: c * v for col, v in rows[i].items()}
    else:
        raise ValueError(f"unknown op {kind!r}")


def materialize_P(dec: SmithDecomposition) -> SparseMatrix:
    dom = dec.dom
    if dec.row_ops and dec.row_ops[0][0] == "M":
        return dec.row_ops[0][1]
    rows = [{i: dom.one} for i in range(dec.nrows)]
    for op in dec.row_ops:
        _apply_row_op_to_rows(rows, op, dom.zero)
    permuted = [rows[i] for i in dec.row_perm]
    cols = [dict() for _ in range(dec.nrows)]
    for r, row in enumerate(permuted):
        for c, v in row.items():
            cols[c][r] = v
    return SparseMatrix(dec.nrows, dec.nrows, cols, zero=dom.zero)


def materialize_Q(dec: SmithDecomposition) -> SparseMatrix:
    dom = dec.dom
    if dec.col_ops and dec.col_ops[0][0] == "M":
        return dec.col_ops[0][1]
    # columns of Q evolve exactly like rows of P under the transposed ops
    cols = [{j: dom.one} for j in range(dec.ncols)]
    for op in dec.col_ops:
        _apply_row_op_to_rows(cols, op, dom.zero)
    return SparseMatrix(dec.ncols, dec.ncols, [cols[j] for j in dec.col_perm], zero=dom.zero)


def _left_row(ops, k0, nrows, dom):
    """Row k0 of the product F_last ... F_1 (row ops applied in order).

    Computed as e^T F_last ... F_1, i.e. the row ops' transposes applied
    to a row vector in reverse order."""
    x = {k0: dom.one}
    zero = dom.zero
    for op in reversed(ops):
        kind = op[0]
        if kind == "a":
            # F = I + c e_i e_j^T ; (x^T F)_j += c x_i
            _, i, j, c = op
            xi = x.get(i)
            if xi is not None:
                y = x.get(j, zero) + c * xi
                if y:
                    x[j] = y
                else:
                    x.pop(j, None)
        elif kind == "2":
            _, i, j, s, u, v, w = op
            a, b = x.get(i, zero), x.get(j, zero)
            if a or b:
                ni, nj = a * s + b * v, a * u + b * w
                if ni:
                    x[i] = ni
                else:
                    x.pop(i, None)
                if nj:
                    x[j] = nj
                else:
                    x.pop(j, None)
        elif kind == "s":
            _, i, c = op
            if i in x:
                x[i] = x[i] * c
        else:
            raise ValueError(f"unknown op {kind!r}")
    return x


def _right_apply(x, ops, zero):
    """Row vector x times E_1 E_2 ... (column ops applied in order)."""
    for op in ops:
        kind = op[0]
        if kind == "a":
            # E = I + c e_j e_i^T ; (x^T E)_i += c x_j
            _, i, j, c = op
            xj = x.get(j)
            if xj is not None:
                y = x.get(i, zero) + c * xj
                if y:
                    x[i] = y
                else:
                    x.pop(i, None)
        elif kind == "2":
            _, i, j, s, u, v, w = op
            a, b = x.get(i, zero), x.get(j, zero)
            if a or b:
                ni, nj = s * a + u * b, v * a + w * b
                if ni:
                    x[i] = ni
                else:
                    x.pop(i, None)
                if nj:
                    x[j] = nj
                else:
                    x.pop(j, None)
        elif kind == "s":
            _, i, c = op
            if i in x:
                x[i] = x[i] * c
        else:
            raise ValueError(f"unknown op {kind!r}")
    return x


def verify_residual(A: SparseMatrix, dec: SmithDecomposition) -> bool:
    """Exact check of P A Q == D, one row of D at a time.

    Row k of D is e_k^T P A Q; P's row is obtained from the row-op log,
    multiplied into A's rows, and pushed through the column-op log.  No
    code is shared with the elimination engine.
    """
    dom = dec.dom
    zero = dom.zero
    if dec.row_ops and dec.row_ops[0][0] == "M":
        prod = dec.row_ops[0][1] @ A @ dec.col_ops[0][1]
        expect = {(k, k): d for k, d in enumerate(dec.diagonal)}
        return {(i, j): v for i, j, v in prod.entries()} == expect
    arows = A.rows()
    inv_col = {j: k for k, j in enumerate(dec.col_perm)}
    for k in range(dec.nrows):
        prow = _left_row(dec.row_ops, dec.row_perm[k], dec.nrows, dom)
        acc = {}
        for i, c in prow.items():
            for j, v in arows[i].items():
                acc[j] = acc.get(j, zero) + c * v
        acc = {j: v for j, v in acc.items() if v}
        out = _right_apply(acc, dec.col_ops, zero)
        got = {inv_col[j]: v for j, v in out.items() if v}
        want = {k: dec.diagonal[k]} if k < len(dec.diagonal) else {}
        if got != want:
            return False
    return True


def verify_residual_dense(A: SparseMatrix, dec: SmithDecomposition) -> bool:
    """P A Q == D by materializing P and Q (small matrices only)."""
    prod = materialize_P(dec) @ A @ materialize_Q(dec)
    expect = {(k, k): d for k, d in enumerate(dec.diagonal)}
    return {(i, j): v for i, j, v in prod.entries()} == expect


def divisibility_chain_holds(dec: SmithDecomposition) -> bool:
    dom = dec.dom
    d = dec.diagonal
    return all(dom.divides(d[i], d[i + 1]) for i in range(len(d) - 1))


# -- rank over Q(t) -------------------------------------------------------------------------

def rank_over_Qt(A) -> int:
    """Rank over the fraction field Q(t) by fraction-free row elimination.

    Rows are combined as row_i <- a*row_i - b*row_p and divided by their
    integer content; every step is invertible over Q(t).
    """
    A = _as_sparse(A, ZERO)
    rows = [r for r in A.rows() if r]
    rows = [{j: (v if isinstance(v, IntPoly) else IntPoly.const(v)) for j, v in r.items()}
            for r in rows]
    rank = 0
    while rows:
        # pivot: the smallest entry among the shortest rows
        best = None
        for idx, r in enumerate(rows):
            for j, v in r.items():
                key = (v.degree, len(r), v.height())
                if best is None or key < best[0]:
                    best = (key, idx, j)
        _, idx, col = best
        prow = rows.pop(idx)
        a = prow[col]
        rank += 1
        nxt = []
        for r in rows:
            b = r.get(col)
            if b is None:
                nxt.append(r)
                continue
            g = _poly_common(a, b)
            ca, cb = a.exact_div(g), b.exact_div(g)
            new = {}
            for j in set(r) | set(prow):
                x = ca * r.get(j, ZERO) - cb * prow.get(j, ZERO)
                if x:
                    new[j] = x
            new.pop(col, None)
            if new:
                c = 0
                for v in new.values():
                    c = gcd(c, v.content())
                if c > 1:
                    new = {j: IntPoly._raw(tuple(x // c for x in v.coeffs)) for j, v in new.items()}
                nxt.append(new)
        rows = nxt
    return rank


def _poly_common(a, b):
    # a cheap common factor: integer content gcd, or the whole of a when a | b
    if a.divides(b):
        return a
    return IntPoly.const(gcd(a.content(), b.content()) or 1)


def rank_mod_p(A, at, p=2_147_483_647) -> int:
    """Rank of A at t = ``at`` over GF(p): a lower bound for the Q(t) rank."""
    A = _as_sparse(A, ZERO)
    rows = []
    for r in A.rows():
        rr = {}
        for j, v in r.items():
            x = (v.evaluate(at) if isinstance(v, IntPoly) else v) % p
            if x:
                rr[j] = x
        if rr:
            rows.append(rr)
    rank = 0
    while rows:
        idx = min(range(len(rows)), key=lambda i: len(rows[i]))
        prow = rows.pop(idx)
        col = next(iter(prow))
        inv = pow(prow[col], p - 2, p)
        nxt = []
        for r in rows:
            b = r.get(col)
            if b is None:
                nxt.append(r)
                continue
            f = b * inv % p
            for j, v in prow.items():
                x = (r.get(j, 0) - f * v) % p
                if x:
                    r[j] = x
                else:
                    r.pop(j, None)
            if r:
                nxt.append(r)
        rows = nxt
        rank += 1
    return rank


# -- convenience ----------------------------------------------------------------------------

def evaluate_matrix(A: SparseMatrix, c: int) -> SparseMatrix:
    return A.evaluate(c)


def torsion_invariants(dec: SmithDecomposition):
    """Non-unit nonzero diagonal entries, sign-normalized."""
    dom = dec.dom
    out = []
    for d in dec.diagonal:
        if dom.is_unit(d):
            continue
        if dec.domain == "Z":
            out.append(abs(d))
        elif dec.domain == "Q[t]":
            # defined up to a rational unit; report the primitive integral form
            out.append(d.primitive_int()[0].normalized())
        else:
            out.append(d.normalized())
    return out
