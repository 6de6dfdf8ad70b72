"""Exact arithmetic in Z[t] and Q[t], where t stands for y^2.

Polynomials are stored densely as tuples of coefficients in ascending
powers of t.  The zero polynomial is the empty tuple.  Degrees that occur
in practice are tiny (a few times the homological degree), so dense
storage is both simpler and faster than a sparse dictionary.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class IntPoly:
    """A polynomial in t with arbitrary-precision integer coefficients."""

    __slots__ = ("c", "_h")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        self.c = _trim(tuple(int(a) for a in coeffs))
        self._h = None

    @classmethod
    def _raw(cls, c):
        # c must already be trimmed
        p = object.__new__(cls)
        p.c = c
        p._h = None
        return p

    @classmethod
    def const(cls, a):
        return cls._raw((a,) if a else ())

    @classmethod
    def monomial(cls, k, a=1):
        return cls._raw((0,) * k + (a,) if a else ())

    # -- basic properties -------------------------------------------------

    @property
    def coeffs(self):
        return self.c

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_unit(self):
        return len(self.c) == 1 and self.c[0] in (1, -1)

    def is_constant(self):
        return len(self.c) <= 1

    def leading(self):
        return self.c[-1] if self.c else 0

    def height(self):
        return max((abs(a) for a in self.c), default=0)

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.c)
        return self._h

    def __repr__(self):
        return f"IntPoly({list(self.c)})"

    def __str__(self):
        return format_poly(self.c)

    # -- ring operations --------------------------------------------------

    def __neg__(self):
        return IntPoly._raw(tuple(-a for a in self.c))

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        elif not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return self if a is self.c else other
        s = list(a)
        for i, x in enumerate(b):
            s[i] += x
        if len(a) == len(b):
            return IntPoly._raw(_trim(s))
        return IntPoly._raw(tuple(s))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        elif not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.c, other.c
        if len(a) >= len(b):
            s = list(a)
            for i, x in enumerate(b):
                s[i] -= x
        else:
            s = [-x for x in b]
            for i, x in enumerate(a):
                s[i] += x
        return IntPoly._raw(_trim(s))

    def __rsub__(self, other):
        if isinstance(other, int):
            return IntPoly.const(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            if not other or not self.c:
                return ZERO
            return IntPoly._raw(tuple(a * other for a in self.c))
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return ZERO
        if len(a) == 1:
            x = a[0]
            return IntPoly._raw(tuple(x * y for y in b))
        if len(b) == 1:
            y = b[0]
            return IntPoly._raw(tuple(x * y for x in a))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def evaluate(self, x):
        """Evaluate at t = x exactly (Horner)."""
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    __call__ = evaluate

    def content(self):
        """Gcd of the coefficients, signed like the leading coefficient."""
        g = 0
        for a in self.c:
            g = gcd(g, a)
            if g == 1:
                break
        if self.c and self.c[-1] < 0:
            g = -g
        return g

    def primitive(self):
        g = self.content()
        if not g:
            return self
        return IntPoly._raw(tuple(a // g for a in self.c))

    def divmod_monic_free(self, other):
        """Pseudo-free long division; returns (q, r) or raises NotDivisible
        when an intermediate integer division is inexact."""
        if not other.c:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.c)
        b = other.c
        db = len(b) - 1
        lb = b[-1]
        if len(r) - 1 < db:
            return ZERO, self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            top = r[k + db]
            if top:
                qk, rem = divmod(top, lb)
                if rem:
                    raise NotDivisible(f"{self} by {other}")
                q[k] = qk
                for j, y in enumerate(b):
                    r[k + j] -= qk * y
        return IntPoly._raw(_trim(q)), IntPoly._raw(_trim(r))

    def exact_div(self, other):
        """self / other in Z[t]; raises NotDivisible if not exact."""
        if isinstance(other, int):
            other = IntPoly.const(other)
        if not other.c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.c:
            return ZERO
        b = other.c
        if len(b) == 1:
            y = b[0]
            out = []
            for x in self.c:
                qx, rx = divmod(x, y)
                if rx:
                    raise NotDivisible(f"{self} by {other}")
                out.append(qx)
            return IntPoly._raw(tuple(out))
        q, r = self.divmod_monic_free(other)
        if r.c:
            raise NotDivisible(f"{self} by {other}")
        return q

    def divides(self, other):
        """True iff self | other in Z[t]."""
        if not self.c:
            return not other.c
        if len(self.c) == 1:
            y = self.c[0]
            return all(x % y == 0 for x in other.c)
        if len(other.c) < len(self.c):
            return not other.c
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    def normalized(self):
        """Associate with positive constant term, or positive leading
        coefficient when the constant term is zero."""
        if not self.c:
            return self
        lead = self.c[0] if self.c[0] else self.c[-1]
        return -self if lead < 0 else self

    def to_rat(self):
        return RatPoly(self.c)


ZERO = IntPoly._raw(())
ONE = IntPoly._raw((1,))
T = IntPoly._raw((0, 1))
ONE_MINUS_T = IntPoly._raw((1, -1))


class RatPoly:
    """A polynomial in t with rational coefficients (the Euclidean ring Q[t])."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.c = _trim(tuple(Fraction(a) for a in coeffs))

    @classmethod
    def _raw(cls, c):
        p = object.__new__(cls)
        p.c = c
        return p

    @property
    def coeffs(self):
        return self.c

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_unit(self):
        return len(self.c) == 1

    def leading(self):
        return self.c[-1] if self.c else Fraction(0)

    def height(self):
        return max((abs(a) for a in self.c), default=Fraction(0))

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.c == other.c
        if isinstance(other, IntPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == ((Fraction(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"RatPoly({[str(a) for a in self.c]})"

    def __str__(self):
        return format_poly(self.c)

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatPoly):
            return x
        if isinstance(x, IntPoly):
            return RatPoly._raw(tuple(Fraction(a) for a in x.c))
        if isinstance(x, (int, Fraction)):
            return RatPoly(x)
        return None

    def __neg__(self):
        return RatPoly._raw(tuple(-a for a in self.c))

    def __add__(self, other):
        other = RatPoly._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        s = list(a)
        for i, x in enumerate(b):
            s[i] += x
        return RatPoly._raw(_trim(s))

    __radd__ = __add__

    def __sub__(self, other):
        other = RatPoly._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = RatPoly._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = RatPoly._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return RatPoly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RatPoly._raw(_trim(out))

    __rmul__ = __mul__

    def evaluate(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __divmod__(self, other):
        other = RatPoly._coerce(other)
        if not other.c:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.c)
        b = other.c
        db = len(b) - 1
        lb = b[-1]
        if len(r) - 1 < db:
            return RatPoly._raw(()), self
        q = [Fraction(0)] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            top = r[k + db]
            if top:
                qk = top / lb
                q[k] = qk
                for j, y in enumerate(b):
                    r[k + j] -= qk * y
        return RatPoly._raw(_trim(q)), RatPoly._raw(_trim(r))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise NotDivisible(f"{self} by {other}")
        return q

    def divides(self, other):
        other = RatPoly._coerce(other)
        if not self.c:
            return not other.c
        return not (other % self)

    def monic(self):
        if not self.c:
            return self
        lc = self.c[-1]
        return RatPoly._raw(tuple(a / lc for a in self.c))

    def is_integral(self):
        return all(a.denominator == 1 for a in self.c)

    def to_int(self):
        """Convert to IntPoly; raises ValueError when a coefficient is not integral."""
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return IntPoly._raw(tuple(int(a) for a in self.c))

    def primitive_int(self):
        """The primitive integer polynomial that is a Q-multiple of self,
        together with the rational factor: self = factor * result."""
        if not self.c:
            return ZERO, Fraction(1)
        den = 1
        for a in self.c:
            den = den * a.denominator // gcd(den, a.denominator)
        ints = [int(a * den) for a in self.c]
        p = IntPoly(ints)
        g = p.content()
        return p.primitive(), Fraction(g, den)

    def normalized(self):
        return self.primitive_int()[0].normalized().to_rat()


def rat_xgcd(a, b):
    """Extended Euclid in Q[t]: returns (g, s, u) with s*a + u*b = g, g monic."""
    a = RatPoly._coerce(a)
    b = RatPoly._coerce(b)
    r0, r1 = a, b
    s0, s1 = RatPoly._raw((Fraction(1),)), RatPoly._raw(())
    u0, u1 = RatPoly._raw(()), RatPoly._raw((Fraction(1),))
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if not r0:
        return r0, s0, u0
    lc = r0.leading()
    inv = RatPoly._raw((1 / lc,))
    return r0 * inv, s0 * inv, u0 * inv


def rat_gcd(a, b):
    return rat_xgcd(a, b)[0]


# -- text form ----------------------------------------------------------------

def format_poly(coeffs, var="y^2"):
    """Render ascending coefficients as text, e.g. (1, 0, -1) -> '1 - y^4'."""
    if not coeffs:
        return "0"
    base, _, exp = var.partition("^")
    step = int(exp) if exp else 1
    parts = []
    for k, a in enumerate(coeffs):
        if not a:
            continue
        if k == 0:
            mono = ""
        else:
            e = step * k
            mono = base if e == 1 else f"{base}^{e}"
        mag = abs(a)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(body if a > 0 else f"-{body}")
        else:
            parts.append(("+ " if a > 0 else "- ") + body)
    return " ".join(parts)


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(y(?:\^(\d+))?)?")


def parse_poly(text, rational=False):
    """Parse the text form produced by format_poly (powers of y must be even)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    coeffs = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
            if e % 2:
                raise ValueError(f"odd power of y in {text!r}")
            k = e // 2
        else:
            k = 0
        coeffs[k] = coeffs.get(k, 0) + sign * coef
        pos = m.end()
    dense = [coeffs.get(k, 0) for k in range(max(coeffs) + 1)]
    if rational:
        return RatPoly(dense)
    if any(Fraction(a).denominator != 1 for a in dense):
        raise ValueError(f"non-integer coefficient in {text!r}")
    return IntPoly([int(a) for a in dense])


def q_integer(n):
    """[n]_t = 1 + t + ... + t^(n-1)."""
    return IntPoly._raw((1,) * n)


def q_factorial(n):
    """[n]_t! = [1]_t [2]_t ... [n]_t."""
    out = ONE
    for k in range(1, n + 1):
        out = out * q_integer(k)
    return out


# -- matrices over Z[t] ---------------------------------------------------------

def bareiss_det(rows):
    """Determinant of a square matrix of IntPoly by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return ONE
    a = [[x if isinstance(x, IntPoly) else IntPoly.const(x) for x in row] for row in rows]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                num = piv * row_i[j] - aik * row_k[j]
                row_i[j] = num.exact_div(prev) if prev != ONE else num
            row_i[k] = ZERO
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def is_unimodular(rows):
    """True iff the square IntPoly matrix has determinant +1 or -1."""
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix is not square")
    return bareiss_det(rows).is_unit()
