"""Homology modules from Smith normal forms, and the binomial assembly.

H_n of a complex is read off two boundary matrices: the free rank is
dim C_n - rank d_n - rank d_{n+1}, the torsion is the non-unit elementary
divisors of d_{n+1}.  Over Z[t] torsion invariants are IntPoly in normal
form (positive constant term); at a specialization t = c they are
positive integers.

The full complex C^m splits as a sum of binomial(m-1, j-1) copies of
C^{jf}, so H_n(C^m) is assembled from the n + 1 "initial conditions"
H_n(C^{jf}), j <= n + 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .complex import ComplexSpec, Final, boundary, rank as chain_rank
from .ring import IntPoly, format_poly, parse_poly
from .smith import snf_integer, snf_polyQ, torsion_invariants
from .ybop import Weights

# the torsion generators used in triple / quadruple notation
P1 = IntPoly((1, -1))                      # 1 - y^2
P2 = IntPoly((1, 0, -1))                   # 1 - y^4
P3 = IntPoly((1, -1)) * IntPoly((1, 1)) * IntPoly((1, 1, 1))   # (1-y^2)(1+y^2)(1+y^2+y^4)
GENERATORS = (P1, P2, P3)


def _gen_at(c):
    return tuple(abs(p.evaluate(c)) for p in GENERATORS)


@dataclass
class HomologyModule:
    """free_rank copies of k plus a multiset of cyclic torsion summands k/(d).

    ``at`` is None for modules over Z[t] and the integer c for modules over
    Z obtained at t = c (torsion entries are then positive integers).
    """

    free_rank: int
    torsion: Counter = field(default_factory=Counter)
    at: int | None = None
    provenance: str = "direct"
    certified: bool = True

    def __post_init__(self):
        self.torsion = Counter({k: v for k, v in Counter(self.torsion).items() if v})
        for k in self.torsion:
            if self.at is None:
                if not isinstance(k, IntPoly) or k.is_unit() or not k:
                    raise ValueError(f"bad torsion invariant {k!r}")
            elif not isinstance(k, int) or k <= 1:
                raise ValueError(f"bad torsion invariant {k!r}")

    @classmethod
    def from_counts(cls, counts, at=None, provenance="closed-form"):
        """(a, b, c[, d]) in the triple/quadruple notation."""
        free, *rest = counts
        gens = GENERATORS if at is None else _gen_at(at)
        tors = Counter({g: n for g, n in zip(gens, rest) if n})
        return cls(free, tors, at, provenance)

    def counts(self, length=3):
        """(free, #k/(1-y^2), #k/(1-y^4)[, #k/(...)]); raises if other
        invariants are present."""
        gens = (GENERATORS if self.at is None else _gen_at(self.at))[:length - 1]
        extra = set(self.torsion) - set(gens)
        if extra:
            raise ValueError(f"torsion outside the notation: {sorted(map(str, extra))}")
        return (self.free_rank,) + tuple(self.torsion.get(g, 0) for g in gens)

    def triple(self):
        return self.counts(3)

    def quadruple(self):
        return self.counts(4)

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other):
        if self.at != other.at:
            raise ValueError("cannot add modules over different rings")
        return HomologyModule(self.free_rank + other.free_rank, self.torsion + other.torsion,
                              self.at, "assembled", self.certified and other.certified)

    def scaled(self, k):
        return HomologyModule(self.free_rank * k, Counter({g: n * k for g, n in self.torsion.items()}),
                              self.at, "assembled", self.certified)

    def __eq__(self, other):
        if not isinstance(other, HomologyModule):
            return NotImplemented
        return (self.at == other.at and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def _sorted_torsion(self):
        if self.at is None:
            return sorted(self.torsion.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs))
        return sorted(self.torsion.items())

    def torsion_text(self):
        parts = []
        for g, n in self._sorted_torsion():
            name = format_poly(g.coeffs).replace(" ", "") if self.at is None else f"Z{g}"
            parts.append(f"{name} ×{n}")
        return ", ".join(parts)

    def notation(self):
        """Triple/quadruple text when possible, else an explicit sum."""
        for length in (3, 4):
            try:
                c = self.counts(length)
            except ValueError:
                continue
            return "(" + ",".join(map(str, c)) + ")"
        return self.direct_sum_text()

    def direct_sum_text(self):
        ring = "k" if self.at is None else "Z"
        parts = []
        if self.free_rank:
            parts.append(ring if self.free_rank == 1 else f"{ring}^{self.free_rank}")
        for g, n in self._sorted_torsion():
            name = f"{ring}/({format_poly(g.coeffs)})" if self.at is None else f"Z{g}"
            parts.append(name if n == 1 else f"{n}{name}")
        return " + ".join(parts) if parts else "0"

    def evaluate(self, c):
        """Specialize a Z[t] module at t = c.  Valid as a group when each
        invariant stays nonzero; units at c simply disappear."""
        if self.at is not None:
            raise ValueError("already specialized")
        tors = Counter()
        free = self.free_rank
        for g, n in self.torsion.items():
            v = abs(g.evaluate(c))
            if v == 0:
                free += n
            elif v > 1:
                tors[v] += n
        return HomologyModule(free, tors, c, self.provenance, self.certified)

    def to_json(self):
        if self.at is None:
            tors = [[format_poly(g.coeffs), n] for g, n in self._sorted_torsion()]
        else:
            tors = [[g, n] for g, n in self._sorted_torsion()]
        return {"free_rank": self.free_rank, "torsion": tors, "at": self.at,
                "provenance": self.provenance, "certified": self.certified}

    @classmethod
    def from_json(cls, obj):
        at = obj.get("at")
        if at is None:
            tors = Counter({parse_poly(s): n for s, n in obj["torsion"]})
        else:
            tors = Counter({int(g): n for g, n in obj["torsion"]})
        return cls(obj["free_rank"], tors, at, obj.get("provenance", "direct"),
                   obj.get("certified", True))

    def __str__(self):
        return self.notation()


def zero_module(at=None, provenance="direct"):
    return HomologyModule(0, Counter(), at, provenance)


# -- direct computation -----------------------------------------------------------

_SNF_MEMO = {}


def snf_of_boundary(spec: ComplexSpec, n: int, at=None):
    """Memoized SNF of d_n; ``at`` None means symbolic over Z[t]."""
    key = (spec, n, at)
    dec = _SNF_MEMO.get(key)
    if dec is None:
        if at is None:
            dec = snf_polyQ(boundary(spec, n))
        else:
            dec = snf_integer(boundary(spec, n, Weights.at(at)), at=at)
        _SNF_MEMO[key] = dec
    return dec


def clear_memo():
    _SNF_MEMO.clear()


def homology_from_decompositions(dim_n, dec_n, dec_next, at=None, provenance="direct"):
    """Assemble H_n from dim C_n and the SNFs of d_n and d_{n+1}."""
    rank_n = dec_n.rank if dec_n is not None else 0
    rank_next = dec_next.rank if dec_next is not None else 0
    free = dim_n - rank_n - rank_next
    tors = Counter(torsion_invariants(dec_next)) if dec_next is not None else Counter()
    certified = True
    if at is None:
        for d in (dec_n, dec_next):
            if d is not None and not d.certified_over_Zt:
                certified = False
    return HomologyModule(free, tors, at, provenance, certified)


def homology_direct(spec: ComplexSpec, n: int, at=None) -> HomologyModule:
    """H_n(spec) over Z[t] (``at`` None) or over Z at t = ``at``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dim_n = chain_rank(spec, n)
    if dim_n == 0:
        return zero_module(at)
    dec_n = snf_of_boundary(spec, n, at)
    dec_next = snf_of_boundary(spec, n + 1, at)
    return homology_from_decompositions(dim_n, dec_n, dec_next, at)


def initial_conditions(n: int, max_j: int, at=None):
    """H_n(C^{jf}) for j = 1..max_j (zero beyond j = n + 1)."""
    return {j: homology_direct(Final(j), n, at) for j in range(1, max_j + 1)}


def assemble_decomposition(m: int, n: int, initial) -> HomologyModule:
    """H_n(C^m) = sum_j binomial(m-1, j-1) H_n(C^{jf}), j <= min(m, n+1)."""
    top = min(m, n + 1)
    missing = [j for j in range(1, top + 1) if j not in initial]
    if missing:
        raise KeyError(f"missing initial condition(s) H_{n}(C^{{jf}}) for j = {missing}")
    at = initial[1].at
    total = zero_module(at, "assembled")
    for j in range(1, top + 1):
        total = total + initial[j].scaled(comb(m - 1, j - 1))
    total.provenance = "assembled"
    return total


# -- closed forms -------------------------------------------------------------------

def closed_form_H3(m: int) -> HomologyModule:
    """Polynomial form of H_3(C^m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    a = m * (8 - 3 * m + m * m)
    b = (m * m - 1) * (5 * m - 6)
    assert a % 6 == 0 and b % 6 == 0
    return HomologyModule.from_counts((a // 6, b // 6, m * (m - 1)))


def closed_form_H3_binomial(m: int) -> HomologyModule:
    if m < 1:
        raise ValueError("m must be >= 1")
    C = [comb(m - 1, k) for k in range(5)]
    return HomologyModule.from_counts((
        C[0] + C[1] + C[2] + C[3],
        2 * C[1] + 8 * C[2] + 5 * C[3],
        2 * C[1] + 2 * C[2],
    ))


def closed_form_H4(m: int) -> HomologyModule:
    """Binomial-sum form of H_4(C^m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    C = [comb(m - 1, k) for k in range(5)]
    return HomologyModule.from_counts((
        sum(C),
        6 * C[1] + 33 * C[2] + 51 * C[3] + 23 * C[4],
        4 * C[1] + 6 * C[2] + 3 * C[3],
    ))


def closed_form_H4_poly(m: int) -> HomologyModule:
    if m < 1:
        raise ValueError("m must be >= 1")
    a = m ** 4 - 6 * m ** 3 + 23 * m ** 2 - 18 * m + 24
    b = (m - 1) * (23 * m ** 3 - 3 * m ** 2 - 26 * m + 24)
    c = (m - 1) * (m * m + m + 2)
    assert a % 24 == 0 and b % 24 == 0 and c % 2 == 0
    return HomologyModule.from_counts((a // 24, b // 24, c // 2))


# -- comparison -------------------------------------------------------------------------

@dataclass
class Comparison:
    equal: bool
    diff: list

    def __bool__(self):
        return self.equal


def compare(a: HomologyModule, b: HomologyModule) -> Comparison:
    """Free-rank and torsion-multiset equality with a readable diff."""
    if a.at != b.at:
        raise ValueError("modules live over different rings")
    diff = []
    if a.free_rank != b.free_rank:
        diff.append(f"free rank {a.free_rank} vs {b.free_rank}")
    for g in sorted(set(a.torsion) | set(b.torsion), key=str):
        x, y = a.torsion.get(g, 0), b.torsion.get(g, 0)
        if x != y:
            name = format_poly(g.coeffs) if a.at is None else f"Z{g}"
            sign = "extra" if x > y else "missing"
            diff.append(f"{sign} {abs(x - y)} x {name} in the first module")
    return Comparison(not diff, diff)


__all__ = [
    "GENERATORS",
    "HomologyModule",
    "P1",
    "P2",
    "P3",
    "assemble_decomposition",
    "closed_form_H3",
    "closed_form_H3_binomial",
    "closed_form_H4",
    "closed_form_H4_poly",
    "compare",
    "homology_direct",
    "initial_conditions",
    "snf_of_boundary",
]
