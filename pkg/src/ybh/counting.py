"""Ranks of the chain modules C_n^{m,u,m-u}.

S~(n, m, u) counts n-letter words on m letters whose image contains a fixed
set of u letters.  It is computed three ways (inclusion-exclusion, the
recurrence S~(n,m,u) = S~(n,m-1,u) + S~(n,m,u+1), and enumeration of the
actual chain basis) so the counts double as a check on basis enumeration.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial

from .complex import UseTop, enumerate_basis

METHODS = ("inclusion-exclusion", "recurrence", "enumeration")


@lru_cache(maxsize=None)
def stirling2(n: int, m: int) -> int:
    """Stirling numbers of the second kind."""
    if n < 0 or m < 0:
        raise ValueError("n, m must be >= 0")
    if n == m:
        return 1
    if n == 0 or m == 0:
        return 0
    return m * stirling2(n - 1, m) + stirling2(n - 1, m - 1)


@lru_cache(maxsize=None)
def _recurrence(n, m, u):
    if u == m:
        # every letter required: surjections
        return factorial(m) * stirling2(n, m)
    return _recurrence(n, m - 1, u) + _recurrence(n, m, u + 1)


def s_tilde(n: int, m: int, u: int, method: str = "inclusion-exclusion") -> int:
    if not 0 <= u <= m:
        raise ValueError(f"need 0 <= u <= m; got m={m}, u={u}")
    if n < 0:
        raise ValueError("n must be >= 0")
    if method == "inclusion-exclusion":
        return sum((-1) ** i * comb(u, i) * (m - i) ** n for i in range(u + 1))
    if method == "recurrence":
        return _recurrence(n, m, u)
    if method == "enumeration":
        if m == 0:
            return 1 if n == 0 else 0
        return len(enumerate_basis(UseTop(m, u, m - u), n))
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


class MethodDisagreement(AssertionError):
    pass


def s_tilde_checked(n, m, u):
    vals = {meth: s_tilde(n, m, u, meth) for meth in METHODS}
    if len(set(vals.values())) != 1:
        raise MethodDisagreement(f"S~({n},{m},{u}): {vals}")
    return vals["inclusion-exclusion"]


def rank_table(max_n: int, max_m: int, check: bool = True):
    """{(n, m, m-1): S~(n, m, m-1)} for 1 <= n <= max_n, 1 <= m <= max_m."""
    if max_n < 1 or max_m < 1:
        raise ValueError("bounds must be >= 1")
    table = {}
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            table[n, m, m - 1] = (s_tilde_checked if check else s_tilde)(n, m, m - 1)
    return table


def format_rank_table(table, max_n, max_m, csv=False):
    """Rows m, columns n."""
    lines = []
    if csv:
        lines.append("m," + ",".join(f"n={n}" for n in range(1, max_n + 1)))
        for m in range(1, max_m + 1):
            lines.append(f"{m}," + ",".join(str(table[n, m, m - 1]) for n in range(1, max_n + 1)))
        return "\n".join(lines)
    cells = [[str(table[n, m, m - 1]) for n in range(1, max_n + 1)] for m in range(1, max_m + 1)]
    width = max(len(c) for row in cells for c in row) if cells else 1
    width = max(width, len(f"n={max_n}"))
    lines.append("m\\n " + " ".join(f"{n:>{width}}" for n in range(1, max_n + 1)))
    for m, row in zip(range(1, max_m + 1), cells):
        lines.append(f"{m:>3} " + " ".join(f"{c:>{width}}" for c in row))
    return "\n".join(lines)
