"""
Exact linear algebra on sparse integer or rational vectors.

Ranks use incremental echelon reduction without division: a vector is
reduced against a pivot by ``v <- u[r]*v - v[r]*u`` and then divided by the
gcd of its entries, so everything stays integral.  A prime-field variant
works modulo ``p``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

SparseVec = dict[int, int]


def _integral(vec: Mapping[int, object]) -> SparseVec:
    """Clear denominators of a rational vector."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    for k, v in vec.items():
        x = Fraction(v) * den
        if x:
            out[k] = int(x)
    return out


def _primitive(vec: SparseVec) -> SparseVec:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        vec = {k: v // g for k, v in vec.items()}
    lead = min(vec)
    if vec[lead] < 0:
        vec = {k: -v for k, v in vec.items()}
    return vec


class Echelon:
    """Incremental row echelon form; ``add`` returns whether the rank grew."""

    def __init__(self, prime: int | None = None):
        self.prime = prime
        self.pivots: dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec: Mapping[int, object]) -> bool:
        p = self.prime
        if p is None:
            v = _integral(vec)
        else:
            v = {}
            for k, x in vec.items():
                x = Fraction(x)
                y = x.numerator * pow(x.denominator, -1, p) % p
                if y:
                    v[k] = y
        while v:
            lead = min(v)
            u = self.pivots.get(lead)
            if u is None:
                if p is None:
                    v = _primitive(v)
                else:
                    inv = pow(v[lead], -1, p)
                    v = {k: x * inv % p for k, x in v.items()}
                self.pivots[lead] = v
                return True
            if p is None:
                a, b = u[lead], v[lead]
                nv = {k: a * x for k, x in v.items()}
                for k, x in u.items():
                    y = nv.get(k, 0) - b * x
                    if y:
                        nv[k] = y
                    else:
                        nv.pop(k, None)
                v = _primitive(nv) if nv else nv
            else:
                b = v[lead]
                for k, x in u.items():
                    y = (v.get(k, 0) - b * x) % p
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        return False


def rank(columns: Iterable[Mapping[int, object]], prime: int | None = None) -> int:
    ech = Echelon(prime)
    for c in columns:
        ech.add(c)
    return ech.rank


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def bareiss_rank(m: Sequence[Sequence[object]]) -> int:
    """Rank of a dense rational matrix by fraction-free elimination."""
    rows = [_integral(dict(enumerate(r))) for r in m]
    ncols = max((len(r) for r in m), default=0)
    a = [[r.get(j, 0) for j in range(ncols)] for r in rows]
    rk, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(rk + 1, len(a)):
            for j in range(col + 1, ncols):
                a[i][j] = (a[i][j] * a[rk][col] - a[i][col] * a[rk][j]) // prev
            a[i][col] = 0
        prev = a[rk][col]
        rk += 1
    return rk


def solve_gf2(equations: Iterable[tuple[Iterable[int], int]], nvars: int) -> list[int] | None:
    """Solve ``sum x_i = b (mod 2)`` systems; each equation lists its variables
    (repeats cancel).  Returns one solution or ``None``."""
    pivots: dict[int, tuple[int, int]] = {}
    for vars_, rhs in equations:
        mask = 0
        for v in vars_:
            mask ^= 1 << v
        b = rhs & 1
        while mask:
            lead = mask.bit_length() - 1
            if lead in pivots:
                pm, pb = pivots[lead]
                mask ^= pm
                b ^= pb
            else:
                pivots[lead] = (mask, b)
                break
        else:
            if b:
                return None
    x = [0] * nvars
    for lead in sorted(pivots):
        mask, b = pivots[lead]
        rest = mask & ~(1 << lead)
        val = b
        while rest:
            low = rest & -rest
            val ^= x[low.bit_length() - 1]
            rest ^= low
        x[lead] = val
    return x
