"""Independent reference computations used by the tests."""
from __future__ import annotations

from itertools import product

import sympy

from ginzglue.dgcat import FreeDgCategory


def words(C: FreeDgCategory, x: str, y: str, cutoff: int) -> dict[tuple[int, int], list]:
    """All composable words ``x -> y`` of weight at most ``cutoff``, grown
    one generator at a time by depth-first search, keyed by (degree, weight)."""
    out: dict[tuple[int, int], list] = {}

    def grow(word: tuple, end: str, deg: int, wt: int) -> None:
        if end == y:
            out.setdefault((deg, wt), []).append(word)
        for g in C.generators:
            if g.src == end and wt + g.weight <= cutoff:
                grow((g.name,) + word, g.tgt, deg + g.degree, wt + g.weight)

    grow((), x, 0, 0)
    return out


def leibniz(C: FreeDgCategory, word: tuple) -> dict:
    out: dict = {}
    sign = 1
    for i, n in enumerate(word):
        for p, c in C.d[n].terms.items():
            k = word[:i] + p + word[i + 1:]
            out[k] = out.get(k, 0) + sign * c
        if C.gens[n].degree % 2:
            sign = -sign
    return out


def sympy_rank(C: FreeDgCategory, src: list, tgt: list) -> int:
    if not src or not tgt:
        return 0
    idx = {w: i for i, w in enumerate(tgt)}
    m = sympy.zeros(len(tgt), len(src))
    for j, w in enumerate(src):
        for p, c in leibniz(C, w).items():
            if c:
                m[idx[p], j] += sympy.Rational(c.numerator, c.denominator)
    return m.rank()


def betti_oracle(C: FreeDgCategory, x: str, y: str, cutoff: int) -> dict[tuple[int, int], int]:
    blocks = words(C, x, y, cutoff)
    out = {}
    for (d, w), basis in blocks.items():
        down = sympy_rank(C, basis, blocks.get((d - 1, w), []))
        up = sympy_rank(C, blocks.get((d + 1, w), []), basis)
        b = len(basis) - down - up
        if b:
            out[(d, w)] = b
    return out


def rescaling_oracle(C1: FreeDgCategory, C2: FreeDgCategory) -> bool:
    """Try every sign vector on the generators."""
    if C1.gens != C2.gens:
        return False
    names = [g.name for g in C1.generators]
    for signs in product((1, -1), repeat=len(names)):
        s = dict(zip(names, signs))
        ok = True
        for n in names:
            want = {p: c * s[n] for p, c in C2.d[n].terms.items()}
            got = {}
            for p, c in C1.d[n].terms.items():
                v = c
                for x in p:
                    v *= s[x]
                got[p] = v
            if got != want:
                ok = False
                break
        if ok:
            return True
    return False


# -- a concrete model of the two-cyclic category ---------------------------------
# [n] is Z with period n + 1; a morphism [a] -> [b] is a nondecreasing map
# f with f(x + a + 1) = f(x) + b + 1, modulo adding 2(b + 1).

def _period(n: int) -> int:
    return n + 1


def concrete_tau(n: int):
    return (n, n, lambda x: x - 1)


def concrete_delta(i: int, n: int):
    """``[n-1] -> [n]`` skipping residue ``i``."""
    def f(x):
        q, r = divmod(x, n)
        return q * (n + 1) + r + (1 if r >= i else 0)
    return (n - 1, n, f)


def concrete_compose(f, g):
    assert g[1] == f[0]
    return (g[0], f[1], lambda x: f[2](g[2](x)))


def concrete_key(f) -> tuple:
    a, b, fn = f
    vals = [fn(x) for x in range(_period(a))]
    shift = (vals[0] // (2 * _period(b))) * 2 * _period(b)
    return (a, b) + tuple(v - shift for v in vals)
