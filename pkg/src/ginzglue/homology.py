"""
Bigraded homology of hom-complexes in weight-graded free dg-categories.

``Hom(x, y)`` is spanned by the paths from ``x`` to ``y``.  For fixed
(degree, weight) there are finitely many, and the differential maps the
(d, w) block to the (d-1, w) block, so Betti numbers are computed block by
block with exact ranks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dgcat import FreeDgCategory, differential_of_path
from .linalg import rank
from .ncpoly import Path

PATH_GUARD = 10 ** 6


class PathLimitError(RuntimeError):
    pass


class HomologyError(ValueError):
    pass


class PathIndex:
    """All paths out of each object up to a weight cutoff, bucketed by
    (target, degree, weight)."""

    def __init__(self, C: FreeDgCategory, cutoff: int, guard: int = PATH_GUARD):
        self.C = C
        self.cutoff = cutoff
        self.guard = guard
        self._by_source: dict[str, dict[tuple[str, int, int], list[Path]]] = {}
        self._out = {o: [g for g in C.generators if g.src == o] for o in C.objects}

    def buckets(self, x: str) -> dict[tuple[str, int, int], list[Path]]:
        got = self._by_source.get(x)
        if got is not None:
            return got
        C, W = self.C, self.cutoff
        # layer[w] holds (path, end object, degree) for paths of weight w
        layers: list[list[tuple[Path, str, int]]] = [[] for _ in range(W + 1)]
        layers[0].append(((), x, 0))
        count = 1
        for w in range(W + 1):
            for path, end, deg in layers[w]:
                for g in self._out[end]:
                    nw = w + g.weight
                    if nw <= W:
                        layers[nw].append(((g.name,) + path, g.tgt, deg + g.degree))
                        count += 1
            if count > self.guard:
                raise PathLimitError(
                    f"more than {self.guard} paths out of {x} below weight {W}")
        out: dict[tuple[str, int, int], list[Path]] = {}
        for w, layer in enumerate(layers):
            for path, end, deg in layer:
                out.setdefault((end, deg, w), []).append(path)
        for v in out.values():
            v.sort()
        self._by_source[x] = out
        return out

    def basis(self, x: str, y: str, d: int, w: int) -> list[Path]:
        if w > self.cutoff:
            raise HomologyError("weight above the index cutoff")
        return list(self.buckets(x).get((y, d, w), []))

    def degrees(self, x: str, y: str, w: int) -> list[int]:
        return sorted(d for (t, d, ww) in self.buckets(x) if t == y and ww == w)


def basis_paths(C: FreeDgCategory, x: str, y: str, d: int, w: int) -> list[Path]:
    return PathIndex(C, w).basis(x, y, d, w)


def boundary_columns(C: FreeDgCategory, source: list[Path],
                     target: list[Path]) -> list[dict[int, object]]:
    idx = {p: i for i, p in enumerate(target)}
    cols = []
    for path in source:
        col = {}
        for q, c in differential_of_path(C, path).items():
            if c:
                col[idx[q]] = col.get(idx[q], 0) + c
        cols.append({k: v for k, v in col.items() if v})
    return cols


def boundary_matrix(C: FreeDgCategory, x: str, y: str, d: int, w: int) -> list[list[object]]:
    """Dense matrix of ``d`` from the (d, w) basis to the (d-1, w) basis;
    rows index the target basis."""
    idx = PathIndex(C, w)
    src, tgt = idx.basis(x, y, d, w), idx.basis(x, y, d - 1, w)
    cols = boundary_columns(C, src, tgt)
    return [[cols[j].get(i, 0) for j in range(len(src))] for i in range(len(tgt))]


@dataclass
class BettiTable:
    entries: dict[tuple[str, str, int, int], int] = field(default_factory=dict)
    cutoff: int = 0
    field: str = "q"

    def get(self, x: str, y: str, d: int, w: int) -> int:
        return self.entries.get((x, y, d, w), 0)

    def pair(self, x: str, y: str) -> dict[tuple[int, int], int]:
        return {(d, w): b for (s, t, d, w), b in self.entries.items()
                if (s, t) == (x, y) and b}

    def nonzero(self) -> dict[tuple[str, str, int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def to_tsv(self) -> str:
        lines = [f"# field={self.field} cutoff={self.cutoff}", "src\ttgt\tdegree\tweight\tbetti"]
        for (x, y, d, w), b in sorted(self.entries.items()):
            if b:
                lines.append(f"{x}\t{y}\t{d}\t{w}\t{b}")
        return "\n".join(lines) + "\n"


def parse_field(spec: str) -> int | None:
    if spec in ("q", "Q", "rational"):
        return None
    if spec.startswith("p:"):
        p = int(spec[2:])
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise HomologyError(f"{p} is not prime")
        return p
    raise HomologyError(f"unknown field {spec!r}")


def block_ranks(C: FreeDgCategory, idx: PathIndex, x: str, y: str, w: int,
                prime: int | None) -> tuple[dict[int, int], dict[int, int]]:
    """Block dimensions and ranks of ``d`` out of each degree at weight w."""
    degs = idx.degrees(x, y, w)
    dims = {d: len(idx.basis(x, y, d, w)) for d in degs}
    ranks = {}
    for d in degs:
        if d == 0 or (d - 1) not in dims:
            ranks[d] = 0
            continue
        cols = boundary_columns(C, idx.basis(x, y, d, w), idx.basis(x, y, d - 1, w))
        ranks[d] = rank(cols, prime)
    return dims, ranks


def betti_table(C: FreeDgCategory, cutoff: int, field: str = "q",
                pairs: Iterable[tuple[str, str]] | None = None,
                guard: int = PATH_GUARD) -> BettiTable:
    if cutoff < 0:
        raise HomologyError("cutoff must be nonnegative")
    prime = parse_field(field)
    idx = PathIndex(C, cutoff, guard)
    if pairs is None:
        pairs = [(x, y) for x in C.objects for y in C.objects]
    table = BettiTable({}, cutoff, "q" if prime is None else f"p:{prime}")
    for x, y in pairs:
        for w in range(cutoff + 1):
            dims, ranks = block_ranks(C, idx, x, y, w, prime)
            for d, n in dims.items():
                b = n - ranks[d] - ranks.get(d + 1, 0)
                if b < 0:
                    raise HomologyError("negative Betti number: differential is not a complex")
                table.entries[(x, y, d, w)] = b
    return table


def compare_betti(C1: FreeDgCategory, C2: FreeDgCategory,
                  correspondence: Mapping[str, str] | None = None,
                  cutoff: int = 9, field: str = "q") -> list[tuple]:
    """All (pair, degree, weight) entries where the two tables disagree."""
    if correspondence is None:
        correspondence = {o: o for o in C1.objects}
    if sorted(correspondence.values()) != sorted(C2.objects) or \
            sorted(correspondence) != sorted(C1.objects):
        raise HomologyError("object correspondence is not a bijection")
    t1 = betti_table(C1, cutoff, field)
    t2 = betti_table(C2, cutoff, field)
    out = []
    keys = {(x, y, d, w) for (x, y, d, w) in t1.entries} | {
        (x, y, d, w) for (x, y, d, w) in _pull_back(t2, correspondence)}
    pulled = _pull_back(t2, correspondence)
    for k in sorted(keys):
        a, b = t1.entries.get(k, 0), pulled.get(k, 0)
        if a != b:
            out.append((k, a, b))
    return out


def _pull_back(t: BettiTable, corr: Mapping[str, str]) -> dict:
    inv = {v: k for k, v in corr.items()}
    return {(inv[x], inv[y], d, w): b for (x, y, d, w), b in t.entries.items()}
