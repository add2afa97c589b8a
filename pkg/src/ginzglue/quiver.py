"""
Quivers with potential attached to ideal triangulations, B-matrices,
matrix mutation and the K0-level action of a flip.

Vertex ids are the edge ids of the triangulation written as strings.
Triangle ``f`` (counted from 1) with counterclockwise triple ``(i, j, k)``
contributes the clockwise arrows ``a_f: i -> k``, ``b_f: k -> j`` and
``c_f: j -> i`` and the potential term ``c_f b_f a_f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .ncpoly import NcPoly
from .triangulation import IdealTriangulation, flip, flip_data, require_valid


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str
    degree: int = 0


@dataclass(frozen=True)
class GradedQuiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    frozen: frozenset[str] = frozenset()
    notes: tuple[str, ...] = field(default=(), compare=False)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def full_subquiver(self, keep: Iterable[str]) -> "GradedQuiver":
        keep = set(keep)
        return GradedQuiver(
            tuple(v for v in self.vertices if v in keep),
            tuple(a for a in self.arrows if a.src in keep and a.tgt in keep),
            frozenset(self.frozen & keep), self.notes)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "frozen": v in self.frozen} for v in self.vertices],
            "arrows": [{"id": a.name, "source": a.src, "target": a.tgt, "degree": a.degree}
                       for a in self.arrows],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Potential:
    terms: tuple[tuple[Fraction, tuple[str, ...]], ...]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for c, cyc in self.terms:
            word = " ".join(cyc)
            if c != 1:
                word = f"{c} {word}"
            out.append(word)
        return " + ".join(out).replace("+ -", "- ")

    def to_json(self) -> list:
        return [{"coefficient": str(c), "cycle": list(cyc)} for c, cyc in self.terms]


def vertex_id(e: int) -> str:
    return str(e)


def triangle_arrows(f: int, tri: tuple[int, int, int]) -> tuple[Arrow, Arrow, Arrow]:
    """The clockwise arrows ``a, b, c`` of triangle ``f`` (0-based index)."""
    i, j, k = (vertex_id(e) for e in tri)
    n = f + 1
    return Arrow(f"a{n}", i, k), Arrow(f"b{n}", k, j), Arrow(f"c{n}", j, i)


SELF_FOLDED_NOTE = "self-folded: unverified against an external source"


def quiver_of_triangulation(t: IdealTriangulation) -> GradedQuiver:
    require_valid(t)
    arrows = []
    for f, tri in enumerate(t.triangles):
        arrows.extend(triangle_arrows(f, tri))
    notes = (SELF_FOLDED_NOTE,) if any(t.is_self_folded(f) for f in range(len(t.triangles))) else ()
    return GradedQuiver(tuple(vertex_id(e) for e in t.edges), tuple(arrows),
                        frozenset(vertex_id(e) for e in t.boundary), notes)


def interior_quiver(t: IdealTriangulation) -> GradedQuiver:
    q = quiver_of_triangulation(t)
    return q.full_subquiver(vertex_id(e) for e in t.internal_edges)


def potential_of_triangulation(t: IdealTriangulation, interior: bool = False) -> Potential:
    require_valid(t)
    fs = t.interior_triangles() if interior else range(len(t.triangles))
    terms = []
    for f in fs:
        a, b, c = triangle_arrows(f, t.triangles[f])
        terms.append((Fraction(1), (c.name, b.name, a.name)))
    return Potential(tuple(terms))


def cyclic_derivative(q: GradedQuiver, w: Potential, a: str) -> NcPoly:
    """Sum of ``v u`` over the occurrences ``c = u a v`` in each cycle ``c``."""
    arr = q.arrow(a)
    if arr.degree != 0:
        raise QuiverError("cyclic derivative only along degree-0 arrows")
    terms = []
    for c, cyc in w.terms:
        for pos, x in enumerate(cyc):
            if x == a:
                terms.append((cyc[pos + 1:] + cyc[:pos], c))
    return NcPoly(terms, arr.tgt, arr.src)


# -- B-matrices -----------------------------------------------------------

@dataclass(frozen=True)
class BMatrix:
    labels: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def entry(self, i: str, j: str) -> int:
        return self.rows[self.labels.index(i)][self.labels.index(j)]

    def as_dict(self) -> dict[tuple[str, str], int]:
        return {(i, j): self.rows[x][y] for x, i in enumerate(self.labels)
                for y, j in enumerate(self.labels)}

    def relabel(self, mapping: dict[str, str]) -> "BMatrix":
        return BMatrix(tuple(mapping.get(v, v) for v in self.labels), self.rows)

    def is_skew(self) -> bool:
        n = len(self.labels)
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(n) for j in range(n))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "rows": [list(r) for r in self.rows]}


def b_matrix(q: GradedQuiver) -> BMatrix:
    labels = tuple(v for v in q.vertices if v not in q.frozen)
    idx = {v: n for n, v in enumerate(labels)}
    m = [[0] * len(labels) for _ in labels]
    for a in q.arrows:
        if a.src in idx and a.tgt in idx and a.src != a.tgt:
            m[idx[a.src]][idx[a.tgt]] += 1
            m[idx[a.tgt]][idx[a.src]] -= 1
    return BMatrix(labels, tuple(tuple(r) for r in m))


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def mutate_b(b: BMatrix, k: str) -> BMatrix:
    if k not in b.labels:
        raise QuiverError(f"{k} is frozen or unknown")
    kk = b.labels.index(k)
    n = len(b.labels)
    r = b.rows
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == kk or j == kk:
                out[i][j] = -r[i][j]
            else:
                out[i][j] = r[i][j] + _sgn(r[i][kk]) * max(r[i][kk] * r[kk][j], 0)
    return BMatrix(b.labels, tuple(tuple(x) for x in out))


# -- K0 ---------------------------------------------------------------------

@dataclass(frozen=True)
class K0Matrix:
    """Columns are images of the classes ``[P_f]`` of the old triangulation,
    written in the basis of the new one; basis orders match position by
    position under the flip identification."""
    source: tuple[str, ...]
    target: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def column(self, f: str) -> dict[str, int]:
        j = self.source.index(f)
        return {self.target[i]: self.rows[i][j] for i in range(len(self.target))
                if self.rows[i][j]}

    def to_json(self) -> dict:
        return {"source": list(self.source), "target": list(self.target),
                "rows": [list(r) for r in self.rows]}


def flip_identification(t: IdealTriangulation, e: int) -> dict[str, str]:
    _, _, new = flip_data(t, e)
    return {vertex_id(f): vertex_id(new if f == e else f) for f in t.edges}


def k0_mutation(t: IdealTriangulation, e: int) -> K0Matrix:
    """``[P_e] -> sum over arrows a out of e of [P_t(a)'] - [P_e']``; other
    classes go to their counterparts."""
    ident = flip_identification(t, e)
    q = quiver_of_triangulation(t)
    source = tuple(vertex_id(f) for f in t.edges)
    target = tuple(ident[v] for v in source)
    n = len(source)
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    col = source.index(vertex_id(e))
    m[col][col] = -1
    for a in q.arrows:
        if a.src == vertex_id(e):
            m[target.index(ident[a.tgt])][col] += 1
    return K0Matrix(source, target, tuple(tuple(r) for r in m))


def flip_mutation_check(t: IdealTriangulation, e: int) -> tuple[bool, BMatrix, BMatrix]:
    """Compare the mutated B-matrix of ``t`` at ``e`` with that of the flip."""
    ident = flip_identification(t, e)
    mutated = mutate_b(b_matrix(interior_quiver(t)), vertex_id(e)).relabel(ident)
    direct = b_matrix(interior_quiver(flip(t, e)))
    return mutated.as_dict() == direct.as_dict(), mutated, direct
