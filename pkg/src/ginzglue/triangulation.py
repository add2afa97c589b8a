"""
Ideal triangulations as incidence data.

A triangulation is a list of triangles, each a counterclockwise triple of
edge ids, together with the set of boundary edge ids.  A triangle with a
repeated id is self-folded.  Half-edge ``3*f + p`` of the dual ribbon graph
is side ``p`` of triangle ``f``; this numbering is shared by the gluing and
spin modules.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import ribbon
from .ribbon import RibbonGraph


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True)
class IdealTriangulation:
    triangles: tuple[tuple[int, int, int], ...]
    boundary: frozenset[int]

    @classmethod
    def make(cls, triangles: Iterable[Iterable[int]],
             boundary: Iterable[int] = ()) -> "IdealTriangulation":
        tris = tuple(tuple(int(e) for e in t) for t in triangles)
        return cls(tris, frozenset(int(e) for e in boundary))

    @classmethod
    def from_json(cls, data: Mapping) -> "IdealTriangulation":
        return cls.make(data["triangles"], data.get("boundary", ()))

    def to_json(self) -> dict:
        return {"boundary": sorted(self.boundary),
                "triangles": [list(t) for t in self.triangles]}

    @property
    def edges(self) -> list[int]:
        return sorted({e for t in self.triangles for e in t} | self.boundary)

    @property
    def internal_edges(self) -> list[int]:
        return [e for e in self.edges if e not in self.boundary]

    def is_self_folded(self, f: int) -> bool:
        return len(set(self.triangles[f])) < 3

    def sides(self, e: int) -> list[tuple[int, int]]:
        """All ``(triangle, position)`` pairs carrying edge ``e``."""
        return [(f, p) for f, t in enumerate(self.triangles)
                for p, x in enumerate(t) if x == e]

    def interior_triangles(self) -> list[int]:
        return [f for f, t in enumerate(self.triangles)
                if not any(e in self.boundary for e in t)]


def validate_triangulation(t: IdealTriangulation) -> list[str]:
    report = []
    if not t.triangles:
        report.append("no triangles")
        return report
    for f, tri in enumerate(t.triangles):
        if len(tri) != 3:
            report.append(f"triangle {f} is not a triple")
        elif len(set(tri)) == 1:
            report.append(f"triangle {f} repeats one edge three times")
    uses = Counter(e for tri in t.triangles for e in tri)
    for e in t.edges:
        want = 1 if e in t.boundary else 2
        if uses[e] != want:
            kind = "boundary" if e in t.boundary else "internal"
            report.append(f"{kind} edge {e} used {uses[e]} times")
    if not report and not _connected(t):
        report.append("not connected")
    return report


def _connected(t: IdealTriangulation) -> bool:
    n = len(t.triangles)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in t.internal_edges:
        fs = [f for f, _ in t.sides(e)]
        for f in fs[1:]:
            parent[find(f)] = find(fs[0])
    return len({find(f) for f in range(n)}) == 1


def require_valid(t: IdealTriangulation) -> None:
    report = validate_triangulation(t)
    if report:
        raise TriangulationError("; ".join(report))


def halfedge(f: int, p: int) -> int:
    return 3 * f + p


def side_of(h: int) -> tuple[int, int]:
    return divmod(h, 3)


def dual_ribbon_graph(t: IdealTriangulation) -> RibbonGraph:
    """One vertex per triangle, cyclic order from the counterclockwise triple."""
    require_valid(t)
    tau, sigma, cyclic = {}, {}, {}
    for f, tri in enumerate(t.triangles):
        cyclic[f] = [halfedge(f, p) for p in range(3)]
        for p in range(3):
            sigma[halfedge(f, p)] = f
    for e in t.edges:
        hs = [halfedge(f, p) for f, p in t.sides(e)]
        if len(hs) == 1:
            tau[hs[0]] = hs[0]
        else:
            tau[hs[0]], tau[hs[1]] = hs[1], hs[0]
    return RibbonGraph.build(tau, sigma, cyclic, range(len(t.triangles)))


def _rotate_to_middle(tri: tuple[int, int, int], e: int) -> tuple[int, int, int]:
    i = tri.index(e)
    return (tri[(i - 1) % 3], e, tri[(i + 1) % 3])


def flip_data(t: IdealTriangulation, e: int) -> tuple[int, int, int]:
    """Check flippability; return the two triangle indices and the new id."""
    require_valid(t)
    if e in t.boundary:
        raise TriangulationError(f"edge {e} is a boundary edge")
    if e not in t.edges:
        raise TriangulationError(f"edge {e} does not exist")
    sides = t.sides(e)
    fa, fb = sides[0][0], sides[1][0]
    if fa == fb:
        raise TriangulationError(f"edge {e} appears twice in triangle {fa}")
    for f in (fa, fb):
        if t.is_self_folded(f):
            raise TriangulationError(f"edge {e} borders the self-folded triangle {f}")
    return fa, fb, max(t.edges) + 1


def flip(t: IdealTriangulation, e: int) -> IdealTriangulation:
    """Replace ``(p,e,q), (r,e,s)`` by ``(q,e',r), (s,e',p)``."""
    fa, fb, new = flip_data(t, e)
    p, _, q = _rotate_to_middle(t.triangles[fa], e)
    r, _, s = _rotate_to_middle(t.triangles[fb], e)
    tris = list(t.triangles)
    tris[fa] = (q, new, r)
    tris[fb] = (s, new, p)
    return IdealTriangulation(tuple(tris), t.boundary)


def canonical_form(t: IdealTriangulation) -> tuple:
    """Rotation- and order-independent key, used for comparisons up to relabeling."""
    def rot(tri):
        return min(tri[i:] + tri[:i] for i in range(3))
    return (tuple(sorted(rot(tri) for tri in t.triangles)), tuple(sorted(t.boundary)))


def relabel(t: IdealTriangulation, mapping: Mapping[int, int]) -> IdealTriangulation:
    m = lambda e: mapping.get(e, e)
    return IdealTriangulation(tuple(tuple(m(e) for e in tri) for tri in t.triangles),
                              frozenset(m(e) for e in t.boundary))


def surface_invariants(t: IdealTriangulation) -> dict[str, int]:
    g = dual_ribbon_graph(t)
    fs = ribbon.faces(g)
    return {
        "V_dual": len(g.vertices),
        "E_internal": len(g.internal_edges()),
        "E_boundary": len(g.external_edges()),
        "faces": len(fs),
        "b1": ribbon.first_betti(g),
        "punctures": len(ribbon.internal_faces(g)),
    }


CORPUS = {
    "triangle": IdealTriangulation.make([[1, 2, 3]], [1, 2, 3]),
    "monogon": IdealTriangulation.make([[1, 2, 1]], [2]),
    "digon": IdealTriangulation.make([[1, 4, 3], [2, 3, 4]], [1, 2]),
    "square": IdealTriangulation.make([[0, 1, 2], [0, 3, 4]], [1, 2, 3, 4]),
    "annulus": IdealTriangulation.make([[1, 3, 4], [2, 3, 4]], [1, 2]),
    "torus": IdealTriangulation.make([[1, 3, 2], [1, 3, 2]], []),
}
"""Desk-scale surfaces: triangle, once-punctured monogon (one self-folded
triangle), once-punctured 2-gon, square with a diagonal, annulus with one
marked point per boundary circle, once-punctured torus."""


def corpus() -> dict[str, IdealTriangulation]:
    return dict(CORPUS)
