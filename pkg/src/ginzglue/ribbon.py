"""
Ribbon graphs in half-edge form.

A ribbon graph is a set of half-edges with an involution ``tau`` (fixed
points are external half-edges), a vertex map ``sigma`` and a cyclic order
of the half-edges around each vertex.  Everything here is a pure function
on immutable values.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Edge = tuple[int, int]


class RibbonError(ValueError):
    pass


@dataclass(frozen=True)
class Flag:
    vertex: int
    halfedge: int


@dataclass(frozen=True)
class ExitPoset:
    objects: tuple
    arrows: tuple[Flag, ...]

    def targets(self, flag: Flag, g: "RibbonGraph") -> Edge:
        return g.edge_of(flag.halfedge)


@dataclass(frozen=True)
class RibbonGraph:
    vertices: tuple[int, ...]
    halfedges: tuple[int, ...]
    tau: Mapping[int, int]
    sigma: Mapping[int, int]
    cyclic: Mapping[int, tuple[int, ...]]
    _succ: dict = field(default=None, compare=False, repr=False)

    @classmethod
    def build(cls, tau: Mapping[int, int], sigma: Mapping[int, int],
              cyclic: Mapping[int, Iterable[int]],
              vertices: Iterable[int] | None = None) -> "RibbonGraph":
        cyc = {int(v): tuple(int(h) for h in hs) for v, hs in cyclic.items()}
        if vertices is None:
            vertices = set(cyc) | set(sigma.values())
        hs = sorted(set(tau) | set(sigma))
        t = {int(h): int(tau.get(h, h)) for h in hs}
        return cls(tuple(sorted(int(v) for v in vertices)), tuple(hs), t,
                   {int(h): int(v) for h, v in sigma.items()}, cyc)

    # -- derived data -----------------------------------------------------

    def next(self, h: int) -> int:
        """Cyclic-order successor of ``h`` at its vertex."""
        succ = self._succ
        if succ is None:
            succ = {}
            for hs in self.cyclic.values():
                for i, x in enumerate(hs):
                    succ[x] = hs[(i + 1) % len(hs)]
            object.__setattr__(self, "_succ", succ)
        return succ[h]

    def is_external(self, h: int) -> bool:
        return self.tau[h] == h

    def edge_of(self, h: int) -> Edge:
        o = self.tau[h]
        return (min(h, o), max(h, o))

    def edges(self) -> list[Edge]:
        return sorted({self.edge_of(h) for h in self.halfedges})

    def internal_edges(self) -> list[Edge]:
        return [e for e in self.edges() if e[0] != e[1]]

    def external_edges(self) -> list[Edge]:
        return [e for e in self.edges() if e[0] == e[1]]

    def is_loop(self, e: Edge) -> bool:
        return e[0] != e[1] and self.sigma[e[0]] == self.sigma[e[1]]

    def flags(self) -> list[Flag]:
        return [Flag(self.sigma[h], h) for h in self.halfedges]

    def degree(self, v: int) -> int:
        return len(self.cyclic[v])

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        pairs = sorted({self.edge_of(h) for h in self.halfedges})
        return {
            "vertices": list(self.vertices),
            "halfedges": list(self.halfedges),
            "tau": [list(p) for p in pairs],
            "sigma": {str(h): self.sigma[h] for h in self.halfedges},
            "cyclic": {str(v): list(self.cyclic[v]) for v in self.vertices},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RibbonGraph":
        tau: dict[int, int] = {}
        for a, b in data["tau"]:
            tau[int(a)] = int(b)
            tau[int(b)] = int(a)
        for h in data.get("halfedges", []):
            tau.setdefault(int(h), int(h))
        sigma = {int(h): int(v) for h, v in data["sigma"].items()}
        cyclic = {int(v): hs for v, hs in data["cyclic"].items()}
        return cls.build(tau, sigma, cyclic, data.get("vertices"))


def corolla(n: int, vertex: int = 0, start: int = 0) -> RibbonGraph:
    hs = list(range(start, start + n))
    return RibbonGraph.build({h: h for h in hs}, {h: vertex for h in hs},
                             {vertex: hs})


def validate(g: RibbonGraph) -> list[str]:
    """Return every violated invariant; an empty list means ``g`` is valid."""
    report = []
    hs = set(g.halfedges)
    if set(g.tau) != hs:
        report.append("tau not defined on exactly the halfedges")
    if any(g.tau.get(g.tau.get(h, h), None) != h for h in hs):
        report.append("tau not involutive")
    if set(g.sigma) != hs:
        report.append("sigma not defined on exactly the halfedges")
    if not set(g.sigma.values()) <= set(g.vertices):
        report.append("sigma maps to an unknown vertex")
    for v in g.vertices:
        cyc = g.cyclic.get(v, ())
        around = sorted(h for h in hs if g.sigma.get(h) == v)
        if len(set(cyc)) != len(cyc) or sorted(cyc) != around:
            report.append(f"cyclic order at vertex {v} does not cover its halfedges")
    if set(g.cyclic) - set(g.vertices):
        report.append("cyclic order given for an unknown vertex")
    if not report and not _connected(g):
        report.append("not connected")
    return report


def _connected(g: RibbonGraph) -> bool:
    if not g.vertices:
        return True
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for h in g.halfedges:
        a, b = g.sigma[h], g.sigma[g.tau[h]]
        adj[a].add(b)
        adj[b].add(a)
    seen = {g.vertices[0]}
    queue = deque(seen)
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(g.vertices)


def _require_valid(g: RibbonGraph) -> None:
    report = validate(g)
    if report:
        raise RibbonError("; ".join(report))


def exit_poset(g: RibbonGraph) -> ExitPoset:
    """Objects are the vertices and edges; one arrow ``v -> e`` per flag."""
    _require_valid(g)
    objects = tuple([("v", v) for v in g.vertices] + [("e", e) for e in g.edges()])
    return ExitPoset(objects, tuple(g.flags()))


def _relabel(g: RibbonGraph, dv: int, dh: int) -> RibbonGraph:
    return RibbonGraph.build(
        {h + dh: t + dh for h, t in g.tau.items()},
        {h + dh: v + dv for h, v in g.sigma.items()},
        {v + dv: [h + dh for h in hs] for v, hs in g.cyclic.items()},
        [v + dv for v in g.vertices])


def glue_graphs(g1: RibbonGraph, g2: RibbonGraph,
                pairing: Iterable[tuple[int, int]]) -> RibbonGraph:
    """Disjoint union of ``g1`` and ``g2`` with paired external half-edges joined.

    ``pairing`` lists ``(h1, h2)`` with ``h1`` external in ``g1`` and ``h2``
    external in ``g2``.  When the id sets of the two graphs overlap, ``g2`` is
    shifted past the largest ids of ``g1``; the pairing is read in the
    original ids.
    """
    pairing = [(int(a), int(b)) for a, b in pairing]
    firsts = [a for a, _ in pairing]
    seconds = [b for _, b in pairing]
    if len(set(firsts)) != len(firsts) or len(set(seconds)) != len(seconds):
        raise RibbonError("duplicate entry in pairing")
    for a, b in pairing:
        if a not in g1.tau or not g1.is_external(a):
            raise RibbonError(f"halfedge {a} is not an external edge of the first graph")
        if b not in g2.tau or not g2.is_external(b):
            raise RibbonError(f"halfedge {b} is not an external edge of the second graph")
    dv = dh = 0
    if set(g1.vertices) & set(g2.vertices) or set(g1.halfedges) & set(g2.halfedges):
        dv = max(g1.vertices, default=-1) + 1 - min(g2.vertices, default=0)
        dh = max(g1.halfedges, default=-1) + 1 - min(g2.halfedges, default=0)
        g2 = _relabel(g2, dv, dh)
    tau = dict(g1.tau)
    tau.update(g2.tau)
    for a, b in pairing:
        tau[a] = b + dh
        tau[b + dh] = a
    sigma = dict(g1.sigma)
    sigma.update(g2.sigma)
    cyclic = dict(g1.cyclic)
    cyclic.update(g2.cyclic)
    return RibbonGraph.build(tau, sigma, cyclic, list(g1.vertices) + list(g2.vertices))


def _after(seq: tuple[int, ...], h: int) -> list[int]:
    i = seq.index(h)
    return list(seq[i + 1:]) + list(seq[:i])


def contract_edge(g: RibbonGraph, e: Edge | int) -> RibbonGraph:
    """Contract an internal non-loop edge.

    The merged vertex keeps the id of the endpoint of the smaller half-edge.
    Its cyclic order lists the other half-edges of that endpoint starting
    after the contracted one, followed by those of the second endpoint in
    the same fashion.
    """
    if isinstance(e, int):
        e = g.edge_of(e)
    e1, e2 = e
    if e1 not in g.tau or g.tau[e1] != e2:
        raise RibbonError(f"{e} is not an edge")
    if e1 == e2:
        raise RibbonError("cannot contract an external edge")
    v1, v2 = g.sigma[e1], g.sigma[e2]
    if v1 == v2:
        raise RibbonError("cannot contract a loop")
    merged = _after(g.cyclic[v1], e1) + _after(g.cyclic[v2], e2)
    tau = {h: t for h, t in g.tau.items() if h not in (e1, e2)}
    sigma = {h: (v1 if v == v2 else v) for h, v in g.sigma.items() if h not in (e1, e2)}
    cyclic = {v: hs for v, hs in g.cyclic.items() if v not in (v1, v2)}
    cyclic[v1] = tuple(merged)
    return RibbonGraph.build(tau, sigma, cyclic, [v for v in g.vertices if v != v2])


def _face_step(g: RibbonGraph, h: int) -> int:
    return g.next(g.tau[h])


def faces(g: RibbonGraph) -> list[tuple[int, ...]]:
    """Trace the faces of ``g``.

    The walk moves from ``h`` to the successor of ``tau(h)``, so an external
    half-edge turns the walk back at its free end.  Every external half-edge
    opens a boundary face which runs until the next external half-edge;
    closed walks that meet no external half-edge are the internal faces.
    Boundary faces come first, ordered by their opening half-edge.
    """
    out = []
    seen = set()
    for h in g.halfedges:
        if not g.is_external(h):
            continue
        face = [h]
        seen.add(h)
        x = _face_step(g, h)
        while not g.is_external(x):
            face.append(x)
            seen.add(x)
            x = _face_step(g, x)
        out.append(tuple(face))
    for h in g.halfedges:
        if h in seen:
            continue
        face = []
        x = h
        while x not in seen:
            face.append(x)
            seen.add(x)
            x = _face_step(g, x)
        out.append(tuple(face))
    return out


def internal_faces(g: RibbonGraph) -> list[tuple[int, ...]]:
    return [f for f in faces(g) if not any(g.is_external(h) for h in f)]


def first_betti(g: RibbonGraph) -> int:
    """Cycle rank: internal edges minus vertices plus one (for connected g)."""
    return len(g.internal_edges()) - len(g.vertices) + 1
