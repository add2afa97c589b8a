"""
Combinatorial spin structures on trivalent ribbon graphs.

Morphisms of the two-object category M2 are kept in normal form:

* ``[1] -> [1]``: ``(tau1)^m``, ``m`` mod 4
* ``[2] -> [2]``: ``(tau2)^k``, ``k`` mod 6
* ``[1] -> [2]``: ``delta^l (tau1)^m`` with ``l`` in ``{0, 1, 2}``

A spin structure stores, for every flag, the exponent ``m``; the index
``l`` is the flag's position in a recorded linear order of its vertex.
The flag's gluing sign is ``(+, -, +)[l] * (-1)^m``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .ribbon import RibbonGraph, first_betti, validate

BASE = (1, -1, 1)
BRUTE_FORCE_FLAGS = 8


class SpinError(ValueError):
    pass


@dataclass(frozen=True)
class M2Morphism:
    source: int
    target: int
    m: int
    l: int | None = None

    def __post_init__(self):
        kind = (self.source, self.target)
        if kind == (1, 1):
            object.__setattr__(self, "m", self.m % 4)
        elif kind == (2, 2):
            object.__setattr__(self, "m", self.m % 6)
        elif kind == (1, 2):
            if self.l not in (0, 1, 2):
                raise SpinError("delta index must be 0, 1 or 2")
            object.__setattr__(self, "m", self.m % 4)
        else:
            raise SpinError(f"no morphisms [{self.source}] -> [{self.target}] in this model")
        if kind != (1, 2) and self.l is not None:
            raise SpinError("only morphisms [1] -> [2] carry a delta index")

    def __str__(self) -> str:
        if self.source == self.target:
            return f"tau{self.source}^{self.m}"
        return f"delta{self.l} tau1^{self.m}"


def tau(n: int, k: int = 1) -> M2Morphism:
    return M2Morphism(n, n, k)


def delta(l: int, m: int = 0) -> M2Morphism:
    return M2Morphism(1, 2, m, l)


def identity(n: int) -> M2Morphism:
    return M2Morphism(n, n, 0)


def _tau2_once(l: int, m: int) -> tuple[int, int]:
    # tau2 delta^l = delta^(l-1) tau1 for l > 0, and tau2 delta^0 = delta^2
    return (l - 1, m + 1) if l > 0 else (2, m)


def m2_compose(f: M2Morphism, g: M2Morphism) -> M2Morphism:
    """``f ∘ g`` (``g`` first)."""
    if g.target != f.source:
        raise SpinError(f"cannot compose [{f.source}]->[{f.target}] after "
                        f"[{g.source}]->[{g.target}]")
    if g.source == f.target:
        return M2Morphism(g.source, g.source, f.m + g.m)
    if f.source == 1:
        # f = delta^l tau1^m after g = tau1^j
        return delta(f.l, f.m + g.m)
    l, m = g.l, g.m
    for _ in range(f.m):
        l, m = _tau2_once(l, m)
    return delta(l, m)


def m2_hom(source: int, target: int) -> list[M2Morphism]:
    if (source, target) == (1, 1):
        return [tau(1, m) for m in range(4)]
    if (source, target) == (2, 2):
        return [tau(2, k) for k in range(6)]
    if (source, target) == (1, 2):
        return [delta(l, m) for l in range(3) for m in range(4)]
    return []


# -- spin structures ----------------------------------------------------------

def require_trivalent(g: RibbonGraph) -> None:
    problems = validate(g)
    if problems:
        raise SpinError("invalid ribbon graph: " + "; ".join(problems))
    for v in g.vertices:
        if g.degree(v) != 3:
            raise SpinError(f"vertex {v} is not trivalent")


def default_base_order(g: RibbonGraph) -> dict[int, tuple[int, ...]]:
    """Cyclic order at each vertex, started at the smallest half-edge."""
    out = {}
    for v in g.vertices:
        cyc = tuple(g.cyclic[v])
        i = cyc.index(min(cyc))
        out[v] = cyc[i:] + cyc[:i]
    return out


@dataclass(frozen=True)
class SpinStructure:
    base_order: Mapping[int, tuple[int, ...]]
    m: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "base_order",
                           {int(v): tuple(hs) for v, hs in self.base_order.items()})
        object.__setattr__(self, "m", {int(h): int(x) % 4 for h, x in self.m.items()})
        flags = sorted(h for hs in self.base_order.values() for h in hs)
        if flags != sorted(self.m):
            raise SpinError("exponents must be given for exactly the ordered flags")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.base_order.items())), tuple(sorted(self.m.items()))))

    def position(self, h: int) -> tuple[int, int]:
        for v, hs in self.base_order.items():
            if h in hs:
                return v, hs.index(h)
        raise SpinError(f"unknown flag {h}")

    def morphism(self, h: int) -> M2Morphism:
        return delta(self.position(h)[1], self.m[h])

    def key(self) -> tuple[int, ...]:
        return tuple(self.m[h] for h in sorted(self.m))

    def with_m(self, m: Mapping[int, int]) -> "SpinStructure":
        return SpinStructure(self.base_order, m)

    def to_json(self) -> dict:
        return {"base_order": {str(v): list(hs) for v, hs in sorted(self.base_order.items())},
                "m": {str(h): x for h, x in sorted(self.m.items())}}

    @classmethod
    def from_json(cls, data: Mapping) -> "SpinStructure":
        return cls({int(v): tuple(hs) for v, hs in data["base_order"].items()},
                   {int(h): int(x) for h, x in data["m"].items()})


def trivial_spin(g: RibbonGraph) -> SpinStructure:
    require_trivalent(g)
    order = default_base_order(g)
    return SpinStructure(order, {h: 0 for hs in order.values() for h in hs})


def vertex_move(s: SpinStructure, v: int, k: int) -> SpinStructure:
    """Precompose every flag at ``v`` with ``(tau2)^k`` and bring the
    resulting delta index back to the flag's recorded position.

    Moving a flag from position ``l'`` to ``l`` keeps its sign, which costs
    one unit of ``m`` when the base signs differ; ``(tau2)^k`` itself acts
    by ``(-1)^k`` on the starred side, which costs one more unit when
    ``k`` is odd.
    """
    m = dict(s.m)
    for l, h in enumerate(s.base_order[v]):
        moved = m2_compose(tau(2, k), delta(l, m[h]))
        fix = (BASE[moved.l] != BASE[l]) ^ (k % 2 == 1)
        m[h] = moved.m + int(fix)
    return s.with_m(m)


def edge_move(s: SpinStructure, g: RibbonGraph, h: int, j: int) -> SpinStructure:
    """Compose with ``(tau1)^j`` on both flags of the edge through ``h``."""
    m = dict(s.m)
    for x in {h, g.tau[h]}:
        m[x] = m2_compose(s.morphism(x), tau(1, j)).m
    return s.with_m(m)


def spin_moves(g: RibbonGraph, s: SpinStructure) -> list[tuple[str, SpinStructure]]:
    """All single moves out of ``s``, labelled."""
    require_trivalent(g)
    out = []
    for v in sorted(s.base_order):
        for k in range(1, 6):
            out.append((f"vertex {v} k={k}", vertex_move(s, v, k)))
    for e in g.edges():
        for j in range(1, 4):
            out.append((f"edge {e[0]}-{e[1]} j={j}", edge_move(s, g, e[0], j)))
    return out


def spin_to_signs(s: SpinStructure) -> dict[int, int]:
    out = {}
    for v, hs in s.base_order.items():
        for l, h in enumerate(hs):
            out[h] = BASE[l] * (-1) ** s.m[h]
    return dict(sorted(out.items()))


# -- classification -----------------------------------------------------------

def twist_cochain(g: RibbonGraph, s: SpinStructure) -> dict[tuple[int, int], int]:
    """1 on an internal edge whose two flags carry equal signs."""
    signs = spin_to_signs(s)
    return {e: int(signs[e[0]] == signs[e[1]]) for e in g.internal_edges()}


def _spanning_tree(g: RibbonGraph) -> tuple[set, dict[int, tuple[int, int]]]:
    """Tree edges of a BFS from the smallest vertex, and for each vertex the
    edge it was reached by."""
    root = min(g.vertices)
    seen, tree, parent = {root}, set(), {}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for h in sorted(g.cyclic[v]):
            o = g.tau[h]
            if o == h:
                continue
            w = g.sigma[o]
            if w not in seen:
                seen.add(w)
                e = g.edge_of(h)
                tree.add(e)
                parent[w] = e
                queue.append(w)
    return tree, parent


def monodromy(g: RibbonGraph, s: SpinStructure) -> dict[tuple[int, int], int]:
    """Twist count mod 2 around the fundamental cycle of each non-tree edge."""
    require_trivalent(g)
    t = twist_cochain(g, s)
    tree, _ = _spanning_tree(g)
    # potential on vertices killing the cochain on the tree
    pot = {min(g.vertices): 0}
    queue = deque([min(g.vertices)])
    while queue:
        v = queue.popleft()
        for h in sorted(g.cyclic[v]):
            o = g.tau[h]
            if o == h:
                continue
            e = g.edge_of(h)
            w = g.sigma[o]
            if e in tree and w not in pot:
                pot[w] = pot[v] ^ t[e]
                queue.append(w)
    return {e: t[e] ^ pot[g.sigma[e[0]]] ^ pot[g.sigma[e[1]]]
            for e in sorted(t) if e not in tree}


def class_key(g: RibbonGraph, s: SpinStructure) -> tuple[int, ...]:
    return tuple(monodromy(g, s).values())


def representative(g: RibbonGraph, key: Iterable[int],
                   base_order: Mapping[int, tuple[int, ...]] | None = None) -> SpinStructure:
    """A structure with no twist on the tree edges and the given twists on
    the remaining internal edges."""
    order = dict(base_order or default_base_order(g))
    s = SpinStructure(order, {h: 0 for hs in order.values() for h in hs})
    tree, _ = _spanning_tree(g)
    free = [e for e in sorted(g.internal_edges()) if e not in tree]
    want = {e: 0 for e in tree}
    want.update(zip(free, key))
    signs = spin_to_signs(s)
    m = dict(s.m)
    for e, x in want.items():
        if int(signs[e[0]] == signs[e[1]]) != x:
            m[e[1]] = 1
    return s.with_m(m)


def orbits_brute_force(g: RibbonGraph,
                       base_order: Mapping[int, tuple[int, ...]] | None = None) -> list[list[SpinStructure]]:
    """Connected components of the move graph on all ``4^flags`` structures."""
    require_trivalent(g)
    order = dict(base_order or default_base_order(g))
    flags = sorted(h for hs in order.values() for h in hs)
    if len(flags) > BRUTE_FORCE_FLAGS:
        raise SpinError(f"brute force limited to {BRUTE_FORCE_FLAGS} flags")
    seen: set[tuple[int, ...]] = set()
    out = []
    for values in product(range(4), repeat=len(flags)):
        if values in seen:
            continue
        start = SpinStructure(order, dict(zip(flags, values)))
        orbit, queue = [start], deque([start])
        seen.add(values)
        while queue:
            s = queue.popleft()
            for _, n in spin_moves(g, s):
                if n.key() not in seen:
                    seen.add(n.key())
                    orbit.append(n)
                    queue.append(n)
        out.append(orbit)
    return out


def classify_spin(g: RibbonGraph, method: str = "auto") -> list[SpinStructure]:
    """One representative per equivalence class, ordered by monodromy."""
    require_trivalent(g)
    nflags = len(g.halfedges)
    if method == "auto":
        method = "brute" if nflags <= BRUTE_FORCE_FLAGS else "cocycle"
    if method == "brute":
        reps = [min(orbit, key=lambda s: s.key()) for orbit in orbits_brute_force(g)]
        return sorted(reps, key=lambda s: (class_key(g, s), s.key()))
    if method == "cocycle":
        b1 = first_betti(g)
        return [representative(g, key) for key in product(range(2), repeat=b1)]
    raise SpinError(f"unknown method {method!r}")


def equivalent(g: RibbonGraph, s1: SpinStructure, s2: SpinStructure) -> bool:
    return class_key(g, s1) == class_key(g, s2)


def spin_from_assembly(ledger, g: RibbonGraph,
                       base_order: Mapping[int, tuple[int, ...]] | None = None) -> SpinStructure:
    """Exponents in ``{0, 1}`` reproducing the ledger's effective signs."""
    require_trivalent(g)
    order = dict(base_order or default_base_order(g))
    signs = {int(h): s for h, s in ledger.signs.items()}
    flags = sorted(h for hs in order.values() for h in hs)
    if sorted(signs) != flags:
        raise SpinError("ledger flags do not match the graph")
    for ev in ledger.events:
        for h, x in zip(ev.flags, ev.effective):
            if signs.get(h) != x:
                raise SpinError(f"ledger is inconsistent at flag {h}")
    m = {}
    for v, hs in order.items():
        for l, h in enumerate(hs):
            if signs[h] not in (1, -1):
                raise SpinError(f"bad sign at flag {h}")
            m[h] = int(signs[h] != BASE[l])
    return SpinStructure(order, m)
