"""
Freely generated dg-categories with weight-graded generators.

Each generator carries a cohomological degree and a positive weight.  The
differential lowers degree by one and preserves weight, so every
hom-complex splits into finite (degree, weight) blocks.  Composition is
written in function order and the differential obeys

    d(uv) = d(u) v + (-1)^|u| u d(v).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .ncpoly import NcPoly, Path, format_poly, multiply, parse_poly
from .quiver import (GradedQuiver, Potential, cyclic_derivative, interior_quiver,
                     potential_of_triangulation, quiver_of_triangulation, vertex_id)
from .triangulation import IdealTriangulation


class DgError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    tgt: str
    degree: int
    weight: int


def star(name: str) -> str:
    return name + "*"


class FreeDgCategory:
    """Objects, generators and the differential on generators.

    ``boundary`` marks objects coming from boundary edges and ``collar``
    marks collar generators; both are consumed by the interior restriction.
    """

    def __init__(self, objects: Iterable[str], generators: Iterable[Generator],
                 differential: Mapping[str, NcPoly] | None = None,
                 boundary: Iterable[str] = (), collar: Iterable[str] = ()):
        self.objects = tuple(objects)
        self.generators = tuple(generators)
        self.gens = {g.name: g for g in self.generators}
        if len(self.gens) != len(self.generators):
            raise DgError("duplicate generator names")
        objs = set(self.objects)
        for g in self.generators:
            if g.src not in objs or g.tgt not in objs:
                raise DgError(f"generator {g.name} has an unknown endpoint")
            if g.degree < 0 or g.weight < 1:
                raise DgError(f"generator {g.name} needs degree >= 0 and weight >= 1")
        d = dict(differential or {})
        self.d = {g.name: d.get(g.name, NcPoly.zero(g.src, g.tgt)) for g in self.generators}
        for name in d:
            if name not in self.gens:
                raise DgError(f"differential given for unknown generator {name}")
        self.boundary = frozenset(boundary)
        self.collar = frozenset(collar)
        self.annotations: dict = {}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeDgCategory):
            return NotImplemented
        return (set(self.objects) == set(other.objects) and self.gens == other.gens
                and self.d == other.d)

    def generator(self, name: str) -> NcPoly:
        g = self.gens[name]
        return NcPoly.gen(name, g.src, g.tgt)

    def lazy(self, obj: str) -> NcPoly:
        return NcPoly.lazy(obj)

    def word(self, *names: str) -> NcPoly:
        """The path ``names[0] ... names[-1]`` in function order."""
        p = self.generator(names[-1])
        for n in reversed(names[:-1]):
            p = multiply(self.generator(n), p)
        return p

    def path_degree(self, path: Path) -> int:
        return sum(self.gens[x].degree for x in path)

    def path_weight(self, path: Path) -> int:
        return sum(self.gens[x].weight for x in path)

    def out_of(self, obj: str) -> list[Generator]:
        return [g for g in self.generators if g.src == obj]

    def __repr__(self) -> str:
        return f"FreeDgCategory({len(self.objects)} objects, {len(self.generators)} generators)"


# -- differential -----------------------------------------------------------

def differential_of_path(C: FreeDgCategory, path: Path) -> dict[Path, Fraction]:
    """Leibniz expansion of ``d`` on a single path, as a term dictionary."""
    out: dict[Path, Fraction] = {}
    sign = 1
    for i, x in enumerate(path):
        dx = C.d[x]
        if dx.terms:
            left, right = path[:i], path[i + 1:]
            for p, c in dx.terms.items():
                k = left + p + right
                out[k] = out.get(k, 0) + sign * c
        if C.gens[x].degree % 2:
            sign = -sign
    return out


def apply_differential(C: FreeDgCategory, p: NcPoly) -> NcPoly:
    degs = {C.path_degree(path) for path in p.terms}
    if len(degs) > 1:
        raise DgError("apply_differential needs a degree-homogeneous polynomial")
    acc: dict[Path, Fraction] = {}
    for path, c in p.terms.items():
        for q, v in differential_of_path(C, path).items():
            acc[q] = acc.get(q, 0) + c * v
    return NcPoly(acc, p.src, p.tgt)


def _composable(C: FreeDgCategory, path: Path, src: str, tgt: str) -> bool:
    if not path:
        return src == tgt
    if C.gens[path[-1]].src != src or C.gens[path[0]].tgt != tgt:
        return False
    return all(C.gens[path[i]].src == C.gens[path[i + 1]].tgt for i in range(len(path) - 1))


@dataclass
class Issue:
    generator: str
    kind: str
    residual: NcPoly | None = None

    def __str__(self) -> str:
        tail = f": {format_poly(self.residual)}" if self.residual is not None else ""
        return f"{self.generator}: {self.kind}{tail}"


def check_dg(C: FreeDgCategory) -> list[Issue]:
    """Every generator whose differential breaks composability, the degree
    drop, weight homogeneity or ``d^2 = 0``."""
    issues = []
    for g in C.generators:
        dg = C.d[g.name]
        bad = False
        for path in dg.terms:
            if path and any(x not in C.gens for x in path):
                issues.append(Issue(g.name, "unknown generator in differential", dg))
                bad = True
                break
            if not _composable(C, path, g.src, g.tgt):
                issues.append(Issue(g.name, "differential not a path between the endpoints", dg))
                bad = True
                break
            if C.path_degree(path) != g.degree - 1:
                issues.append(Issue(g.name, "degree not lowered by one", dg))
                bad = True
                break
            if C.path_weight(path) != g.weight:
                issues.append(Issue(g.name, "weight not preserved", dg))
                bad = True
                break
        if bad:
            continue
        dd = apply_differential(C, dg)
        if dd:
            issues.append(Issue(g.name, "d^2 != 0", dd))
    return issues


# -- text dump --------------------------------------------------------------

def dump(C: FreeDgCategory) -> str:
    lines = ["objects: " + " ".join(C.objects)]
    if C.boundary:
        lines.append("boundary: " + " ".join(o for o in C.objects if o in C.boundary))
    if C.collar:
        lines.append("collar: " + " ".join(g.name for g in C.generators if g.name in C.collar))
    for g in C.generators:
        lines.append(f"{g.name}: {g.src} -> {g.tgt}, {g.degree}, {g.weight}, "
                     f"d = {format_poly(C.d[g.name])}")
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> FreeDgCategory:
    objects, boundary, collar, gens, diffs = [], [], [], [], {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(": ")
        if head == "objects":
            objects = rest.split()
        elif head == "boundary":
            boundary = rest.split()
        elif head == "collar":
            collar = rest.split()
        else:
            ends, deg, wt, dpart = [s.strip() for s in rest.split(",", 3)]
            src, _, tgt = ends.partition(" -> ")
            gens.append(Generator(head, src.strip(), tgt.strip(), int(deg), int(wt)))
            if not dpart.startswith("d = "):
                raise DgError(f"malformed dump line: {line}")
            diffs[head] = parse_poly(dpart[4:], src.strip(), tgt.strip())
    return FreeDgCategory(objects, gens, diffs, boundary, collar)


def rename(C: FreeDgCategory, objects: Mapping[str, str] | None = None,
           generators: Mapping[str, str] | None = None) -> FreeDgCategory:
    om = lambda o: (objects or {}).get(o, o)
    gm = lambda g: (generators or {}).get(g, g)
    gens = [Generator(gm(g.name), om(g.src), om(g.tgt), g.degree, g.weight)
            for g in C.generators]
    diffs = {gm(n): NcPoly({tuple(gm(x) for x in path): c for path, c in p.terms.items()},
                          om(C.gens[n].src), om(C.gens[n].tgt))
             for n, p in C.d.items()}
    return FreeDgCategory([om(o) for o in C.objects], gens, diffs,
                          [om(o) for o in C.boundary], [gm(g) for g in C.collar])


# -- dg-functors ------------------------------------------------------------

class DgFunctor:
    """Object map plus generator images; extended multiplicatively."""

    def __init__(self, source: FreeDgCategory, target: FreeDgCategory,
                 objects: Mapping[str, str], images: Mapping[str, NcPoly],
                 verify: bool = True):
        self.source = source
        self.target = target
        self.objects = dict(objects)
        self.images = {}
        for g in source.generators:
            img = images.get(g.name)
            if img is None:
                img = NcPoly.zero(self.objects[g.src], self.objects[g.tgt])
            self.images[g.name] = img
        if verify:
            bad = self.check()
            if bad:
                raise DgError("not a dg-functor: " + "; ".join(map(str, bad)))

    def apply(self, p: NcPoly) -> NcPoly:
        src = self.objects.get(p.src) if p.src is not None else None
        tgt = self.objects.get(p.tgt) if p.tgt is not None else None
        acc: dict[Path, Fraction] = {}
        for path, c in p.terms.items():
            if not path:
                img = {(): Fraction(1)}
            else:
                img = dict(self.images[path[-1]].terms)
                for x in reversed(path[:-1]):
                    nxt: dict[Path, Fraction] = {}
                    for a, u in self.images[x].terms.items():
                        for b, v in img.items():
                            nxt[a + b] = nxt.get(a + b, 0) + u * v
                    img = nxt
            for q, v in img.items():
                acc[q] = acc.get(q, 0) + c * v
        return NcPoly(acc, src, tgt)

    def check(self) -> list[Issue]:
        """Generators where ``F(d g) != d(F g)`` or the image has the wrong
        endpoints, degree or weight."""
        issues = []
        T = self.target
        for g in self.source.generators:
            img = self.images[g.name]
            want = (self.objects[g.src], self.objects[g.tgt])
            wrong = False
            for path, _ in img.terms.items():
                if not _composable(T, path, *want):
                    issues.append(Issue(g.name, "image not a path between the image objects", img))
                    wrong = True
                    break
                if T.path_degree(path) != g.degree or T.path_weight(path) != g.weight:
                    issues.append(Issue(g.name, "image has the wrong degree or weight", img))
                    wrong = True
                    break
            if wrong:
                continue
            residual = self.apply(self.source.d[g.name]) - apply_differential(T, img)
            if residual:
                issues.append(Issue(g.name, "F(d g) != d(F g)", residual))
        return issues

    def then(self, other: "DgFunctor", verify: bool = True) -> "DgFunctor":
        """``other ∘ self``."""
        objs = {o: other.objects[self.objects[o]] for o in self.source.objects}
        imgs = {n: other.apply(p) for n, p in self.images.items()}
        return DgFunctor(self.source, other.target, objs, imgs, verify)

    def same_as(self, other: "DgFunctor") -> bool:
        return self.objects == other.objects and all(
            self.images[n] == other.images[n] for n in self.images)


def identity_functor(C: FreeDgCategory) -> DgFunctor:
    return DgFunctor(C, C, {o: o for o in C.objects},
                     {g.name: C.generator(g.name) for g in C.generators})


# -- builders ---------------------------------------------------------------

ARROW_WEIGHT, STAR_WEIGHT, LOOP_WEIGHT = 1, 2, 3


def loop_name(v: str) -> str:
    return f"l{v}"


def commutator_sum(q: GradedQuiver, v: str) -> NcPoly:
    """``sum over arrows a of p_v [a, a*] p_v``."""
    terms = []
    for a in q.arrows:
        if a.tgt == v:
            terms.append(((a.name, star(a.name)), 1))
        if a.src == v:
            terms.append(((star(a.name), a.name), -1))
    return NcPoly(terms, v, v)


def ginzburg(q: GradedQuiver, w: Potential, loops: Iterable[str] | None = None) -> FreeDgCategory:
    """Ginzburg dg-category of ``(q, w)``; degree-2 loops at ``loops``
    (default: every vertex)."""
    names = {a.name for a in q.arrows}
    for _, cyc in w.terms:
        if not set(cyc) <= names:
            raise DgError("potential uses arrows outside the quiver")
    for a in q.arrows:
        if a.degree != 0:
            raise DgError("Ginzburg construction needs degree-0 arrows")
    loops = list(q.vertices if loops is None else loops)
    gens, diffs = [], {}
    for a in q.arrows:
        gens.append(Generator(a.name, a.src, a.tgt, 0, ARROW_WEIGHT))
    for a in q.arrows:
        gens.append(Generator(star(a.name), a.tgt, a.src, 1, STAR_WEIGHT))
        diffs[star(a.name)] = cyclic_derivative(q, w, a.name)
    for v in loops:
        gens.append(Generator(loop_name(v), v, v, 2, LOOP_WEIGHT))
        diffs[loop_name(v)] = commutator_sum(q, v)
    return FreeDgCategory(q.vertices, gens, diffs, boundary=q.frozen)


def relative_ginzburg(t: IdealTriangulation) -> FreeDgCategory:
    q = quiver_of_triangulation(t)
    return ginzburg(q, potential_of_triangulation(t),
                    [vertex_id(e) for e in t.internal_edges])


def interior_ginzburg(t: IdealTriangulation) -> FreeDgCategory:
    """``G(Q°_T, W'_T)``."""
    return ginzburg(interior_quiver(t), potential_of_triangulation(t, interior=True))


def collar_names(e: str, suffix: str = "") -> tuple[str, str]:
    return f"l1'{e}{suffix}", f"l2'{e}{suffix}"


def add_collar(gens: list, diffs: dict, q: GradedQuiver, e: str, suffix: str = "") -> tuple[str, str]:
    one, two = collar_names(e, suffix)
    gens.append(Generator(one, e, e, 1, LOOP_WEIGHT))
    gens.append(Generator(two, e, e, 2, LOOP_WEIGHT))
    diffs[two] = NcPoly.gen(one, e, e) - commutator_sum(q, e)
    return one, two


def collared(t: IdealTriangulation) -> FreeDgCategory:
    """Relative Ginzburg category with a collar pair at each boundary edge."""
    q = quiver_of_triangulation(t)
    G = relative_ginzburg(t)
    gens, diffs = list(G.generators), dict(G.d)
    collar = []
    for e in sorted(t.boundary):
        collar.extend(add_collar(gens, diffs, q, vertex_id(e)))
    return FreeDgCategory(G.objects, gens, diffs, G.boundary, collar)


def d3(n: int = 2) -> FreeDgCategory:
    if n < 2:
        raise DgError("n must be at least 2")
    gens = [
        Generator("a", "x", "y", n - 2, ARROW_WEIGHT),
        Generator("b", "y", "z", 0, ARROW_WEIGHT),
        Generator("c", "z", "x", 0, ARROW_WEIGHT),
        Generator("a*", "y", "x", 1, STAR_WEIGHT),
        Generator("b*", "z", "y", n - 1, STAR_WEIGHT),
        Generator("c*", "x", "z", n - 1, STAR_WEIGHT),
    ]
    C = FreeDgCategory("xyz", gens)
    diffs = {"a*": C.word("c", "b"), "b*": C.word("a", "c"), "c*": C.word("b", "a")}
    return FreeDgCategory("xyz", gens, diffs)


def d2(n: int = 2) -> FreeDgCategory:
    if n < 2:
        raise DgError("n must be at least 2")
    return FreeDgCategory("xz", [Generator("c", "z", "x", 0, ARROW_WEIGHT),
                                 Generator("c*", "x", "z", n - 1, STAR_WEIGHT)])


def poly(m: int) -> FreeDgCategory:
    """One object ``*`` with a single closed loop ``t`` of degree ``m``."""
    if m < 1:
        raise DgError("degree must be positive")
    return FreeDgCategory(["*"], [Generator("t", "*", "*", m, LOOP_WEIGHT)])


I_OBJECTS = {1: "x", 2: "z", 3: "y"}


def i_image(j: int, n: int) -> NcPoly:
    """Image of ``t`` under ``i_j^+``: ``cc* - a*a``, ``bb* - c*c`` or
    ``(-1)^n aa* - b*b``."""
    D = d3(n)
    if j == 1:
        return D.word("c", "c*") - D.word("a*", "a")
    if j == 2:
        return D.word("b", "b*") - D.word("c*", "c")
    if j == 3:
        return D.word("a", "a*").scale((-1) ** n) - D.word("b*", "b")
    raise DgError("j must be 1, 2 or 3")


def i_functor(j: int, sign: int, n: int = 2) -> DgFunctor:
    if sign not in (1, -1):
        raise DgError("sign must be +1 or -1")
    return DgFunctor(poly(n - 1), d3(n), {"*": I_OBJECTS[j]},
                     {"t": i_image(j, n).scale(sign)})


T_OBJECTS = {"x": "y", "y": "z", "z": "x"}
T_ARROWS = {"a": "b", "b": "c", "c": "a"}


def t_d3(signed: bool = True, verify: bool = False) -> DgFunctor:
    """Rotation of ``D_3`` at n = 2.  With ``signed`` the starred generators
    also change sign, as in the printed formula; that map does not commute
    with the differential (``F(d a*) = ac`` while ``d F(a*) = -ac``), so it
    is built unverified.  ``signed=False`` is the rotation that does."""
    D = d3(2)
    s = -1 if signed else 1
    imgs = {}
    for x, y in T_ARROWS.items():
        imgs[x] = D.generator(y)
        imgs[star(x)] = D.generator(star(y)).scale(s)
    return DgFunctor(D, D, T_OBJECTS, imgs, verify)


def negate(C: FreeDgCategory, names: Iterable[str], verify: bool = False) -> DgFunctor:
    names = set(names)
    return DgFunctor(C, C, {o: o for o in C.objects},
                     {g.name: C.generator(g.name).scale(-1 if g.name in names else 1)
                      for g in C.generators}, verify)


def phi_twist(n: int) -> DgFunctor:
    P = poly(n - 1)
    return DgFunctor(P, P, {"*": "*"}, {"t": P.generator("t").scale((-1) ** (n - 1))})


def power(F: DgFunctor, k: int, verify: bool = False) -> DgFunctor:
    out = identity_functor(F.source)
    for _ in range(k):
        out = out.then(F, verify)
    return out
