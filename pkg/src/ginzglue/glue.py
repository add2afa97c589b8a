"""
Gluing free dg-categories along elementary legs.

A leg is elementary when it sends every generator of its source to plus or
minus a single generator, injectively.  A pushout along such a leg deletes
the image generators and substitutes the other leg's images for them; no
rewriting theory is needed.

``assemble_surface`` builds the category of a triangulated surface from
one collared triangle per face.  Side ``p`` of triangle ``f`` is the flag
``h = 3f + p``; its collar loops are ``l1'[h]`` and ``l2'[h]`` and the
triangle's leg at that side sends ``t`` to ``±l1'[h]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dgcat import (ARROW_WEIGHT, LOOP_WEIGHT, STAR_WEIGHT, DgFunctor, FreeDgCategory,
                    Generator, Issue, check_dg, collared, loop_name, poly, rename, star)
from .homology import compare_betti
from .ncpoly import NcPoly
from .quiver import vertex_id
from .triangulation import IdealTriangulation, halfedge, require_valid, side_of

BASE_SIGNS = (1, -1, 1)


class GlueError(ValueError):
    pass


def elementary_data(F: DgFunctor) -> dict[str, tuple[int, str]]:
    """``{s: (sign, g)}`` when ``F(s) = sign * g``; raises otherwise."""
    out, used = {}, set()
    for name, img in F.images.items():
        if len(img.terms) != 1:
            raise GlueError(f"leg is not elementary at {name}")
        (path, c), = img.terms.items()
        if len(path) != 1 or c not in (1, -1):
            raise GlueError(f"leg is not elementary at {name}")
        if path[0] in used:
            raise GlueError("leg is not injective on generators")
        used.add(path[0])
        out[name] = (int(c), path[0])
    return out


def _substitute(C: FreeDgCategory, p: NcPoly, subs: Mapping[str, NcPoly],
                objects: Mapping[str, str]) -> NcPoly:
    """Replace generators by polynomials inside ``p``, renaming objects."""
    om = lambda o: objects.get(o, o)
    acc = NcPoly.zero(om(p.src), om(p.tgt))
    for path, c in p.terms.items():
        term = {(): c}
        for x in reversed(path):
            piece = subs.get(x)
            pterms = piece.terms if piece is not None else {(x,): 1}
            term = {a + b: u * v for a, u in pterms.items() for b, v in term.items()} \
                if len(pterms) == 1 else _mul(pterms, term)
        acc = acc + NcPoly(term, acc.src, acc.tgt)
    return acc


def _mul(p: Mapping, q: Mapping) -> dict:
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return out


def _merge(A: FreeDgCategory, B: FreeDgCategory | None, eliminate: Mapping[str, NcPoly],
           objects: Mapping[str, str], glued_objects: Iterable[str]) -> FreeDgCategory:
    """Drop the generators in ``eliminate`` from ``A`` (replacing them by the
    given polynomials), rename objects of ``A`` and add ``B`` if given."""
    om = lambda o: objects.get(o, o)
    objs = []
    for o in A.objects:
        if om(o) not in objs:
            objs.append(om(o))
    if B is not None:
        clash = (set(objs) - {om(o) for o in objects}) & set(B.objects)
        if clash:
            raise GlueError(f"object names shared without gluing: {sorted(clash)}")
        clash = (set(A.gens) - set(eliminate)) & set(B.gens)
        if clash:
            raise GlueError(f"generator names shared: {sorted(clash)}")
        objs = list(B.objects) + [o for o in objs if o not in B.objects]
    gens, diffs = [], {}
    for g in A.generators:
        if g.name in eliminate:
            continue
        gens.append(Generator(g.name, om(g.src), om(g.tgt), g.degree, g.weight))
        diffs[g.name] = _substitute(A, A.d[g.name], eliminate, objects)
    boundary = {om(o) for o in A.boundary}
    collar = set(A.collar) - set(eliminate)
    if B is not None:
        gens = list(B.generators) + gens
        diffs.update(B.d)
        boundary |= B.boundary
        collar |= B.collar
    boundary -= set(glued_objects)
    C = FreeDgCategory(objs, gens, diffs, [o for o in objs if o in boundary], collar)
    C.annotations = dict(getattr(A, "annotations", {}))
    if B is not None:
        C.annotations.update(getattr(B, "annotations", {}))
    return C


def _check_substitution(A: FreeDgCategory, target: FreeDgCategory,
                        eliminate: Mapping[str, NcPoly]) -> None:
    for name, img in eliminate.items():
        g = A.gens[name]
        for path in img.terms:
            if target.path_degree(path) != g.degree or target.path_weight(path) != g.weight:
                raise GlueError(f"substituting {name} changes degree or weight")


def pushout(S: FreeDgCategory, legA: DgFunctor, legB: DgFunctor) -> FreeDgCategory:
    """Pushout of ``A <- S -> B`` with ``legA`` elementary.

    Each generator ``g = ±legA(s)`` of ``A`` is removed and replaced by
    ``±legB(s)``; objects of ``A`` hit by ``legA`` are identified with their
    partners in ``B``.
    """
    A, B = legA.target, legB.target
    data = elementary_data(legA)
    objects = {legA.objects[o]: legB.objects[o] for o in S.objects}
    eliminate = {g: legB.images[s].scale(sign) for s, (sign, g) in data.items()}
    out = _merge(A, B, eliminate, objects, objects.values())
    _check_substitution(A, out, eliminate)
    issues = check_dg(out)
    if issues:
        raise GlueError("pushout is not a dg-category: " + "; ".join(map(str, issues)))
    return out


def coequalize(S: FreeDgCategory, f: DgFunctor, g: DgFunctor) -> FreeDgCategory:
    """Identify ``f(s)`` with ``g(s)`` inside one category; the images of
    ``g`` are the generators that disappear."""
    if f.target is not g.target:
        raise GlueError("both legs must land in the same category")
    A = f.target
    fd, gd = elementary_data(f), elementary_data(g)
    if {x for _, x in fd.values()} & {x for _, x in gd.values()}:
        raise GlueError("legs have overlapping images")
    objects = {}
    for o in S.objects:
        src, dst = g.objects[o], f.objects[o]
        if src != dst:
            objects[src] = dst
    eliminate = {}
    for s, (sg, x) in gd.items():
        sf, y = fd[s]
        tgt = A.gens[y]
        eliminate[x] = NcPoly.gen(y, objects.get(tgt.src, tgt.src),
                                  objects.get(tgt.tgt, tgt.tgt)).scale(sf * sg)
    out = _merge(A, None, eliminate, objects, [f.objects[o] for o in S.objects])
    _check_substitution(A, out, eliminate)
    issues = check_dg(out)
    if issues:
        raise GlueError("coequalizer is not a dg-category: " + "; ".join(map(str, issues)))
    return out


# -- triangle pieces ----------------------------------------------------------

def local_object(h: int) -> str:
    f, p = side_of(h)
    return f"{f}:{p}"


def local_collar(h: int) -> tuple[str, str]:
    return f"l1'[{h}]", f"l2'[{h}]"


def local_piece(f: int) -> FreeDgCategory:
    """Collared category of triangle ``f`` with one object per side."""
    o = [local_object(halfedge(f, p)) for p in range(3)]
    n = f + 1
    a, b, c = f"a{n}", f"b{n}", f"c{n}"
    gens = [Generator(a, o[0], o[2], 0, ARROW_WEIGHT),
            Generator(b, o[2], o[1], 0, ARROW_WEIGHT),
            Generator(c, o[1], o[0], 0, ARROW_WEIGHT),
            Generator(star(a), o[2], o[0], 1, STAR_WEIGHT),
            Generator(star(b), o[1], o[2], 1, STAR_WEIGHT),
            Generator(star(c), o[0], o[1], 1, STAR_WEIGHT)]
    bare = FreeDgCategory(o, gens)
    diffs = {star(a): bare.word(c, b), star(b): bare.word(a, c), star(c): bare.word(b, a)}
    sigma = {o[0]: bare.word(c, star(c)) - bare.word(star(a), a),
             o[1]: bare.word(b, star(b)) - bare.word(star(c), c),
             o[2]: bare.word(a, star(a)) - bare.word(star(b), b)}
    collar = []
    for p in range(3):
        one, two = local_collar(halfedge(f, p))
        gens.append(Generator(one, o[p], o[p], 1, LOOP_WEIGHT))
        gens.append(Generator(two, o[p], o[p], 2, LOOP_WEIGHT))
        diffs[two] = NcPoly.gen(one, o[p], o[p]) - sigma[o[p]]
        collar += [one, two]
    C = FreeDgCategory(o, gens, diffs, o, collar)
    C.annotations = {}
    return C


def collar_leg(C: FreeDgCategory, h: int, sign: int) -> DgFunctor:
    one, _ = local_collar(h)
    obj = C.gens[one].src
    return DgFunctor(poly(1), C, {"*": obj}, {"t": C.generator(one).scale(sign)})


# -- assembly -----------------------------------------------------------------

@dataclass
class GlueEvent:
    edge: int
    flags: tuple[int, int]          # (side already assembled, side being attached)
    seed: tuple[int, int]
    twisted: bool
    effective: tuple[int, int]
    kind: str                       # "pushout" or "coequalize"

    def to_json(self) -> dict:
        return {"edge": self.edge, "flags": list(self.flags), "seed": list(self.seed),
                "twisted": self.twisted, "effective": list(self.effective),
                "kind": self.kind}


@dataclass
class SignLedger:
    order: list[int] = field(default_factory=list)
    events: list[GlueEvent] = field(default_factory=list)
    signs: dict[int, int] = field(default_factory=dict)   # effective sign per flag
    twist: bool = True

    def opposite_everywhere(self) -> bool:
        return all(ev.effective[0] == -ev.effective[1] for ev in self.events)

    def to_json(self) -> dict:
        return {"order": self.order, "twist": self.twist,
                "signs": {str(h): s for h, s in sorted(self.signs.items())},
                "events": [ev.to_json() for ev in self.events]}

    @classmethod
    def from_json(cls, data: Mapping) -> "SignLedger":
        evs = [GlueEvent(e["edge"], tuple(e["flags"]), tuple(e["seed"]), e["twisted"],
                         tuple(e["effective"]), e["kind"]) for e in data["events"]]
        return cls(list(data["order"]), evs,
                   {int(h): int(s) for h, s in data["signs"].items()}, data.get("twist", True))


def base_signs(t: IdealTriangulation) -> dict[int, int]:
    return {halfedge(f, p): BASE_SIGNS[p] for f in range(len(t.triangles)) for p in range(3)}


def partner(t: IdealTriangulation, h: int) -> int | None:
    f, p = side_of(h)
    e = t.triangles[f][p]
    if e in t.boundary:
        return None
    for g, q in t.sides(e):
        if (g, q) != (f, p):
            return halfedge(g, q)
    raise GlueError(f"edge {e} has no partner side")


def triangle_order(t: IdealTriangulation) -> list[int]:
    """Depth-first order over triangles, starting at 0, sides in order."""
    order, seen, stack = [], set(), [0]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        order.append(f)
        nxt = []
        for p in range(3):
            o = partner(t, halfedge(f, p))
            if o is not None and side_of(o)[0] not in seen:
                nxt.append(side_of(o)[0])
        stack.extend(reversed(nxt))
    return order


def assemble_surface(t: IdealTriangulation, seed_signs: Mapping[int, int] | None = None,
                     twist: bool = True,
                     order: Iterable[int] | None = None) -> tuple[FreeDgCategory, SignLedger]:
    """Glue one collared triangle per face along the internal edges.

    Before each gluing the effective signs of the two sides are compared;
    when they agree and ``twist`` is on, the sign of the already assembled
    side is flipped.  With ``twist`` off the signs are used as given, which
    models gluing along an arbitrary per-flag sign assignment.
    """
    require_valid(t)
    signs = base_signs(t)
    if seed_signs is not None:
        for h, s in seed_signs.items():
            if int(h) not in signs or s not in (1, -1):
                raise GlueError(f"bad seed sign for flag {h}")
            signs[int(h)] = int(s)
    order = list(triangle_order(t) if order is None else order)
    if sorted(order) != list(range(len(t.triangles))):
        raise GlueError("order must list every triangle once")
    ledger = SignLedger(order, [], dict(signs), twist)
    done: set[int] = set()
    glued: set[int] = set()
    C: FreeDgCategory | None = None
    for f in order:
        piece = local_piece(f)
        pending = []
        for p in range(3):
            h = halfedge(f, p)
            o = partner(t, h)
            if o is None or o in glued or h in glued:
                continue
            if side_of(o)[0] in done or side_of(o)[0] == f:
                pending.append((o, h) if side_of(o)[0] != f or o < h else (h, o))
        pending = sorted(set(pending), key=lambda fl: (side_of(fl[1])[0] != f, fl))
        if C is None:
            C = piece
            first = None
        else:
            first = next((x for x in pending if side_of(x[0])[0] != f), None)
            if first is None:
                raise GlueError("triangle order is not connected")
            hb, ha = first
            sb, sa = _resolve(ledger, t, hb, ha, "pushout")
            S = poly(1)
            C = pushout(S, collar_leg(piece, ha, sa), collar_leg(C, hb, sb))
            glued |= {ha, hb}
        done.add(f)
        for hb, ha in pending:
            if (hb, ha) == first:
                continue
            sb, sa = _resolve(ledger, t, hb, ha, "coequalize")
            S = poly(1)
            C = coequalize(S, collar_leg(C, hb, sb), collar_leg(C, ha, sa))
            glued |= {ha, hb}
    assert C is not None
    return _finish(t, C, ledger), ledger


def _resolve(ledger: SignLedger, t: IdealTriangulation, hb: int, ha: int, kind: str) -> tuple[int, int]:
    sb, sa = ledger.signs[hb], ledger.signs[ha]
    twisted = ledger.twist and sb == sa
    eb = -sb if twisted else sb
    ledger.signs[hb] = eb
    f, p = side_of(ha)
    ledger.events.append(GlueEvent(t.triangles[f][p], (hb, ha), (sb, sa), twisted, (eb, sa), kind))
    return eb, sa


def glued_loop_names(e: int, h: int) -> str:
    return f"l2'{e}.{h}"


def _finish(t: IdealTriangulation, C: FreeDgCategory, ledger: SignLedger) -> FreeDgCategory:
    """Rename objects to edge ids and collar loops to edge-based names."""
    objs = {}
    for o in C.objects:
        f, p = (int(x) for x in o.split(":"))
        objs[o] = vertex_id(t.triangles[f][p])
    gens = {}
    glued = {}
    for ev in ledger.events:
        hb, ha = ev.flags
        one_b, two_b = local_collar(hb)
        _, two_a = local_collar(ha)
        gens[one_b] = f"l1'{ev.edge}"
        gens[two_b] = glued_loop_names(ev.edge, hb)
        gens[two_a] = glued_loop_names(ev.edge, ha)
        glued[vertex_id(ev.edge)] = (gens[one_b], gens[two_b], gens[two_a])
    for h in ledger.signs:
        f, p = side_of(h)
        e = t.triangles[f][p]
        if e in t.boundary:
            one, two = local_collar(h)
            gens[one], gens[two] = f"l1'{e}", f"l2'{e}"
    out = rename(C, objs, gens)
    out = _sorted(out, t)
    out.annotations = {"glued": glued,
                       "boundary_collars": {vertex_id(e): (f"l1'{e}", f"l2'{e}")
                                            for e in sorted(t.boundary)}}
    return out


def _sorted(C: FreeDgCategory, t: IdealTriangulation) -> FreeDgCategory:
    """Stable generator order: arrows, starred arrows, loops, collars."""
    def key(g: Generator):
        n = g.name
        if n[0] in "abc" and not n.endswith("*"):
            return (0, int(n[1:]), n)
        if n.endswith("*"):
            return (1, int(n[1:-1]), n)
        return (2, n)
    objs = [vertex_id(e) for e in t.edges if vertex_id(e) in C.objects]
    return FreeDgCategory(objs, sorted(C.generators, key=key), C.d, C.boundary, C.collar)


# -- comparison with the direct construction ----------------------------------

@dataclass
class CompareReport:
    functor_issues: list[Issue]
    bad_edges: list[int]
    betti_mismatches: list[tuple]
    cutoff: int

    @property
    def ok(self) -> bool:
        return not self.functor_issues and not self.betti_mismatches

    def lines(self) -> list[str]:
        out = [f"functor law: {'ok' if not self.functor_issues else 'FAIL'}"]
        out += [f"  {i}" for i in self.functor_issues]
        if self.bad_edges:
            out.append("  failing edges: " + " ".join(map(str, self.bad_edges)))
        out.append(f"betti agreement up to weight {self.cutoff}: "
                   f"{'ok' if not self.betti_mismatches else 'FAIL'}")
        out += [f"  {k}: direct {a} glued {b}" for k, a, b in self.betti_mismatches]
        return out


def direct_to_glued(t: IdealTriangulation, glued: FreeDgCategory, verify: bool = False) -> DgFunctor:
    """``collared(t) -> glued``: identity on shared generators and
    ``l_e -> -l2'_e(one side) - l2'_e(other side)`` at glued edges."""
    D = collared(t)
    imgs = {}
    for g in D.generators:
        if g.name in glued.gens:
            imgs[g.name] = glued.generator(g.name)
    for e, (_, two_b, two_a) in glued.annotations["glued"].items():
        imgs[loop_name(e)] = -(glued.generator(two_b) + glued.generator(two_a))
    return DgFunctor(D, glued, {o: o for o in D.objects}, imgs, verify)


def compare_with_direct(t: IdealTriangulation, cutoff: int = 9,
                        assembled: tuple[FreeDgCategory, SignLedger] | None = None,
                        betti: bool = True, field: str = "q") -> CompareReport:
    C, _ = assembled if assembled is not None else assemble_surface(t)
    F = direct_to_glued(t, C)
    issues = F.check()
    bad = sorted({int(i.generator[1:]) for i in issues if i.generator.startswith("l")
                  and i.generator[1:].isdigit()})
    mismatches = compare_betti(F.source, C, None, cutoff, field) if betti else []
    return CompareReport(issues, bad, mismatches, cutoff)


# -- interior restriction -------------------------------------------------------

def collapse_collars(C: FreeDgCategory, boundary: bool = False) -> FreeDgCategory:
    """Replace each glued collar triple ``(l1', l2'_b, l2'_a)`` by one loop
    ``l_e = -l2'_b - l2'_a``; with ``boundary`` also cancel the boundary
    collar pairs.

    A pair ``(l2', l1')`` with ``d(l2') = l1' - X`` and ``X`` free of both
    is cancelled by replacing ``l1'`` with ``X`` everywhere.
    """
    glued = dict(getattr(C, "annotations", {}).get("glued", {}))
    pairs = [(trip[0], trip[1]) for trip in glued.values()]
    if boundary:
        for g in C.generators:
            if g.name in C.collar and g.name.startswith("l2'") \
                    and not any(g.name in trip for trip in glued.values()):
                pairs.append(("l1'" + g.name[3:], g.name))
    if not pairs:
        return C
    subs: dict[str, NcPoly] = {}
    for one, two in pairs:
        x = C.generator(one) - C.d[two]
        if any(n in (one, two) for path in x.terms for n in path):
            raise GlueError(f"collar pair {one}, {two} cannot be cancelled")
        subs[one] = x
    drop = {n for pair in pairs for n in pair} | {trip[2] for trip in glued.values()}
    gens, diffs = [], {}
    for g in C.generators:
        if g.name in drop:
            continue
        gens.append(g)
        diffs[g.name] = _substitute(C, C.d[g.name], subs, {})
    for e, (one, two_b, two_a) in glued.items():
        d = -(_substitute(C, C.d[two_b], subs, {}) + _substitute(C, C.d[two_a], subs, {}))
        gens.append(Generator(loop_name(e), e, e, 2, LOOP_WEIGHT))
        diffs[loop_name(e)] = d
    out = FreeDgCategory(C.objects, gens, diffs, C.boundary, set(C.collar) - drop)
    out.annotations = {k: v for k, v in C.annotations.items() if k != "glued"}
    return out


def restrict_to_interior(C: FreeDgCategory, t: IdealTriangulation | None = None) -> FreeDgCategory:
    """Send the boundary objects to zero and drop the collar generators.

    Paths through a boundary object vanish.  Any surviving term that still
    mentions a dropped generator is a construction error.
    """
    C = collapse_collars(C)
    boundary = set(C.boundary)
    if t is not None:
        boundary |= {vertex_id(e) for e in t.boundary}
    dropped = {g.name for g in C.generators
               if g.src in boundary or g.tgt in boundary or g.name in C.collar}
    keep = [g for g in C.generators if g.name not in dropped]
    objs = [o for o in C.objects if o not in boundary]
    diffs = {}
    for g in keep:
        terms = {}
        for path, c in C.d[g.name].terms.items():
            if any(C.gens[x].src in boundary or C.gens[x].tgt in boundary for x in path):
                continue
            if any(x in dropped for x in path):
                raise GlueError(f"differential of {g.name} mentions dropped generator")
            terms[path] = c
        diffs[g.name] = NcPoly(terms, g.src, g.tgt)
    return FreeDgCategory(objs, keep, diffs)


def is_rescaling(C1: FreeDgCategory, C2: FreeDgCategory) -> dict[str, int] | None:
    """Signs ``e_g`` with ``g -> e_g g`` an isomorphism ``C1 -> C2``, or None.

    The generator sets must agree; the signs solve a linear system over
    GF(2): for every term ``c1 p`` of ``d1(g)`` matched by ``c2 p`` in
    ``d2(g)``, the signs along ``p`` times ``e_g`` must be ``c1 / c2``.
    """
    from .linalg import solve_gf2
    if C1.gens != C2.gens:
        return None
    names = [g.name for g in C1.generators]
    idx = {n: i for i, n in enumerate(names)}
    eqs = []
    for n in names:
        t1, t2 = C1.d[n].terms, C2.d[n].terms
        if set(t1) != set(t2):
            return None
        for path, c in t1.items():
            if abs(c) != abs(t2[path]):
                return None
            eqs.append(([idx[x] for x in path] + [idx[n]], int(c != t2[path])))
    sol = solve_gf2(eqs, len(names))
    if sol is None:
        return None
    return {n: (-1 if sol[i] else 1) for n, i in idx.items()}
