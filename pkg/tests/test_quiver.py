from collections import Counter

import pytest
import sympy

from ginzglue.ncpoly import format_poly
from ginzglue.quiver import (BMatrix, QuiverError, SELF_FOLDED_NOTE, b_matrix, cyclic_derivative,
                             flip_identification, flip_mutation_check, interior_quiver,
                             k0_mutation, mutate_b, potential_of_triangulation,
                             quiver_of_triangulation)
from ginzglue.triangulation import TriangulationError, corpus, flip


def arrow_mutation(counts: Counter, k: str) -> Counter:
    """Quiver mutation on arrow multiplicities: compose through k, reverse
    arrows at k, then cancel 2-cycles."""
    out = Counter()
    for (i, j), n in counts.items():
        if k in (i, j):
            out[(j, i)] += n
        else:
            out[(i, j)] += n
    for (i, kk), n in counts.items():
        if kk != k or i == k:
            continue
        for (kk2, j), m in counts.items():
            if kk2 == k and j != k and i != j:
                out[(i, j)] += n * m
    clean = Counter()
    for (i, j), n in out.items():
        net = n - out.get((j, i), 0)
        if net > 0:
            clean[(i, j)] = net
    return clean


def counts_of(b: BMatrix) -> Counter:
    return Counter({(i, j): v for (i, j), v in b.as_dict().items() if v > 0})


def flippable(t):
    for e in t.internal_edges:
        try:
            flip(t, e)
        except TriangulationError:
            continue
        yield e


def test_triangle_quiver():
    q = quiver_of_triangulation(corpus()["triangle"])
    assert [(a.name, a.src, a.tgt) for a in q.arrows] == [
        ("a1", "1", "3"), ("b1", "3", "2"), ("c1", "2", "1")]
    assert q.frozen == {"1", "2", "3"}
    assert str(potential_of_triangulation(corpus()["triangle"])) == "c1 b1 a1"


def test_torus_quiver_is_doubled_triangle():
    t = corpus()["torus"]
    q = quiver_of_triangulation(t)
    pairs = Counter((a.src, a.tgt) for a in q.arrows)
    assert pairs == Counter({("1", "2"): 2, ("2", "3"): 2, ("3", "1"): 2})
    assert str(potential_of_triangulation(t)) == "c1 b1 a1 + c2 b2 a2"
    assert b_matrix(q).rows == ((0, 2, -2), (-2, 0, 2), (2, -2, 0))


def test_self_folded_note():
    q = quiver_of_triangulation(corpus()["monogon"])
    assert q.notes == (SELF_FOLDED_NOTE,)
    assert ("a1", "1", "1") in [(a.name, a.src, a.tgt) for a in q.arrows]


def test_interior_quiver_and_potential():
    t = corpus()["square"]
    qi = interior_quiver(t)
    assert qi.vertices == ("0",) and qi.arrows == ()
    assert not potential_of_triangulation(t, interior=True)


def test_cyclic_derivatives():
    t = corpus()["triangle"]
    q, w = quiver_of_triangulation(t), potential_of_triangulation(t)
    assert format_poly(cyclic_derivative(q, w, "a1")) == "c1 b1"
    assert format_poly(cyclic_derivative(q, w, "b1")) == "a1 c1"
    assert format_poly(cyclic_derivative(q, w, "c1")) == "b1 a1"


def test_b_matrix_is_skew():
    for t in corpus().values():
        assert b_matrix(interior_quiver(t)).is_skew()


def test_mutate_b_matches_arrow_mutation():
    for t in corpus().values():
        b = b_matrix(interior_quiver(t))
        for k in b.labels:
            assert counts_of(mutate_b(b, k)) == arrow_mutation(counts_of(b), k)


def test_mutation_is_an_involution():
    b = b_matrix(interior_quiver(corpus()["torus"]))
    for k in b.labels:
        assert mutate_b(mutate_b(b, k), k) == b


def test_mutate_frozen_is_rejected():
    with pytest.raises(QuiverError):
        mutate_b(b_matrix(interior_quiver(corpus()["square"])), "1")


def test_flip_mutation_on_corpus():
    seen = 0
    for t in corpus().values():
        for e in flippable(t):
            ok, mutated, direct = flip_mutation_check(t, e)
            assert ok, (t, e)
            seen += 1
    assert seen >= 4


def test_flip_identification():
    assert flip_identification(corpus()["torus"], 1) == {"1": "4", "2": "2", "3": "3"}


def test_k0_torus_column():
    m = k0_mutation(corpus()["torus"], 1)
    # [P1] goes to 2[P2] - [P1'] since two arrows leave 1 towards 2
    assert m.column("1") == {"4": -1, "2": 2}
    assert m.column("2") == {"2": 1}


def test_k0_matrices_are_unimodular():
    for t in corpus().values():
        for e in flippable(t):
            m = k0_mutation(t, e)
            assert abs(sympy.Matrix(m.rows).det()) == 1
            for f in m.source:
                if f != str(e):
                    assert m.column(f) == {m.target[m.source.index(f)]: 1}
