import pytest

from ginzglue.triangulation import (IdealTriangulation, TriangulationError, canonical_form,
                                    corpus, dual_ribbon_graph, flip, halfedge, relabel,
                                    side_of, surface_invariants, validate_triangulation)


def test_corpus_is_valid():
    for name, t in corpus().items():
        assert validate_triangulation(t) == [], name


def test_json_roundtrip():
    for t in corpus().values():
        assert IdealTriangulation.from_json(t.to_json()) == t


def test_validation_errors():
    bad = IdealTriangulation.make([[1, 2, 3]], [1, 2])
    assert validate_triangulation(bad) == ["internal edge 3 used 1 times"]
    assert validate_triangulation(IdealTriangulation.make([], [])) == ["no triangles"]
    two = IdealTriangulation.make([[1, 2, 3], [4, 5, 6]], [1, 2, 3, 4, 5, 6])
    assert validate_triangulation(two) == ["not connected"]


def test_halfedge_ids():
    assert halfedge(2, 1) == 7
    assert side_of(7) == (2, 1)


def test_dual_graph_is_trivalent():
    for t in corpus().values():
        g = dual_ribbon_graph(t)
        assert all(g.degree(v) == 3 for v in g.vertices)
        assert len(g.external_edges()) == len(t.boundary)


def test_self_folded_dual_has_loop():
    g = dual_ribbon_graph(corpus()["monogon"])
    assert g.internal_edges() == [(0, 2)]
    assert g.is_loop((0, 2))


@pytest.mark.parametrize("name, punctures", [
    ("triangle", 0), ("monogon", 1), ("digon", 1), ("square", 0), ("annulus", 0), ("torus", 1)])
def test_punctures(name, punctures):
    assert surface_invariants(corpus()[name])["punctures"] == punctures


def test_flip_square():
    t = corpus()["square"]
    f = flip(t, 0)
    assert f.triangles == ((1, 5, 4), (3, 5, 2))
    assert validate_triangulation(f) == []


def test_flip_is_an_involution_up_to_relabel():
    checked = 0
    for name in ("square", "digon", "annulus", "torus"):
        t = corpus()[name]
        for e in t.internal_edges:
            try:
                once = flip(t, e)
                twice = flip(once, max(once.edges))
            except TriangulationError:
                # flips next to a self-folded triangle are refused
                continue
            back = relabel(twice, {max(twice.edges): e})
            assert canonical_form(back) == canonical_form(t), (name, e)
            checked += 1
    assert checked >= 5


def test_flip_rejections():
    with pytest.raises(TriangulationError, match="boundary"):
        flip(corpus()["triangle"], 1)
    with pytest.raises(TriangulationError, match="twice"):
        flip(corpus()["monogon"], 1)
    with pytest.raises(TriangulationError, match="does not exist"):
        flip(corpus()["torus"], 9)


def test_flip_keeps_invariants():
    for name in ("square", "annulus", "torus"):
        t = corpus()[name]
        for e in t.internal_edges:
            f = flip(t, e)
            a, b = surface_invariants(t), surface_invariants(f)
            assert a == b
