import pytest
from sympy.combinatorics import Permutation

from ginzglue.ribbon import (Flag, RibbonError, RibbonGraph, contract_edge, corolla, exit_poset,
                             faces, first_betti, glue_graphs, internal_faces, validate)
from ginzglue.triangulation import corpus, dual_ribbon_graph


def theta() -> RibbonGraph:
    """Two trivalent vertices joined by three edges (the punctured torus dual)."""
    tau = {0: 3, 3: 0, 1: 4, 4: 1, 2: 5, 5: 2}
    sigma = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
    return RibbonGraph.build(tau, sigma, {0: [0, 1, 2], 1: [3, 4, 5]})


def permutation_faces(g: RibbonGraph) -> int:
    """Cycle count of ``next ∘ tau`` computed with sympy, closed graphs only."""
    n = max(g.halfedges) + 1
    perm = Permutation([g.next(g.tau[h]) if h in g.tau else h for h in range(n)])
    return len(perm.full_cyclic_form)


def test_corolla_is_valid_and_external():
    g = corolla(3)
    assert validate(g) == []
    assert g.external_edges() == [(0, 0), (1, 1), (2, 2)]
    assert g.degree(0) == 3
    assert first_betti(g) == 0


def test_validate_reports_non_involution():
    g = RibbonGraph((0,), (0, 1, 2), {0: 1, 1: 2, 2: 0}, {0: 0, 1: 0, 2: 0}, {0: (0, 1, 2)})
    assert "tau not involutive" in validate(g)


def test_validate_reports_disconnected():
    g = glue_graphs(corolla(3), corolla(3), [])
    assert validate(g) == ["not connected"]


def test_validate_reports_cyclic_mismatch():
    g = RibbonGraph.build({0: 0, 1: 1}, {0: 0, 1: 0}, {0: [0]})
    assert any("cyclic order" in r for r in validate(g))


def test_json_roundtrip():
    g = theta()
    assert RibbonGraph.from_json(g.to_json()) == g


def test_exit_poset_counts():
    p = exit_poset(theta())
    assert len(p.objects) == 2 + 3
    assert len(p.arrows) == 6
    assert Flag(0, 0) in p.arrows


def test_exit_poset_has_two_arrows_for_a_loop():
    g = dual_ribbon_graph(corpus()["monogon"])
    loop = [e for e in g.internal_edges() if g.is_loop(e)]
    assert loop == [(0, 2)]
    arrows = [f for f in exit_poset(g).arrows if g.edge_of(f.halfedge) == (0, 2)]
    assert len(arrows) == 2


def test_glue_two_corollas():
    g = glue_graphs(corolla(3), corolla(3), [(0, 0)])
    assert validate(g) == []
    assert len(g.vertices) == 2
    assert len(g.internal_edges()) == 1
    assert len(g.external_edges()) == 4
    # the second corolla was shifted past the first
    assert g.tau[0] == 3


def test_glue_rejects_internal_and_duplicate():
    g = glue_graphs(corolla(3), corolla(3), [(0, 0)])
    with pytest.raises(RibbonError):
        glue_graphs(g, corolla(3), [(0, 1)])
    with pytest.raises(RibbonError):
        glue_graphs(corolla(3), corolla(3), [(0, 0), (0, 1)])


def test_glue_to_theta_matches_direct():
    g = glue_graphs(corolla(3), corolla(3, vertex=1, start=3), [(0, 3), (1, 4), (2, 5)])
    assert g == theta()


def test_contract_edge():
    g = glue_graphs(corolla(3), corolla(3), [(0, 0)])
    c = contract_edge(g, 0)
    assert validate(c) == []
    assert c.vertices == (0,)
    assert c.cyclic[0] == (1, 2, 4, 5)


def test_contract_rejects_loop_and_external():
    with pytest.raises(RibbonError):
        contract_edge(corolla(3), 0)
    g = dual_ribbon_graph(corpus()["monogon"])
    with pytest.raises(RibbonError):
        contract_edge(g, (0, 2))


def test_contract_preserves_closed_face_count():
    g = theta()
    assert len(faces(contract_edge(g, (0, 3)))) == len(faces(g))


@pytest.mark.parametrize("name, count", [
    ("triangle", 3), ("monogon", 2), ("digon", 3), ("square", 4), ("annulus", 2), ("torus", 1)])
def test_faces_count_marked_points(name, count):
    # one face per marked point, traced by hand on each surface
    assert len(faces(dual_ribbon_graph(corpus()[name]))) == count


def test_closed_faces_agree_with_permutation_cycles():
    g = theta()
    assert len(faces(g)) == permutation_faces(g) == 1
    assert internal_faces(g) == faces(g)


def test_faces_partition_halfedges():
    for t in corpus().values():
        g = dual_ribbon_graph(t)
        seen = sorted(h for f in faces(g) for h in f)
        assert seen == list(g.halfedges)


@pytest.mark.parametrize("name, b1", [
    ("triangle", 0), ("monogon", 1), ("digon", 1), ("square", 0), ("annulus", 1), ("torus", 2)])
def test_first_betti(name, b1):
    assert first_betti(dual_ribbon_graph(corpus()[name])) == b1
