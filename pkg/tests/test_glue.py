import random

import pytest

from ginzglue.dgcat import (DgFunctor, check_dg, collared, d3, dump, identity_functor,
                            interior_ginzburg, poly, relative_ginzburg, rename)
from ginzglue.glue import (GlueError, SignLedger, assemble_surface, base_signs, coequalize,
                           collapse_collars, compare_with_direct, elementary_data, is_rescaling,
                           local_piece, pushout, restrict_to_interior, triangle_order)
from ginzglue.ncpoly import format_poly
from ginzglue.triangulation import corpus

from oracles import rescaling_oracle


def renamed_d3():
    D = d3(2)
    objs = {"x": "X", "y": "Y", "z": "Z"}
    gens = {g.name: g.name.upper() for g in D.generators}
    B = rename(D, objs, gens)
    leg = DgFunctor(D, B, objs, {n: B.generator(m) for n, m in gens.items()})
    return D, B, leg


def test_pushout_along_identity_is_the_other_leg():
    D, B, leg = renamed_d3()
    assert pushout(D, identity_functor(D), leg) == B


def test_pushout_of_two_triangles_is_square():
    # glue the side 0 of two local triangles as in the square
    A, B = local_piece(1), local_piece(0)
    S = poly(1)
    legA = DgFunctor(S, A, {"*": "1:0"}, {"t": A.generator("l1'[3]")})
    legB = DgFunctor(S, B, {"*": "0:0"}, {"t": B.generator("l1'[0]").scale(-1)})
    P = pushout(S, legA, legB)
    assert check_dg(P) == []
    assert "l1'[3]" not in P.gens
    assert format_poly(P.d["l2'[3]"]) == "-l1'[0] + a2* a2 - c2 c2*"
    assert len(P.objects) == 5 and "0:0" not in P.boundary


def test_elementary_data_rejects_sums():
    D = d3(2)
    F = DgFunctor(poly(1), D, {"*": "x"}, {"t": D.word("c", "c*") - D.word("a*", "a")})
    with pytest.raises(GlueError, match="not elementary"):
        elementary_data(F)


def test_coequalize_rejects_overlapping_legs():
    A = local_piece(0)
    S = poly(1)
    f = DgFunctor(S, A, {"*": "0:0"}, {"t": A.generator("l1'[0]")})
    with pytest.raises(GlueError, match="overlapping"):
        coequalize(S, f, f)


def test_coequalize_self_folded_side():
    A = local_piece(0)
    S = poly(1)
    f = DgFunctor(S, A, {"*": "0:0"}, {"t": A.generator("l1'[0]").scale(-1)})
    g = DgFunctor(S, A, {"*": "0:2"}, {"t": A.generator("l1'[2]")})
    C = coequalize(S, f, g)
    assert check_dg(C) == []
    assert C.objects == ("0:0", "0:1")
    assert [(x.src, x.tgt) for x in C.generators if x.name == "a1"] == [("0:0", "0:0")]


def test_monogon_twist_matches_the_written_legs():
    # the self-folded triangle is glued along i+ on one side and i- on the other
    _, ledger = assemble_surface(corpus()["monogon"])
    ev, = ledger.events
    assert ev.flags == (0, 2) and ev.twisted
    assert ledger.signs == {0: -1, 1: -1, 2: 1}


def test_ledger_effective_signs_are_opposite():
    for t in corpus().values():
        _, ledger = assemble_surface(t)
        assert ledger.opposite_everywhere()


def test_ledger_json_roundtrip():
    _, ledger = assemble_surface(corpus()["torus"])
    assert SignLedger.from_json(ledger.to_json()) == ledger


def test_triangle_order():
    assert triangle_order(corpus()["torus"]) == [0, 1]
    with pytest.raises(GlueError):
        assemble_surface(corpus()["torus"], order=[0])


def test_other_orders_also_glue():
    t = corpus()["torus"]
    C, ledger = assemble_surface(t, order=[1, 0])
    assert ledger.order == [1, 0]
    assert compare_with_direct(t, 5, (C, ledger)).ok


@pytest.mark.parametrize("name", sorted(corpus()))
def test_assembly_collapses_to_direct(name):
    t = corpus()[name]
    C, _ = assemble_surface(t)
    assert check_dg(C) == []
    assert collapse_collars(C) == collared(t)
    assert collapse_collars(C, boundary=True) == relative_ginzburg(t)


@pytest.mark.parametrize("name", sorted(corpus()))
def test_compare_with_direct_small_cutoff(name):
    assert compare_with_direct(corpus()[name], 6).ok


def test_untwisted_gluing_breaks_the_functor_law():
    t = corpus()["torus"]
    C, ledger = assemble_surface(t, twist=False)
    assert check_dg(C) == []
    report = compare_with_direct(t, 3, (C, ledger), betti=False)
    assert report.bad_edges == [1, 2, 3]
    assert {format_poly(i.residual) for i in report.functor_issues} == {
        "2 l1'1", "2 l1'2", "2 l1'3"}


def test_corrupted_ledger_pinpoints_the_edge():
    t = corpus()["torus"]
    # flags 0,3 carry edge 1, flags 2,5 edge 2 and flags 1,4 edge 3
    seeds = {0: 1, 3: -1, 2: 1, 5: -1, 1: 1, 4: 1}
    report = compare_with_direct(t, 3, assemble_surface(t, seeds, twist=False), betti=False)
    assert report.bad_edges == [3]


def test_seed_sign_validation():
    with pytest.raises(GlueError):
        assemble_surface(corpus()["triangle"], {7: 1})
    with pytest.raises(GlueError):
        assemble_surface(corpus()["triangle"], {0: 2})


def test_restrict_square_is_a1_ginzburg():
    R = restrict_to_interior(assemble_surface(corpus()["square"])[0], corpus()["square"])
    assert dump(R) == "objects: 0\nl0: 0 -> 0, 2, 3, d = 0\n"


def test_restrict_triangle_is_zero():
    R = restrict_to_interior(assemble_surface(corpus()["triangle"])[0])
    assert R.objects == () and R.generators == ()


@pytest.mark.parametrize("name", sorted(corpus()))
def test_restrict_matches_interior_ginzburg(name):
    t = corpus()[name]
    assert restrict_to_interior(assemble_surface(t)[0], t) == interior_ginzburg(t)
    assert restrict_to_interior(collared(t), t) == interior_ginzburg(t)


def test_rescaling_search_matches_brute_force():
    rng = random.Random(4)
    seen = set()
    for name in ("triangle", "monogon"):
        t = corpus()[name]
        flags = sorted(base_signs(t))
        for _ in range(6):
            s1 = {h: rng.choice((1, -1)) for h in flags}
            s2 = {h: rng.choice((1, -1)) for h in flags}
            A = assemble_surface(t, s1, twist=False)[0]
            B = assemble_surface(t, s2, twist=False)[0]
            want = rescaling_oracle(A, B)
            assert (is_rescaling(A, B) is not None) == want
            seen.add(want)
    assert seen == {True, False}


def test_rescaling_signs_are_an_isomorphism():
    t = corpus()["square"]
    A = assemble_surface(t, twist=False)[0]
    B = assemble_surface(t)[0]
    signs = is_rescaling(A, B)
    assert signs is not None
    F = DgFunctor(A, B, {o: o for o in A.objects},
                  {n: B.generator(n).scale(s) for n, s in signs.items()})
    assert F.check() == []
