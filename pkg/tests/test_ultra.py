import random
from itertools import product

import pytest

from congrue.eqvlat import Partition, is_arithmetical, join
from congrue.errors import (
    CarrierTooLarge,
    IndexTooLarge,
    InvalidInput,
    NotDistributive,
    NotResiduated,
)
from congrue.ultra import (
    EqSystem,
    FiniteSemilattice,
    UltraSpace,
    ball,
    cong_d,
    contractions,
    delta_least_cong,
    dv_space,
    dvee_space,
    enumerate_lattices,
    eq_d,
    equiv_at,
    is_contraction,
    is_convex,
    is_hyperconvex,
    is_residuated,
    isometric_embed,
    iter_spaces,
    lattice_is_distributive,
    order_isomorphism,
    representation_check,
    residual,
    semilattice_from_json,
    space_from_json,
    space_system,
    system_space,
    verify_axioms,
)

from helpers import compose_rel, ball_relation_failures, load_lattices, pointed_tables, relation, small_spaces

CHAIN3 = FiniteSemilattice.chain(3)
BOOL2 = FiniteSemilattice.boolean(2)


def test_constructors_validate():
    assert CHAIN3.size == 3 and CHAIN3.top == 2
    assert FiniteSemilattice.divisors(12).size == 6
    with pytest.raises(InvalidInput):
        FiniteSemilattice([[True, True], [True, True]], [[0, 1], [1, 1]])
    with pytest.raises(InvalidInput):
        FiniteSemilattice([[True, True], [False, True]], [[0, 0], [0, 1]])
    with pytest.raises(InvalidInput):
        FiniteSemilattice.from_order([[True, False], [False, True]])


def test_residual_examples():
    # chain 0 < a < 1 with a = 1, top = 2
    assert residual(CHAIN3, 1, 2) == 0
    assert residual(CHAIN3, 1, 0) == 1
    for x, y in product(range(4), repeat=2):
        assert residual(BOOL2, x, y) == x & ~y
    for V in (CHAIN3, BOOL2, FiniteSemilattice.divisors(12)):
        for x, y in product(range(V.size), repeat=2):
            if V.le(x, y):
                assert residual(V, x, y) == V.bottom


def test_residuated_examples():
    assert not is_residuated(FiniteSemilattice.m3())
    assert not is_residuated(FiniteSemilattice.n5())
    assert all(is_residuated(FiniteSemilattice.chain(k)) for k in range(1, 7))
    assert is_residuated(FiniteSemilattice.divisors(12))
    with pytest.raises(NotResiduated):
        dv_space(FiniteSemilattice.m3())


def test_residuated_iff_distributive():
    for V in load_lattices():
        assert is_residuated(V) == lattice_is_distributive(V)


def test_lattice_fixture_matches_enumeration():
    fresh = enumerate_lattices(6)
    assert [V.to_json() for V in fresh] == [V.to_json() for V in load_lattices()]
    counts = [sum(1 for V in fresh if V.size == m) for m in range(1, 7)]
    assert counts == [1, 1, 1, 2, 5, 15]
    assert [sum(1 for V in fresh if V.size == m and lattice_is_distributive(V)) for m in range(1, 7)] == [
        1, 1, 1, 2, 3, 5,
    ]


def test_enumerated_lattices_pairwise_non_isomorphic():
    lats = enumerate_lattices(6)
    for i, V in enumerate(lats):
        for W in lats[i + 1:]:
            assert order_isomorphism(V.leq, W.leq) is None


def test_residuation_triangle():
    for V in load_lattices():
        if not is_residuated(V):
            continue
        r = [[residual(V, x, y) for y in range(V.size)] for x in range(V.size)]
        for x, y, z in product(range(V.size), repeat=3):
            assert V.le(r[x][y], V.join[r[x][z]][r[z][y]])


def test_dv_dvee_examples():
    for x, y in product(range(4), repeat=2):
        assert dv_space(BOOL2).d[x][y] == x ^ y
    two = FiniteSemilattice.chain(2)
    assert dv_space(two).d == dvee_space(two).d
    assert dvee_space(CHAIN3).d[1][2] == 2
    assert dv_space(CHAIN3).d[1][2] == 2
    dv, dve = dv_space(CHAIN3).d, dvee_space(CHAIN3).d
    assert all(CHAIN3.le(dv[x][y], dve[x][y]) for x, y in product(range(3), repeat=2))


def test_spaces_of_distributive_lattices_are_valid():
    for V in load_lattices():
        assert verify_axioms(dvee_space(V)) == []
        if lattice_is_distributive(V):
            S = dv_space(V)
            assert verify_axioms(S) == []
            assert all(S.d[V.bottom][x] == x for x in range(V.size))


def test_sandwich():
    for V in load_lattices():
        if V.size > 4 or not is_residuated(V):
            continue
        lo, hi = dv_space(V).d, dvee_space(V).d
        tables = list(pointed_tables(V))
        assert [list(r) for r in lo] in tables and [list(r) for r in hi] in tables
        for d in tables:
            for x, y in product(range(V.size), repeat=2):
                assert V.le(lo[x][y], d[x][y]) and V.le(d[x][y], hi[x][y])


def test_verify_axioms_reports():
    S = UltraSpace(CHAIN3, [[0, 1], [2, 0]])
    assert ("symmetry", (0, 1)) in verify_axioms(S)
    assert verify_axioms(UltraSpace(CHAIN3, [[0]])) == []
    pre = UltraSpace(CHAIN3, [[0, 0], [0, 0]])
    assert [v.axiom for v in verify_axioms(pre)] == ["separation"]
    assert verify_axioms(UltraSpace(CHAIN3, [[0, 0], [0, 0]], separated=False)) == []
    tri = UltraSpace(CHAIN3, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert any(v.axiom == "triangle" for v in verify_axioms(tri))


def test_ball_examples():
    S = dv_space(BOOL2)
    assert ball(S, 0, 1) == {0, 1}
    for a in range(4):
        assert ball(S, a, 0) == {a}
        assert ball(S, a, 3) == set(range(4))


def test_convexity_examples():
    assert is_hyperconvex(UltraSpace(CHAIN3, [[0]]))
    mid = UltraSpace(CHAIN3, [[0, 1], [1, 0]])
    assert is_convex(mid)
    assert is_hyperconvex(mid)
    for V in (CHAIN3, BOOL2, FiniteSemilattice.divisors(12)):
        assert is_hyperconvex(dv_space(V))
    # distance {p, q}: the balls of radius {p} and {q} around the two points are disjoint
    S = UltraSpace(BOOL2, [[0, 3], [3, 0]])
    assert not is_convex(S)
    assert not is_hyperconvex(S)


def test_contractions_examples():
    S = dv_space(CHAIN3)
    maps = set(contractions(S))
    assert tuple(range(3)) in maps
    assert all((c,) * 3 in maps for c in range(3))
    for f, g in product(maps, repeat=2):
        assert tuple(f[g[x]] for x in range(3)) in maps
    assert all(is_contraction(S, f) == (f in maps) for f in product(range(3), repeat=3))
    top = UltraSpace(CHAIN3, [[0, 2], [2, 0]])
    assert len(contractions(top)) == 4
    with pytest.raises(CarrierTooLarge):
        contractions(UltraSpace(FiniteSemilattice.chain(2), [[int(x != y) for y in range(8)] for x in range(8)]))


def test_eq_d_and_cong_d():
    S = dv_space(BOOL2)
    E = eq_d(S)
    assert Partition.discrete(4) in E and Partition.indiscrete(4) in E
    assert set(E) <= set(cong_d(S))
    assert equiv_at(S, 1) == Partition.from_blocks([[0, 1], [2, 3]])


def test_delta_least_cong_examples():
    S = dv_space(CHAIN3)
    assert delta_least_cong(S, 1, 1) == Partition.discrete(3)
    top = UltraSpace(CHAIN3, [[0, 2], [2, 0]])
    assert delta_least_cong(top, 0, 1) == Partition.indiscrete(2)
    for x, y in product(range(3), repeat=2):
        assert delta_least_cong(S, x, y) <= equiv_at(S, S.d[x][y])


def test_system_space_examples():
    nabla = system_space(EqSystem(3, (Partition.indiscrete(3),)))
    assert all(v == 0 for r in nabla.d for v in r)
    assert not nabla.separated
    delta = system_space(EqSystem(3, (Partition.discrete(3),)))
    assert delta.separated
    assert all(delta.d[x][y] == (1 if x != y else 0) for x, y in product(range(3), repeat=2))
    with pytest.raises(IndexTooLarge):
        system_space(EqSystem(2, (Partition.discrete(2),) * 6))


def test_system_round_trip_random():
    rng = random.Random(4)
    for _ in range(50):
        rels = tuple(Partition(tuple(rng.randrange(4) for _ in range(4))) for _ in range(3))
        M = EqSystem(4, rels)
        S = system_space(M)
        assert verify_axioms(S) == []
        assert space_system(S) == M
        assert system_space(space_system(S)).d == S.d


def test_space_system_needs_powerset():
    with pytest.raises(InvalidInput):
        space_system(dv_space(CHAIN3))


def test_isometric_embedding():
    assert isometric_embed(UltraSpace(CHAIN3, [[0]])) == ((0,),)
    S = dv_space(BOOL2)
    assert isometric_embed(S) == S.d
    for V in load_lattices():
        if V.size > 4 or not is_residuated(V):
            continue
        for n in range(1, 4):
            for T in iter_spaces(V, n):
                assert isometric_embed(T) == T.d


@pytest.mark.parametrize("V", [CHAIN3, BOOL2, FiniteSemilattice.divisors(12)])
def test_representation_examples(V):
    assert representation_check(V)


def test_representation_rejects_non_distributive():
    with pytest.raises(NotDistributive):
        representation_check(FiniteSemilattice.m3())


def test_ball_relation_properties_small_spaces():
    # the full sweep (4 points) runs in the acceptance suite
    for _, S in small_spaces(max_points=3):
        assert ball_relation_failures(S) == []


def finite_hyperconvex_shadow(S):
    """Ball relations join as radii do and together form an arithmetical lattice."""
    V = S.V
    rel = [equiv_at(S, r) for r in range(V.size)]
    if any(join(rel[r], rel[s]) != rel[V.join[r][s]] for r in range(V.size) for s in range(V.size)):
        return False
    E = eq_d(S)
    return E.is_closed() and is_arithmetical(E)


def test_hyperconvex_iff_finite_shadow():
    for _, S in small_spaces():
        assert is_hyperconvex(S) == finite_hyperconvex_shadow(S)


def test_hyperconvex_congruences_are_joins_of_balls():
    for _, S in small_spaces():
        if not is_hyperconvex(S):
            continue
        members = set(eq_d(S))
        for c in cong_d(S):
            below = [p for p in members if p <= c]
            acc = Partition.discrete(S.n)
            for p in below:
                acc = join(acc, p)
            assert acc == c, (S.d, c)


def test_compose_rel_oracle():
    p, q = Partition.from_blocks([[0, 1], [2]]), Partition.from_blocks([[0], [1, 2]])
    assert (0, 2) in compose_rel(relation(p), relation(q))
    assert compose_rel(relation(p), relation(Partition.discrete(3))) == relation(p)


def test_json_round_trip():
    V = FiniteSemilattice.divisors(12)
    assert semilattice_from_json(V.to_json()) == V
    no_join = {k: v for k, v in V.to_json().items() if k != "join"}
    assert semilattice_from_json(no_join) == V
    S = dv_space(V)
    assert space_from_json(S.to_json(), V) == S
    with pytest.raises(InvalidInput, match="size"):
        semilattice_from_json({"size": 0})
    with pytest.raises(InvalidInput, match="d"):
        space_from_json({"points": 2, "d": [[0, 1]]}, V)
