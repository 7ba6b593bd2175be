import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etalecob.errors import BudgetExceeded, StructuralError
from etalecob.simplicial import (FinSimpSet, SimplicialMap, Tower, boundary_simplex, count_maps, disjoint_union,
                                 enumerate_maps, find_isomorphism, generated, mapping_space_level, monotone_maps,
                                 moore_space, pi0, plus, point, product, quotient, s0, skeleton, smash, sphere,
                                 standard_simplex, subobject, tower_from)


def test_standard_simplex_sizes():
    assert standard_simplex(0, 3).sizes == [1, 1, 1, 1]
    assert standard_simplex(0, 3).census() == [1, 0, 0, 0]
    assert standard_simplex(1, 2).sizes == [2, 3, 4]
    assert standard_simplex(2, 2).sizes[2] == 10


def test_monotone_maps_count():
    from math import comb
    for k in range(4):
        for n in range(4):
            assert len(monotone_maps(k, n)) == comb(n + k + 1, k + 1)


def test_sphere_levels():
    S1 = sphere(1, 3)
    assert S1.sizes == [1, 2, 3, 4]
    assert S1.census() == [1, 1, 0, 0]
    assert sphere(2, 2).census()[2] == 1
    assert S1.pointed


def test_identities_checked_on_construction():
    X = sphere(1, 2)
    faces = [[f.copy() for f in fk] for fk in X.faces]
    faces[1][0] = faces[1][1].copy()  # break d0 d1 = d0 d0 on level 2
    faces[1][0][1] = 0
    with pytest.raises(StructuralError):
        FinSimpSet(2, X.sizes, faces, X.degeneracies, 0)


def test_skeleton_examples():
    X = standard_simplex(2, 3)
    B, inc = skeleton(X, 1)
    assert B.census()[:3] == [3, 3, 0]
    assert inc.is_injective()
    full, _ = skeleton(X, 3)
    assert full.sizes == X.sizes
    S = sphere(2, 3)
    sk1, _ = skeleton(S, 1)
    assert sk1.census() == [1, 0, 0, 0]


def test_skeleton_of_skeleton():
    X = product(standard_simplex(1, 3), standard_simplex(1, 3))
    for p in range(4):
        for q in range(4):
            A, _ = skeleton(skeleton(X, p)[0], q)
            B, _ = skeleton(X, min(p, q))
            assert A.census() == B.census() and A.sizes == B.sizes


def test_quotient_examples():
    D1 = standard_simplex(1, 3)
    _, inc = skeleton(D1, 0)
    Q = quotient(D1, inc)
    assert find_isomorphism(Q, sphere(1, 3)) is not None
    X = sphere(2, 3)
    assert quotient(X, [np.arange(n) for n in X.sizes]).sizes == [1, 1, 1, 1]
    same = quotient(X, [np.array([X.basepoint_at(k)]) for k in range(4)])
    assert find_isomorphism(same, X) is not None


def test_quotient_rejects_open_subset():
    X = standard_simplex(1, 2)
    with pytest.raises(StructuralError):
        quotient(X, [np.array([0]), np.array([2]), np.array([], dtype=np.int64)])


def test_smash_examples():
    S2 = smash(sphere(1, 3), sphere(1, 3))
    assert S2.census()[:3] == [1, 1, 2]
    X = sphere(2, 3)
    assert find_isomorphism(smash(X, s0(3)), X) is not None
    assert smash(point(3), X).sizes == [1, 1, 1, 1]
    with pytest.raises(StructuralError):
        smash(standard_simplex(1, 2), sphere(1, 2))


def test_smash_commutative_and_associative():
    A, B, C = sphere(1, 3), moore_space(2, 3), s0(3)
    assert find_isomorphism(smash(A, B), smash(B, A)) is not None
    assert find_isomorphism(smash(smash(A, C), B), smash(A, smash(C, B))) is not None


def test_pi0_examples():
    assert len(pi0(disjoint_union(point(2), point(2)))) == 2
    assert len(pi0(sphere(1, 2))) == 1
    assert len(pi0(boundary_simplex(2, 3))) == 1


def test_pi0_additive():
    objs = [point(2), sphere(1, 2), s0(2), moore_space(3, 2), boundary_simplex(2, 2)]
    for X in objs:
        for Y in objs:
            assert len(pi0(disjoint_union(X, Y))) == len(pi0(X)) + len(pi0(Y))


def test_mapping_space_level():
    Y = moore_space(2, 3)
    assert len(mapping_space_level(s0(3), Y, 0)) == Y.sizes[0]
    assert len(mapping_space_level(sphere(1, 3), point(3), 2)) == 1
    # pointed self-maps of S^1 on the truncation: constant and identity
    assert len(mapping_space_level(sphere(1, 3), sphere(1, 3), 0)) == count_maps(sphere(1, 3), sphere(1, 3), pointed=True)


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_maps(standard_simplex(2, 2), standard_simplex(3, 2), budget=5))


def test_count_maps_brute_force():
    """Cross-check against the naive search over all levelwise functions."""
    import itertools
    X, Y = sphere(1, 2), standard_simplex(1, 2)
    brute = 0
    for f0 in itertools.product(range(Y.sizes[0]), repeat=X.sizes[0]):
        for f1 in itertools.product(range(Y.sizes[1]), repeat=X.sizes[1]):
            for f2 in itertools.product(range(Y.sizes[2]), repeat=X.sizes[2]):
                try:
                    SimplicialMap(X, Y, [np.array(f0), np.array(f1), np.array(f2)])
                except StructuralError:
                    continue
                brute += 1
    assert count_maps(X, Y) == brute


def test_json_round_trip():
    for X in (sphere(2, 3), moore_space(3, 3), product(sphere(1, 2), sphere(1, 2))):
        text = X.dumps()
        Y = FinSimpSet.from_json(json.loads(text))
        assert Y.dumps() == text


def test_tower_from():
    T = tower_from(sphere(1, 3))
    assert len(T) == 1 and T.bonds == []
    assert len(tower_from(point(2))) == 1


def test_tower_checks_bonds():
    X, Y = sphere(1, 2), point(2)
    Tower([X, Y], [SimplicialMap.constant(Y, X, 0)])
    with pytest.raises(StructuralError):
        Tower([X, Y], [])


def test_plus_and_disjoint_union():
    X = plus(sphere(1, 2))
    assert X.sizes[0] == 2 and X.pointed


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 100)), min_size=1, max_size=4))
def test_generated_subobject_is_closed(picks):
    X = product(sphere(1, 2), standard_simplex(1, 2))
    simplices = [(k, i % X.sizes[k]) for k, i in picks]
    subs = generated(X, simplices)
    S, _ = subobject(X, subs)
    S.validate()
    for k, i in simplices:
        assert i in subs[k]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["sphere1", "sphere2", "moore2", "simplex2", "torus"]))
def test_constructed_objects_satisfy_identities(name):
    X = {"sphere1": lambda: sphere(1, 4), "sphere2": lambda: sphere(2, 4), "moore2": lambda: moore_space(2, 4),
         "simplex2": lambda: standard_simplex(2, 4), "torus": lambda: product(sphere(1, 3), sphere(1, 3))}[name]()
    X.validate()
    for k in range(X.D):
        for s in X.degeneracies[k]:
            assert len(np.unique(s)) == X.sizes[k]
