import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etalecob.coefficients import GradedCoefficients, coefficient_group, mu_rank, partition_count, partitions
from etalecob.complexes import brute_force_cohomology, cohomology_of_complex, image_group
from etalecob.errors import ComplexError, ParameterError
from etalecob.finab import FinAb, structure_from_subgroup_counts
from etalecob.snf import determinant, integer_snf, invariant_factors, local_snf, matmul, smith_normal_form

small_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


# --- FinAb -------------------------------------------------------------------

def test_finab_normalizes_orders():
    assert FinAb.from_orders([2, 3]) == FinAb.cyclic(6)
    assert FinAb.from_orders([4, 2, 1]) == FinAb((2, 4))
    assert FinAb.from_orders([]).is_trivial()
    assert FinAb.from_orders([6, 4]).invariant_factors == (2, 12)


def test_finab_rejects_broken_chain():
    with pytest.raises(ValueError):
        FinAb((2, 3))
    with pytest.raises(ValueError):
        FinAb((1,))


def test_finab_parse_and_str():
    G = FinAb.parse("Z/2+Z/4")
    assert G == FinAb((2, 4))
    assert str(FinAb.free(3, 2)) == "(Z/3)^2"
    assert FinAb.parse(str(G)) == G
    assert FinAb.parse("0").is_trivial()


def test_finab_order_rank_exponent():
    G = FinAb((2, 4, 12))
    assert G.order == 96 and G.rank == 3 and G.exponent == 12
    assert G.is_elementary(2) is False
    assert FinAb.free(3, 4).is_elementary(3)


def test_element_index_round_trip():
    G = FinAb((2, 6))
    seen = set()
    for x in G.elements():
        i = G.element_index(x)
        assert G.element_from_index(i) == x
        seen.add(i)
    assert seen == set(range(G.order))


@given(st.lists(st.integers(1, 30), max_size=4))
def test_from_orders_preserves_order(orders):
    G = FinAb.from_orders(orders)
    assert G.order == int(np.prod(orders)) if orders else G.order == 1
    fs = G.invariant_factors
    assert all(b % a == 0 for a, b in zip(fs, fs[1:]))


def test_structure_from_subgroup_counts():
    # Z/2 + Z/4: 4 elements killed by 2, 8 by 4
    assert structure_from_subgroup_counts(2, [1, 4, 8]) == [2, 4]


# --- Smith normal form ---------------------------------------------------------

def test_snf_examples():
    assert smith_normal_form([[0, 0], [0, 0]])[1] == [[0, 0], [0, 0]]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    U, D, V = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert D == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_snf_randomized_200():
    rng = random.Random(20240611)
    for _ in range(200):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        A = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        res = integer_snf(A)
        assert matmul(matmul(res.U, A), res.V) == res.D()
        assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
        d = res.diagonal
        assert all(x > 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_snf_property(A):
    res = integer_snf(A, inverses=True)
    assert matmul(matmul(res.U, A), res.V) == res.D()
    n = len(A)
    assert matmul(res.U, res.U_inv) == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 1)]))
def test_local_snf_matches_integer(A, pe):
    p, e = pe
    q = p ** e
    got = sorted(p ** v for v in local_snf(A, p, e).valuations)
    want = sorted(int(np.gcd(x, q)) for x in integer_snf(A, transforms=False).diagonal if np.gcd(x, q) < q)
    assert got == want
    res = local_snf(A, p, e, transforms=True)
    D = (res.U @ (np.array(A, dtype=np.int64) % q) @ res.V) % q
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            want_ij = p ** res.valuations[i] if i == j and i < res.rank else 0
            assert D[i, j] % q == want_ij % q


# --- cohomology of complexes ---------------------------------------------------

def test_zero_complex():
    deltas = [np.zeros((3, 2), dtype=np.int64), np.zeros((1, 3), dtype=np.int64)]
    H = cohomology_of_complex(deltas, 4)
    assert H == [FinAb.free(4, 2), FinAb.free(4, 3), FinAb.free(4, 1)]


def test_times_two_on_z4():
    H = cohomology_of_complex([np.array([[2]])], 4)
    assert H == [FinAb.cyclic(2), FinAb.cyclic(2)]
    assert brute_force_cohomology([np.array([[2]])], 4, 0) == FinAb.cyclic(2)
    assert brute_force_cohomology([np.array([[2]])], 4, 1) == FinAb.cyclic(2)


def test_invalid_complex_raises():
    with pytest.raises(ComplexError):
        cohomology_of_complex([np.array([[1]]), np.array([[1]])], 3)


def _random_complex(rng, dims, m):
    """Random complex over Z/m: each differential kills the image of the previous."""
    deltas = []
    prev = None
    for a, b in zip(dims, dims[1:]):
        if prev is None:
            d = rng.integers(0, m, size=(b, a))
        else:
            # rows of d must annihilate the columns of prev mod m; search over candidates
            cands = [np.array(v) for v in itertools.product(range(m), repeat=a)
                     if not (np.array(v) @ prev % m).any()]
            idx = rng.integers(0, len(cands), size=b)
            d = np.array([cands[i] for i in idx]).reshape(b, a)
        deltas.append(d.astype(np.int64))
        prev = d
    return deltas


@pytest.mark.parametrize("m", [2, 3])
def test_against_brute_force_small_complexes(m):
    rng = np.random.default_rng(m)
    count = 0
    for dims in itertools.product(range(1, 4), repeat=3):
        if sum(dims) > 8:
            continue
        for _ in range(3):
            deltas = _random_complex(rng, list(dims), m)
            H = cohomology_of_complex(deltas, m)
            assert H == cohomology_of_complex(deltas, m, "integer")
            for n in range(len(dims)):
                assert H[n] == brute_force_cohomology(deltas, m, n)
            count += 1
    assert count > 30


@pytest.mark.parametrize("m", [2, 3, 5])
def test_euler_characteristic(m):
    rng = np.random.default_rng(10 + m)
    for dims in ([2, 3, 2], [1, 3, 3], [3, 2, 1, 1]):
        deltas = _random_complex(rng, dims, m)
        H = cohomology_of_complex(deltas, m)
        assert sum((-1) ** n * d for n, d in enumerate(dims)) == sum((-1) ** n * h.rank for n, h in enumerate(H))


def test_image_group():
    assert image_group([[2], [0]], [4, 2]) == FinAb.cyclic(2)
    assert image_group([[1, 0], [0, 1]], [4, 2]) == FinAb((2, 4))
    assert image_group(np.zeros((0, 3)), []).is_trivial()


# --- graded coefficients -------------------------------------------------------

def test_mu_rank_examples():
    assert mu_rank(0) == 1
    assert mu_rank(-4) == 2
    assert mu_rank(-12) == 11
    assert mu_rank(2) == 0 and mu_rank(-3) == 0


def test_partition_recurrence_against_enumeration():
    for q in range(0, -41, -2):
        assert mu_rank(q) == sum(1 for _ in partitions(-q // 2))
    assert partition_count(20) == 627


def test_coefficient_group_examples():
    assert coefficient_group(GradedCoefficients("MU", 2, 3), -2) == FinAb.cyclic(8)
    K1 = GradedCoefficients.parse("MoravaK(1)", 3)
    assert K1.modulus == 3 and K1.period == 4
    assert coefficient_group(K1, -4) == FinAb.cyclic(3)
    assert coefficient_group(K1, -2).is_trivial()
    assert coefficient_group(GradedCoefficients("KU", 5), 1).is_trivial()
    assert coefficient_group(GradedCoefficients("KU", 5), -6) == FinAb.cyclic(5)
    assert [GradedCoefficients("HZ", 2).rank(q) for q in (-2, 0, 2)] == [0, 1, 0]


def test_coefficients_reject_bad_parameters():
    with pytest.raises(ParameterError):
        GradedCoefficients("MU", 4)
    with pytest.raises(ParameterError):
        GradedCoefficients("BP", 2)
    assert GradedCoefficients("MoravaK", 2, nu=3, height=2).nu == 1
