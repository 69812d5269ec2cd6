from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinbn.stp import (
    LogicalMatrix,
    bits_of_column,
    column_of_bits,
    delta,
    identity,
    kron,
    ones_row_collapse,
    power_reducing_matrix,
    stp,
    structure_matrix,
    swap_matrix,
    truth_table,
)

from oracles import dense_phi, dense_stp, dense_swap, unit

POW2 = (1, 2, 4, 8)


def logical_matrices(max_log=3):
    @st.composite
    def build(draw):
        r = 1 << draw(st.integers(0, max_log))
        c = 1 << draw(st.integers(0, max_log))
        cols = draw(st.lists(st.integers(1, r), min_size=c, max_size=c))
        return LogicalMatrix(r, cols)

    return build()


def test_unit_vector_products():
    assert stp(delta(2, 1), delta(2, 2)) == delta(4, 2)
    assert stp(delta(2, 2), delta(2, 1)) == delta(4, 3)


def test_replacement_matrix_applied_to_true():
    a_hat = delta(2, 2, 1)
    assert a_hat @ delta(2, 1) == delta(2, 2)


def test_invariants_enforced():
    with pytest.raises(ValueError):
        LogicalMatrix(3, [1, 2, 3, 1])
    with pytest.raises(ValueError):
        LogicalMatrix(2, [1, 2, 1])
    with pytest.raises(ValueError):
        LogicalMatrix(2, [0, 1])
    with pytest.raises(ValueError):
        LogicalMatrix(2, [1, 3])


def test_dense_round_trip_has_one_per_column():
    a = delta(4, 3, 1, 4, 4)
    d = a.to_dense()
    assert d.shape == (4, 4)
    assert np.array_equal(d.sum(axis=0), np.ones(4))
    assert LogicalMatrix.from_dense(d) == a
    assert hash(LogicalMatrix.from_dense(d)) == hash(a)
    with pytest.raises(ValueError):
        LogicalMatrix.from_dense(np.array([[1, 1], [0, 0], [0, 0]]))


def test_repr_uses_delta_notation():
    assert repr(delta(8, 5, 3)) == "delta_8[5,3]"


@settings(max_examples=300, deadline=None)
@given(logical_matrices(), logical_matrices())
def test_stp_matches_dense_oracle(a, b):
    c = stp(a, b)
    assert np.array_equal(c.to_dense(), dense_stp(a.to_dense(), b.to_dense()))


@settings(max_examples=100, deadline=None)
@given(logical_matrices(), logical_matrices())
def test_kron_matches_numpy(a, b):
    assert np.array_equal(kron(a, b).to_dense(), np.kron(a.to_dense(), b.to_dense()))


def test_associativity_on_unit_vectors():
    vecs = [delta(n, i) for n in POW2 for i in range(1, n + 1)]
    for a, b, c in product(vecs, repeat=3):
        assert stp(stp(a, b), c) == stp(a, stp(b, c))


def test_unit_vector_kronecker_identity():
    for m, n in product(POW2, repeat=2):
        for i, j in product(range(1, m + 1), range(1, n + 1)):
            assert stp(delta(m, i), delta(n, j)) == delta(m * n, (i - 1) * n + j)


def test_swap_examples():
    assert swap_matrix(2, 2) == delta(4, 1, 3, 2, 4)
    assert swap_matrix(2, 1) == identity(2)


@pytest.mark.parametrize("m,n", list(product((2, 4, 8), repeat=2)))
def test_swap_property(m, n):
    w = swap_matrix(m, n)
    assert np.array_equal(w.to_dense(), dense_swap(m, n))
    for i, j in product(range(1, m + 1), range(1, n + 1)):
        assert w @ stp(delta(m, i), delta(n, j)) == stp(delta(n, j), delta(m, i))


def test_power_reducing_examples():
    assert power_reducing_matrix(1) == delta(4, 1, 4)
    assert power_reducing_matrix(2) @ delta(4, 3) == delta(16, 11)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_power_reducing_property(n):
    size = 1 << n
    phi = power_reducing_matrix(n)
    assert np.array_equal(phi.to_dense(), dense_phi(n))
    for i in range(1, size + 1):
        x = delta(size, i)
        assert phi @ x == stp(x, x)
    for i in range(1, size + 1):
        assert np.array_equal(phi.to_dense() @ unit(size, i),
                              np.kron(unit(size, i), unit(size, i)))


def test_structure_matrix_examples():
    assert structure_matrix([1, 1, 1, 0]) == delta(2, 1, 1, 1, 2)
    assert structure_matrix([0, 1]) == delta(2, 2, 1)
    # (x1 & x2) | (x1 & !x2) collapses to x1
    table = [(a & b) | (a & (1 - b)) for a, b in [(1, 1), (1, 0), (0, 1), (0, 0)]]
    assert structure_matrix(table) == delta(2, 1, 1, 2, 2)
    with pytest.raises(ValueError):
        structure_matrix([1, 0, 1])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_structure_matrix_is_bijection(k):
    seen = set()
    for table in product((0, 1), repeat=1 << k):
        a = structure_matrix(table)
        assert a.shape == (2, 1 << k)
        assert tuple(truth_table(a)) == table
        seen.add(a)
    assert len(seen) == 1 << (1 << k)


def test_structure_matrix_acts_on_canonical_product():
    # F x1 x2 x3 = f(x1, x2, x3) for xor of three variables
    for bits in product((1, 0), repeat=3):
        table = [a ^ b ^ c for a, b, c in product((1, 0), repeat=3)]
        f = structure_matrix(table)
        x = delta(2, 2 - bits[0]) @ delta(2, 2 - bits[1]) @ delta(2, 2 - bits[2])
        assert f @ x == delta(2, 2 - (bits[0] ^ bits[1] ^ bits[2]))


def test_column_of_bits_round_trip():
    assert column_of_bits([1, 1, 1]) == 0
    assert column_of_bits([0, 0, 0]) == 7
    assert column_of_bits([]) == 0
    for j in range(16):
        assert column_of_bits(bits_of_column(j, 4)) == j


def test_ones_row_collapse_examples():
    assert ones_row_collapse(delta(2, 1, 2), 1) == delta(2, 1, 1, 2, 2)
    a = delta(2, 2, 1, 1, 1)
    assert ones_row_collapse(a, 0) == a


def test_ones_row_collapse_dense_oracle(rng):
    for kept, dropped in product(range(4), repeat=2):
        a = LogicalMatrix(2, rng.integers(1, 3, 1 << kept))
        ones = np.ones((1, 1 << dropped), dtype=np.int64)
        want = a.to_dense() @ np.kron(np.eye(1 << kept, dtype=np.int64), ones)
        assert np.array_equal(ones_row_collapse(a, dropped).to_dense(), want)
