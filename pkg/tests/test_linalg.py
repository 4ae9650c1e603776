import random
from fractions import Fraction

import pytest

from crwb.linalg import (
    ExactMatrix,
    PointSampler,
    SparseEchelon,
    generic_rank,
    invert_matrix,
    matrix_rank_at,
)
from crwb.poly import Poly
from crwb.registry import graph_registry
from crwb.scalars import GaussianRational, I, ONE, ZERO, gr

from conftest import random_scalar


def test_rank_small():
    m = ExactMatrix([[1, 2], [2, 4]])
    assert m.rank() == 1
    m2 = ExactMatrix([[1, 0], [0, I]])
    assert m2.rank() == 2
    assert ExactMatrix([[ZERO, ZERO]]).rank() == 0


def test_kernel_convention():
    m = ExactMatrix([[ONE, I]])
    (v,) = m.kernel()
    assert m.mul_vec(v) == [ZERO]
    assert v[1] == ONE and v[0] == -I


def test_kernel_reverifies_randomized():
    rng = random.Random(5)
    for _ in range(20):
        rows = [[random_scalar(rng, 4) for _ in range(7)] for _ in range(4)]
        m = ExactMatrix(rows)
        basis = m.kernel()
        assert len(basis) == 7 - m.rank()
        for v in basis:
            assert m.mul_vec(v) == [ZERO] * 4


def test_sparse_echelon_matches_dense():
    rng = random.Random(17)
    for _ in range(10):
        rows = [[random_scalar(rng, 3) for _ in range(6)] for _ in range(9)]
        dense = ExactMatrix(rows)
        ech = SparseEchelon(6)
        for row in rows:
            ech.add_row({j: v for j, v in enumerate(row) if v})
        assert ech.rank == dense.rank()
        for v in ech.kernel():
            assert dense.mul_vec(v) == [ZERO] * 9


def test_sparse_echelon_tall_random():
    rng = random.Random(23)
    rows = [[random_scalar(rng, 2) for _ in range(30)] for _ in range(20)]
    ech = SparseEchelon(30)
    for row in rows:
        ech.add_row({j: v for j, v in enumerate(row) if v})
    dense = ExactMatrix(rows)
    assert ech.rank == dense.rank()
    kernel = ech.kernel()
    assert len(kernel) == 30 - ech.rank
    for v in kernel:
        assert dense.mul_vec(v) == [ZERO] * 20


def test_invert_matrix():
    m = [[gr(1), gr(0, 1)], [gr(0), gr(2)]]
    inv = invert_matrix(m)
    prod = ExactMatrix(m).mul_vec([inv[0][0], inv[1][0]])
    assert prod == [ONE, ZERO]
    assert invert_matrix([[gr(1), gr(1)], [gr(1), gr(1)]]) is None


def test_point_sampler_deterministic():
    a = PointSampler(3)
    b = PointSampler(3)
    assert [a.rational() for _ in range(5)] == [b.rational() for _ in range(5)]
    assert a.spawn(1).gaussian() == b.spawn(1).gaussian()
    v = PointSampler(3, height=8).rational()
    assert abs(v.numerator) <= 8 and v.denominator <= 8


def test_generic_rank_polynomial():
    reg = graph_registry(1, 1)
    z = Poly.variable(reg, "z1")
    s = Poly.variable(reg, "s1")
    # rank 2 generically, rank drops on z = 0
    mat = [[z, Poly.zero(reg)], [Poly.zero(reg), s]]
    sampler = PointSampler(1)
    assert generic_rank(mat, sampler) == 2
    assert matrix_rank_at(mat, {"z1": ZERO, "s1": ONE}) == 1
