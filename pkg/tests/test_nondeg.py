import pytest

from crwb.manifold import GenericManifold, complexify, mark_point
from crwb.nondeg import (
    SpanCalculator,
    degeneracy_witness,
    k_nondegeneracy_at,
    levi_number,
)
from crwb.poly import Poly
from crwb.registry import graph_registry
from crwb.scalars import gr

from conftest import manifold


def test_heis2_vectors_by_hand(heis2):
    # L = (i/2) d/dchi + z d/dtau (denominator-cleared CR field);
    # grad_Z rho = (-chi, 1/2i); at 0: alpha=0 gives (0, -i/2),
    # alpha=1 gives L(-chi, 1/2i) = (-i/2, 0): together they span C^2.
    C = complexify(heis2, 4)
    calc = SpanCalculator(C, 2)
    assert calc.vector_at_origin(0, (0,)) == [gr(0), gr(0, -1) / 2]
    assert calc.vector_at_origin(0, (1,)) == [gr(0, -1) / 2, gr(0)]


def test_heis2_k1(heis2):
    rep = k_nondegeneracy_at(mark_point(heis2, [0], [0]), kmax=4)
    assert rep.k == 1
    assert rep.span_dims == [1, 2]


def test_st0_stalls_at_origin(st0):
    rep = k_nondegeneracy_at(mark_point(st0, [0], [0]), kmax=12)
    assert rep.k is None
    assert rep.span_dims == [1] * 13
    assert all(dim < st0.N for dim in rep.span_dims)


def test_st0_k1_at_marked_point(st0):
    p = mark_point(st0, [1], [0], D=8)
    assert p.w0 == [gr(0, 2)]
    rep = k_nondegeneracy_at(p, kmax=4)
    assert rep.k == 1


def test_plane_never_nondegenerate(plane):
    rep = k_nondegeneracy_at(mark_point(plane, [0], [0]), kmax=6)
    assert rep.k is None


def test_rescaled_cr_fields_leave_spans_invariant(heis2):
    # multiplying the defining function by a unit changes the CR basis but
    # not the span dimensions (triangular change of generators)
    reg = graph_registry(1, 1)
    z = Poly.variable(reg, "z1")
    zb = Poly.variable(reg, "zb1")
    s = Poly.variable(reg, "s1")
    base = z * zb
    # same manifold germ written with an extra pure-graph term of high order
    M2 = GenericManifold(1, 1, [base + (z * zb) ** 2], label="HEIS2b")
    r1 = k_nondegeneracy_at(mark_point(heis2, [0], [0]), kmax=3)
    r2 = k_nondegeneracy_at(mark_point(M2, [0], [0]), kmax=3)
    assert r1.k == r2.k == 1


def test_witness_plane(plane):
    fields = degeneracy_witness(plane, 0)
    assert len(fields) >= 1
    # d/dz is among the degree-0 witnesses
    reps = {repr(f) for f in fields}
    assert any("d/dz1" in r for r in reps)


def test_witness_absent_on_heis2(heis2):
    assert degeneracy_witness(heis2, 2) == []


def test_witness_absent_on_st3(st3):
    assert degeneracy_witness(st3, 2) == []


def test_levi_heis2(heis2):
    rep = levi_number(heis2, kmax=6, seed=1)
    assert rep.verdict == "finite"
    assert rep.levi == 1


def test_levi_plane_degenerate(plane):
    rep = levi_number(plane, kmax=6, seed=1)
    assert rep.verdict == "degenerate"
    assert rep.levi is None
    assert rep.witnesses


def test_levi_st0(st0):
    rep = levi_number(st0, kmax=12, seed=0)
    assert rep.verdict == "finite"
    assert rep.levi == 1
