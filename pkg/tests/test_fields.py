import pytest

from crwb.fields import (
    InvariantError,
    fields_linearly_independent,
    hol_jet_basis,
    is_infinitesimal_automorphism,
    multiply_by_invariant,
    scaled,
    tangency_residuals,
    truncated_flow,
)
from crwb.manifold import complexify
from crwb.mapjet import MapJet
from crwb.nondeg import HoloField
from crwb.poly import Poly, PolyError
from crwb.scalars import gr

from conftest import manifold


def test_heis2_dimension_eight(heis2):
    for D_out in (4, 6, 8):
        basis, dim = hol_jet_basis(heis2, 2, D_out=D_out)
        assert dim == 8, D_out
        assert fields_linearly_independent(basis)


def test_basis_reverifies(heis2):
    C = complexify(heis2, 8)
    basis, _ = hol_jet_basis(C, 2, D_out=8)
    for f in basis:
        assert all(r.is_zero() for r in tangency_residuals(C, f, 8))


def test_dilation_is_automorphism(heis2):
    C = complexify(heis2, 8)
    z = Poly.variable(C.registry, "z1")
    w = Poly.variable(C.registry, "w1")
    X = HoloField(C, [2 * z, 4 * w])
    assert is_infinitesimal_automorphism(C, X)


def test_non_tangent_field_rejected(heis2):
    C = complexify(heis2, 8)
    X = HoloField(C, [Poly.const(C.registry, 1), Poly.zero(C.registry)])
    assert not is_infinitesimal_automorphism(C, X)


def test_multiply_by_invariant_prod3(prod3):
    C = complexify(prod3, 8)
    h = Poly.variable(C.registry, "w2")
    X = HoloField(C, [Poly.zero(C.registry)] * 2 + [Poly.const(C.registry, 1)])
    fields = [multiply_by_invariant(C, h, k, X) for k in range(4)]
    assert fields_linearly_independent(fields)


def test_multiply_rejects_non_invariant(heis2):
    C = complexify(heis2, 8)
    h = Poly.variable(C.registry, "w1")  # w1 is not real-valued on HEIS2
    z = Poly.variable(C.registry, "z1")
    w = Poly.variable(C.registry, "w1")
    X = HoloField(C, [2 * z, 4 * w])
    with pytest.raises(InvariantError):
        multiply_by_invariant(C, h, 1, X)


def test_multiply_rejects_non_tangent(prod3):
    C = complexify(prod3, 8)
    h = Poly.variable(C.registry, "w2")
    X = HoloField(C, [Poly.const(C.registry, 1)] + [Poly.zero(C.registry)] * 2)
    with pytest.raises(InvariantError):
        multiply_by_invariant(C, h, 1, X)


def test_flow_geometric_series_oracle(plane):
    # flow of z^2 d/dz is z -> z/(1 - z); truncation gives the partial sums
    C = complexify(plane, 6)
    z = Poly.variable(C.registry, "z1")
    Y = HoloField(C, [z * z, Poly.zero(C.registry)])
    F = truncated_flow(Y, 4)
    assert F.components[0] == z + z**2 + z**3 + z**4
    assert F.components[1] == Poly.variable(C.registry, "w1")


def test_flow_requires_second_order_vanishing(heis2):
    C = complexify(heis2, 6)
    z = Poly.variable(C.registry, "z1")
    Y = HoloField(C, [z, Poly.zero(C.registry)])
    with pytest.raises(PolyError):
        truncated_flow(Y, 4)


def _group_law_fields(C):
    z = Poly.variable(C.registry, "z1")
    w = Poly.variable(C.registry, "w1")
    return [
        HoloField(C, [z * z, Poly.zero(C.registry)]),
        HoloField(C, [z * w, w * w]),
        HoloField(C, [w * w * w + z * z * w, z * w * w]),
    ]


def test_flow_group_law_degree_6(plane):
    C = complexify(plane, 8)
    for Y in _group_law_fields(C):
        f1 = truncated_flow(scaled(Y, gr(1, 0)), 6)
        half = truncated_flow(scaled(Y, gr(1) / 2), 6)
        composed = half.compose(half)
        assert composed.jets_agree_through(f1, 6)
        # flowing forward then backward is the identity
        back = truncated_flow(scaled(Y, gr(-1)), 6)
        assert back.compose(f1).jets_agree_through(MapJet.identity(C, 6), 6)
