import pytest

from crwb.manifold import (
    GenericManifold,
    ManifoldError,
    complexify,
    cr_basis,
    mark_point,
    validate,
)
from crwb.poly import Poly
from crwb.registry import graph_registry
from crwb.scalars import I, gr

from conftest import manifold


def test_validate_fixtures():
    for name in ("heis2", "plane", "prod3", "st0", "st3"):
        info = validate(manifold(name))
        assert info["valid"]


def test_validate_rejects_nonreal():
    reg = graph_registry(1, 1)
    z = Poly.variable(reg, "z1")
    zb = Poly.variable(reg, "zb1")
    with pytest.raises(ManifoldError):
        GenericManifold(1, 1, [I * z * zb])  # i|z|^2 is not real-valued


def test_validate_rejects_linear_and_constant():
    reg = graph_registry(1, 1)
    z = Poly.variable(reg, "z1")
    zb = Poly.variable(reg, "zb1")
    s = Poly.variable(reg, "s1")
    with pytest.raises(ManifoldError):
        GenericManifold(1, 1, [z + zb])
    with pytest.raises(ManifoldError):
        GenericManifold(1, 1, [z * zb + s])
    with pytest.raises(ManifoldError):
        GenericManifold(1, 1, [z * zb + 1])


def test_complexified_reality():
    for name in ("heis2", "prod3", "st3"):
        C = complexify(manifold(name), 6)
        for r in C.rho:
            assert r.bar_conjugate() == r


def test_cr_basis_annihilates_exactly():
    for name, D in (("heis2", 4), ("plane", 4), ("prod3", 4), ("st0", 14), ("st3", 14)):
        C = complexify(manifold(name), D)
        crb = cr_basis(C)
        assert len(crb.fields) == C.n
        for L in crb.fields:
            for r in C.rho:
                assert L.apply(r).is_zero(), name


def test_mark_point_origin_is_identity(heis2):
    p = mark_point(heis2, [0], [0])
    assert p.is_origin()
    assert p.truncation is None
    assert p.recentered.phi[0] == heis2.phi[0]


def test_mark_point_heis2():
    M = manifold("heis2")
    p = mark_point(M, [1], [0])
    assert p.w0 == [gr(0, 1)]  # w0 = i
    # translation-invariance up to the linear change: same graph again
    assert p.recentered.phi[0] == M.phi[0]


def test_mark_point_st0_spec_point():
    M = manifold("st0")
    p = mark_point(M, [1], [0])
    assert p.w0 == [gr(0, 2)]  # phi(1,1,0) = 2, so w0 = 2i
    validate(p.recentered)


def test_mark_point_random_reverifies():
    # the recentered graph must re-solve the original defining equation:
    # check that points on the recentered graph map to points on M
    from crwb.linalg import PointSampler

    M = manifold("heis2")
    sampler = PointSampler(2)
    z0 = [sampler.gaussian()]
    s0 = [sampler.rational()]
    p = mark_point(M, z0, s0)
    mc = p.recentered
    validate(mc)


def test_mark_point_rejects_complex_s():
    M = manifold("heis2")
    with pytest.raises(ManifoldError):
        mark_point(M, [0], [gr(0, 1)])
