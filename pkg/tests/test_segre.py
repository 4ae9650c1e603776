from crwb.linalg import PointSampler
from crwb.manifold import mark_point
from crwb.poly import Poly
from crwb.segre import minimality_at, orbit_dimension, pairing_residuals, segre_chain

from conftest import manifold


def test_heis2_chain(heis2):
    chain = segre_chain(mark_point(heis2, [0], [0]))
    assert chain.dims == [1, 2]
    assert chain.j0 == 2
    assert chain.minimal is True
    assert orbit_dimension(chain) == (2, 3)
    # Z2(t, u) = (t, 2 i t u)
    z2 = chain.maps[1]
    reg = z2[0].registry
    t2 = Poly.variable(reg, "t2_1")
    t1 = Poly.variable(reg, "t1_1")
    assert z2[0] == t2
    from crwb.scalars import TWO_I

    assert z2[1] == TWO_I * t2 * t1


def test_heis2_pairing_residuals(heis2):
    chain = segre_chain(mark_point(heis2, [0], [0]))
    for stage in range(len(chain.maps)):
        for r in pairing_residuals(chain, stage):
            assert r.is_zero()


def test_pairing_residuals_all_fixtures():
    for name in ("heis2", "plane", "prod3", "st0", "st3"):
        M = manifold(name)
        p = mark_point(M, [0] * M.n, [0] * M.d)
        chain = segre_chain(p, D=min(2 * M.max_degree(), 10))
        for stage in range(len(chain.maps)):
            for r in pairing_residuals(chain, stage):
                assert r.is_zero(), (name, stage)


def test_plane_not_minimal(plane):
    chain = segre_chain(mark_point(plane, [0], [0]))
    assert chain.dims == [1, 1]
    assert chain.j0 == 1
    assert chain.minimal is False
    assert orbit_dimension(chain) == (1, 2)


def test_st3_chain(st3):
    chain = segre_chain(mark_point(st3, [0], [0, 0]))
    assert chain.dims == [1, 2, 2]
    assert chain.j0 == 2
    assert chain.minimal is False
    assert orbit_dimension(chain) == (2, 3)


def test_prod3_nowhere_minimal(prod3):
    for z0, s0 in ([0], [0, 0]), ([1], [1, 2]):
        chain = segre_chain(mark_point(prod3, z0, s0))
        assert chain.dims == [1, 2, 2]
        assert chain.minimal is False


def test_minimality_wrapper(heis2):
    ok, chain = minimality_at(heis2, [0], [0])
    assert ok is True
    assert chain.stabilized


def test_seed_determinism(st0):
    p = mark_point(st0, [0], [0])
    a = segre_chain(p, sampler=PointSampler(4))
    b = segre_chain(p, sampler=PointSampler(4))
    assert a.dims == b.dims and a.j0 == b.j0
