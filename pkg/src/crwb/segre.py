"""Segre sets, minimality, and CR-orbit dimension.

The j-th Segre set at a point is parametrized by iterating the solved
defining form: Z1(t) = (t, Q(t, 0, 0)) and Z_{j+1}(t, prev) substitutes
the conjugate of the previous parametrization into Q.  Its generic
dimension d_j is the generic rank of the parametrization Jacobian; the
sequence is strictly increasing until it stabilizes at j0, and the point
is minimal exactly when d_{j0} equals the ambient dimension N.  The local
CR orbit has CR dimension n and real dimension d_{j0} + n.
"""
from __future__ import annotations

from .linalg import PointSampler, generic_rank
from .manifold import GenericManifold, MarkedPoint, complexify, mark_point
from .poly import Poly
from .registry import VariableRegistry


class SegreChain:
    def __init__(self, point, maps, dims, j0, minimal, D, jmax, stabilized):
        self.point = point
        self.maps = maps  # maps[j-1]: list of N Polys over the stage-j registry
        self.dims = dims  # generic dimensions d_1, d_2, ...
        self.j0 = j0
        self.minimal = minimal  # True/False, or None when not stabilized
        self.D = D
        self.jmax = jmax
        self.stabilized = stabilized

    @property
    def orbit_codim_dimension(self):
        """Dimension of the intrinsic complexification of the local CR orbit."""
        return self.dims[self.j0 - 1] if self.stabilized else None

    @property
    def orbit_real_dimension(self):
        return self.dims[self.j0 - 1] + self.point.manifold.n if self.stabilized else None

    def __repr__(self):
        return (
            f"SegreChain(dims={self.dims}, j0={self.j0}, minimal={self.minimal})"
        )


def _stage_registry(n: int, upto: int) -> VariableRegistry:
    """Parameter blocks t1_*, ..., t<upto>_*; all self-paired under bar."""
    names = [f"t{j}_{i}" for j in range(1, upto + 1) for i in range(1, n + 1)]
    return VariableRegistry(names, {nm: nm for nm in names})


def segre_chain(
    point: MarkedPoint,
    jmax: int = None,
    D: int = None,
    sampler: PointSampler = None,
) -> SegreChain:
    """Iterated Segre-set parametrizations at a marked point.

    Stops as soon as the generic dimension stabilizes (or hits N, which
    forces stabilization); gives up after jmax stages.
    """
    mc = point.recentered
    n, d, N = mc.n, mc.d, mc.N
    if jmax is None:
        jmax = d + 2
    if D is None:
        D = 2 * mc.max_degree()
        if point.truncation is not None:
            # the recentered graph is only exact through its truncation;
            # don't silently redo the recentering at a deeper degree
            D = min(D, point.truncation)
    if point.truncation is not None and point.truncation < D:
        point = mark_point(point.manifold, point.z0, point.s0, D=D)
        mc = point.recentered
    if sampler is None:
        sampler = PointSampler(0)

    C = complexify(mc, D)
    Q = C.q_from_qbar()  # w_j = Q_j(z, chi, tau)

    maps = []
    dims = []
    j0 = None
    prev = None  # components of Z_j over stage registry j
    for stage in range(1, jmax + 1):
        reg = _stage_registry(n, stage)
        tvars = [Poly.variable(reg, f"t{stage}_{i}") for i in range(1, n + 1)]
        mapping = {}
        for i, name in enumerate(C.z_names()):
            mapping[name] = tvars[i]
        if prev is None:
            for name in C.chi_names():
                mapping[name] = Poly.zero(reg)
            for name in C.tau_names():
                mapping[name] = Poly.zero(reg)
        else:
            prev_bar = [p.bar_conjugate().substitute({}, target=reg) for p in prev]
            for i, name in enumerate(C.chi_names()):
                mapping[name] = prev_bar[i]
            for k, name in enumerate(C.tau_names()):
                mapping[name] = prev_bar[n + k]
        wcomps = [q.substitute(mapping, target=reg, cap=D) for q in Q]
        comps = tvars + wcomps
        maps.append(comps)
        jac = [[c.diff(v) for v in reg.names] for c in comps]
        dims.append(generic_rank(jac, sampler.spawn(stage)))
        prev = comps
        if dims[-1] == N:
            j0 = stage
            break
        if stage >= 2 and dims[-1] == dims[-2]:
            j0 = stage - 1
            break
    stabilized = j0 is not None
    minimal = (dims[j0 - 1] == N) if stabilized else None
    return SegreChain(point, maps, dims, j0, minimal, D, jmax, stabilized)


def pairing_residuals(chain: SegreChain, stage: int):
    """rho evaluated on (Z_{stage+1}, conj Z_{stage}); zero through chain.D.

    This is the defining property of the iteration: consecutive
    parametrizations pair to points of the complexified manifold.
    """
    point = chain.point
    mc = point.recentered
    C = complexify(mc, chain.D)
    cur = chain.maps[stage]  # Z_{stage+1}, over registry upto stage+1
    prev = chain.maps[stage - 1] if stage >= 1 else None
    reg = cur[0].registry
    mapping = {}
    for i, name in enumerate(C.z_names()):
        mapping[name] = cur[i]
    for k, name in enumerate(C.w_names()):
        mapping[name] = cur[mc.n + k]
    if prev is None:
        for name in C.chi_names() + C.tau_names():
            mapping[name] = Poly.zero(reg)
    else:
        prev_bar = [p.bar_conjugate().substitute({}, target=reg) for p in prev]
        for i, name in enumerate(C.chi_names()):
            mapping[name] = prev_bar[i]
        for k, name in enumerate(C.tau_names()):
            mapping[name] = prev_bar[mc.n + k]
    return [r.substitute(mapping, target=reg, cap=chain.D) for r in C.rho]


def minimality_at(M: GenericManifold, z0, s0, **kw):
    """Convenience wrapper: is M minimal at the given point?"""
    chain = segre_chain(mark_point(M, z0, s0), **kw)
    return chain.minimal, chain


def orbit_dimension(chain: SegreChain):
    """(dim of local CR orbit's complexification, real dim of the orbit)."""
    if not chain.stabilized:
        return None
    return (chain.orbit_codim_dimension, chain.orbit_real_dimension)
