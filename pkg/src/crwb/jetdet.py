"""Finite jet determination of local CR automorphisms.

For an l-nondegenerate minimal point of a generic submanifold of
codimension d, self-maps fixing the point are determined by their jet of
order K_norm = (d+1)*l.  The linearized question at the identity is: do
the self-map (tangency) equations admit nonzero solutions supported in
degrees K_norm+1 .. K_max?  An empty joint kernel certifies uniqueness at
the linear level; each nonzero kernel element is a residual freedom.

The constructive converse multiplies a tangent field by a power of a
function that is real on the manifold: the flow of h^e * X agrees with
the identity to arbitrarily high order while remaining a genuine self-map.
"""
from __future__ import annotations

from .fields import (
    _kernel_fields,
    _real_tangency_system,
    hol_jet_basis,
    multiply_by_invariant,
    truncated_flow,
)
from .linalg import PointSampler
from .manifold import (
    ComplexifiedManifold,
    GenericManifold,
    ManifoldError,
    MarkedPoint,
    complexify,
    mark_point,
)
from .mapjet import MapJet
from .nondeg import (
    HoloField,
    _multi_indices,
    degeneracy_witness,
    k_nondegeneracy_at,
    levi_number,
)
from .poly import Poly
from .segre import segre_chain


def map_residual(C: ComplexifiedManifold, H: MapJet, cap: int = None):
    """rho(H(Z), conj H(zeta)) reduced mod (tau = Qbar); zero iff H maps M to M.

    Exact through min(cap, C.D, H.cap).
    """
    cap = C.D if cap is None else min(cap, C.D)
    cap = min(cap, H.cap)
    mapping = dict(zip(C.Z_names(), H.components))
    for name, comp in zip(C.zeta_names(), H.components):
        mapping[name] = comp.bar_conjugate()
    return [C.reduce(r.substitute(mapping, cap=cap), cap) for r in C.rho]


class DeterminationVerdict:
    def __init__(
        self,
        point,
        status,
        levi,
        K_norm,
        K_max,
        freedom_per_degree,
        joint_freedom,
        unique,
        details,
    ):
        self.point = point
        self.status = status  # "ok" | "prerequisites_failed" | "not_applicable"
        self.levi = levi
        self.K_norm = K_norm
        self.K_max = K_max
        self.freedom_per_degree = freedom_per_degree  # {degree: kernel dim}
        self.joint_freedom = joint_freedom
        self.unique = unique
        self.details = details

    def __repr__(self):
        return (
            f"DeterminationVerdict({self.status}, K_norm={self.K_norm}, "
            f"unique={self.unique}, freedoms={self.freedom_per_degree})"
        )


class JetSystem:
    """Exact real-linear system for the degree-k coefficients of a self-map.

    With the lower jets of H fixed, the degree-k unknowns enter the
    self-map equations linearly (triangularity); `freedom` is the dimension
    of the homogeneous solution space and `consistent` reports whether the
    inhomogeneity from the base jet can be matched at all.
    """

    def __init__(self, echelon, unknowns, consistent):
        self.echelon = echelon
        self.unknowns = unknowns
        self.consistent = consistent

    @property
    def freedom(self):
        return 2 * len(self.unknowns) - self.echelon.rank if self.consistent else None


def self_map_constraints(C: ComplexifiedManifold, H: MapJet, degrees, D_out: int) -> JetSystem:
    """Self-map system for coefficients in the given degrees around a base jet.

    Perturbing H by a holomorphic correction V supported in these degrees
    changes rho(H, bar H) to first order by

        sum_j V_j drho_k/dZ_j (H, bar H) + bar V_j drho_k/dzeta_j (H, bar H),

    so the unknowns enter through the tangency columns composed with H;
    the residual of the base jet supplies the right-hand side.  For the
    identity base (all callers here) the composition is trivial and the
    system is homogeneous.
    """
    if isinstance(degrees, int):
        degrees = [degrees]
    monomials = [a for deg in degrees for a in _multi_indices(C.N, deg)]
    identity_base = H.jets_agree_through(MapJet.identity(C, H.cap), H.cap)
    if not identity_base:
        raise ManifoldError("only identity-based jet systems are supported")
    ech, unknowns = _real_tangency_system(C, monomials, D_out)
    consistent = all(r.is_zero() for r in map_residual(C, H, cap=D_out))
    return JetSystem(ech, unknowns, consistent)


def determination_test(
    M: GenericManifold,
    point: MarkedPoint = None,
    K_max: int = 6,
    kmax: int = 12,
    seed: int = 0,
    levi: int = None,
    force: bool = False,
) -> DeterminationVerdict:
    """Jet-determination experiment at a marked point (default: the origin).

    Computes the Levi number, the normalization order K_norm = (d+1)*l, and
    the linearized freedoms in each degree K_norm+1 .. K_max; `unique` is
    the emptiness of the joint kernel across those degrees.  Prerequisites
    (finite Levi number, l-nondegeneracy and minimality at the point) are
    checked first unless `force` is set.
    """
    if point is None:
        point = mark_point(M, [0] * M.n, [0] * M.d)
    details = {}
    if levi is None:
        lrep = levi_number(M, kmax=kmax, seed=seed)
        details["levi_verdict"] = lrep.verdict
        if lrep.verdict != "finite":
            return DeterminationVerdict(
                point, "not_applicable", None, None, K_max, {}, None, None, details
            )
        levi = lrep.levi
    K_norm = (M.d + 1) * levi

    if not force:
        krep = k_nondegeneracy_at(point, kmax=kmax)
        details["k_at_point"] = krep.k
        chain = segre_chain(point, sampler=PointSampler(seed))
        details["minimal_at_point"] = chain.minimal
        if krep.k != levi or chain.minimal is not True:
            return DeterminationVerdict(
                point,
                "prerequisites_failed",
                levi,
                K_norm,
                K_max,
                {},
                None,
                None,
                details,
            )

    if K_max <= K_norm:
        raise ManifoldError("K_max must exceed the normalization order")
    mc = point.recentered
    probe = complexify(mc, D=2)
    D_out = K_max + probe.rho_max_degree() + 2
    if point.truncation is not None:
        # a recentered graph is only exact through its truncation; match
        # through the available jet instead of recentering ever deeper
        # (uniqueness verdicts remain valid: fewer equations can only
        # enlarge the kernel)
        D_out = min(D_out, point.truncation)
    C = complexify(mc, D=D_out)

    base = MapJet.identity(C, K_max)
    freedom = {}
    for deg in range(K_norm + 1, K_max + 1):
        sys = self_map_constraints(C, base, [deg], D_out)
        freedom[deg] = sys.freedom
    sys = self_map_constraints(C, base, range(K_norm + 1, K_max + 1), D_out)
    joint = sys.freedom
    # sanity: re-verify each joint kernel element as an actual tangent field
    _kernel_fields(C, sys.echelon, sys.unknowns, D_out)
    unique = joint == 0 and all(f == 0 for f in freedom.values())
    return DeterminationVerdict(
        point, "ok", levi, K_norm, K_max, freedom, joint, unique, details
    )


class CounterexamplePair:
    def __init__(self, F, G, K, h, exponent, field, agree_through, differ_at):
        self.F = F
        self.G = G
        self.K = K
        self.h = h
        self.exponent = exponent
        self.field = field
        self.agree_through = agree_through
        self.differ_at = differ_at

    def __repr__(self):
        return (
            f"CounterexamplePair(agree_through={self.agree_through}, "
            f"differ_at={self.differ_at})"
        )


def real_on_manifold_functions(C: ComplexifiedManifold):
    """Coordinate functions w_j that happen to be real-valued on M."""
    out = []
    for name in C.w_names():
        h = Poly.variable(C.registry, name)
        if C.reduce(h - h.bar_conjugate()).is_zero():
            out.append(h)
    return out


def counterexample_pair(
    M: GenericManifold,
    K: int,
    point: MarkedPoint = None,
    h: Poly = None,
    field: HoloField = None,
    D_coef: int = 2,
):
    """Two distinct polynomial self-maps of M with the same K-jet at 0.

    Flows h^e * X where h is real on M and vanishes at 0 and X is a tangent
    field; e is chosen so the flow is the identity through order K but not
    through order K+2.  Returns None when no (h, X) pair is found -- for
    manifolds that actually determine their automorphisms by finite jets
    this is the expected outcome.
    """
    if K < 1:
        raise ManifoldError("K must be >= 1")
    if point is not None:
        M = point.recentered
    D_map = K + 2
    probe = complexify(M, D=2)
    D_out = D_map + probe.rho_max_degree()
    if point is not None and point.truncation is not None and point.truncation < D_out:
        M = mark_point(point.manifold, point.z0, point.s0, D=D_out).recentered
    C = complexify(M, D=D_out)

    hs = [h] if h is not None else real_on_manifold_functions(C)
    if not hs:
        return None

    candidates = []
    if field is not None:
        candidates = [field]
    else:
        witnesses = degeneracy_witness(M, D_coef, D_out=D_out)
        candidates.extend(HoloField(C, [c.substitute({}, target=C.registry) for c in w.coeffs]) for w in witnesses)
        if not candidates:
            basis, _ = hol_jet_basis(C, D_coef, D_out=D_out)
            candidates.extend(basis)

    for hfun in hs:
        mh = hfun.min_degree()
        if mh < 1:
            raise ManifoldError("multiplier must vanish at the base point")
        for X in candidates:
            if X.is_zero():
                continue
            ma = X.min_coeff_degree()
            e = max(1, -(-(K + 1 - ma) // mh))
            try:
                Y = multiply_by_invariant(C, hfun, e, X)
            except Exception:
                continue
            if Y.is_zero() or Y.min_coeff_degree() < 2:
                continue
            F = truncated_flow(Y, D_map)
            G = MapJet.identity(C, D_map)
            diff = F.first_disagreement(G)
            if diff is None or diff <= K:
                continue
            for r in map_residual(C, F, cap=D_map):
                if not r.is_zero():
                    raise ManifoldError("flow failed the self-map re-verification")
            return CounterexamplePair(F, G, K, hfun, e, Y, K, diff)
    return None
