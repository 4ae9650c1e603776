"""Generic polynomial submanifolds in graph form and their complexification.

Input data is always a graph Im w_j = phi_j(z, zb, Re w) with real-valued
polynomial phi_j vanishing to second order at 0.  The complexification
lives in doubled coordinates (z, w, chi, tau) and carries a solved form
tau = Qbar(chi, z, w) used as the ideal-reduction device everywhere else.
"""
from __future__ import annotations

from fractions import Fraction

from .implicit import implicit_solve
from .poly import Poly, PolyError, Series
from .registry import VariableRegistry, cr_registry, graph_registry
from .scalars import GaussianRational, I, ONE, ZERO, _coerce
from .vfield import VectorField

MINUS_I_HALF = GaussianRational(0, Fraction(-1, 2))  # 1/(2i)


class ManifoldError(ValueError):
    pass


class GenericManifold:
    """Graph-form generic submanifold of C^N, N = n + d."""

    def __init__(self, n: int, d: int, phi, label: str = "M", check: bool = True):
        if n < 1 or d < 1:
            raise ManifoldError("need n >= 1 and d >= 1")
        self.n = n
        self.d = d
        self.phi = list(phi)
        self.label = label
        if len(self.phi) != d:
            raise ManifoldError(f"expected {d} defining functions, got {len(self.phi)}")
        self.registry = self.phi[0].registry
        if check:
            validate(self)

    @property
    def N(self) -> int:
        return self.n + self.d

    def max_degree(self) -> int:
        return max(2, max(p.total_degree() for p in self.phi))

    def z_names(self):
        return [f"z{i}" for i in range(1, self.n + 1)]

    def zb_names(self):
        return [f"zb{i}" for i in range(1, self.n + 1)]

    def s_names(self):
        return [f"s{j}" for j in range(1, self.d + 1)]

    def __repr__(self):
        return f"GenericManifold({self.label}, n={self.n}, d={self.d})"


def validate(M: GenericManifold) -> dict:
    """Check graph-form invariants; raise ManifoldError when violated."""
    expected = graph_registry(M.n, M.d)
    for j, p in enumerate(M.phi, start=1):
        if p.registry.names != expected.names:
            raise ManifoldError(
                f"phi{j} uses registry {p.registry.names}, expected {expected.names}"
            )
        if p.bar_conjugate() != p:
            raise ManifoldError(f"phi{j} is not real-valued (bar-swap symmetry fails)")
        if p.constant_term():
            raise ManifoldError(f"phi{j} does not vanish at the origin")
        for name in p.registry.names:
            if p.coeff({name: 1}):
                raise ManifoldError(f"phi{j} has a nonzero linear term in {name}")
    return {
        "label": M.label,
        "n": M.n,
        "d": M.d,
        "N": M.N,
        "valid": True,
        "max_degree": max(p.total_degree() for p in M.phi),
    }


class ComplexifiedManifold:
    """rho(Z, zeta) = 0 in (z, w, chi, tau), with solved form tau = Qbar."""

    def __init__(self, manifold, registry, rho, solved, D):
        self.manifold = manifold
        self.registry = registry
        self.rho = rho
        self.solved = solved  # list of Series in (chi, z, w)
        self.D = D

    @property
    def n(self):
        return self.manifold.n

    @property
    def d(self):
        return self.manifold.d

    @property
    def N(self):
        return self.manifold.N

    def tau_names(self):
        return [f"tau{j}" for j in range(1, self.d + 1)]

    def chi_names(self):
        return [f"chi{i}" for i in range(1, self.n + 1)]

    def z_names(self):
        return [f"z{i}" for i in range(1, self.n + 1)]

    def w_names(self):
        return [f"w{j}" for j in range(1, self.d + 1)]

    def Z_names(self):
        return self.z_names() + self.w_names()

    def zeta_names(self):
        return self.chi_names() + self.tau_names()

    def reduce(self, p: Poly, cap: int = None) -> Poly:
        """Substitute tau = Qbar and truncate; exact through min(cap, D)."""
        cap = self.D if cap is None else min(cap, self.D)
        mapping = {name: s.poly for name, s in zip(self.tau_names(), self.solved)}
        return p.substitute(mapping, cap=cap)

    def q_from_qbar(self):
        """Solved form for w: w_j = Q_j(z, chi, tau), the bar of Qbar_j."""
        return [s.poly.bar_conjugate() for s in self.solved]

    def rho_max_degree(self) -> int:
        return max(r.total_degree() for r in self.rho)


def complexify(M: GenericManifold, D: int) -> ComplexifiedManifold:
    """Replace zb -> chi, Re w -> (w+tau)/2, Im w -> (w-tau)/2i and solve for tau."""
    reg = cr_registry(M.n, M.d)
    half = Fraction(1, 2)
    mapping = {}
    for i, (zn, zbn) in enumerate(zip(M.z_names(), M.zb_names())):
        mapping[zn] = Poly.variable(reg, zn)
        mapping[zbn] = Poly.variable(reg, f"chi{i + 1}")
    for j, sn in enumerate(M.s_names(), start=1):
        mapping[sn] = (Poly.variable(reg, f"w{j}") + Poly.variable(reg, f"tau{j}")) * half
    rho = []
    for j, p in enumerate(M.phi, start=1):
        imw = (Poly.variable(reg, f"w{j}") - Poly.variable(reg, f"tau{j}")) * MINUS_I_HALF
        r = imw - p.substitute(mapping, target=reg)
        assert r.bar_conjugate() == r, "complexified defining function lost reality"
        rho.append(r)
    tau = [f"tau{j}" for j in range(1, M.d + 1)]
    solved = implicit_solve(rho, tau, D)
    return ComplexifiedManifold(M, reg, rho, solved, D)


# -- CR vector field basis -----------------------------------------------------


def poly_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    reg = mat[0][0].registry
    total = Poly.zero(reg)
    for k in range(n):
        entry = mat[0][k]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != k] for row in mat[1:]]
        sub = poly_det(minor)
        term = entry * sub
        total = total + (term if k % 2 == 0 else -term)
    return total


def poly_adjugate(mat):
    """adj with mat @ adj == det * identity."""
    n = len(mat)
    reg = mat[0][0].registry
    if n == 1:
        return [[Poly.const(reg, ONE)]]
    adj = [[None] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            minor = [
                [mat[r][c] for c in range(n) if c != k]
                for r in range(n)
                if r != j
            ]
            cof = poly_det(minor)
            adj[k][j] = cof if (j + k) % 2 == 0 else -cof
    return adj


class CRBasis:
    """Denominator-cleared CR fields: L_i = det(rho_tau) d/dchi_i + sum b_ik d/dtau_k."""

    def __init__(self, fields, scale):
        self.fields = fields
        self.scale = scale


def cr_basis(C: ComplexifiedManifold) -> CRBasis:
    reg = C.registry
    A = [[C.rho[j].diff(tk) for tk in C.tau_names()] for j in range(C.d)]
    det = poly_det(A)
    adj = poly_adjugate(A)
    fields = []
    for i, ci_name in enumerate(C.chi_names()):
        grad = [C.rho[j].diff(ci_name) for j in range(C.d)]
        coeffs = {ci_name: det}
        for k in range(C.d):
            b = Poly.zero(reg)
            for j in range(C.d):
                b = b - adj[k][j] * grad[j]
            if not b.is_zero():
                coeffs[f"tau{k + 1}"] = b
        L = VectorField(reg, coeffs)
        for j in range(C.d):
            assert L.apply(C.rho[j]).is_zero(), "CR field fails to annihilate rho"
        fields.append(L)
    return CRBasis(fields, det)


# -- marked points and recentering ---------------------------------------------


class MarkedPoint:
    def __init__(self, manifold, z0, s0, w0, recentered, truncation, base_change):
        self.manifold = manifold
        self.z0 = list(z0)
        self.s0 = list(s0)
        self.w0 = list(w0)
        self.recentered = recentered
        self.truncation = truncation  # None when the recentered graph is exact
        self.base_change = base_change

    def coordinates(self):
        return self.z0 + self.w0

    def is_origin(self) -> bool:
        return all(not v for v in self.z0) and all(not v for v in self.w0)

    def __repr__(self):
        zs = ", ".join(str(v) for v in self.z0)
        ws = ", ".join(str(v) for v in self.w0)
        return f"MarkedPoint(({zs}; {ws}) on {self.manifold.label})"


def mark_point(M: GenericManifold, z0, s0, D: int = None) -> MarkedPoint:
    """Recenter M at the point over (z0, Re w = s0).

    w0 = s0 + i*phi(z0, conj z0, s0).  The translated graph is restored to
    normalized graph form (zero linear part) by an exact linear holomorphic
    change followed by an implicit re-solve; the recentered phi is exact
    through degree D (and exact outright when no linear change is needed).
    """
    z0 = [_coerce(v) for v in z0]
    s0 = [_coerce(v) for v in s0]
    if len(z0) != M.n or len(s0) != M.d:
        raise ManifoldError("point block sizes do not match (n, d)")
    for v in s0:
        if not v.is_real():
            raise ManifoldError("s0 must be real")
    if D is None:
        D = M.max_degree() + 2

    zb0 = [v.conjugate() for v in z0]
    base_point = {}
    for i, name in enumerate(M.z_names()):
        base_point[name] = z0[i]
    for i, name in enumerate(M.zb_names()):
        base_point[name] = zb0[i]
    for j, name in enumerate(M.s_names()):
        base_point[name] = s0[j]
    imw0 = [p.eval_at(base_point) for p in M.phi]
    for v in imw0:
        if not v.is_real():
            raise ManifoldError("phi not real at the requested point")
    w0 = [s0[j] + I * imw0[j] for j in range(M.d)]

    reg = M.registry
    shift = {}
    for i, name in enumerate(M.z_names()):
        shift[name] = Poly.variable(reg, name) + Poly.const(reg, z0[i])
    for i, name in enumerate(M.zb_names()):
        shift[name] = Poly.variable(reg, name) + Poly.const(reg, zb0[i])
    for j, name in enumerate(M.s_names()):
        shift[name] = Poly.variable(reg, name) + Poly.const(reg, s0[j])
    phi_t = [p.substitute(shift) - Poly.const(reg, imw0[j]) for j, p in enumerate(M.phi)]

    a = [[p.coeff({zn: 1}) for zn in M.z_names()] for p in phi_t]
    b = [[p.coeff({sn: 1}) for sn in M.s_names()] for p in phi_t]
    trivial = all(not v for row in a for v in row) and all(
        not v for row in b for v in row
    )
    label = f"{M.label}@({','.join(map(str, z0))};{','.join(map(str, w0))})"
    if trivial:
        recentered = GenericManifold(M.n, M.d, phi_t, label=label)
        return MarkedPoint(M, z0, s0, w0, recentered, None, None)

    for row in b:
        for v in row:
            if not v.is_real():
                raise ManifoldError("Re w block of the linear part must be real")

    # w'' = (I - i b) w' - 2i a z'; solve Im w'' = psi(z, zb, Re w'')
    d, n = M.d, M.n
    one_minus_ib = [
        [(ONE if j == k else ZERO) - I * b[j][k] for k in range(d)] for j in range(d)
    ]
    from .linalg import invert_matrix

    S = invert_matrix(one_minus_ib)
    assert S is not None, "I - i*b is always invertible for real b"

    ext_names = list(graph_registry(n, d).names) + [f"y{j}" for j in range(1, d + 1)]
    partner = dict(graph_registry(n, d).partner)
    partner.update({f"y{j}": f"y{j}" for j in range(1, d + 1)})
    ext = VariableRegistry(ext_names, partner)

    def var(name):
        return Poly.variable(ext, name)

    TWO_I = GaussianRational(0, 2)
    wprime = []
    wbar = []
    for j in range(d):
        wp = Poly.zero(ext)
        wb = Poly.zero(ext)
        for k in range(d):
            inner = var(f"s{k + 1}") + var(f"y{k + 1}") * I
            inner_bar = var(f"s{k + 1}") - var(f"y{k + 1}") * I
            for l in range(n):
                if a[k][l]:
                    inner = inner + var(f"z{l + 1}") * (TWO_I * a[k][l])
                    inner_bar = inner_bar - var(f"zb{l + 1}") * (
                        TWO_I * a[k][l].conjugate()
                    )
            wp = wp + inner * S[j][k]
            wb = wb + inner_bar * S[j][k].conjugate()
        wprime.append(wp)
        wbar.append(wb)

    half = Fraction(1, 2)
    lift = {}
    for name in M.z_names() + M.zb_names():
        lift[name] = Poly.variable(ext, name)
    for j, name in enumerate(M.s_names()):
        lift[name] = (wprime[j] + wbar[j]) * half
    eqs = []
    for j in range(d):
        im_wpp = (wprime[j] - wbar[j]) * MINUS_I_HALF
        eqs.append(im_wpp - phi_t[j].substitute(lift, target=ext, cap=D))
    ys = [f"y{j}" for j in range(1, d + 1)]
    sols = implicit_solve(eqs, ys, D)

    out_reg = graph_registry(n, d)
    new_phi = [s.poly.substitute({}, target=out_reg) for s in sols]
    recentered = GenericManifold(M.n, M.d, new_phi, label=label)
    return MarkedPoint(M, z0, s0, w0, recentered, D, {"a": a, "b": b, "S": S})
