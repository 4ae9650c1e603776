"""Finite nondegeneracy, the Levi number, and degeneracy witnesses.

The central object is the family of vectors V(j, alpha) = (L^alpha applied
to grad_Z rho_j) evaluated at a marked point: the manifold is k-nondegenerate
there when the span of these vectors first reaches full dimension N at
multi-index length k.  The Levi number is the minimum of the finite
nondegeneracy orders over the manifold; it is estimated from seeded
rational sample points together with a bounded-degree search for a global
degeneracy witness field.
"""
from __future__ import annotations

import itertools

from .linalg import ExactMatrix, PointSampler, SparseEchelon
from .manifold import (
    ComplexifiedManifold,
    GenericManifold,
    ManifoldError,
    MarkedPoint,
    complexify,
    cr_basis,
    mark_point,
)
from .poly import Poly
from .scalars import I, ONE, ZERO
from .vfield import VectorField


def _multi_indices(n: int, total: int):
    """All alpha in N^n with |alpha| == total, lexicographically."""
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _multi_indices(n - 1, total - first):
            yield (first,) + rest


class SpanCalculator:
    """Caches the iterated CR derivatives L^alpha (grad_Z rho_j).

    Intermediate polynomials at multi-index length m are truncated at
    kmax - m: each further application of an L field consumes at most one
    degree of accuracy, so every constant term read off at the end is exact.
    """

    def __init__(self, C: ComplexifiedManifold, kmax: int):
        self.C = C
        self.kmax = kmax
        self.crb = cr_basis(C)
        self.Z = C.Z_names()
        # gradient of rho_j along the holomorphic directions
        self._cache = {}
        for j in range(C.d):
            grad = [C.rho[j].diff(name).truncate(kmax) for name in self.Z]
            self._cache[(j, (0,) * C.n)] = grad

    def vector_poly(self, j: int, alpha: tuple):
        """L^alpha grad_Z rho_j as polynomials, exact through kmax - |alpha|."""
        key = (j, alpha)
        got = self._cache.get(key)
        if got is not None:
            return got
        m = sum(alpha)
        if m > self.kmax:
            raise ValueError("multi-index length exceeds kmax")
        i = next(idx for idx, a in enumerate(alpha) if a)
        prev_alpha = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
        prev = self.vector_poly(j, prev_alpha)
        L = self.crb.fields[i]
        cap = self.kmax - m
        got = [L.apply(p, cap=cap) for p in prev]
        self._cache[key] = got
        return got

    def vector_at_origin(self, j: int, alpha: tuple):
        return [p.constant_term() for p in self.vector_poly(j, alpha)]


class NondegeneracyReport:
    def __init__(self, point, kmax, span_dims, k):
        self.point = point
        self.kmax = kmax
        self.span_dims = span_dims  # span dimension after lengths 0..kmax
        self.k = k  # least length reaching N, or None if it stalls

    def __repr__(self):
        tail = f"k={self.k}" if self.k is not None else f"stalled<= {self.span_dims[-1]}"
        return f"NondegeneracyReport({self.point!r}, {tail})"


def k_nondegeneracy_at(point: MarkedPoint, kmax: int = 12) -> NondegeneracyReport:
    """Finite nondegeneracy order of the manifold at a marked point.

    Works on the recentered graph; the point becomes the origin, where the
    vectors V(j, alpha) are read off as exact constant terms.
    """
    mc = point.recentered
    if point.truncation is not None and point.truncation < kmax + 2:
        point = mark_point(point.manifold, point.z0, point.s0, D=kmax + 2)
        mc = point.recentered
    C = complexify(mc, D=kmax + 2)
    calc = SpanCalculator(C, kmax)
    N = mc.N
    ech = SparseEchelon(N)
    span_dims = []
    k = None
    for m in range(kmax + 1):
        for alpha in _multi_indices(mc.n, m):
            for j in range(mc.d):
                vec = calc.vector_at_origin(j, alpha)
                ech.add_row({i: v for i, v in enumerate(vec) if v})
        span_dims.append(ech.rank)
        if k is None and ech.rank == N:
            k = m
            break
    return NondegeneracyReport(point, kmax, span_dims, k)


# -- degeneracy witness fields ---------------------------------------------------


class HoloField:
    """A holomorphic polynomial vector field sum a_j(Z) d/dZ_j."""

    def __init__(self, C: ComplexifiedManifold, coeffs):
        self.C = C
        self.coeffs = list(coeffs)  # Polys over C.registry in the Z block

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def min_coeff_degree(self):
        degs = [c.min_degree() for c in self.coeffs if not c.is_zero()]
        return min(degs) if degs else None

    def max_coeff_degree(self):
        return max((c.total_degree() for c in self.coeffs), default=-1)

    def as_vector_field(self):
        return VectorField(
            self.C.registry,
            {name: c for name, c in zip(self.C.Z_names(), self.coeffs)},
        )

    def __repr__(self):
        parts = [
            f"({c})*d/d{name}"
            for name, c in zip(self.C.Z_names(), self.coeffs)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"


def holomorphic_tangency_residuals(C: ComplexifiedManifold, field: HoloField, cap: int):
    """reduce(sum_j a_j d rho_k / d Z_j) for each k; zero iff tangent along M."""
    out = []
    for k in range(C.d):
        total = Poly.zero(C.registry)
        for j, name in enumerate(C.Z_names()):
            if field.coeffs[j].is_zero():
                continue
            total = total + field.coeffs[j].mul_trunc(C.rho[k].diff(name), cap)
        out.append(C.reduce(total, cap))
    return out


def degeneracy_witness(M: GenericManifold, D: int, D_out: int = None):
    """Holomorphic fields of coefficient degree <= D tangent to M through D_out.

    Returns a (possibly empty) list of HoloField kernel generators, each
    re-verified against the defining functions.  A nonempty answer proves
    holomorphic degeneracy up to the tested order.
    """
    mc = M.recentered if isinstance(M, MarkedPoint) else M
    C = mc if isinstance(mc, ComplexifiedManifold) else None
    if C is None:
        probe = complexify(mc, D=2)
        rho_deg = probe.rho_max_degree()
        if D_out is None:
            D_out = D + rho_deg
        C = complexify(mc, D=D_out)
    else:
        if D_out is None:
            D_out = D + C.rho_max_degree()
        if C.D < D_out:
            C = complexify(C.manifold, D=D_out)

    Z = C.Z_names()
    monos = []
    for deg in range(D + 1):
        for alpha in _multi_indices(len(Z), deg):
            monos.append(alpha)
    unknowns = [(j, alpha) for j in range(len(Z)) for alpha in monos]
    col_of = {u: i for i, u in enumerate(unknowns)}

    grads = [[C.reduce(C.rho[k].diff(name), D_out) for name in Z] for k in range(C.d)]
    # rows indexed by (k, residual monomial); complex entries
    rows = {}
    for (j, alpha), col in col_of.items():
        mono = Poly(C.registry, {tuple(_embed(C, alpha)): ONE})
        for k in range(C.d):
            prod = mono.mul_trunc(grads[k][j], D_out)
            for e, c in prod.terms.items():
                rows.setdefault((k, e), {})[col] = c
    ech = SparseEchelon(len(unknowns))
    for key in sorted(rows):
        ech.add_row(rows[key])
    basis = []
    for vec in ech.kernel():
        coeffs = [Poly.zero(C.registry) for _ in Z]
        for (j, alpha), col in col_of.items():
            c = vec[col]
            if c:
                coeffs[j] = coeffs[j] + Poly(C.registry, {tuple(_embed(C, alpha)): c})
        field = HoloField(C, coeffs)
        residuals = holomorphic_tangency_residuals(C, field, D_out)
        if any(not r.is_zero() for r in residuals):
            raise ManifoldError("witness field failed independent re-verification")
        basis.append(field)
    return basis


def _embed(C: ComplexifiedManifold, alpha):
    """Exponent tuple over C.registry for a monomial in the Z block."""
    e = [0] * len(C.registry)
    for name, k in zip(C.Z_names(), alpha):
        e[C.registry.index[name]] = k
    return e


# -- Levi number ------------------------------------------------------------------


class LeviNumberReport:
    def __init__(self, manifold, levi, verdict, samples, witnesses, kmax, seed):
        self.manifold = manifold
        self.levi = levi  # int, or None
        self.verdict = verdict  # "finite" | "degenerate" | "inconclusive"
        self.samples = samples  # list of (z0, s0, k or None)
        self.witnesses = witnesses
        self.kmax = kmax
        self.seed = seed

    def __repr__(self):
        return f"LeviNumberReport({self.manifold.label}, {self.verdict}, l={self.levi})"


def levi_number(
    M: GenericManifold,
    kmax: int = 12,
    seed: int = 0,
    npoints: int = 5,
    witness_degree: int = 2,
    height: int = 8,
) -> LeviNumberReport:
    """Minimum finite nondegeneracy order over seeded rational sample points.

    A holomorphic degeneracy witness of coefficient degree <= witness_degree
    settles the degenerate case outright.  Otherwise the Levi number is the
    minimum of the finite orders found at the sample points; if every sample
    stalls below N through kmax the result is inconclusive.
    """
    witnesses = degeneracy_witness(M, witness_degree)
    if witnesses:
        return LeviNumberReport(M, None, "degenerate", [], witnesses, kmax, seed)

    sampler = PointSampler(seed, height=height)
    samples = []
    best = None
    for t in range(npoints):
        sub = sampler.spawn(t + 1)
        z0 = [sub.gaussian() for _ in range(M.n)]
        s0 = [sub.rational() for _ in range(M.d)]
        p = mark_point(M, z0, s0, D=kmax + 2)
        rep = k_nondegeneracy_at(p, kmax=kmax)
        samples.append((z0, s0, rep.k))
        if rep.k is not None and (best is None or rep.k < best):
            best = rep.k
            if best == 1:
                break
    if best is None:
        return LeviNumberReport(M, None, "inconclusive", samples, [], kmax, seed)
    return LeviNumberReport(M, best, "finite", samples, [], kmax, seed)
