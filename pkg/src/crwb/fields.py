"""Infinitesimal CR automorphisms from truncated-jet tangency systems.

A holomorphic polynomial field X_hol = sum a_j(Z) d/dZ_j determines the
real field X = 2 Re X_hol; X is an infinitesimal CR automorphism when it
is tangent to the manifold, i.e. when for every defining function

    sum_j a_j drho_k/dZ_j + bar(a_j) drho_k/dzeta_j  == 0  mod (tau = Qbar).

Matching coefficients of the reduced residual gives a real-linear system
in the real and imaginary parts of the unknown coefficients of the a_j;
its kernel is the truncated automorphism space.
"""
from __future__ import annotations

from fractions import Fraction

from .linalg import SparseEchelon
from .manifold import ComplexifiedManifold, ManifoldError, complexify, cr_basis
from .mapjet import MapJet
from .nondeg import HoloField, _embed, _multi_indices
from .poly import Poly, PolyError
from .scalars import GaussianRational, I, ONE, ZERO

HALF = GaussianRational(Fraction(1, 2), 0)


class InvariantError(ValueError):
    pass


def tangency_residuals(C: ComplexifiedManifold, field: HoloField, cap: int = None):
    """Residuals of the real part of `field` against each defining function."""
    cap = C.D if cap is None else cap
    out = []
    zeta = C.zeta_names()
    bars = [a.bar_conjugate() for a in field.coeffs]
    for k in range(C.d):
        total = Poly.zero(C.registry)
        for j, name in enumerate(C.Z_names()):
            if not field.coeffs[j].is_zero():
                total = total + field.coeffs[j].mul_trunc(C.rho[k].diff(name), cap)
            if not bars[j].is_zero():
                total = total + bars[j].mul_trunc(C.rho[k].diff(zeta[j]), cap)
        out.append(C.reduce(total, cap))
    return out


def _reduced_gradients(C: ComplexifiedManifold, D_out: int):
    """Reduced gradients of rho along Z and zeta, memoized per (C, D_out)."""
    cache = getattr(C, "_grad_cache", None)
    if cache is None:
        cache = {}
        C._grad_cache = cache
    if D_out not in cache:
        gZ = [[C.reduce(C.rho[k].diff(name), D_out) for name in C.Z_names()]
              for k in range(C.d)]
        gZeta = [[C.reduce(C.rho[k].diff(name), D_out) for name in C.zeta_names()]
                 for k in range(C.d)]
        cache[D_out] = (gZ, gZeta)
    return cache[D_out]


def _real_tangency_system(C: ComplexifiedManifold, monomials, D_out: int):
    """Coefficient-matching system for tangent fields built from `monomials`.

    monomials: exponent tuples over the Z block.  Unknown field coefficients
    are complex; each contributes a real and an imaginary real unknown, so
    the system has 2 * N * len(monomials) columns.  Returns (echelon,
    unknowns) where unknowns[i] = (component j, exponent alpha) owns
    columns 2i (real part) and 2i+1 (imaginary part).
    """
    Z = C.Z_names()
    zeta = C.zeta_names()
    unknowns = [(j, alpha) for j in range(len(Z)) for alpha in monomials]
    gZ, gZeta = _reduced_gradients(C, D_out)

    rows = {}
    for col, (j, alpha) in enumerate(unknowns):
        mono = Poly(C.registry, {tuple(_embed(C, alpha)): ONE})
        mono_bar = C.reduce(mono.bar_conjugate(), D_out)
        for k in range(C.d):
            r1 = mono.mul_trunc(gZ[k][j], D_out)
            r2 = mono_bar.mul_trunc(gZeta[k][j], D_out)
            # unknown c = x + i y: contribution c*r1 + conj(c)*r2
            for part, poly in ((0, r1 + r2), (1, (r1 - r2) * I)):
                for e, c in poly.terms.items():
                    key = (k, e)
                    if c.re:
                        rows.setdefault((key, 0), {})[2 * col + part] = (
                            GaussianRational(c.re, 0)
                        )
                    if c.im:
                        rows.setdefault((key, 1), {})[2 * col + part] = (
                            GaussianRational(c.im, 0)
                        )
    ech = SparseEchelon(2 * len(unknowns))
    full = 2 * len(unknowns)
    for key in sorted(rows, key=lambda kv: (sum(kv[0][1]), kv[0][1], kv[0][0], kv[1])):
        ech.add_row(rows[key])
        if ech.rank == full:
            break
    return ech, unknowns


def _kernel_fields(C, ech, unknowns, D_out, verify=True):
    basis = []
    for vec in ech.kernel():
        coeffs = [Poly.zero(C.registry) for _ in range(C.N)]
        for i, (j, alpha) in enumerate(unknowns):
            c = GaussianRational(vec[2 * i].re, vec[2 * i + 1].re)
            if c:
                coeffs[j] = coeffs[j] + Poly(C.registry, {tuple(_embed(C, alpha)): c})
        field = HoloField(C, coeffs)
        if verify and any(
            not r.is_zero() for r in tangency_residuals(C, field, D_out)
        ):
            raise ManifoldError("automorphism field failed independent re-verification")
        basis.append(field)
    return basis


def hol_jet_basis(M, D_coef: int, D_out: int = None):
    """Basis of tangent holomorphic fields with coefficient degree <= D_coef.

    Accepts a GenericManifold or an already-built ComplexifiedManifold.
    The tangency equations are matched through degree D_out (default:
    D_coef + max degree of rho + 2); the reported dimension is the kernel
    dimension, nonincreasing in D_out.
    """
    if isinstance(M, ComplexifiedManifold):
        C = M
        if D_out is None:
            D_out = D_coef + C.rho_max_degree() + 2
        if C.D < D_out:
            C = complexify(C.manifold, D=D_out)
    else:
        probe = complexify(M, D=2)
        if D_out is None:
            D_out = D_coef + probe.rho_max_degree() + 2
        C = complexify(M, D=D_out)
    monomials = [a for deg in range(D_coef + 1) for a in _multi_indices(C.N, deg)]
    ech, unknowns = _real_tangency_system(C, monomials, D_out)
    basis = _kernel_fields(C, ech, unknowns, D_out)
    return basis, len(basis)


def is_infinitesimal_automorphism(C: ComplexifiedManifold, field: HoloField, cap: int = None) -> bool:
    """Bracket test: [L_i, X] must stay in the span of the CR basis mod the ideal.

    X is the real part of the holomorphic field.  With L_i = scale*d/dchi_i
    + sum_m b_im d/dtau_m, membership in the span is equivalent (scale being
    a unit near 0) to the bracket having no z/w components and satisfying
    scale * B^tau_m == sum_k B^chi_k * b_km, all mod (tau = Qbar).
    """
    cap = C.D if cap is None else cap
    if any(not r.is_zero() for r in tangency_residuals(C, field, cap)):
        return False
    crb = cr_basis(C)
    full = {}
    for name, a in zip(C.Z_names(), field.coeffs):
        if not a.is_zero():
            full[name] = a
    for name, a in zip(C.zeta_names(), field.coeffs):
        ab = a.bar_conjugate()
        if not ab.is_zero():
            full[name] = ab
    from .vfield import VectorField

    X = VectorField(C.registry, full)
    scale = crb.scale
    b = [
        [crb.fields[k].coeffs.get(tm, Poly.zero(C.registry)) for tm in C.tau_names()]
        for k in range(C.n)
    ]
    for k in range(C.n):
        B = crb.fields[k].bracket(X)
        for name in C.Z_names():
            comp = B.coeffs.get(name)
            if comp is not None and not C.reduce(comp, cap).is_zero():
                return False
        for m, tm in enumerate(C.tau_names()):
            lhs = scale.mul_trunc(B.coeffs.get(tm, Poly.zero(C.registry)), cap + scale.total_degree())
            for kk, ck in enumerate(C.chi_names()):
                comp = B.coeffs.get(ck)
                if comp is not None:
                    lhs = lhs - comp.mul_trunc(b[kk][m], cap + scale.total_degree())
            if not C.reduce(lhs, cap).is_zero():
                return False
    return True


def multiply_by_invariant(C: ComplexifiedManifold, h: Poly, k: int, field: HoloField) -> HoloField:
    """h^k * X for a function h holomorphic in Z and real-valued on M.

    Checks that h is real on M (h - bar h reduces to zero) and that both
    the input and the product satisfy the tangency equations through C.D;
    raises InvariantError when any check fails.
    """
    if k < 0:
        raise InvariantError("exponent must be >= 0")
    for name in C.zeta_names():
        if h.diff(name) != 0:
            raise InvariantError("multiplier must be holomorphic in Z")
    if not C.reduce(h - h.bar_conjugate()).is_zero():
        raise InvariantError("multiplier is not real-valued on the manifold")
    if any(not r.is_zero() for r in tangency_residuals(C, field)):
        raise InvariantError("input field is not tangent to the manifold")
    hk = h.pow_trunc(k, None)
    out = HoloField(C, [hk * a for a in field.coeffs])
    if any(not r.is_zero() for r in tangency_residuals(C, out)):
        raise InvariantError("product field lost tangency")
    return out


def truncated_flow(field: HoloField, cap: int) -> MapJet:
    """Time-one flow of the real part of `field` as a holomorphic map jet.

    Requires every coefficient to vanish to second order (a nonzero linear
    part gives a non-polynomial matrix exponential).  Uses the Lie series
    F_j = sum_m X^m(Z_j) / m!, which terminates below the cap because each
    application of the field raises the minimum degree.
    """
    C = field.C
    md = field.min_coeff_degree()
    if md is not None and md < 2:
        raise PolyError(
            "flow is only polynomial for fields vanishing to second order; "
            f"got minimum coefficient degree {md}"
        )
    X = field.as_vector_field()
    comps = []
    for name in C.Z_names():
        term = Poly.variable(C.registry, name)
        total = term
        m = 1
        while True:
            term = X.apply(term, cap=cap)
            if term.is_zero():
                break
            term = term * GaussianRational(Fraction(1, m), 0)
            total = total + term
            m += 1
            if m > cap + 2:
                raise PolyError("flow series failed to terminate")
        comps.append(total)
    return MapJet(C, comps, cap)


def scaled(field: HoloField, t) -> HoloField:
    return HoloField(field.C, [a * t for a in field.coeffs])


def field_sum(a: HoloField, b: HoloField) -> HoloField:
    return HoloField(a.C, [x + y for x, y in zip(a.coeffs, b.coeffs)])


def fields_linearly_independent(fields) -> bool:
    """Real-linear independence of the real parts of holomorphic fields."""
    if not fields:
        return True
    ech = None
    cols = {}
    rows = []
    for f in fields:
        row = {}
        for j, a in enumerate(f.coeffs):
            for e, c in a.terms.items():
                for part, v in ((0, c.re), (1, c.im)):
                    if v:
                        key = (j, e, part)
                        col = cols.setdefault(key, len(cols))
                        row[col] = GaussianRational(v, 0)
        rows.append(row)
    ech = SparseEchelon(len(cols))
    return all(ech.add_row(row) for row in rows)
