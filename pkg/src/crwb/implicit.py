"""Degreewise solver for implicit polynomial systems.

Solves systems F(x, v) = 0 for the block v as a truncated power series in
the remaining variables, assuming F vanishes at the origin and its linear
part in v is invertible.  After exact normalization by the inverse of
that linear part, every remaining occurrence of a solve variable sits in
a monomial of total degree >= 2, so a Picard pass extends the correct jet
by at least one degree; D passes suffice for a degree-D answer.
"""
from __future__ import annotations

from .linalg import invert_matrix
from .poly import Poly, Series
from .scalars import ZERO


class SingularLinearPart(ValueError):
    """The system cannot be solved for the requested block."""


def implicit_solve(equations, solve_for, D: int):
    """Solve `equations` = 0 for the variables `solve_for` through degree D.

    Returns one Series per solve variable, in order.  The residual of each
    input equation under the solution is identically zero through degree D
    (checked; an assertion failure here indicates a malformed system).
    """
    eqs = list(equations)
    names = list(solve_for)
    if len(eqs) != len(names):
        raise SingularLinearPart("need as many equations as solve variables")
    if not eqs:
        return []
    reg = eqs[0].registry
    for eq in eqs:
        if eq.registry is not reg:
            raise ValueError("equations on mismatched registries")
        if eq.constant_term():
            raise SingularLinearPart("system does not vanish at the origin")

    lin = [[eq.coeff({v: 1}) for v in names] for eq in eqs]
    inv = invert_matrix(lin)
    if inv is None:
        raise SingularLinearPart(f"linear part in {names} is singular")

    # normalized[j] = v_j + r_j with no constant or linear-in-v part in r_j
    normalized = []
    for j in range(len(eqs)):
        combo = Poly.zero(reg)
        for k, eq in enumerate(eqs):
            if inv[j][k]:
                combo = combo + eq * inv[j][k]
        normalized.append(combo)
    residues = []
    for j, v in enumerate(names):
        r = normalized[j] - Poly.variable(reg, v)
        assert not r.coeff({v: 1}), "normalization failed"
        residues.append(r)

    sol = {v: Poly.zero(reg) for v in names}
    for _ in range(D + 1):
        new = {}
        for j, v in enumerate(names):
            new[v] = (-residues[j].substitute(sol, cap=D)).truncate(D)
        if all(new[v] == sol[v] for v in names):
            sol = new
            break
        sol = new

    for eq in eqs:
        res = eq.substitute(sol, cap=D)
        if not res.is_zero():
            raise SingularLinearPart(
                "implicit solve did not converge; residual " + str(res.truncate(3))
            )
    return [Series(sol[v], D) for v in names]
