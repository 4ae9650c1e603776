"""Variable registries with a fixed conjugation pairing.

A registry fixes a total, stable ordering of variable names and, for each
variable, an optional conjugation partner.  Holomorphic/antiholomorphic
pairs are z_i <-> chi_i and w_j <-> tau_j on the complexification, and
z_i <-> zb_i in graph-form input coordinates.  Parameter variables are
self-partnered: conjugating a parametrized family conjugates coefficients
only.  A variable may also carry no partner at all, in which case
bar-conjugation of a polynomial containing it is an error.
"""
from __future__ import annotations

from functools import lru_cache


class RegistryError(ValueError):
    pass


class VariableRegistry:
    __slots__ = ("names", "index", "partner")

    def __init__(self, names, partner=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise RegistryError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {v: k for k, v in enumerate(names)}
        partner = dict(partner or {})
        for a, b in list(partner.items()):
            if a not in self.index or b not in self.index:
                raise RegistryError(f"partner pair ({a},{b}) not in registry")
            if partner.get(b, a) != a:
                raise RegistryError(f"inconsistent pairing at {a}<->{b}")
            partner[b] = a
        self.partner = partner

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.index

    def partner_of(self, name: str) -> str:
        try:
            return self.partner[name]
        except KeyError:
            raise RegistryError(f"variable {name!r} has no conjugation partner")

    def __repr__(self):
        return f"VariableRegistry({self.names})"


@lru_cache(maxsize=None)
def graph_registry(n: int, d: int) -> VariableRegistry:
    """Input coordinates for graph-form data: z, zb (conjugates), s = Re w.

    Memoized: polynomials built through this constructor share one registry
    object per (n, d), so they compare and combine directly.
    """
    z = [f"z{i}" for i in range(1, n + 1)]
    zb = [f"zb{i}" for i in range(1, n + 1)]
    s = [f"s{j}" for j in range(1, d + 1)]
    partner = {a: b for a, b in zip(z, zb)}
    partner.update({v: v for v in s})
    return VariableRegistry(z + zb + s, partner)


def cr_registry(n: int, d: int, params=()) -> VariableRegistry:
    """Complexification coordinates (z, w, chi, tau) plus self-paired parameters."""
    return _cr_registry(n, d, tuple(params))


@lru_cache(maxsize=None)
def _cr_registry(n: int, d: int, params) -> VariableRegistry:
    z = [f"z{i}" for i in range(1, n + 1)]
    w = [f"w{j}" for j in range(1, d + 1)]
    chi = [f"chi{i}" for i in range(1, n + 1)]
    tau = [f"tau{j}" for j in range(1, d + 1)]
    partner = {a: b for a, b in zip(z, chi)}
    partner.update({a: b for a, b in zip(w, tau)})
    partner.update({p: p for p in params})
    return VariableRegistry(z + w + chi + tau + list(params), partner)


def param_registry(names) -> VariableRegistry:
    """Registry of self-paired holomorphic parameters (t, u, ...)."""
    names = list(names)
    return VariableRegistry(names, {v: v for v in names})
