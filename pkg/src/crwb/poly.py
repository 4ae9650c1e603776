"""Sparse multivariate polynomials and truncated power series over Q(i).

Monomials are exponent tuples against a VariableRegistry; the monomial
order used for printing and deterministic iteration is graded
lexicographic on the registry order.  No zero coefficients are stored.
"""
from __future__ import annotations

from .registry import RegistryError, VariableRegistry
from .scalars import ONE, ZERO, GaussianRational, _coerce


class PolyError(ValueError):
    pass


class Poly:
    __slots__ = ("registry", "terms")

    def __init__(self, registry: VariableRegistry, terms=None):
        self.registry = registry
        self.terms = {} if terms is None else terms

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(registry):
        return Poly(registry)

    @staticmethod
    def const(registry, c):
        c = _coerce(c)
        if not c:
            return Poly(registry)
        return Poly(registry, {(0,) * len(registry): c})

    @staticmethod
    def variable(registry, name):
        return Poly.monomial(registry, {name: 1})

    @staticmethod
    def monomial(registry, exps: dict, coeff=ONE):
        coeff = _coerce(coeff)
        if not coeff:
            return Poly(registry)
        e = [0] * len(registry)
        for name, k in exps.items():
            if name not in registry:
                raise PolyError(f"unknown variable {name!r}")
            if k < 0:
                raise PolyError("negative exponent")
            e[registry.index[name]] = k
        return Poly(registry, {tuple(e): coeff})

    # -- basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the zero polynomial is -1 by convention here."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.registry), ZERO)

    def coeff(self, exps: dict) -> GaussianRational:
        e = [0] * len(self.registry)
        for name, k in exps.items():
            e[self.registry.index[name]] = k
        return self.terms.get(tuple(e), ZERO)

    def variables(self):
        """Names of variables that actually occur."""
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.registry.names[i])
        return used

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.registry is not other.registry:
            raise PolyError("operands built on different registries")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.registry, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            elif e in out:
                del out[e]
        return Poly(self.registry, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.registry, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.registry, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _coerce(other)
            if c is NotImplemented:
                return NotImplemented
            if not c:
                return Poly(self.registry)
            return Poly(self.registry, {e: v * c for e, v in self.terms.items()})
        return self.mul_trunc(other, None)

    __rmul__ = __mul__

    def mul_trunc(self, other: "Poly", cap) -> "Poly":
        """Product, discarding terms of total degree > cap (cap=None: exact)."""
        self._check(other)
        out = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        if cap is None:
            bterms = list(b.terms.items())
            for ea, ca in a.terms.items():
                for eb, cb in bterms:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    c = ca * cb
                    v = out.get(e)
                    v = c if v is None else v + c
                    if v:
                        out[e] = v
                    elif e in out:
                        del out[e]
            return Poly(self.registry, out)
        # capped: walk the second factor in degree order and break early
        bterms = sorted(((sum(eb), eb, cb) for eb, cb in b.terms.items()))
        for ea, ca in a.terms.items():
            da = sum(ea)
            for db, eb, cb in bterms:
                if da + db > cap:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                v = out.get(e)
                v = c if v is None else v + c
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return Poly(self.registry, out)

    def __pow__(self, k: int):
        return self.pow_trunc(k, None)

    def pow_trunc(self, k: int, cap) -> "Poly":
        if k < 0:
            raise PolyError("negative power")
        out = Poly.const(self.registry, ONE)
        base = self
        while k:
            if k & 1:
                out = out.mul_trunc(base, cap)
            base = base.mul_trunc(base, cap) if k > 1 else base
            k >>= 1
        return out

    def truncate(self, cap: int) -> "Poly":
        return Poly(self.registry, {e: c for e, c in self.terms.items() if sum(e) <= cap})

    def homogeneous_part(self, deg: int) -> "Poly":
        return Poly(self.registry, {e: c for e, c in self.terms.items() if sum(e) == deg})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, int) and other == 0:
                return self.is_zero()
            other = Poly.const(self.registry, other)
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.registry), frozenset(self.terms.items())))

    # -- calculus / substitution ------------------------------------------------

    def diff(self, name: str) -> "Poly":
        i = self.registry.index[name]
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if not k:
                continue
            ne = e[:i] + (k - 1,) + e[i + 1 :]
            v = c * k
            prev = out.get(ne)
            v = v if prev is None else prev + v
            if v:
                out[ne] = v
            elif ne in out:
                del out[ne]
        return Poly(self.registry, out)

    def substitute(self, mapping: dict, target: VariableRegistry = None, cap=None) -> "Poly":
        """Simultaneous substitution name -> Poly (or scalar).

        Unmapped variables must exist by name in the target registry.  The
        replacement polynomials must share the target registry.  Terms of
        total degree > cap are discarded as they arise.
        """
        target = target or self.registry
        reps = {}
        for name, val in mapping.items():
            if name not in self.registry:
                raise PolyError(f"substitution target {name!r} not a registry variable")
            if not isinstance(val, Poly):
                val = Poly.const(target, val)
            elif val.registry is not target:
                raise PolyError(f"replacement for {name!r} lives on a different registry")
            reps[self.registry.index[name]] = val
        # positions kept as plain variables
        keep = {}
        for i, name in enumerate(self.registry.names):
            if i not in reps:
                if name not in target:
                    # only an error if the variable actually occurs
                    keep[i] = None
                else:
                    keep[i] = target.index[name]
        pow_cache = {i: {0: Poly.const(target, ONE)} for i in reps}

        def rep_power(i, k):
            cache = pow_cache[i]
            if k not in cache:
                kk = max(j for j in cache if j <= k)
                p = cache[kk]
                while kk < k:
                    p = p.mul_trunc(reps[i], cap)
                    kk += 1
                    cache[kk] = p
            return cache[k]

        nt = len(target)
        out = Poly(target)
        for e, c in self.terms.items():
            base = [0] * nt
            deg_keep = 0
            factors = []
            bad = None
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in reps:
                    factors.append((i, k))
                else:
                    j = keep[i]
                    if j is None:
                        bad = self.registry.names[i]
                        break
                    base[j] = k
                    deg_keep += k
            if bad is not None:
                raise PolyError(f"variable {bad!r} not present in target registry")
            if cap is not None and deg_keep > cap:
                continue
            term = Poly(target, {tuple(base): c})
            for i, k in factors:
                term = term.mul_trunc(rep_power(i, k), cap)
                if term.is_zero():
                    break
            out = out + term
        return out

    def eval_at(self, point: dict) -> GaussianRational:
        """Evaluate with every occurring variable given a scalar value."""
        vals = {}
        for name, v in point.items():
            vals[self.registry.index[name]] = _coerce(v)
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if not k:
                    continue
                if i not in vals:
                    raise PolyError(f"no value supplied for {self.registry.names[i]!r}")
                v = v * (vals[i] ** k)
            total = total + v
        return total

    def bar_conjugate(self) -> "Poly":
        """h(Z) -> conj-coefficients with each variable sent to its partner.

        This is the classical bar operation: an involutive ring homomorphism.
        Raises RegistryError if an occurring variable has no partner.
        """
        reg = self.registry
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(e)
            for i, k in enumerate(e):
                if not k:
                    continue
                p = reg.partner_of(reg.names[i])
                ne[reg.index[p]] = k
            key = tuple(ne)
            v = c.conjugate()
            prev = out.get(key)
            v = v if prev is None else prev + v
            if v:
                out[key] = v
            elif key in out:
                del out[key]
        return Poly(reg, out)

    # -- display -----------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            facs = []
            for i, k in enumerate(e):
                if k == 1:
                    facs.append(self.registry.names[i])
                elif k > 1:
                    facs.append(f"{self.registry.names[i]}^{k}")
            ctxt = str(c)
            if facs and ctxt == "1":
                parts.append("*".join(facs))
            elif facs:
                if c.im != 0 and c.re != 0:
                    ctxt = f"({ctxt})"
                parts.append(ctxt + "*" + "*".join(facs))
            else:
                parts.append(ctxt)
        return " + ".join(parts)

    __repr__ = __str__


class Series:
    """A polynomial jet exact through total degree `cap`; arithmetic truncates."""

    __slots__ = ("poly", "cap")

    def __init__(self, poly: Poly, cap: int):
        if cap < 0:
            raise PolyError("truncation degree must be >= 0")
        self.poly = poly.truncate(cap)
        self.cap = cap

    @property
    def registry(self):
        return self.poly.registry

    def _cap_with(self, other):
        return min(self.cap, other.cap) if isinstance(other, Series) else self.cap

    def _poly_of(self, other):
        return other.poly if isinstance(other, Series) else other

    def __add__(self, other):
        return Series(self.poly + self._poly_of(other), self._cap_with(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Series(self.poly - self._poly_of(other), self._cap_with(other))

    def __neg__(self):
        return Series(-self.poly, self.cap)

    def __mul__(self, other):
        cap = self._cap_with(other)
        p = self._poly_of(other)
        if isinstance(p, Poly):
            return Series(self.poly.mul_trunc(p, cap), cap)
        return Series(self.poly * p, cap)

    __rmul__ = __mul__

    def is_zero(self):
        return self.poly.is_zero()

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.cap == other.cap and self.poly == other.poly
        return self.poly == other

    def __hash__(self):
        return hash((self.poly, self.cap))

    def __str__(self):
        return f"{self.poly} + O(deg>{self.cap})"

    __repr__ = __str__
