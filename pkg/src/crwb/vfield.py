"""Polynomial-coefficient vector fields acting as derivations."""
from __future__ import annotations

from .poly import Poly


class VectorField:
    """Sum of coeff * d/d(var) with Poly coefficients on one registry."""

    __slots__ = ("registry", "coeffs")

    def __init__(self, registry, coeffs: dict):
        self.registry = registry
        self.coeffs = {}
        for name, p in coeffs.items():
            if name not in registry:
                raise ValueError(f"unknown direction {name!r}")
            if isinstance(p, Poly) and p.is_zero():
                continue
            self.coeffs[name] = p

    def apply(self, p: Poly, cap=None) -> Poly:
        out = Poly.zero(self.registry)
        for name, c in self.coeffs.items():
            dp = p.diff(name)
            if dp.is_zero():
                continue
            out = out + c.mul_trunc(dp, cap)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [self, other]."""
        names = set(self.coeffs) | set(other.coeffs)
        out = {}
        for name in names:
            a = other.coeffs.get(name)
            b = self.coeffs.get(name)
            term = Poly.zero(self.registry)
            if a is not None:
                term = term + self.apply(a)
            if b is not None:
                term = term - other.apply(b)
            if not term.is_zero():
                out[name] = term
        return VectorField(self.registry, out)

    def scale(self, factor) -> "VectorField":
        return VectorField(
            self.registry, {name: c * factor for name, c in self.coeffs.items()}
        )

    def __add__(self, other: "VectorField"):
        out = dict(self.coeffs)
        for name, c in other.coeffs.items():
            out[name] = out[name] + c if name in out else c
        return VectorField(self.registry, out)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"({c})*d/d{name}" for name, c in sorted(self.coeffs.items())
        )

    __repr__ = __str__
