"""Truncated jets of holomorphic self-maps fixing the origin."""
from __future__ import annotations

from .poly import Poly, PolyError
from .scalars import ONE


class MapJet:
    """Jet of a holomorphic map C^N -> C^N through total degree `cap`.

    Components are polynomials in the holomorphic block Z = (z, w) of a
    complexification registry; everything beyond `cap` is discarded.
    """

    def __init__(self, C, components, cap: int):
        self.C = C
        self.cap = cap
        self.components = [p.truncate(cap) for p in components]
        if len(self.components) != C.N:
            raise PolyError("map jet needs one component per coordinate")
        for p in self.components:
            if p.constant_term():
                raise PolyError("map jets are based at the origin")

    @staticmethod
    def identity(C, cap: int):
        return MapJet(
            C, [Poly.variable(C.registry, name) for name in C.Z_names()], cap
        )

    def compose(self, other: "MapJet") -> "MapJet":
        """self after other, truncated at the coarser of the two caps."""
        cap = min(self.cap, other.cap)
        mapping = dict(zip(self.C.Z_names(), other.components))
        comps = [p.substitute(mapping, cap=cap) for p in self.components]
        return MapJet(self.C, comps, cap)

    def jets_agree_through(self, other: "MapJet", k: int) -> bool:
        return all(
            (a - b).truncate(k).is_zero()
            for a, b in zip(self.components, other.components)
        )

    def first_disagreement(self, other: "MapJet"):
        """Least total degree where components differ, or None."""
        best = None
        for a, b in zip(self.components, other.components):
            diff = a - b
            if not diff.is_zero():
                m = diff.min_degree()
                best = m if best is None else min(best, m)
        return best

    def linear_part(self):
        """Matrix of the degree-1 jet in the Z ordering."""
        names = self.C.Z_names()
        return [[p.coeff({v: 1}) for v in names] for p in self.components]

    def is_identity_linear_part(self) -> bool:
        names = self.C.Z_names()
        for i, p in enumerate(self.components):
            for j, v in enumerate(names):
                want = ONE if i == j else 0
                if p.coeff({v: 1}) != want:
                    return False
        return True

    def __repr__(self):
        body = "; ".join(str(p) for p in self.components)
        return f"MapJet[deg<={self.cap}]({body})"
