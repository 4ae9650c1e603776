"""Exact linear algebra: fraction-free elimination, kernels, generic rank."""
from __future__ import annotations

import random

from .poly import Poly
from .scalars import ONE, ZERO, GaussianRational, _coerce


class ExactMatrix:
    """Dense matrix over Q(i) with exact rank and kernel computations."""

    def __init__(self, rows):
        self.rows = [[_coerce(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    def _echelon(self):
        """Bareiss fraction-free elimination; returns (echelon rows, pivot cols)."""
        m = [row[:] for row in self.rows]
        prev = ONE
        pivots = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, self.nrows):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            if pr != r:
                m[r], m[pr] = m[pr], m[r]
            piv = m[r][c]
            for i in range(r + 1, self.nrows):
                mic = m[i][c]
                for j in range(c + 1, self.ncols):
                    m[i][j] = (piv * m[i][j] - mic * m[r][j]) / prev
                m[i][c] = ZERO
            prev = piv
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return m[: len(pivots)], pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel(self):
        """Basis of the right kernel; empty list for injective matrices."""
        rows, pivots = self._echelon()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for r in range(len(pivots) - 1, -1, -1):
                pc = pivots[r]
                s = ZERO
                for j in range(pc + 1, self.ncols):
                    if v[j]:
                        s = s + rows[r][j] * v[j]
                v[pc] = -s / rows[r][pc]
            basis.append(v)
        return basis

    def mul_vec(self, v):
        return [sum((row[j] * v[j] for j in range(self.ncols)), ZERO) for row in self.rows]


class SparseEchelon:
    """Incremental reduced echelon form over Q(i) with sparse dict rows.

    Suited to the tall, sparse coefficient-matching systems produced by the
    tangency solvers: rows are fed one at a time and only the row space is
    kept.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows = {}  # pivot col -> dict col->coeff, pivot coeff == 1

    def add_row(self, row: dict):
        row = {c: v for c, v in row.items() if v}
        for pc in sorted(set(row) & set(self.pivot_rows)):
            f = row.get(pc)
            if not f:
                continue
            prow = self.pivot_rows[pc]
            for c, v in prow.items():
                nv = row.get(c, ZERO) - f * v
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
        if not row:
            return False
        pc = min(row)
        inv = ONE / row[pc]
        row = {c: v * inv for c, v in row.items()}
        # keep reduced form: clear the new pivot column everywhere
        for opc, orow in self.pivot_rows.items():
            f = orow.get(pc)
            if not f:
                continue
            for c, v in row.items():
                nv = orow.get(c, ZERO) - f * v
                if nv:
                    orow[c] = nv
                elif c in orow:
                    del orow[c]
        self.pivot_rows[pc] = row
        return True

    @property
    def rank(self):
        return len(self.pivot_rows)

    def kernel(self):
        pivots = set(self.pivot_rows)
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = {f: ONE}
            for pc, row in self.pivot_rows.items():
                coeff = row.get(f)
                if coeff:
                    v[pc] = -coeff
            basis.append([v.get(c, ZERO) for c in range(self.ncols)])
        return basis


class PointSampler:
    """Deterministic bounded-height rational point source."""

    def __init__(self, seed: int, height: int = 8):
        self.seed = seed
        self.height = height
        self._rng = random.Random(seed)

    def rational(self):
        h = self.height
        num = self._rng.randint(-h, h)
        den = self._rng.randint(1, h)
        from fractions import Fraction

        return Fraction(num, den)

    def gaussian(self) -> GaussianRational:
        re = self.rational()
        im = self.rational()
        return GaussianRational(re, im)

    def point(self, names) -> dict:
        return {name: self.gaussian() for name in names}

    def spawn(self, salt: int) -> "PointSampler":
        return PointSampler(self.seed * 1000003 + salt, self.height)


def matrix_rank_at(mat, point) -> int:
    """Exact rank of a Poly matrix evaluated at a scalar point."""
    rows = [[entry.eval_at(point) for entry in row] for row in mat]
    if not rows:
        return 0
    return ExactMatrix(rows).rank()


def generic_rank(mat, sampler: PointSampler, trials: int = 3) -> int:
    """Probabilistic rank of a Poly matrix over the function field.

    Evaluates at `trials` seeded rational points and takes the maximum of
    the exact numeric ranks; monotone nondecreasing in trials and
    deterministic given the sampler seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = set()
    for row in mat:
        for entry in row:
            names |= entry.variables()
    names = sorted(names)
    best = 0
    for _ in range(trials):
        point = sampler.point(names)
        best = max(best, matrix_rank_at(mat, point))
    return best


def invert_matrix(rows):
    """Exact inverse of a square Q(i) matrix; None if singular."""
    n = len(rows)
    aug = [[_coerce(v) for v in row] + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        pr = None
        for i in range(c, n):
            if aug[i][c]:
                pr = i
                break
        if pr is None:
            return None
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = ONE / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i == c:
                continue
            f = aug[i][c]
            if not f:
                continue
            aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]
