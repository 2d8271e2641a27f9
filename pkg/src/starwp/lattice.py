"""Integer row lattices: Hermite normal form with transform, kernels, membership."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def _row_sub(a, b, q):
    return [x - q * y for x, y in zip(a, b)]


def hnf(rows, ncols=None):
    """Row-style Hermite normal form.

    Returns ``(H, U, rank)`` with ``U`` unimodular and ``U * rows = H``.  The first
    ``rank`` rows of ``H`` are the echelon basis (positive pivots, entries above a
    pivot reduced into ``[0, pivot)``); the remaining rows are zero, so the
    matching rows of ``U`` span the left kernel.
    """
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    m = ncols if ncols is not None else (len(M[0]) if M else 0)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    pr = 0
    for col in range(m):
        if pr >= n:
            break
        while True:
            nz = [i for i in range(pr, n) if M[i][col] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(M[i][col]))
            M[pr], M[i_min] = M[i_min], M[pr]
            U[pr], U[i_min] = U[i_min], U[pr]
            done = True
            for i in range(pr + 1, n):
                if M[i][col]:
                    q = M[i][col] // M[pr][col]
                    M[i] = _row_sub(M[i], M[pr], q)
                    U[i] = _row_sub(U[i], U[pr], q)
                    if M[i][col]:
                        done = False
            if done:
                break
        if M[pr][col] == 0:
            continue
        if M[pr][col] < 0:
            M[pr] = [-x for x in M[pr]]
            U[pr] = [-x for x in U[pr]]
        p = M[pr][col]
        for i in range(pr):
            q = M[i][col] // p
            if q:
                M[i] = _row_sub(M[i], M[pr], q)
                U[i] = _row_sub(U[i], U[pr], q)
        pivots.append(col)
        pr += 1
    return M, U, pr


@dataclass(frozen=True)
class LatticeBasis:
    """Echelon basis of the lattice spanned by ``gens``; ``transform`` maps gens to rows."""

    rows: tuple
    pivots: tuple
    dim: int
    transform: tuple = ()
    kernel: tuple = ()
    is_hnf: bool = True

    @classmethod
    def from_generators(cls, gens, dim=None):
        gens = [list(g) for g in gens]
        if dim is None:
            dim = len(gens[0]) if gens else 0
        for g in gens:
            if len(g) != dim:
                raise ValueError("dimension mismatch among lattice generators")
        if not gens:
            return cls((), (), dim)
        H, U, r = hnf(gens, dim)
        pivots = []
        for row in H[:r]:
            pivots.append(next(j for j, x in enumerate(row) if x))
        return cls(tuple(map(tuple, H[:r])), tuple(pivots), dim,
                   tuple(map(tuple, U[:r])), tuple(map(tuple, U[r:])))

    @property
    def rank(self):
        return len(self.rows)

    def coordinates(self, v):
        """Coefficients of ``v`` over ``rows``, or ``None`` if ``v`` is not in the lattice."""
        if len(v) != self.dim:
            raise ValueError(f"dimension mismatch: {len(v)} != {self.dim}")
        v = list(v)
        coeffs = []
        for row, p in zip(self.rows, self.pivots):
            if v[p] % row[p]:
                return None
            c = v[p] // row[p]
            coeffs.append(c)
            if c:
                v = _row_sub(v, row, c)
        if any(v):
            return None
        return coeffs

    def generator_coefficients(self, v):
        """Coefficients over the original generators (via the HNF transform)."""
        c = self.coordinates(v)
        if c is None:
            return None
        n = len(self.transform[0]) if self.transform else 0
        out = [0] * n
        for ci, urow in zip(c, self.transform):
            if ci:
                out = [o + ci * u for o, u in zip(out, urow)]
        return out

    def __contains__(self, v):
        return self.coordinates(v) is not None


def left_kernel(rows, ncols=None):
    """Basis of integer vectors ``e`` with ``e * rows = 0``."""
    if not rows:
        return []
    H, U, r = hnf(rows, ncols)
    return [tuple(u) for u in U[r:]]


def vector_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def bezout(values):
    """Coefficients ``c`` with ``sum(c_i * v_i) = gcd(values)``."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs[i] = 1 if v > 0 else -1
            continue
        g2, x, y = xgcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
        g = g2
    return g, coeffs
