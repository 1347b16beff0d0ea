"""Linear algebra over the fraction field of a polynomial ring.

Generic rank uses fraction-free (Bareiss) elimination with exact polynomial
division; kernels come from Cramer's rule on a maximal non-singular minor,
so every kernel vector has polynomial entries.  Pointwise ranks at rational
sample points are computed over Fraction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactpoly import Polynomial

DEFAULT_SAMPLES = 32


def _bareiss(rows: list, ctx) -> tuple:
    """Return (rank, pivot_rows, pivot_cols) of a polynomial matrix."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    row_ids = list(range(nr))
    col_ids = list(range(nc))
    prev = Polynomial.constant(ctx, 1)
    rank = 0
    for k in range(min(nr, nc)):
        pivot = None
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if m[i][j]:
                    size = len(m[i][j].terms)
                    if best is None or size < best:
                        pivot, best = (i, j), size
                        if size == 1 and m[i][j].is_constant():
                            break
            if pivot is not None and best == 1 and m[pivot[0]][pivot[1]].is_constant():
                break
        if pivot is None:
            break
        pi, pj = pivot
        m[k], m[pi] = m[pi], m[k]
        row_ids[k], row_ids[pi] = row_ids[pi], row_ids[k]
        for r in m:
            r[k], r[pj] = r[pj], r[k]
        col_ids[k], col_ids[pj] = col_ids[pj], col_ids[k]
        piv = m[k][k]
        for i in range(k + 1, nr):
            for j in range(k + 1, nc):
                num = piv * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev) if not prev.is_constant() else num * (1 / prev.constant_value())
            m[i][k] = Polynomial.zero(ctx)
        prev = piv
        rank += 1
    return rank, sorted(row_ids[:rank]), sorted(col_ids[:rank])


def _context(matrix) -> tuple:
    for row in matrix:
        for p in row:
            return p.vars
    return ()


def generic_rank(matrix: Sequence[Sequence[Polynomial]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return _bareiss(matrix, _context(matrix))[0]


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant via Bareiss (square input)."""
    n = len(matrix)
    ctx = _context(matrix)
    if n == 0:
        return Polynomial.constant(ctx, 1)
    m = [list(r) for r in matrix]
    sign = 1
    prev = Polynomial.constant(ctx, 1)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Polynomial.zero(ctx)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def nullspace(matrix: Sequence[Sequence[Polynomial]], ncols: int | None = None, ctx=None) -> list:
    """Polynomial vectors spanning the kernel over the fraction field."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if ctx is None:
        ctx = _context(matrix)
    rows = [list(r) for r in matrix if any(r)]
    if not rows:
        return [[Polynomial.constant(ctx, 1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    rank, prow, pcol = _bareiss(rows, ctx)
    sub = [rows[i] for i in prow]
    free = [j for j in range(ncols) if j not in pcol]
    basis = []
    square = [[r[j] for j in pcol] for r in sub]
    det = determinant(square)
    for f in free:
        vec = [Polynomial.zero(ctx) for _ in range(ncols)]
        vec[f] = det
        for k, pc in enumerate(pcol):
            replaced = [[(r[f] if jj == k else r[pcol[jj]]) for jj in range(rank)] for r in sub]
            vec[pc] = -determinant(replaced)
        basis.append(_primitive(vec))
    return basis


def _primitive(vec: list) -> list:
    """Scale so the first nonzero leading coefficient is 1 (cosmetic only)."""
    for p in vec:
        if p:
            c = p.leading()[1]
            return [q * (1 / c) for q in vec]
    return vec


def rational_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    m = [list(r) for r in matrix]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def solve_rational(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """Particular solution of A x = b (free variables set to 0) or None."""
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    m = [list(A[i]) + [b[i]] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [a / pv for a in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * bb for a, bb in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def sample_points(variables: Sequence[str], count: int = DEFAULT_SAMPLES, seed: int = 0) -> list:
    """Deterministic small-height rational points."""
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append({v: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for v in variables})
    return pts


def evaluate_matrix(matrix, point) -> list:
    return [[Fraction(p.evaluate(point)) for p in row] for row in matrix]


@dataclass
class RankInfo:
    generic: int
    sampled: list = field(default_factory=list)

    @property
    def sampled_min(self):
        return min(self.sampled) if self.sampled else self.generic

    @property
    def constant(self) -> bool:
        return all(r == self.generic for r in self.sampled)

    @property
    def verdict(self) -> str:
        return "CONSTANT" if self.constant else "UNKNOWN"


def rank_info(matrix, points) -> RankInfo:
    if not matrix or not matrix[0]:
        return RankInfo(0, [0 for _ in points])
    g = generic_rank(matrix)
    return RankInfo(g, [rational_rank(evaluate_matrix(matrix, p)) for p in points])


def span_contains(W: list, V: list, points) -> tuple:
    """Decide span(V) inside span(W) for vectors along a submanifold.

    Returns (status, detail) with status PASS / FAIL / UNKNOWN.  The generic
    test runs over the fraction field; sampled points catch pointwise drops.
    """
    if not V:
        return "PASS", ""
    if not W:
        ctx = V[0][0].vars if V[0] else ()
        nz = [v for v in V if any(v)]
        return ("FAIL", "target span is zero") if nz else ("PASS", "")
    rw = generic_rank(W)
    rwv = generic_rank(W + V)
    if rwv > rw:
        return "FAIL", f"generic rank {rwv} > {rw}"
    for p in points:
        wp = evaluate_matrix(W, p)
        r1 = rational_rank(wp)
        if r1 < rw:
            return "UNKNOWN", f"rank drop of spanning family at {_fmt_point(p)}"
        r2 = rational_rank(wp + evaluate_matrix(V, p))
        if r2 > r1:
            return "FAIL", f"containment fails at {_fmt_point(p)}"
    return "PASS", ""


def _fmt_point(p) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in sorted(p.items())) + "}"
