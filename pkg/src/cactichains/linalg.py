"""Dense exact linear algebra over the rationals.

Matrices are lists of lists of :class:`fractions.Fraction`, rows first.
This is desk-scale code: the largest systems in this package are a few
hundred rows, so plain Gaussian elimination is all we need.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]
Vector = list[Fraction]

F0 = Fraction(0)
F1 = Fraction(1)


def parse_fraction(s: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    return Fraction(s.strip())


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def zeros(rows: int, cols: int) -> Matrix:
    return [[F0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = F1
    return m


def mat_copy(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), start=F0) for row in a]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (rref matrix, pivot columns)."""
    m = mat_copy(m)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = F1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of {x : m @ x = 0}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [e for e in identity(cols)]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [F0] * cols
        v[fc] = F1
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Vector) -> Vector | None:
    """One solution of m @ x = b, or None if inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    aug = [m[i][:] + [b[i]] for i in range(rows)]
    red, pivots = rref(aug)
    for r in range(len(pivots)):
        if pivots[r] == cols:
            return None
    # rows below the pivot rows are zero rows in `red`; any nonzero tail
    # would have produced a pivot in the augmented column
    x = [F0] * cols
    for r, pc in enumerate(pivots):
        if pc < cols:
            x[pc] = red[r][cols]
    return x


def row_space_contains(basis: Matrix, v: Vector) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    red, pivots = rref(basis)
    w = v[:]
    for r, pc in enumerate(pivots):
        if w[pc]:
            f = w[pc]
            w = [a - f * b for a, b in zip(w, red[r])]
    return all(x == 0 for x in w)


class QuotientSpace:
    """Coordinates on kernel / image, built from spanning sets.

    `kernel_vectors` span a subspace K, `image_vectors` span I <= K.
    Representatives are kernel vectors projecting to a basis of K/I, and
    `reduce` maps any vector of K to its canonical K/I coordinates.
    """

    def __init__(self, kernel_vectors: list[Vector], image_vectors: list[Vector], dim_ambient: int):
        self.dim_ambient = dim_ambient
        img = [v[:] for v in image_vectors if any(v)]
        self._img_rref, self._img_pivots = rref(img) if img else ([], [])
        self.representatives: list[Vector] = []
        # greedily extend the image to a basis of the kernel
        span = [self._img_rref[r][:] for r in range(len(self._img_pivots))]
        span_pivots = list(self._img_pivots)
        for v in kernel_vectors:
            w = self._reduce_against(span, span_pivots, v)
            p = next((i for i, x in enumerate(w) if x), None)
            if p is None:
                continue
            w = [x / w[p] for x in w]
            # keep span in echelon order by pivot column
            pos = next((k for k, q in enumerate(span_pivots) if q > p), len(span_pivots))
            span.insert(pos, w)
            span_pivots.insert(pos, p)
            self.representatives.append(v[:])
        self.dimension = len(self.representatives)
        # matrix whose columns are image basis + representatives, for reduce()
        self._solve_cols = [self._img_rref[r][:] for r in range(len(self._img_pivots))] + self.representatives

    @staticmethod
    def _reduce_against(span: list[Vector], pivots: list[int], v: Vector) -> Vector:
        w = v[:]
        for row, p in zip(span, pivots):
            if w[p]:
                f = w[p] / row[p]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def reduce(self, v: Vector) -> Vector:
        """Coordinates of [v] in the chosen basis of K/I.

        Raises ValueError when v is not in image + span(representatives).
        """
        if not self._solve_cols:
            if any(v):
                raise ValueError("vector not in the quotient's ambient span")
            return []
        cols = len(self._solve_cols)
        m = [[self._solve_cols[c][r] for c in range(cols)] for r in range(self.dim_ambient)]
        x = solve(m, v)
        if x is None:
            raise ValueError("vector not in the quotient's ambient span")
        n_img = len(self._img_pivots)
        return x[n_img:]

    def is_coboundary(self, v: Vector) -> bool:
        return all(x == 0 for x in self.reduce(v))
