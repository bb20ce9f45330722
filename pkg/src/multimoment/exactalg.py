"""Exact linear algebra over the rationals.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  Every routine
returns fresh objects and never mutates its arguments.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is one."""
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except ValueError:
            pass
    raise ValueError(f"not a rational: {s!r}")


def matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    out = [[to_fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(out[0]) if out else 0
    for row in out:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    return out


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def transpose(m: Matrix, ncols: Optional[int] = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((a * b for a, b in zip(row, v) if a), Fraction(0)) for row in m]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col) if x), Fraction(0)) for col in bt] for row in a]


def rref(m: Matrix, ncols: Optional[int] = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the leftmost column having a nonzero entry in the
    remaining rows, taking the first such row.
    """
    a = [list(map(to_fraction, row)) for row in m]
    nrows = len(a)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix, ncols: Optional[int] = None) -> int:
    return len(rref(m, ncols)[1])


def kernel_basis(m: Matrix, ncols: Optional[int] = None) -> list[Vector]:
    """Basis of the null space, one vector per free column in increasing order.

    The vector attached to free column ``j`` has a one at ``j``, zeros at the
    other free columns, and is determined at the pivot columns.
    """
    if ncols is None:
        ncols = len(m[0]) if m else 0
    r, pivots = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][j]
        basis.append(v)
    return basis


def free_and_pivot_columns(m: Matrix, ncols: Optional[int] = None) -> tuple[list[int], list[int]]:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = rref(m, ncols)[1]
    pivset = set(pivots)
    return [j for j in range(ncols) if j not in pivset], pivots


def solve_linear(a: Matrix, b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """Particular solution of ``a x = b`` with free variables set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    if ncols is None:
        ncols = len(a[0]) if a else 0
    b = [to_fraction(x) for x in b]
    if len(b) != len(a):
        raise ValueError(f"right-hand side has length {len(b)}, expected {len(a)}")
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    r, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = r[i][ncols]
    return x


def span_rank(vectors: Sequence[Sequence[Fraction]], dim: int) -> int:
    return rank([list(v) for v in vectors], dim) if vectors else 0


def in_span(v: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> bool:
    if not any(v):
        return True
    if not vectors:
        return False
    return solve_linear(transpose([list(w) for w in vectors]), list(v), len(vectors)) is not None


def quotient_dim(sub: Sequence[Sequence], ambient_closed: Sequence[Sequence], dim: Optional[int] = None
                 ) -> tuple[int, list[Vector]]:
    """Dimension of span(ambient)/span(sub) and coset representatives.

    The representatives are members of ``ambient_closed`` chosen greedily in
    the given order; together with ``sub`` they span ``ambient_closed``.

    Raises:
        ValueError: if ``sub`` is not contained in the span of ``ambient_closed``.
    """
    sub = [[to_fraction(x) for x in v] for v in sub]
    amb = [[to_fraction(x) for x in v] for v in ambient_closed]
    if dim is None:
        dim = len((sub or amb or [[]])[0])
    r_amb = span_rank(amb, dim)
    if span_rank(amb + sub, dim) != r_amb:
        raise ValueError("subspace is not contained in the ambient space")
    reps: list[Vector] = []
    current = list(sub)
    r = span_rank(current, dim)
    for v in amb:
        if span_rank(current + [v], dim) > r:
            current.append(v)
            reps.append(v)
            r += 1
    return len(reps), reps
