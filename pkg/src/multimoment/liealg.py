"""Finite-dimensional Lie algebras given by structure constants.

Basis elements are indexed ``0..dim-1`` internally; files use 1-based indices.
A basis of the k-th exterior power is the list of strictly increasing
k-tuples in lexicographic order (``_indices.subsets``), and the dual basis of
the k-th exterior power of the dual is the evaluation on those tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import exactalg as ea
from ._indices import merge, subset_index, subsets


class LieAlgebra:
    """Lie algebra with ``[e_i, e_j] = sum_k c[i, j][k] e_k``.

    Only pairs ``i < j`` are stored; antisymmetry is structural.
    """

    def __init__(self, dim: int, constants: Mapping[tuple[int, int], Mapping[int, object]] | None = None,
                 name: str = ""):
        self.dim = dim
        self.name = name
        c: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), vec in (constants or {}).items():
            if not (0 <= i < dim and 0 <= j < dim and 0 <= min(vec or {0: 0}) and max(vec or {0: 0}) < dim):
                raise ValueError(f"structure constant index out of range: {(i, j)}")
            if i == j:
                if any(ea.to_fraction(v) for v in vec.values()):
                    raise ValueError(f"[e_{i + 1}, e_{i + 1}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            slot = c.setdefault((i, j), {})
            for k, v in vec.items():
                v = sign * ea.to_fraction(v)
                if v:
                    slot[k] = slot.get(k, Fraction(0)) + v
                    if not slot[k]:
                        del slot[k]
        self._c = {key: val for key, val in c.items() if val}
        self._cache: dict = {}

    @classmethod
    def from_triples(cls, dim: int, triples: Sequence[tuple[int, int, int, object]], name: str = "") -> "LieAlgebra":
        """Build from 1-based ``(i, j, k, c^k_ij)`` entries."""
        consts: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, j, k, v in triples:
            slot = consts.setdefault((i - 1, j - 1), {})
            slot[k - 1] = slot.get(k - 1, Fraction(0)) + ea.to_fraction(v)
        return cls(dim, consts, name)

    def triples(self) -> list[tuple[int, int, int, Fraction]]:
        return [(i + 1, j + 1, k + 1, v) for (i, j), vec in sorted(self._c.items()) for k, v in sorted(vec.items())]

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, name={self.name!r})"

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.dim == other.dim and self._c == other._c

    def __hash__(self):
        return hash((self.dim, tuple(self.triples())))

    # -- brackets -------------------------------------------------------
    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return dict(self._c.get((i, j), {}))
        return {k: -v for k, v in self._c.get((j, i), {}).items()}

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += a * b * c
        return out

    def is_abelian(self) -> bool:
        return not self._c

    def ad_matrix(self, i: int) -> ea.Matrix:
        """Matrix of ad_{e_i} on g; column j holds [e_i, e_j]."""
        m = ea.zeros(self.dim, self.dim)
        for j in range(self.dim):
            for k, v in self.bracket_basis(i, j).items():
                m[k][j] = v
        return m

    def basis(self, k: int) -> tuple[tuple[int, ...], ...]:
        return subsets(self.dim, k)

    def index(self, k: int) -> dict:
        return subset_index(self.dim, k)

    def change_basis(self, t: Sequence[Sequence], name: str = "") -> "LieAlgebra":
        """Algebra in the basis ``f_a = sum_i t[i][a] e_i`` (columns of ``t``)."""
        t = ea.matrix(t)
        tinv_cols = [ea.solve_linear(t, [Fraction(int(r == c)) for r in range(self.dim)]) for c in range(self.dim)]
        if any(col is None for col in tinv_cols):
            raise ValueError("change of basis matrix is singular")
        tinv = ea.transpose(tinv_cols)
        cols = ea.transpose(t)
        consts = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                br = self.bracket(cols[a], cols[b])
                coords = ea.matvec(tinv, br)
                vec = {k: v for k, v in enumerate(coords) if v}
                if vec:
                    consts[(a, b)] = vec
        return LieAlgebra(self.dim, consts, name or self.name)


# -- structural checks --------------------------------------------------------

def jacobi_check(g: LieAlgebra) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check Jacobi on all basis triples; the failing triple is 1-based."""
    n = g.dim
    unit = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                x, y, z = unit[i], unit[j], unit[k]
                t1 = g.bracket(x, g.bracket(y, z))
                t2 = g.bracket(y, g.bracket(z, x))
                t3 = g.bracket(z, g.bracket(x, y))
                if any(a + b + c for a, b, c in zip(t1, t2, t3)):
                    return False, (i + 1, j + 1, k + 1)
    return True, None


# -- multivectors ---------------------------------------------------------

@dataclass(frozen=True)
class Multivector:
    """Element of the k-th exterior power, keyed by increasing index tuples."""
    degree: int
    coeffs: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    @classmethod
    def basis_element(cls, idx: Sequence[int], coeff=1) -> "Multivector":
        sign, key = merge(tuple(idx), ())
        if sign == 0:
            return cls(len(idx), {})
        return cls(len(key), {key: sign * ea.to_fraction(coeff)})

    @classmethod
    def from_vector(cls, g: LieAlgebra, k: int, vec: Sequence) -> "Multivector":
        return cls(k, {b: ea.to_fraction(c) for b, c in zip(g.basis(k), vec) if c})

    def vector(self, g: LieAlgebra) -> list[Fraction]:
        idx = g.index(self.degree)
        out = [Fraction(0)] * len(idx)
        for key, c in self.coeffs.items():
            out[idx[key]] += c
        return out

    def __add__(self, other: "Multivector") -> "Multivector":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            v = out.get(key, Fraction(0)) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Multivector(self.degree, out)

    def __neg__(self):
        return Multivector(self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Multivector":
        s = ea.to_fraction(s)
        if not s:
            return Multivector(self.degree, {})
        return Multivector(self.degree, {k: s * c for k, c in self.coeffs.items()})

    def wedge(self, other: "Multivector") -> "Multivector":
        out: dict[tuple[int, ...], Fraction] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                sign, key = merge(a, b)
                if sign:
                    out[key] = out.get(key, Fraction(0)) + sign * ca * cb
        return Multivector(self.degree + other.degree, {k: v for k, v in out.items() if v})

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero()

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs.items()))))


def _bracket_wedge(g: LieAlgebra, i: int, j: int, rest: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for k, c in g.bracket_basis(i, j).items():
        sign, key = merge((k,), rest)
        if sign:
            out[key] = out.get(key, Fraction(0)) + sign * c
    return out


def homology_differential(g: LieAlgebra, p: Multivector) -> Multivector:
    """Lie algebra homology differential on a degree-k multivector.

    ``x_1^...^x_k -> sum_{i<j} (-1)^(i+j) [x_i, x_j] ^ x_1 ^ ..^x_i^..^x_j^.. ^ x_k``
    with 1-based positions; the degree-1 (and degree-0) case is zero.
    """
    k = p.degree
    out: dict[tuple[int, ...], Fraction] = {}
    if k >= 2:
        for idx, c in p.coeffs.items():
            for a in range(k):
                for b in range(a + 1, k):
                    sign = -1 if (a + b) % 2 else 1
                    rest = idx[:a] + idx[a + 1:b] + idx[b + 1:]
                    for key, v in _bracket_wedge(g, idx[a], idx[b], rest).items():
                        out[key] = out.get(key, Fraction(0)) + sign * c * v
    return Multivector(max(k - 1, 0), {key: v for key, v in out.items() if v})


def delta_matrix(g: LieAlgebra, k: int) -> ea.Matrix:
    """Matrix of the degree-k homology differential (rows: degree k-1 basis)."""
    key = ("delta", k)
    if key not in g._cache:
        rows = g.basis(k - 1) if k >= 1 else ()
        cols = g.basis(k)
        m = ea.zeros(len(rows), len(cols))
        if k >= 2:
            ridx = g.index(k - 1)
            for j, idx in enumerate(cols):
                for r, v in homology_differential(g, Multivector(k, {idx: Fraction(1)})).coeffs.items():
                    m[ridx[r]][j] = v
        g._cache[key] = m
    return [row[:] for row in g._cache[key]]


def ce_matrix(g: LieAlgebra, k: int) -> ea.Matrix:
    """Matrix of the Chevalley-Eilenberg differential from degree k to k+1.

    ``(d xi)(q) = xi(delta q)``, so this is the transpose of ``delta_matrix(k+1)``.
    """
    return ea.transpose(delta_matrix(g, k + 1), len(g.basis(k)))


@dataclass(frozen=True)
class DualCochain:
    """Element of the k-th exterior power of g*: values on the basis tuples."""
    degree: int
    values: tuple[Fraction, ...]

    @classmethod
    def zero(cls, g: LieAlgebra, k: int) -> "DualCochain":
        return cls(k, tuple(Fraction(0) for _ in g.basis(k)))

    @classmethod
    def dual_basis(cls, g: LieAlgebra, idx: Sequence[int]) -> "DualCochain":
        k = len(idx)
        pos = g.index(k)[tuple(idx)]
        return cls(k, tuple(Fraction(int(i == pos)) for i in range(len(g.basis(k)))))

    def evaluate(self, g: LieAlgebra, p: Multivector) -> Fraction:
        return sum((a * b for a, b in zip(self.values, p.vector(g))), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.values)

    def __add__(self, other):
        return DualCochain(self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        return DualCochain(self.degree, tuple(a - b for a, b in zip(self.values, other.values)))


def ce_differential(g: LieAlgebra, xi: DualCochain) -> DualCochain:
    return DualCochain(xi.degree + 1, tuple(ea.matvec(ce_matrix(g, xi.degree), list(xi.values))))


# -- Lie kernels and cohomology -------------------------------------------

@dataclass(frozen=True)
class LieKernelBasis:
    """Basis of ker(delta_k) plus the complement spanned by pivot unit vectors."""
    degree: int
    basis: tuple[tuple[Fraction, ...], ...]
    complement: tuple[tuple[Fraction, ...], ...]
    free_columns: tuple[int, ...]
    pivot_columns: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of a kernel element in ``basis``.

        Raises:
            ValueError: if ``v`` does not lie in the kernel.
        """
        coords = [ea.to_fraction(v[j]) for j in self.free_columns]
        recon = [Fraction(0)] * len(v)
        for c, b in zip(coords, self.basis):
            if c:
                for i, x in enumerate(b):
                    recon[i] += c * x
        if recon != [ea.to_fraction(x) for x in v]:
            raise ValueError("vector is not in the Lie kernel")
        return coords


def lie_kernel(g: LieAlgebra, k: int) -> LieKernelBasis:
    key = ("kernel", k)
    if key not in g._cache:
        n = len(g.basis(k))
        m = delta_matrix(g, k)
        free, piv = ea.free_and_pivot_columns(m, n)
        kb = ea.kernel_basis(m, n)
        comp = [tuple(Fraction(int(i == p)) for i in range(n)) for p in piv]
        g._cache[key] = LieKernelBasis(k, tuple(tuple(v) for v in kb), tuple(comp), tuple(free), tuple(piv))
    return g._cache[key]


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dim: int
    representatives: tuple[tuple[Fraction, ...], ...]
    cocycles_dim: int
    coboundaries_dim: int


def ce_cohomology(g: LieAlgebra, k: int) -> Cohomology:
    """Trivial-coefficient cohomology ker d^k / im d^(k-1) with representatives."""
    if not 0 <= k <= g.dim:
        raise ValueError(f"degree {k} outside 0..{g.dim}")
    n = len(g.basis(k))
    cocycles = ea.kernel_basis(ce_matrix(g, k), n)
    if k >= 1:
        prev = ce_matrix(g, k - 1)
        boundaries = [list(col) for col in ea.transpose(prev, len(g.basis(k - 1)))]
    else:
        boundaries = []
    boundaries = [b for b in boundaries if any(b)]
    dim, reps = ea.quotient_dim(boundaries, cocycles, n)
    return Cohomology(k, dim, tuple(tuple(r) for r in reps), len(cocycles), ea.span_rank(boundaries, n))


def cohomology_restriction_rank(g: LieAlgebra, k: int) -> tuple[int, int]:
    """Rank of H^k(g) -> (P_k)^* (evaluation on the Lie kernel) and dim H^k(g)."""
    h = ce_cohomology(g, k)
    kern = lie_kernel(g, k)
    rows = [[sum((a * b for a, b in zip(rep, p)), Fraction(0)) for p in kern.basis] for rep in h.representatives]
    return (ea.rank(rows, kern.dim) if rows else 0), h.dim


# -- adjoint action, invariants, Killing form --------------------------------

def adjoint_action(g: LieAlgebra, x: int, p: Multivector) -> Multivector:
    """Derivation extension of ad_{e_x} to the exterior power."""
    out: dict[tuple[int, ...], Fraction] = {}
    for idx, c in p.coeffs.items():
        for pos, i in enumerate(idx):
            for k, v in g.bracket_basis(x, i).items():
                sign, key = merge(idx[:pos] + (k,) + idx[pos + 1:], ())
                if sign:
                    out[key] = out.get(key, Fraction(0)) + sign * c * v
    return Multivector(p.degree, {key: v for key, v in out.items() if v})


def adjoint_matrix(g: LieAlgebra, x: int, k: int) -> ea.Matrix:
    basis = g.basis(k)
    cols = [adjoint_action(g, x, Multivector(k, {b: Fraction(1)})).vector(g) for b in basis]
    return ea.transpose(cols, len(basis))


def kernel_module_matrices(g: LieAlgebra, k: int, dual: bool = False) -> list[ea.Matrix]:
    """Adjoint action on P_k (or its dual) in Lie-kernel coordinates."""
    kern = lie_kernel(g, k)
    mats = []
    for x in range(g.dim):
        cols = []
        for b in kern.basis:
            image = adjoint_action(g, x, Multivector.from_vector(g, k, b)).vector(g)
            cols.append(kern.coordinates(image))
        m = ea.transpose(cols, kern.dim) if cols else []
        if dual:
            m = [[-v for v in row] for row in ea.transpose(m, kern.dim)] if m else []
        mats.append(m)
    return mats


def invariants(g: LieAlgebra, module_matrices: Sequence[ea.Matrix], dim: Optional[int] = None) -> list[list[Fraction]]:
    """Joint kernel of the action matrices of the basis elements.

    Raises:
        ValueError: if the matrices do not define a representation of g.
    """
    if len(module_matrices) != g.dim:
        raise ValueError(f"expected {g.dim} action matrices, got {len(module_matrices)}")
    mats = [ea.matrix(m) if m else [] for m in module_matrices]
    if dim is None:
        dim = next((len(m) for m in mats if m), 0)
    if dim == 0:
        return []
    mats = [m if m else ea.zeros(dim, dim) for m in mats]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            ab = ea.matmul(mats[i], mats[j])
            ba = ea.matmul(mats[j], mats[i])
            rhs = ea.zeros(dim, dim)
            for k, c in g.bracket_basis(i, j).items():
                rhs = [[r + c * v for r, v in zip(rrow, vrow)] for rrow, vrow in zip(rhs, mats[k])]
            lhs = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(ab, ba)]
            if lhs != rhs:
                raise ValueError(f"action matrices fail the homomorphism check on pair ({i + 1}, {j + 1})")
    stacked = [row for m in mats for row in m]
    return ea.kernel_basis(stacked, dim)


def killing_form(g: LieAlgebra) -> ea.Matrix:
    ads = [g.ad_matrix(i) for i in range(g.dim)]
    k = ea.zeros(g.dim, g.dim)
    for i in range(g.dim):
        for j in range(g.dim):
            prod = ea.matmul(ads[i], ads[j])
            k[i][j] = sum((prod[a][a] for a in range(g.dim)), Fraction(0))
    return k


@dataclass(frozen=True)
class CartanResult:
    theta: DualCochain
    closed: bool
    class_zero: bool
    primitive: Optional[DualCochain]
    pairing_invariant: bool


def cartan_cocycle(g: LieAlgebra, pairing: Optional[Sequence[Sequence]] = None) -> CartanResult:
    """The 3-cochain ``theta(x, y, z) = <x, [y, z]>`` and its cohomology class.

    ``pairing`` defaults to the Killing form.

    Raises:
        ValueError: if the pairing is not symmetric or theta is not closed.
    """
    b = killing_form(g) if pairing is None else ea.matrix(pairing)
    n = g.dim
    if any(b[i][j] != b[j][i] for i in range(n) for j in range(n)):
        raise ValueError("pairing is not symmetric")
    unit = [[Fraction(int(a == c)) for c in range(n)] for a in range(n)]

    def form(x, y):
        return sum((x[i] * b[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]), Fraction(0))

    invariant = all(form(g.bracket(unit[i], unit[j]), unit[k]) == form(unit[i], g.bracket(unit[j], unit[k]))
                    for i in range(n) for j in range(n) for k in range(n))
    vals = tuple(form(unit[i], g.bracket(unit[j], unit[k])) for i, j, k in g.basis(3))
    theta = DualCochain(3, vals)
    closed = ce_differential(g, theta).is_zero() if g.dim >= 3 else True
    if not closed:
        raise ValueError("theta is not closed; the pairing is not invariant")
    prim = ea.solve_linear(ce_matrix(g, 2), list(vals), len(g.basis(2))) if vals else []
    primitive = DualCochain(2, tuple(prim)) if prim is not None else None
    return CartanResult(theta, closed, primitive is not None, primitive, invariant)
