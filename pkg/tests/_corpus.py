"""Shared test corpus: Lie algebras and seeded random scenes on R^N."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from multimoment import exactalg as ea
from multimoment.action import GAction, NPlecticStructure, validate_action
from multimoment.liealg import LieAlgebra
from multimoment.polyforms import Poly, PolyForm, PolyVec, lie_derivative, monomials_up_to
from multimoment.scene import fixture_names, load_fixture

# -- algebras ---------------------------------------------------------------

SO3 = LieAlgebra.from_triples(3, [(1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1)], "so3")
SL2 = LieAlgebra.from_triples(3, [(1, 2, 2, -2), (1, 3, 3, 2), (2, 3, 1, -1)], "sl2")
SE2 = LieAlgebra.from_triples(3, [(1, 2, 3, -1), (1, 3, 2, 1)], "se2")
HEIS = LieAlgebra.from_triples(3, [(1, 2, 3, 1)], "heisenberg")
AFF = LieAlgebra.from_triples(2, [(1, 2, 2, 1)], "aff1")
FILIFORM4 = LieAlgebra.from_triples(4, [(1, 2, 3, 1), (1, 3, 4, 1)], "n4")
GL2 = LieAlgebra.from_triples(4, [(1, 2, 2, -2), (1, 3, 3, 2), (2, 3, 1, -1)], "gl2")
SO3_R = LieAlgebra.from_triples(4, [(1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1)], "so3+R")
SO3_CONJ = SO3.change_basis([[1, 1, 0], [0, 2, 1], [1, 0, 1]], "so3'")
ABELIAN = [LieAlgebra(d, {}, f"R^{d}") for d in (1, 2, 3, 4)]

ALGEBRAS = [SO3, SL2, SE2, HEIS, AFF, FILIFORM4, GL2, SO3_R, SO3_CONJ, *ABELIAN]


# -- helpers ----------------------------------------------------------------

def x(N: int, i: int) -> Poly:
    return Poly.var(N, i)


def const(N: int, c) -> Poly:
    return Poly.const(N, c)


def linear_field(A) -> PolyVec:
    """The field ``x -> A x``."""
    N = len(A)
    comps = []
    for i in range(N):
        p = Poly.zero(N)
        for j in range(N):
            if A[i][j]:
                p = p + x(N, j) * Fraction(A[i][j])
        comps.append(p)
    return PolyVec(comps)


def constant_field(b) -> PolyVec:
    N = len(b)
    return PolyVec([const(N, c) for c in b])


def _flatten(v: PolyVec) -> dict:
    return {(i, e): c for i, p in enumerate(v.comps) for e, c in p.terms.items()}


def algebra_from_fields(fields, name: str = "") -> LieAlgebra | None:
    """Structure constants read off from the field brackets; None if the span is not closed."""
    from multimoment.polyforms import vector_bracket

    keys = sorted({k for v in fields for k in _flatten(v)})
    cols = [[_flatten(v).get(k, Fraction(0)) for k in keys] for v in fields]
    m = ea.transpose(cols, len(keys)) if keys else []
    if keys and ea.rank(m, len(fields)) < len(fields):
        return None
    consts = {}
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            br = _flatten(vector_bracket(fields[i], fields[j]))
            if any(k not in keys for k in br):
                return None
            sol = ea.solve_linear(m, [br.get(k, Fraction(0)) for k in keys], len(fields)) if keys else []
            if sol is None:
                return None
            vec = {k: c for k, c in enumerate(sol) if c}
            if vec:
                consts[(i, j)] = vec
    return LieAlgebra(len(fields), consts, name)


def random_constant_omega(rng: random.Random, N: int, n: int) -> PolyForm:
    if n + 1 == N:
        c = 0
        while c == 0:
            c = rng.randint(-3, 3)
        return PolyForm.basic(N, tuple(range(N)), c)
    if (N, n) == (4, 1):
        while True:
            a = {p: rng.randint(-2, 2) for p in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]}
            pf = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)]
            if pf:
                out = PolyForm.zero(4, 2)
                for idx, c in a.items():
                    if c:
                        out = out + PolyForm.basic(4, idx, c)
                return out
    raise ValueError(f"no constant nondegenerate form generator for {(N, n)}")


@lru_cache(maxsize=None)
def _stabilizer_basis_cached(N: int, omega: PolyForm):
    unknowns = [(i, j) for i in range(N) for j in range(N)]
    cols = []
    for i, j in unknowns:
        A = [[int(r == i and c == j) for c in range(N)] for r in range(N)]
        cols.append(lie_derivative(linear_field(A), omega))
    keys = sorted({(idx, e) for f in cols for idx, p in f.comps.items() for e in p.terms})
    m = [[(cols[c].comps.get(idx).terms.get(e, Fraction(0)) if idx in cols[c].comps else Fraction(0))
          for c in range(len(unknowns))] for idx, e in keys]
    ker = ea.kernel_basis(m, len(unknowns)) if keys else [[Fraction(int(a == b)) for a in range(len(unknowns))]
                                                          for b in range(len(unknowns))]
    return [[[vec[i * N + j] for j in range(N)] for i in range(N)] for vec in ker]


def stabilizer_basis(N: int, omega: PolyForm):
    """Matrices A with ``L_{Ax} omega = 0`` for a constant-coefficient omega."""
    return _stabilizer_basis_cached(N, omega)


def random_stabilizer_element(rng: random.Random, N: int, omega: PolyForm):
    basis = stabilizer_basis(N, omega)
    A = [[Fraction(0)] * N for _ in range(N)]
    for B in basis:
        c = rng.randint(-2, 2)
        if c:
            A = [[A[i][j] + c * B[i][j] for j in range(N)] for i in range(N)]
    return A


# -- scenes -----------------------------------------------------------------

PAIRS = [(2, 1), (3, 2), (4, 1), (4, 3)]


def abelian_scene(rng: random.Random, N: int, n: int):
    omega = random_constant_omega(rng, N, n)
    k = rng.randint(1, min(N, 3))
    fields = [constant_field([rng.randint(-2, 2) for _ in range(N)]) for _ in range(k)]
    g = LieAlgebra(k, {}, f"translations{k}")
    return GAction(g, tuple(fields)), NPlecticStructure(N, n, omega)


def krylov_scene(rng: random.Random, N: int, n: int, max_dim: int = 5):
    """One linear field ``A x`` plus constant fields ``b, A b, A^2 b, ...``."""
    omega = random_constant_omega(rng, N, n)
    for _ in range(20):
        A = random_stabilizer_element(rng, N, omega)
        if not any(any(r) for r in A):
            continue
        b = [Fraction(rng.randint(-2, 2)) for _ in range(N)]
        vecs = []
        cur = b
        while any(cur) and len(vecs) < max_dim - 1:
            if vecs and ea.rank(ea.transpose(vecs + [cur], N), len(vecs) + 1) <= len(vecs):
                break
            vecs.append(cur)
            cur = ea.matvec(A, cur)
        fields = [linear_field(A)] + [constant_field(v) for v in vecs]
        g = algebra_from_fields(fields, f"krylov{len(fields)}")
        if g is not None:
            return GAction(g, tuple(fields)), NPlecticStructure(N, n, omega)
    raise RuntimeError("could not build a Krylov scene")


def so3_r4_scene(with_translation: bool):
    N = 4
    v1 = PolyVec([x(N, 1), -x(N, 0), const(N, 0), const(N, 0)])
    v2 = PolyVec([x(N, 2), const(N, 0), -x(N, 0), const(N, 0)])
    v3 = PolyVec([const(N, 0), x(N, 2), -x(N, 1), const(N, 0)])
    fields = [v1, v2, v3]
    g = SO3
    if with_translation:
        fields.append(PolyVec([const(N, 0)] * 3 + [const(N, 1)]))
        g = SO3_R
    return GAction(g, tuple(fields)), NPlecticStructure(N, 3, PolyForm.basic(N, (0, 1, 2, 3)))


SO3_MATRICES = [[[0, 1, 0], [-1, 0, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [-1, 0, 0]], [[0, 0, 0], [0, 0, 1], [0, -1, 0]]]
SL2_MATRICES = [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]


def _random_invertible(rng: random.Random, N: int):
    while True:
        T = [[Fraction(rng.randint(-2, 2)) for _ in range(N)] for _ in range(N)]
        if ea.rank(T, N) == N:
            return T


def _inverse(T):
    N = len(T)
    cols = [ea.solve_linear(T, [Fraction(int(r == c)) for r in range(N)], N) for c in range(N)]
    return ea.transpose(cols, N)


def conjugated_scene(rng: random.Random, g: LieAlgebra, matrices, N: int, n: int):
    """Linear action ``x -> T M T^-1 x`` of the same algebra; traceless M keep any constant top form."""
    T = _random_invertible(rng, N)
    Ti = _inverse(T)
    fields = []
    for M in matrices:
        M = [[Fraction(v) for v in row] for row in M]
        fields.append(linear_field(ea.matmul(ea.matmul(T, M), Ti)))
    omega = random_constant_omega(rng, N, n)
    return GAction(g, tuple(fields)), NPlecticStructure(N, n, omega)


def translated_scene(rng: random.Random, g: LieAlgebra, matrices, N: int, n: int):
    """Linear action moved off the origin: ``x -> M (x - a)`` for a random point a."""
    a = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(N)]
    fields = []
    for M in matrices:
        lin = linear_field(M)
        shift = ea.matvec([[Fraction(v) for v in row] for row in M], a)
        fields.append(lin - constant_field(shift))
    return GAction(g, tuple(fields)), NPlecticStructure(N, n, random_constant_omega(rng, N, n))


def sl2_diagonal_scene(rng: random.Random):
    """sl(2) acting diagonally on R^2 + R^2 with dx1^dx2 + c dx3^dx4."""
    fields = []
    for M in SL2_MATRICES:
        big = [[0] * 4 for _ in range(4)]
        for i in range(2):
            for j in range(2):
                big[i][j] = big[i + 2][j + 2] = M[i][j]
        fields.append(linear_field(big))
    c = rng.choice([1, 2, -3])
    omega = PolyForm.basic(4, (0, 1)) + PolyForm.basic(4, (2, 3), c)
    return GAction(SL2, tuple(fields)), NPlecticStructure(4, 1, omega)


def random_scenes(count: int = 24, seed: int = 2024):
    rng = random.Random(seed)
    out = []
    for t in range(count):
        N, n = PAIRS[t % len(PAIRS)]
        if t % 3 == 0:
            out.append((f"abelian-{t}", *abelian_scene(rng, N, n)))
        else:
            out.append((f"krylov-{t}", *krylov_scene(rng, N, n)))
    for t in range(3):
        out.append((f"so3-conj-{t}", *conjugated_scene(rng, SO3, SO3_MATRICES, 3, 2)))
        out.append((f"sl2-conj-{t}", *conjugated_scene(rng, SL2, SL2_MATRICES, 2, 1)))
    for t in range(2):
        out.append((f"so3-r4-conj-{t}", *conjugated_scene(
            rng, SO3, [[row + [0] for row in M] + [[0, 0, 0, 0]] for M in SO3_MATRICES], 4, 3)))
        out.append((f"sl2-diag-{t}", *sl2_diagonal_scene(rng)))
        out.append((f"so3-shifted-{t}", *translated_scene(rng, SO3, SO3_MATRICES, 3, 2)))
        out.append((f"sl2-shifted-{t}", *translated_scene(rng, SL2, SL2_MATRICES, 2, 1)))
    return out


def fixture_scenes():
    out = []
    for name in fixture_names():
        sc = load_fixture(name)
        if sc.action is not None:
            out.append((name, sc.action, sc.structure))
    return out


@lru_cache(maxsize=None)
def corpus():
    """Fixtures, hand-built R^4 scenes and seeded random scenes, all validated."""
    scenes = fixture_scenes() + [("so3-r4", *so3_r4_scene(False)), ("so3+R-r4", *so3_r4_scene(True))]
    scenes += random_scenes()
    for name, act, s in scenes:
        assert validate_action(act, s).passed, name
    return tuple(scenes)


def symplectic_corpus():
    return [c for c in corpus() if c[2].n == 1]


def random_poly(rng: random.Random, N: int, max_degree: int = 2, terms: int = 3) -> Poly:
    monos = monomials_up_to(N, max_degree)
    return Poly(N, {rng.choice(monos): Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(terms)})


def random_form(rng: random.Random, N: int, degree: int, max_degree: int = 2) -> PolyForm:
    from multimoment._indices import subsets

    out = PolyForm.zero(N, degree)
    idxs = subsets(N, degree)
    if not idxs:
        return out
    for _ in range(rng.randint(1, 3)):
        out = out + PolyForm.basic(N, rng.choice(idxs), random_poly(rng, N, max_degree))
    return out


def random_field(rng: random.Random, N: int, max_degree: int = 2) -> PolyVec:
    return PolyVec([random_poly(rng, N, max_degree, 2) for _ in range(N)])


def random_cochain(rng: random.Random, flavor: str, g: LieAlgebra, N: int, total: int, max_degree: int = 2):
    """Random cochain with every admissible arity filled with random forms."""
    from multimoment.complexes import GradedCochain
    from multimoment.liealg import lie_kernel

    comps = {}
    for k in range(1, g.dim + 1):
        deg = total - k
        if deg < 0 or deg > N:
            continue
        size = len(g.basis(k)) if flavor == "tilde" else lie_kernel(g, k).dim
        comps[k] = [random_form(rng, N, deg, max_degree) for _ in range(size)]
    return GradedCochain(flavor, g, N, total, comps)


def fixture_map(name: str, scene_name: str):
    """A shipped moment-map file together with its scene's action and structure."""
    from importlib import resources

    from multimoment.scene import load_map

    sc = load_fixture(scene_name)
    path = resources.files("multimoment") / "fixtures" / "maps" / f"{name}.json"
    act, s = sc.require_geometry()
    return load_map(str(path), sc), act, s
