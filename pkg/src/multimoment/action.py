"""Lie algebra actions on (R^N, omega) by polynomial vector fields."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import exactalg as ea
from ._indices import subsets
from .liealg import LieAlgebra, Multivector, jacobi_check
from .polyforms import (Poly, PolyForm, PolyMultiVec, PolyVec, contract, ext_d, interior, lie_derivative,
                        monomials_up_to, vector_bracket)


@dataclass(frozen=True)
class NPlecticStructure:
    """Closed (n+1)-form on R^N together with a basepoint."""
    N: int
    n: int
    omega: PolyForm
    basepoint: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.omega.nvars != self.N or self.omega.degree != self.n + 1:
            raise ValueError(f"omega must be a {self.n + 1}-form on R^{self.N}")
        if not self.basepoint:
            object.__setattr__(self, "basepoint", tuple(Fraction(0) for _ in range(self.N)))
        elif len(self.basepoint) != self.N:
            raise ValueError("basepoint has the wrong length")

    def is_closed(self) -> bool:
        return ext_d(self.omega).is_zero()


@dataclass(frozen=True)
class GAction:
    """One vector field per basis element of the algebra."""
    algebra: LieAlgebra
    generators: tuple[PolyVec, ...]

    def __post_init__(self):
        if len(self.generators) != self.algebra.dim:
            raise ValueError(f"{len(self.generators)} generators for a {self.algebra.dim}-dimensional algebra")

    @property
    def N(self) -> int:
        return self.generators[0].nvars if self.generators else 0

    def field_of(self, x: Sequence) -> PolyVec:
        out = PolyVec.zero(self.N)
        for c, v in zip(x, self.generators):
            if c:
                out = out + v * ea.to_fraction(c)
        return out

    def degree(self) -> int:
        return max((v.degree() for v in self.generators), default=-1)


@dataclass
class ValidationReport:
    jacobi_ok: bool = True
    jacobi_triple: Optional[tuple[int, int, int]] = None
    closed: bool = True
    d_omega: Optional[PolyForm] = None
    homomorphism_failures: list = field(default_factory=list)
    preservation_failures: list = field(default_factory=list)
    nondegeneracy: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.jacobi_ok and self.closed and not self.homomorphism_failures
                and not self.preservation_failures and all(ok for _, ok, _ in self.nondegeneracy))


def generator(act: GAction, p: Multivector) -> PolyMultiVec:
    """Infinitesimal generator of a multivector: ``e_I -> v_{i1} ^ ... ^ v_{ik}``."""
    terms = [(c, [act.generators[i] for i in idx]) for idx, c in sorted(p.coeffs.items())]
    return PolyMultiVec(p.degree, act.N, terms)


def omega_k(act: GAction, s: NPlecticStructure, p: Multivector) -> PolyForm:
    """``i_{v_p} omega``, a form of degree n+1-k."""
    return contract(generator(act, p), s.omega)


def nondegeneracy_check(s: NPlecticStructure, point: Sequence) -> tuple[bool, list[list[Fraction]]]:
    """Kernel of ``v -> i_v omega`` at a point; nondegenerate iff the kernel is trivial."""
    pt = [ea.to_fraction(x) for x in point]
    rows_idx = subsets(s.N, s.n)
    cols = []
    for i in range(s.N):
        val = interior(PolyVec.coordinate(s.N, i), s.omega).evaluate(pt)
        cols.append([val.get(r, Fraction(0)) for r in rows_idx])
    m = ea.transpose(cols, len(rows_idx))
    ker = ea.kernel_basis(m, s.N)
    return not ker, ker


def validate_action(act: GAction, s: NPlecticStructure, points: Sequence[Sequence] = ()) -> ValidationReport:
    """Check Jacobi, closedness, homomorphism, preservation, and pointwise nondegeneracy."""
    rep = ValidationReport()
    if act.N != s.N and act.generators:
        raise ValueError("action and structure live on different spaces")
    rep.jacobi_ok, rep.jacobi_triple = jacobi_check(act.algebra)
    d_om = ext_d(s.omega)
    rep.closed = d_om.is_zero()
    if not rep.closed:
        rep.d_omega = d_om
    g = act.algebra
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = vector_bracket(act.generators[i], act.generators[j])
            rhs = PolyVec.zero(s.N)
            for k, c in g.bracket_basis(i, j).items():
                rhs = rhs + act.generators[k] * c
            if lhs != rhs:
                rep.homomorphism_failures.append(((i + 1, j + 1), lhs - rhs))
    for i, v in enumerate(act.generators):
        lv = lie_derivative(v, s.omega)
        if not lv.is_zero():
            rep.preservation_failures.append((i + 1, lv))
    for pt in [s.basepoint, *points]:
        ok, ker = nondegeneracy_check(s, pt)
        rep.nondegeneracy.append((tuple(pt), ok, ker))
    return rep


class NoHamiltonianField(ValueError):
    """No polynomial Hamiltonian vector field exists up to the degree cap."""


def hamiltonian_vector_field(s: NPlecticStructure, a: PolyForm, degree_cap: Optional[int] = None) -> PolyVec:
    """Polynomial ``v`` with ``d a = -i_v omega`` and coefficient degree at most ``degree_cap``.

    Failure only means nothing was found below the cap.

    Raises:
        NoHamiltonianField: when the capped linear system is inconsistent.
    """
    if a.degree != s.n - 1:
        raise ValueError(f"expected an {s.n - 1}-form")
    if degree_cap is None:
        degree_cap = max(a.coefficient_degree(), 0) + max(s.omega.coefficient_degree(), 0) + 1
    monos = monomials_up_to(s.N, degree_cap)
    unknowns = [(i, e) for i in range(s.N) for e in monos]
    columns = []
    for i, e in unknowns:
        v = PolyVec([Poly.monomial(e) if j == i else Poly.zero(s.N) for j in range(s.N)])
        columns.append(interior(v, s.omega))
    target = -ext_d(a)
    keys = sorted({(idx, mono) for f in columns + [target] for idx, p in f.comps.items() for mono in p.terms})
    row = {k: r for r, k in enumerate(keys)}
    m = ea.zeros(len(keys), len(unknowns))
    for c, f in enumerate(columns):
        for idx, p in f.comps.items():
            for mono, val in p.terms.items():
                m[row[(idx, mono)]][c] = val
    b = [Fraction(0)] * len(keys)
    for idx, p in target.comps.items():
        for mono, val in p.terms.items():
            b[row[(idx, mono)]] = val
    sol = ea.solve_linear(m, b, len(unknowns)) if keys else [Fraction(0)] * len(unknowns)
    if sol is None:
        raise NoHamiltonianField(f"no Hamiltonian vector field of degree <= {degree_cap}")
    comps = [Poly.zero(s.N) for _ in range(s.N)]
    for (i, e), val in zip(unknowns, sol):
        if val:
            comps[i] = comps[i] + Poly.monomial(e, val)
    v = PolyVec(comps)
    assert ext_d(a) == -interior(v, s.omega)
    return v
