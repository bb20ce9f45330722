"""The double complexes built from the algebra and the de Rham complex of R^N.

A tilde cochain stores, for each arity k, one form per basis tuple of the
k-th exterior power of g; a hat cochain stores one form per Lie-kernel basis
vector of P_k.  All forms at arity k have degree ``total_degree - k``.

Sign convention for the total differential at arity k::

    (d_tot a)_k(p) = a_{k-1}(delta p) + (-1)^k d(a_k(p))

The hat differential keeps only the second term.  With this choice a
potential ``a`` of omega-tilde corresponds to a homotopy moment map through
``f_k = zeta(k) a_k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import exactalg as ea
from .action import GAction, NPlecticStructure, omega_k
from .liealg import (DualCochain, LieAlgebra, Multivector, adjoint_action, ce_matrix, delta_matrix, lie_kernel)
from .polyforms import Poly, PolyForm, ext_d, lie_derivative

TILDE = "tilde"
HAT = "hat"


def zeta(k: int) -> int:
    """Sign ``-(-1)^(k(k+1)/2)`` of the Lie n-algebra brackets."""
    return -1 if (k * (k + 1) // 2) % 2 == 0 else 1


def combine(forms: Sequence[PolyForm], coeffs: Sequence[Fraction], nvars: int, degree: int) -> PolyForm:
    out = PolyForm.zero(nvars, degree)
    for c, f in zip(coeffs, forms):
        if c:
            out = out + f * c
    return out


@dataclass(frozen=True)
class GradedCochain:
    flavor: str
    algebra: LieAlgebra
    N: int
    total_degree: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.flavor not in (TILDE, HAT):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        comps = {}
        for k, forms in self.components.items():
            forms = tuple(forms)
            if len(forms) != self.domain_dim(k):
                raise ValueError(f"arity {k}: {len(forms)} forms for a domain of dimension {self.domain_dim(k)}")
            for f in forms:
                if f.degree != self.total_degree - k or f.nvars != self.N:
                    raise ValueError(f"arity {k}: form of degree {f.degree}, expected {self.total_degree - k}")
            if any(not f.is_zero() for f in forms):
                comps[k] = forms
        object.__setattr__(self, "components", comps)

    def domain_dim(self, k: int) -> int:
        if k < 1 or k > self.algebra.dim:
            return 0
        if self.flavor == TILDE:
            return len(self.algebra.basis(k))
        return lie_kernel(self.algebra, k).dim

    def arities(self) -> range:
        return range(1, self.algebra.dim + 1)

    def forms(self, k: int) -> tuple[PolyForm, ...]:
        if k in self.components:
            return self.components[k]
        return tuple(PolyForm.zero(self.N, self.total_degree - k) for _ in range(self.domain_dim(k)))

    def evaluate(self, k: int, vec: Sequence) -> PolyForm:
        """Value on a domain vector (coordinates in the domain basis)."""
        return combine(self.forms(k), [ea.to_fraction(c) for c in vec], self.N, self.total_degree - k)

    def is_zero(self) -> bool:
        return not self.components

    def _like(self, other: "GradedCochain"):
        if (other.flavor, other.algebra, other.N, other.total_degree) != (
                self.flavor, self.algebra, self.N, self.total_degree):
            raise ValueError("cochains of different type")

    def __add__(self, other: "GradedCochain") -> "GradedCochain":
        self._like(other)
        comps = {k: [a + b for a, b in zip(self.forms(k), other.forms(k))]
                 for k in set(self.components) | set(other.components)}
        return GradedCochain(self.flavor, self.algebra, self.N, self.total_degree, comps)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "GradedCochain":
        return GradedCochain(self.flavor, self.algebra, self.N, self.total_degree,
                             {k: [f * s for f in fs] for k, fs in self.components.items()})

    def scale_arities(self, signs) -> "GradedCochain":
        """Multiply the arity-k component by ``signs(k)``."""
        return GradedCochain(self.flavor, self.algebra, self.N, self.total_degree,
                             {k: [f * signs(k) for f in fs] for k, fs in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedCochain):
            return NotImplemented
        return ((self.flavor, self.algebra, self.N, self.total_degree) ==
                (other.flavor, other.algebra, other.N, other.total_degree) and self.components == other.components)

    def __hash__(self):
        return hash((self.flavor, self.total_degree, tuple(sorted(self.components))))


def zero_cochain(flavor: str, g: LieAlgebra, N: int, total_degree: int) -> GradedCochain:
    return GradedCochain(flavor, g, N, total_degree, {})


def d_tot(x: GradedCochain) -> GradedCochain:
    """Total differential (tilde: CE part plus signed de Rham; hat: signed de Rham only)."""
    g = x.algebra
    t = x.total_degree + 1
    comps = {}
    for k in x.arities():
        forms = [PolyForm.zero(x.N, t - k) for _ in range(x.domain_dim(k))]
        if k in x.components:
            sign = -1 if k % 2 else 1
            forms = [f + ext_d(a) * sign for f, a in zip(forms, x.components[k])]
        if x.flavor == TILDE and k >= 2 and (k - 1) in x.components:
            dm = delta_matrix(g, k)
            prev = x.components[k - 1]
            for j in range(len(forms)):
                col = [row[j] for row in dm]
                forms[j] = forms[j] + combine(prev, col, x.N, t - k)
        comps[k] = forms
    return GradedCochain(x.flavor, g, x.N, t, comps)


def restrict(x: GradedCochain) -> GradedCochain:
    """Precompose each arity with the inclusion of the Lie kernel."""
    if x.flavor != TILDE:
        raise ValueError("restriction takes a tilde cochain")
    comps = {}
    for k, forms in x.components.items():
        kern = lie_kernel(x.algebra, k)
        comps[k] = [combine(forms, b, x.N, x.total_degree - k) for b in kern.basis]
    return GradedCochain(HAT, x.algebra, x.N, x.total_degree, comps)


def lift_by_zero(x: GradedCochain) -> GradedCochain:
    """Preimage under :func:`restrict` vanishing on the stored pivot complements."""
    if x.flavor != HAT:
        raise ValueError("lifting takes a hat cochain")
    comps = {}
    for k, forms in x.components.items():
        kern = lie_kernel(x.algebra, k)
        out = [PolyForm.zero(x.N, x.total_degree - k) for _ in x.algebra.basis(k)]
        for pos, col in enumerate(kern.free_columns):
            out[col] = forms[pos]
        comps[k] = out
    return GradedCochain(TILDE, x.algebra, x.N, x.total_degree, comps)


def omega_forms(act: GAction, s: NPlecticStructure, k: int) -> list[PolyForm]:
    """``omega_k`` on every basis tuple of the k-th exterior power."""
    return [omega_k(act, s, Multivector(k, {idx: Fraction(1)})) for idx in act.algebra.basis(k)]


class NotClosedCochain(ValueError):
    pass


def assemble_omega_tilde(act: GAction, s: NPlecticStructure, check: bool = True) -> GradedCochain:
    """``sum_{k=1}^{n+1} (-1)^(k-1) omega_k``."""
    g = act.algebra
    comps = {}
    for k in range(1, min(s.n + 1, g.dim) + 1):
        sign = 1 if k % 2 else -1
        comps[k] = [f * sign for f in omega_forms(act, s, k)]
    wt = GradedCochain(TILDE, g, s.N, s.n + 1, comps)
    if check and not d_tot(wt).is_zero():
        raise NotClosedCochain("omega-tilde is not d_tot-closed; omega is not preserved by the action")
    return wt


def assemble_omega_hat(act: GAction, s: NPlecticStructure, check: bool = True) -> GradedCochain:
    """``sum_{k=1}^{n} (-1)^(k-1) omega_k`` restricted to the Lie kernels."""
    g = act.algebra
    comps = {}
    for k in range(1, min(s.n, g.dim) + 1):
        sign = 1 if k % 2 else -1
        comps[k] = [omega_k(act, s, Multivector.from_vector(g, k, b)) * sign for b in lie_kernel(g, k).basis]
    wh = GradedCochain(HAT, g, s.N, s.n + 1, comps)
    if check:
        for k, forms in wh.components.items():
            for i, f in enumerate(forms):
                if not ext_d(f).is_zero():
                    raise NotClosedCochain(f"omega-hat component at arity {k}, kernel vector {i + 1} is not closed")
    return wh


@dataclass(frozen=True)
class Phi:
    """``p -> i_{v_p} omega`` on the Lie kernel of arity n+1."""
    values: tuple[Poly, ...]
    kernel: tuple[tuple[Fraction, ...], ...]

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)


def phi(act: GAction, s: NPlecticStructure) -> Phi:
    g = act.algebra
    k = s.n + 1
    if k > g.dim:
        return Phi((), ())
    kern = lie_kernel(g, k)
    vals = tuple(omega_k(act, s, Multivector.from_vector(g, k, b)).function_part() for b in kern.basis)
    return Phi(vals, kern.basis)


def phi_cochain(act: GAction, s: NPlecticStructure) -> GradedCochain:
    """phi placed at arity n+1 of the hat complex, carrying the omega-tilde sign ``(-1)^n``."""
    ph = phi(act, s)
    sign = -1 if s.n % 2 else 1
    comps = {s.n + 1: [PolyForm.function(v) * sign for v in ph.values]} if ph.values else {}
    return GradedCochain(HAT, act.algebra, s.N, s.n + 1, comps)


@dataclass
class ObstructionReport:
    phi_is_zero: bool
    c_cocycle: DualCochain
    c_closed: bool
    c_class_zero: bool
    c_primitive: Optional[DualCochain]
    sample_points_checked: list
    point_independent: bool
    point: tuple

    @property
    def consistent(self) -> bool:
        return self.phi_is_zero == self.c_class_zero


def c_values(act: GAction, s: NPlecticStructure, point: Sequence) -> DualCochain:
    """``p -> (-1)^n zeta(n+1) i_{v_p} omega |_point`` on the basis of arity n+1."""
    g = act.algebra
    k = s.n + 1
    sign = (-1 if s.n % 2 else 1) * zeta(k)
    vals = []
    for f in omega_forms(act, s, k) if k <= g.dim else []:
        vals.append(sign * f.function_part().evaluate(point))
    return DualCochain(k, tuple(vals))


def _in_image(g: LieAlgebra, k: int, c: DualCochain) -> Optional[list[Fraction]]:
    if not c.values:
        return []
    return ea.solve_linear(ce_matrix(g, k - 1), list(c.values), len(g.basis(k - 1)))


def sample_points(N: int, count: int = 3, seed: int = 0) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(N)) for _ in range(count)]


def c_cocycle(act: GAction, s: NPlecticStructure, point: Optional[Sequence] = None,
              extra_points: Iterable[Sequence] = ()) -> ObstructionReport:
    """Evaluate the (n+1)-cocycle at a point and decide whether its class vanishes.

    Raises:
        ValueError: if the cochain is not closed.
    """
    g = act.algebra
    k = s.n + 1
    pt = tuple(ea.to_fraction(x) for x in (point if point is not None else s.basepoint))
    c = c_values(act, s, pt)
    closed = True
    if c.values and k < g.dim:
        closed = not any(ea.matvec(ce_matrix(g, k), list(c.values)))
    if not closed:
        raise ValueError("c is not a cocycle; the action does not preserve omega")
    prim = _in_image(g, k, c)
    checked = [pt]
    independent = True
    for q in extra_points:
        q = tuple(ea.to_fraction(x) for x in q)
        checked.append(q)
        diff = c_values(act, s, q) - c
        if _in_image(g, k, diff) is None:
            independent = False
    ph = phi(act, s)
    return ObstructionReport(
        phi_is_zero=ph.is_zero,
        c_cocycle=c,
        c_closed=closed,
        c_class_zero=prim is not None,
        c_primitive=DualCochain(k - 1, tuple(prim)) if prim is not None else None,
        sample_points_checked=checked,
        point_independent=independent,
        point=pt,
    )


def g_action(act: GAction, x: int, a: GradedCochain) -> GradedCochain:
    """``(x . a)_k(p) = L_{v_x} a_k(p) - a_k(ad_x p)`` on each domain basis vector."""
    g = act.algebra
    v = act.generators[x]
    comps = {}
    for k, forms in a.components.items():
        deg = a.total_degree - k
        out = []
        if a.flavor == TILDE:
            dom = [Multivector(k, {idx: Fraction(1)}) for idx in g.basis(k)]
        else:
            dom = [Multivector.from_vector(g, k, b) for b in lie_kernel(g, k).basis]
        for p, f in zip(dom, forms):
            image = adjoint_action(g, x, p).vector(g)
            if a.flavor == HAT:
                image = lie_kernel(g, k).coordinates(image)
            out.append(lie_derivative(v, f) - combine(forms, image, a.N, deg))
        comps[k] = out
    return GradedCochain(a.flavor, g, a.N, a.total_degree, comps)


def is_invariant(act: GAction, a: GradedCochain) -> bool:
    return all(g_action(act, x, a).is_zero() for x in range(act.algebra.dim))
