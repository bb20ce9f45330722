"""Weak and homotopy moment maps: verification, construction, extension, equivariance."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import exactalg as ea
from .action import GAction, NPlecticStructure, omega_k
from .complexes import (HAT, TILDE, GradedCochain, ObstructionReport, Phi, assemble_omega_tilde,
                        c_cocycle, combine, d_tot, g_action, lift_by_zero, phi, restrict, sample_points, zeta)
from .liealg import (LieAlgebra, Multivector, ce_cohomology, ce_matrix, delta_matrix, invariants,
                     kernel_module_matrices, lie_kernel)
from .polyforms import Poly, PolyForm, ext_d, monomials_up_to, poincare_operator, poincare_primitive

__all__ = [
    "zeta", "WeakMomentMap", "HomotopyMomentMap", "VerificationReport", "verify_weak", "verify_homotopy",
    "construct_weak", "construct_homotopy", "Obstructed", "existence_report", "strict_extension",
    "ExtensionReport", "equivariance_check", "equivariantize", "EquivarianceReport", "ExistenceReport",
    "HypothesisViolation", "homotopy_from_potential_check", "gamma_cochain", "symplectic_defect", "UNDECIDED",
]


@dataclass(frozen=True)
class WeakMomentMap:
    """Components ``f_k`` on the Lie kernels P_k, k = 1..n, one form per kernel basis vector."""
    algebra: LieAlgebra
    N: int
    n: int
    components: dict

    flavor = "weak"

    def arities(self) -> range:
        return range(1, min(self.n, self.algebra.dim) + 1)

    def domain_dim(self, k: int) -> int:
        return lie_kernel(self.algebra, k).dim

    def forms(self, k: int) -> tuple[PolyForm, ...]:
        if k in self.components:
            return tuple(self.components[k])
        return tuple(PolyForm.zero(self.N, self.n - k) for _ in range(self.domain_dim(k)))

    def as_cochain(self) -> GradedCochain:
        """Hat potential with ``a_k = zeta(k) f_k``."""
        return GradedCochain(HAT, self.algebra, self.N, self.n,
                             {k: [f * zeta(k) for f in self.forms(k)] for k in self.arities()})

    @classmethod
    def from_cochain(cls, a: GradedCochain, n: int) -> "WeakMomentMap":
        return cls(a.algebra, a.N, n,
                   {k: tuple(f * zeta(k) for f in a.forms(k)) for k in range(1, min(n, a.algebra.dim) + 1)})

    def __eq__(self, other):
        if not isinstance(other, WeakMomentMap):
            return NotImplemented
        return (self.algebra == other.algebra and self.n == other.n and
                all(self.forms(k) == other.forms(k) for k in self.arities()))

    def __hash__(self):
        return hash((self.algebra, self.n))


@dataclass(frozen=True)
class HomotopyMomentMap:
    """Components ``f_k`` on the full exterior powers, k = 1..n."""
    algebra: LieAlgebra
    N: int
    n: int
    components: dict

    flavor = "homotopy"

    def arities(self) -> range:
        return range(1, min(self.n, self.algebra.dim) + 1)

    def domain_dim(self, k: int) -> int:
        return len(self.algebra.basis(k))

    def forms(self, k: int) -> tuple[PolyForm, ...]:
        if k in self.components:
            return tuple(self.components[k])
        return tuple(PolyForm.zero(self.N, self.n - k) for _ in range(self.domain_dim(k)))

    def evaluate(self, k: int, vec) -> PolyForm:
        if k < 1 or k > self.n or k > self.algebra.dim:
            return PolyForm.zero(self.N, self.n - k)
        return combine(self.forms(k), vec, self.N, self.n - k)

    def as_cochain(self) -> GradedCochain:
        return GradedCochain(TILDE, self.algebra, self.N, self.n,
                             {k: [f * zeta(k) for f in self.forms(k)] for k in self.arities()})

    @classmethod
    def from_cochain(cls, a: GradedCochain, n: int) -> "HomotopyMomentMap":
        return cls(a.algebra, a.N, n,
                   {k: tuple(f * zeta(k) for f in a.forms(k)) for k in range(1, min(n, a.algebra.dim) + 1)})

    def restrict(self) -> WeakMomentMap:
        g = self.algebra
        return WeakMomentMap(g, self.N, self.n, {
            k: tuple(self.evaluate(k, b) for b in lie_kernel(g, k).basis) for k in self.arities()})

    def __eq__(self, other):
        if not isinstance(other, HomotopyMomentMap):
            return NotImplemented
        return (self.algebra == other.algebra and self.n == other.n and
                all(self.forms(k) == other.forms(k) for k in self.arities()))

    def __hash__(self):
        return hash((self.algebra, self.n))


MomentMap = Union[WeakMomentMap, HomotopyMomentMap]


@dataclass
class VerificationReport:
    flavor: str
    residuals: dict = field(default_factory=dict)  # (arity, 1-based index) -> nonzero PolyForm
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.residuals


def _iota(act, s, k, vec) -> PolyForm:
    return omega_k(act, s, Multivector.from_vector(act.algebra, k, vec))


def verify_weak(f: WeakMomentMap, act: GAction, s: NPlecticStructure) -> VerificationReport:
    """Residuals ``d f_k(p) + zeta(k) i_{v_p} omega`` on every Lie-kernel basis vector."""
    rep = VerificationReport("weak")
    g = act.algebra
    for k in f.arities():
        for i, (b, fk) in enumerate(zip(lie_kernel(g, k).basis, f.forms(k))):
            r = ext_d(fk) + _iota(act, s, k, b) * zeta(k)
            rep.checked += 1
            if not r.is_zero():
                rep.residuals[(k, i + 1)] = r
    return rep


def verify_homotopy(f: HomotopyMomentMap, act: GAction, s: NPlecticStructure) -> VerificationReport:
    """Residuals ``f_{k-1}(delta p) + d f_k(p) + zeta(k) i_{v_p} omega`` for k = 1..n+1."""
    rep = VerificationReport("homotopy")
    g = act.algebra
    for k in range(1, min(s.n + 1, g.dim) + 1):
        dm = delta_matrix(g, k)
        for j, idx in enumerate(g.basis(k)):
            unit = [Fraction(int(i == j)) for i in range(len(g.basis(k)))]
            r = _iota(act, s, k, unit) * zeta(k)
            if k <= s.n:
                r = r + ext_d(f.forms(k)[j])
            if k >= 2:
                r = r + f.evaluate(k - 1, [row[j] for row in dm])
            rep.checked += 1
            if not r.is_zero():
                rep.residuals[(k, j + 1)] = r
    return rep


def construct_weak(act: GAction, s: NPlecticStructure) -> WeakMomentMap:
    """``f_k(p) = -zeta(k) h(i_{v_p} omega)`` with h the Euler homotopy operator."""
    g = act.algebra
    comps = {}
    for k in range(1, min(s.n, g.dim) + 1):
        comps[k] = tuple(poincare_primitive(_iota(act, s, k, b)) * (-zeta(k)) for b in lie_kernel(g, k).basis)
    return WeakMomentMap(g, s.N, s.n, comps)


class Obstructed(Exception):
    """No homotopy moment map: carries the arity-(n+1) residual and the obstruction data."""

    def __init__(self, residual: list, restricted: list, report: ObstructionReport, partial: HomotopyMomentMap):
        super().__init__("homotopy moment map obstructed at arity n+1")
        self.residual = residual
        self.restricted = restricted
        self.report = report
        self.partial = partial


def construct_homotopy(act: GAction, s: NPlecticStructure, extra_points=()) -> HomotopyMomentMap:
    """Ascending construction through the Euler homotopy operator.

    After arity n the remaining defect is a constant (n+1)-cochain; it is
    absorbed by adding constants to ``f_n`` when it is a CE coboundary.

    Raises:
        Obstructed: when the defect is not a coboundary (phi does not vanish).
    """
    g = act.algebra
    n = s.n
    top = min(n, g.dim)
    comps: dict[int, tuple[PolyForm, ...]] = {}
    for k in range(1, top + 1):
        dm = delta_matrix(g, k)
        forms = []
        for j, idx in enumerate(g.basis(k)):
            unit = [Fraction(int(i == j)) for i in range(len(g.basis(k)))]
            r = _iota(act, s, k, unit) * (-zeta(k))
            if k >= 2:
                r = r - combine(comps[k - 1], [row[j] for row in dm], s.N, n - k + 1)
            if not ext_d(r).is_zero():
                raise ArithmeticError(f"intermediate defect at arity {k} is not closed")
            forms.append(poincare_operator(r))
        comps[k] = tuple(forms)
    f = HomotopyMomentMap(g, s.N, n, comps)
    if n + 1 > g.dim:
        return f
    k = n + 1
    dm = delta_matrix(g, k)
    residual = []
    for j, idx in enumerate(g.basis(k)):
        unit = [Fraction(int(i == j)) for i in range(len(g.basis(k)))]
        r = f.evaluate(n, [row[j] for row in dm]) + _iota(act, s, k, unit) * zeta(k)
        residual.append(r.function_part())
    if all(r.is_zero() for r in residual):
        return f
    if not all(r.is_constant() for r in residual):
        raise ArithmeticError("top defect is not constant")
    consts = [r.constant_term() for r in residual]
    xi = ea.solve_linear(ce_matrix(g, n), [-c for c in consts], len(g.basis(n)))
    if xi is not None:
        shifted = tuple(fn + PolyForm.function(Poly.const(s.N, c)) for fn, c in zip(comps[n], xi))
        comps[n] = shifted
        return HomotopyMomentMap(g, s.N, n, comps)
    kern = lie_kernel(g, k)
    restricted = [combine([PolyForm.function(r) for r in residual], b, s.N, 0).function_part() for b in kern.basis]
    report = c_cocycle(act, s, extra_points=extra_points)
    raise Obstructed(residual, restricted, report, f)


def homotopy_from_potential_check(f: HomotopyMomentMap, act: GAction, s: NPlecticStructure) -> bool:
    """Whether ``d_tot(a) = omega-tilde`` for ``a_k = zeta(k) f_k``."""
    return d_tot(f.as_cochain()) == assemble_omega_tilde(act, s, check=False)


# -- existence ------------------------------------------------------------

@dataclass
class ExistenceReport:
    weak_exists: bool
    weak_witness: WeakMomentMap
    phi: Phi
    obstruction: ObstructionReport
    homotopy_exists: bool
    homotopy_witness: Optional[HomotopyMomentMap]
    kernel_dims: dict
    cohomology_dims: dict
    low_cohomology_vanishes: bool
    kernel_invariants: dict
    kernel_dual_invariants: dict
    invariants_vanish: bool

    @property
    def consistent(self) -> bool:
        return self.homotopy_exists == (self.weak_exists and self.phi.is_zero) and self.obstruction.consistent


def existence_report(act: GAction, s: NPlecticStructure, sample_count: int = 3, seed: int = 0) -> ExistenceReport:
    g = act.algebra
    weak = construct_weak(act, s)
    weak_ok = verify_weak(weak, act, s).passed
    ph = phi(act, s)
    pts = sample_points(s.N, sample_count, seed)
    obs = c_cocycle(act, s, extra_points=[tuple(0 for _ in range(s.N))] + pts)
    try:
        hom = construct_homotopy(act, s)
        hom_ok = verify_homotopy(hom, act, s).passed
    except Obstructed:
        hom, hom_ok = None, False
    kdims = {k: lie_kernel(g, k).dim for k in range(1, g.dim + 1)}
    hdims = {k: ce_cohomology(g, k).dim for k in range(0, g.dim + 1)}
    low = all(hdims.get(k, 0) == 0 for k in range(1, s.n + 1))
    inv, dual_inv = {}, {}
    for k in range(1, min(s.n, g.dim) + 1):
        dim = lie_kernel(g, k).dim
        inv[k] = len(invariants(g, kernel_module_matrices(g, k), dim)) if dim else 0
        dual_inv[k] = len(invariants(g, kernel_module_matrices(g, k, dual=True), dim)) if dim else 0
    return ExistenceReport(
        weak_exists=weak_ok, weak_witness=weak, phi=ph, obstruction=obs,
        homotopy_exists=hom_ok, homotopy_witness=hom, kernel_dims=kdims, cohomology_dims=hdims,
        low_cohomology_vanishes=low, kernel_invariants=inv, kernel_dual_invariants=dual_inv,
        invariants_vanish=all(v == 0 for v in dual_inv.values()),
    )


# -- strict extension -----------------------------------------------------

@dataclass
class ExtensionReport:
    gamma: GradedCochain
    gamma_components: dict
    gamma_top_zero: bool
    in_image: bool
    closed: bool
    primitives: dict
    extension: Optional[HomotopyMomentMap]
    extension_verified: bool = False
    restricts_to_input: bool = False

    @property
    def extendable(self) -> bool:
        return self.extension is not None


class HypothesisViolation(ValueError):
    pass


def gamma_cochain(f: WeakMomentMap, act: GAction, s: NPlecticStructure,
                  perturbation: Optional[GradedCochain] = None) -> tuple[GradedCochain, GradedCochain]:
    """Lift of the weak potential (extended by zero) and ``omega-tilde - d_tot(lift)``."""
    beta = lift_by_zero(f.as_cochain())
    if perturbation is not None:
        if not restrict(perturbation).is_zero():
            raise ValueError("perturbation must vanish on the Lie kernels")
        beta = beta + perturbation
    gamma = assemble_omega_tilde(act, s, check=False) - d_tot(beta)
    return beta, gamma


def _image_membership(g: LieAlgebra, k: int, forms) -> bool:
    """Each coefficient vector over the arity-k basis lies in the image of d^(k-1)."""
    keys = {(idx, e) for fm in forms for idx, p in fm.comps.items() for e in p.terms}
    m = ce_matrix(g, k - 1)
    for idx, e in keys:
        vec = [fm.comps[idx].terms.get(e, Fraction(0)) if idx in fm.comps else Fraction(0) for fm in forms]
        if ea.solve_linear(m, vec, len(g.basis(k - 1))) is None:
            return False
    return True


def strict_extension(f: WeakMomentMap, act: GAction, s: NPlecticStructure,
                     perturbation: Optional[GradedCochain] = None) -> ExtensionReport:
    """Decide whether a weak moment map extends to a homotopy moment map restricting to it.

    Raises:
        HypothesisViolation: if ``f`` does not verify or phi does not vanish.
    """
    if not verify_weak(f, act, s).passed:
        raise HypothesisViolation("input is not a weak moment map")
    if not phi(act, s).is_zero:
        raise HypothesisViolation("phi does not vanish; strict extension is not defined")
    g = act.algebra
    n = s.n
    beta, gamma = gamma_cochain(f, act, s, perturbation)
    comps = {k: gamma.forms(k) for k in gamma.components}
    in_image = all(_image_membership(g, k, forms) for k, forms in comps.items())
    closed = all(ext_d(fm).is_zero() for forms in comps.values() for fm in forms)
    top = n + 1
    top_zero = top not in gamma.components
    primitives = {}
    mu_comps = {}
    for k, forms in comps.items():
        if k == top:
            continue
        eta = [poincare_primitive(fm) for fm in forms]
        primitives[k - 1] = eta
        sign = 1 if k % 2 == 0 else -1
        mu_comps[k] = [e * sign for e in eta]
    extension = None
    verified = restricts = False
    if top_zero and in_image and closed:
        mu = GradedCochain(TILDE, g, s.N, n, mu_comps)
        alpha = beta + mu
        extension = HomotopyMomentMap.from_cochain(alpha, n)
        verified = verify_homotopy(extension, act, s).passed
        restricts = extension.restrict() == f
    return ExtensionReport(gamma, comps, top_zero, in_image, closed, primitives, extension, verified, restricts)


def symplectic_defect(f: WeakMomentMap, act: GAction, s: NPlecticStructure) -> list[Poly]:
    """For n = 1: ``h(x, y) = omega(v_x, v_y) - f([x, y])`` on the basis pairs (equals ``-gamma_2``)."""
    if s.n != 1:
        raise ValueError("the defect is defined for symplectic structures")
    _, gamma = gamma_cochain(f, act, s)
    return [(-fm).function_part() for fm in gamma.forms(2)]


# -- equivariance ---------------------------------------------------------

UNDECIDED = "undecided within degree cap"


@dataclass
class EquivarianceReport:
    residuals: dict = field(default_factory=dict)  # (x, arity, index), 1-based -> nonzero PolyForm
    equivariant: bool = True
    correction: Optional[GradedCochain] = None
    corrected: Optional[MomentMap] = None
    obstruction_status: str = "vanishes"
    degree_cap: Optional[int] = None


def _domain_cochain(f: MomentMap) -> GradedCochain:
    """Cochain holding the components of f unchanged (no zeta signs)."""
    flavor = HAT if isinstance(f, WeakMomentMap) else TILDE
    return GradedCochain(flavor, f.algebra, f.N, f.n, {k: f.forms(k) for k in f.arities()})


def equivariance_check(f: MomentMap, act: GAction) -> EquivarianceReport:
    """Residuals ``f_k(ad_x p) - L_{v_x} f_k(p)`` on basis x and domain basis p."""
    rep = EquivarianceReport()
    c = _domain_cochain(f)
    for x in range(act.algebra.dim):
        moved = g_action(act, x, c)
        for k, forms in moved.components.items():
            for i, fm in enumerate(forms):
                if not fm.is_zero():
                    rep.residuals[(x + 1, k, i + 1)] = -fm
    rep.equivariant = not rep.residuals
    return rep


def _unit_cochain(flavor, g, N, total, k, i, idx, e) -> GradedCochain:
    dim = len(g.basis(k)) if flavor == TILDE else lie_kernel(g, k).dim
    forms = [PolyForm.zero(N, total - k) for _ in range(dim)]
    forms[i] = PolyForm.basic(N, idx, Poly.monomial(e))
    return GradedCochain(flavor, g, N, total, {k: forms})


def _flatten(tag, c: GradedCochain, out: dict):
    for k, forms in c.components.items():
        for i, fm in enumerate(forms):
            for idx, p in fm.comps.items():
                for e, v in p.terms.items():
                    out[(tag, k, i, idx, e)] = v


def equivariantize(f: MomentMap, act: GAction, s: NPlecticStructure,
                   degree_cap: Optional[int] = None) -> EquivarianceReport:
    """Search for an admissible change making f infinitesimally equivariant.

    Admissible changes are closed-form-valued cochains on the Lie kernels
    (weak) or d_tot-closed cochains (homotopy), with polynomial coefficients
    of degree at most ``degree_cap``.
    """
    from ._indices import subsets

    rep = equivariance_check(f, act)
    alpha = f.as_cochain()
    weak = isinstance(f, WeakMomentMap)
    g = act.algebra
    own_degree = max([fm.coefficient_degree() for k in f.arities() for fm in f.forms(k)] + [0])
    if degree_cap is None:
        degree_cap = own_degree
    rep.degree_cap = degree_cap
    if rep.equivariant:
        rep.correction = GradedCochain(alpha.flavor, g, s.N, s.n, {})
        rep.corrected = f
        return rep
    unknowns = []
    for k in f.arities():
        deg = s.n - k
        for i in range(f.domain_dim(k)):
            for idx in subsets(s.N, deg):
                for e in monomials_up_to(s.N, degree_cap):
                    unknowns.append((k, i, idx, e))
    columns = []
    for key in unknowns:
        u = _unit_cochain(alpha.flavor, g, s.N, s.n, *key)
        col: dict = {}
        _flatten("d", d_tot(u), col)
        for x in range(g.dim):
            _flatten(("x", x), g_action(act, x, u), col)
        columns.append(col)
    rhs: dict = {}
    for x in range(g.dim):
        _flatten(("x", x), g_action(act, x, alpha), rhs)
    rows = sorted({r for col in columns for r in col} | set(rhs), key=repr)
    rindex = {r: i for i, r in enumerate(rows)}
    m = ea.zeros(len(rows), len(unknowns))
    for c, col in enumerate(columns):
        for r, v in col.items():
            m[rindex[r]][c] = v
    b = [rhs.get(r, Fraction(0)) for r in rows]
    sol = ea.solve_linear(m, b, len(unknowns)) if unknowns else None
    if sol is None:
        conclusive = act.degree() <= 1 and degree_cap >= own_degree
        rep.obstruction_status = "nonzero" if conclusive else UNDECIDED
        return rep
    comps: dict[int, list[PolyForm]] = {}
    for (k, i, idx, e), v in zip(unknowns, sol):
        if not v:
            continue
        forms = comps.setdefault(k, [PolyForm.zero(s.N, s.n - k) for _ in range(f.domain_dim(k))])
        forms[i] = forms[i] + PolyForm.basic(s.N, idx, Poly.monomial(e, v))
    beta = GradedCochain(alpha.flavor, g, s.N, s.n, comps)
    new_alpha = alpha - beta
    corrected = (WeakMomentMap if weak else HomotopyMomentMap).from_cochain(new_alpha, s.n)
    rep.correction = beta
    rep.corrected = corrected
    rep.obstruction_status = "vanishes"
    ok = verify_weak(corrected, act, s).passed if weak else verify_homotopy(corrected, act, s).passed
    if not ok or not equivariance_check(corrected, act).equivariant:
        raise ArithmeticError("equivariant correction failed re-verification")
    return rep
