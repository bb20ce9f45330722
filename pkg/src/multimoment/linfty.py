"""The Lie n-algebra of Hamiltonian forms on (R^N, omega)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .action import GAction, NPlecticStructure
from .complexes import combine, zeta
from .liealg import delta_matrix
from .moment import HomotopyMomentMap
from .polyforms import PolyForm, PolyMultiVec, PolyVec, contract, ext_d, interior, vector_bracket


class NotHamiltonian(ValueError):
    pass


@dataclass(frozen=True)
class HamiltonianPair:
    """An (n-1)-form together with a field satisfying ``d form = -i_field omega``."""
    form: PolyForm
    field: PolyVec
    structure: NPlecticStructure

    def __post_init__(self):
        s = self.structure
        if self.form.degree != s.n - 1 or self.form.nvars != s.N:
            raise ValueError(f"Hamiltonian forms have degree {s.n - 1}")
        if ext_d(self.form) != -interior(self.field, s.omega):
            raise NotHamiltonian("d(form) differs from -i_field omega")


@dataclass(frozen=True)
class GradedElement:
    """Homogeneous element of degree ``1 - n <= i <= 0``.

    The payload is a :class:`HamiltonianPair` in degree 0 and a form of degree
    ``n - 1 + i`` below.  Brackets landing under ``1 - n`` carry ``None``.
    """
    degree: int
    payload: Union[HamiltonianPair, PolyForm, None]
    structure: NPlecticStructure

    def __post_init__(self):
        n = self.structure.n
        if self.degree > 0:
            raise ValueError("positive degrees are empty")
        if self.payload is None:
            if self.degree >= 1 - n:
                raise ValueError("only out-of-range degrees may have an empty payload")
            return
        if self.degree == 0:
            if not isinstance(self.payload, HamiltonianPair):
                raise ValueError("degree 0 carries a HamiltonianPair")
        elif not isinstance(self.payload, PolyForm) or self.payload.degree != n - 1 + self.degree:
            raise ValueError(f"degree {self.degree} carries a form of degree {n - 1 + self.degree}")

    @property
    def form(self) -> Optional[PolyForm]:
        if isinstance(self.payload, HamiltonianPair):
            return self.payload.form
        return self.payload

    def is_zero(self) -> bool:
        return self.payload is None or self.form.is_zero() and (
            not isinstance(self.payload, HamiltonianPair) or self.payload.field.is_zero())


def element(s: NPlecticStructure, form: PolyForm, field: Optional[PolyVec] = None) -> GradedElement:
    """Wrap a form, using its degree to place it."""
    deg = form.degree - (s.n - 1)
    if deg == 0:
        if field is None:
            raise ValueError("degree-0 elements need a Hamiltonian field")
        return GradedElement(0, HamiltonianPair(form, field, s), s)
    return GradedElement(deg, form, s)


def _zero(s: NPlecticStructure, degree: int) -> GradedElement:
    if degree < 1 - s.n:
        return GradedElement(degree, None, s)
    form = PolyForm.zero(s.N, s.n - 1 + degree)
    return element(s, form, PolyVec.zero(s.N))


def unary(x: GradedElement) -> GradedElement:
    """de Rham differential on negative degrees; exact forms in degree 0 get the zero field."""
    if x.degree == 0:
        raise ValueError("the unary bracket is not defined in degree 0")
    s = x.structure
    if x.payload is None:
        return _zero(s, x.degree + 1)
    return element(s, ext_d(x.payload), PolyVec.zero(s.N))


def bracket(xs: Sequence[GradedElement]) -> GradedElement:
    """k-ary bracket, ``zeta(k) i(v_1 ^ ... ^ v_k) omega`` when all arguments sit in degree 0."""
    k = len(xs)
    if k < 2:
        raise ValueError("use unary for a single argument")
    s = xs[0].structure
    total = sum(x.degree for x in xs)
    if total > 0:
        raise ValueError("positive total degree")
    out_degree = total + 2 - k
    if total < 0:
        return _zero(s, out_degree)
    fields = [x.payload.field for x in xs]
    form = contract(PolyMultiVec.wedge_of(fields), s.omega) * zeta(k)
    if out_degree < 0:
        return GradedElement(out_degree, form, s)
    return GradedElement(0, HamiltonianPair(form, vector_bracket(fields[0], fields[1]), s), s)


@dataclass
class ConsistencyReport:
    hamiltonian_failures: list = field(default_factory=list)  # 1-based generator indices
    bracket_residuals: dict = field(default_factory=dict)  # (i, j) 1-based -> nonzero form

    @property
    def passed(self) -> bool:
        return not self.hamiltonian_failures and not self.bracket_residuals


def morphism_consistency(f: HomotopyMomentMap, act: GAction, s: NPlecticStructure) -> ConsistencyReport:
    """Compare binary brackets of the pairs ``(f_1(x), v_x)`` with ``-f_1(delta p) - d f_2(p)``."""
    rep = ConsistencyReport()
    g = act.algebra
    f1 = f.forms(1)
    pairs = []
    for i in range(g.dim):
        try:
            pairs.append(GradedElement(0, HamiltonianPair(f1[i], act.generators[i], s), s))
        except NotHamiltonian:
            rep.hamiltonian_failures.append(i + 1)
            pairs.append(None)
    if g.dim < 2:
        return rep
    dm = delta_matrix(g, 2)
    f2 = f.forms(2) if s.n >= 2 else ()
    for j, (a, b) in enumerate(g.basis(2)):
        if pairs[a] is None or pairs[b] is None:
            continue
        br = bracket([pairs[a], pairs[b]]).form
        expected = -combine(f1, [row[j] for row in dm], s.N, s.n - 1)
        if f2:
            expected = expected - ext_d(f2[j])
        if br != expected:
            rep.bracket_residuals[(a + 1, b + 1)] = br - expected
    return rep
