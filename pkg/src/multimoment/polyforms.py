"""Exterior calculus on R^N with polynomial rational coefficients.

Form components are keyed by strictly increasing 0-based index tuples
``(i1, ..., ik)`` standing for ``dx_{i1} ^ ... ^ dx_{ik}``.

Contraction convention: ``contract(v_1 ^ ... ^ v_k, a) = a(v_1, ..., v_k, ...)``,
i.e. ``v_1`` goes into the first slot.  Together with the homology
differential on multivector fields this makes the extended Cartan formula
(see :func:`extended_cartan_residual`) hold identically.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import exactalg as ea
from ._indices import merge

Exponent = tuple[int, ...]


class Poly:
    """Sparse polynomial in ``nvars`` variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = ea.to_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = ea.to_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Exponent, c=1) -> "Poly":
        return cls(len(exponent), {tuple(exponent): c})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            out: dict[Exponent, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})
        s = ea.to_fraction(other)
        if not s:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {e: s * c for e, c in self.terms.items()})

    __rmul__ = __mul__

    def diff(self, i: int) -> "Poly":
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [ea.to_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            c = ea.format_rational(self.terms[e])
            parts.append(f"{c}*{mono}" if mono else c)
        return " + ".join(parts)


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree <= ``degree``, graded then lexicographic."""
    out: list[Exponent] = []
    for d in range(degree + 1):
        out.extend(sorted((e for e in product(range(d + 1), repeat=nvars) if sum(e) == d), reverse=True))
    return out


class PolyForm:
    """Differential form of fixed degree with polynomial coefficients."""

    __slots__ = ("nvars", "degree", "comps")

    def __init__(self, nvars: int, degree: int, comps: Mapping[tuple[int, ...], Poly] | None = None):
        # degrees outside 0..N are allowed and hold only the zero form
        self.nvars = nvars
        self.degree = degree
        out: dict[tuple[int, ...], Poly] = {}
        for idx, p in (comps or {}).items():
            if len(idx) != degree:
                raise ValueError(f"index set {idx} does not have length {degree}")
            sign, key = merge(tuple(idx), ())
            if sign == 0 or p.is_zero():
                continue
            if any(not 0 <= i < nvars for i in key):
                raise ValueError(f"index set {idx} out of range")
            q = p if sign > 0 else -p
            out[key] = out[key] + q if key in out else q
            if out[key].is_zero():
                del out[key]
        self.comps = out

    @classmethod
    def _raw(cls, nvars, degree, comps):
        f = cls.__new__(cls)
        f.nvars = nvars
        f.degree = degree
        f.comps = comps
        return f

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "PolyForm":
        return cls(nvars, degree, {})

    @classmethod
    def function(cls, p: Poly) -> "PolyForm":
        return cls(p.nvars, 0, {(): p})

    @classmethod
    def basic(cls, nvars: int, idx: Sequence[int], coeff: Poly | object = 1) -> "PolyForm":
        if not isinstance(coeff, Poly):
            coeff = Poly.const(nvars, coeff)
        return cls(nvars, len(idx), {tuple(idx): coeff})

    def is_zero(self) -> bool:
        return not self.comps

    def coefficient_degree(self) -> int:
        return max((p.degree() for p in self.comps.values()), default=-1)

    def function_part(self) -> Poly:
        if self.degree != 0:
            raise ValueError("not a function")
        return self.comps.get((), Poly.zero(self.nvars))

    def _check(self, other: "PolyForm"):
        if other.nvars != self.nvars or other.degree != self.degree:
            raise ValueError(f"form mismatch: ({self.nvars}, {self.degree}) vs ({other.nvars}, {other.degree})")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        out = dict(self.comps)
        for idx, p in other.comps.items():
            q = out[idx] + p if idx in out else p
            if q.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = q
        return PolyForm._raw(self.nvars, self.degree, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm._raw(self.nvars, self.degree, {i: -p for i, p in self.comps.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, s) -> "PolyForm":
        """Multiply every coefficient by a scalar or a polynomial."""
        out = {}
        for idx, p in self.comps.items():
            q = p * s
            if not q.is_zero():
                out[idx] = q
        return PolyForm._raw(self.nvars, self.degree, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.nvars == other.nvars and self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((self.nvars, self.degree, tuple(sorted((k, hash(v)) for k, v in self.comps.items()))))

    def __repr__(self):
        if not self.comps:
            return f"0 (degree {self.degree})"
        parts = []
        for idx in sorted(self.comps):
            d = "^".join(f"dx{i + 1}" for i in idx)
            parts.append(f"({self.comps[idx]})" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def evaluate(self, point: Sequence) -> dict[tuple[int, ...], Fraction]:
        """Constant-coefficient components at a point (zeros dropped)."""
        out = {}
        for idx, p in self.comps.items():
            v = p.evaluate(point)
            if v:
                out[idx] = v
        return out

    def map_coefficients(self, fn) -> "PolyForm":
        return PolyForm(self.nvars, self.degree, {i: fn(p) for i, p in self.comps.items()})


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.nvars != b.nvars:
        raise ValueError("forms live on different spaces")
    deg = a.degree + b.degree
    out: dict[tuple[int, ...], Poly] = {}
    for i, p in a.comps.items():
        for j, q in b.comps.items():
            sign, key = merge(i, j)
            if sign:
                term = p * q if sign > 0 else -(p * q)
                out[key] = out[key] + term if key in out else term
    return PolyForm(a.nvars, deg, {k: v for k, v in out.items() if not v.is_zero()})


def ext_d(a: PolyForm) -> PolyForm:
    """Exterior derivative."""
    out: dict[tuple[int, ...], Poly] = {}
    for idx, p in a.comps.items():
        for i in range(a.nvars):
            dp = p.diff(i)
            if dp.is_zero():
                continue
            sign, key = merge((i,), idx)
            if sign:
                term = dp if sign > 0 else -dp
                out[key] = out[key] + term if key in out else term
    return PolyForm(a.nvars, a.degree + 1, {k: v for k, v in out.items() if not v.is_zero()})


class PolyVec:
    """Polynomial vector field ``sum_i comps[i] d/dx_i``."""

    __slots__ = ("comps",)

    def __init__(self, comps: Sequence[Poly]):
        comps = tuple(comps)
        if comps and any(c.nvars != len(comps) for c in comps):
            raise ValueError("vector field needs N polynomials in N variables")
        self.comps = comps

    @property
    def nvars(self) -> int:
        return len(self.comps)

    @classmethod
    def zero(cls, nvars: int) -> "PolyVec":
        return cls([Poly.zero(nvars) for _ in range(nvars)])

    @classmethod
    def coordinate(cls, nvars: int, i: int) -> "PolyVec":
        return cls([Poly.const(nvars, int(j == i)) for j in range(nvars)])

    def apply(self, f: Poly) -> Poly:
        """Directional derivative v(f)."""
        out = Poly.zero(f.nvars)
        for i, c in enumerate(self.comps):
            if not c.is_zero():
                df = f.diff(i)
                if not df.is_zero():
                    out = out + c * df
        return out

    def __add__(self, other: "PolyVec") -> "PolyVec":
        return PolyVec([a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return PolyVec([-a for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s) -> "PolyVec":
        return PolyVec([a * s for a in self.comps])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def degree(self) -> int:
        return max((c.degree() for c in self.comps), default=-1)

    def evaluate(self, point) -> list[Fraction]:
        return [c.evaluate(point) for c in self.comps]

    def __eq__(self, other):
        if not isinstance(other, PolyVec):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        parts = [f"({c})*d{i + 1}" for i, c in enumerate(self.comps) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def vector_bracket(v: PolyVec, w: PolyVec) -> PolyVec:
    """Lie bracket ``[v, w] = v w - w v`` acting on functions."""
    return PolyVec([v.apply(wi) - w.apply(vi) for vi, wi in zip(v.comps, w.comps)])


class PolyMultiVec:
    """Multivector field stored as a weighted sum of decomposable wedges."""

    __slots__ = ("degree", "nvars", "terms")

    def __init__(self, degree: int, nvars: int, terms: Iterable[tuple[object, Sequence[PolyVec]]] = ()):
        self.degree = degree
        self.nvars = nvars
        clean = []
        for w, factors in terms:
            w = ea.to_fraction(w)
            factors = tuple(factors)
            if len(factors) != degree:
                raise ValueError(f"term of degree {len(factors)} in a degree-{degree} multivector")
            if w:
                clean.append((w, factors))
        self.terms = tuple(clean)

    @classmethod
    def wedge_of(cls, vs: Sequence[PolyVec], weight=1) -> "PolyMultiVec":
        vs = list(vs)
        nvars = vs[0].nvars if vs else 0
        return cls(len(vs), nvars, [(weight, vs)])

    def __add__(self, other: "PolyMultiVec") -> "PolyMultiVec":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return PolyMultiVec(self.degree, self.nvars or other.nvars, self.terms + other.terms)

    def __neg__(self):
        return PolyMultiVec(self.degree, self.nvars, [(-w, f) for w, f in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "PolyMultiVec":
        s = ea.to_fraction(s)
        return PolyMultiVec(self.degree, self.nvars, [(s * w, f) for w, f in self.terms])


def interior(v: PolyVec, a: PolyForm) -> PolyForm:
    """Insert ``v`` into the first slot of ``a``."""
    out: dict[tuple[int, ...], Poly] = {}
    for idx, p in a.comps.items():
        for pos, i in enumerate(idx):
            c = v.comps[i]
            if c.is_zero():
                continue
            key = idx[:pos] + idx[pos + 1:]
            term = c * p
            if pos % 2:
                term = -term
            out[key] = out[key] + term if key in out else term
    return PolyForm(a.nvars, a.degree - 1, {k: q for k, q in out.items() if not q.is_zero()})


def contract(w: PolyMultiVec, a: PolyForm) -> PolyForm:
    """``a(v_1, ..., v_k, -)`` summed over the decomposable terms of ``w``."""
    total = PolyForm.zero(a.nvars, a.degree - w.degree)
    for weight, factors in w.terms:
        cur = a
        for v in factors:
            cur = interior(v, cur)
            if cur.is_zero():
                break
        if not cur.is_zero():
            total = total + cur * weight
    return total


def contract_vectors(vs: Sequence[PolyVec], a: PolyForm) -> PolyForm:
    if not vs:
        return a
    return contract(PolyMultiVec.wedge_of(vs), a)


def lie_derivative(v: PolyVec, a: PolyForm) -> PolyForm:
    """Lie derivative via Cartan's formula ``d i_v a + i_v d a``."""
    return ext_d(interior(v, a)) + interior(v, ext_d(a))


def delta_bar(w: PolyMultiVec) -> PolyMultiVec:
    """Homology differential on multivector fields, built from vector field brackets."""
    k = w.degree
    if k < 2:
        return PolyMultiVec(max(k - 1, 0), w.nvars, [])
    terms = []
    for weight, fs in w.terms:
        for a in range(k):
            for b in range(a + 1, k):
                sign = -1 if (a + b) % 2 else 1
                rest = fs[:a] + fs[a + 1:b] + fs[b + 1:]
                terms.append((sign * weight, (vector_bracket(fs[a], fs[b]),) + rest))
    return PolyMultiVec(k - 1, w.nvars, terms)


def poincare_operator(a: PolyForm) -> PolyForm:
    """Euler-radial homotopy operator centred at the origin.

    A term ``x^e dx_I`` with ``|e| = r`` and ``|I| = k`` maps to
    ``(1/(r+k)) sum_j (-1)^j x_{I_j} x^e dx_{I minus I_j}``.  Functions map to zero.
    """
    out: dict[tuple[int, ...], Poly] = {}
    k = a.degree
    for idx, p in a.comps.items():
        for e, c in p.terms.items():
            scale = c / (sum(e) + k)
            for pos, i in enumerate(idx):
                f = list(e)
                f[i] += 1
                key = idx[:pos] + idx[pos + 1:]
                term = Poly._raw(a.nvars, {tuple(f): -scale if pos % 2 else scale})
                out[key] = out[key] + term if key in out else term
    return PolyForm(a.nvars, k - 1, {key: q for key, q in out.items() if not q.is_zero()})


class NotClosedError(ValueError):
    """Raised when a primitive is requested for a form that is not closed."""


def poincare_primitive(a: PolyForm) -> PolyForm:
    """Primitive of a closed form of positive degree.

    Raises:
        NotClosedError: if ``d a`` is nonzero.
    """
    if a.degree < 1:
        raise ValueError("primitives are only defined for positive degree")
    if not ext_d(a).is_zero():
        raise NotClosedError(f"form is not closed: d a = {ext_d(a)!r}")
    return poincare_operator(a)


def homotopy_identity_check(a: PolyForm) -> PolyForm:
    """Residual of the homotopy identity; always the zero form."""
    hd = poincare_operator(ext_d(a))
    if a.degree == 0:
        const = a.function_part().constant_term()
        return hd - (a - PolyForm.function(Poly.const(a.nvars, const)))
    return ext_d(poincare_operator(a)) + hd - a


def extended_cartan_residual(a: PolyForm, vs: Sequence[PolyVec]) -> PolyForm:
    """Residual of the extended Cartan formula for ``k = len(vs) >= 2`` fields.

    ``(-1)^k d i(v_1..v_k) a - [ i(dbar(v_1..v_k)) a + sum_i (-1)^i i(v_1..^v_i..v_k) L_{v_i} a
    + i(v_1..v_k) d a ]`` with 1-based ``i``.  Zero whenever conventions agree.
    """
    k = len(vs)
    if k < 2:
        raise ValueError("need at least two vector fields")
    w = PolyMultiVec.wedge_of(vs)
    lhs = ext_d(contract(w, a))
    if k % 2:
        lhs = -lhs
    rhs = contract(delta_bar(w), a)
    for i in range(k):
        term = contract_vectors(list(vs[:i]) + list(vs[i + 1:]), lie_derivative(vs[i], a))
        rhs = rhs + (term if i % 2 else -term)
    rhs = rhs + contract(w, ext_d(a))
    return lhs - rhs
