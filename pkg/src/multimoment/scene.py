"""Scene and moment-map files (JSON, rationals as strings, 1-based indices)."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

from .action import GAction, NPlecticStructure
from .exactalg import format_rational, parse_rational
from .liealg import LieAlgebra, lie_kernel
from .moment import HomotopyMomentMap, WeakMomentMap
from .polyforms import Poly, PolyForm, PolyVec


class SceneError(ValueError):
    """Parse or consistency failure, annotated with the JSON path where it happened."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise SceneError(path, message)


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise SceneError(path, f"expected a rational string, got {x!r}")
    try:
        return parse_rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SceneError(path, str(exc)) from None


def _int(x, path: str, lo: Optional[int] = None, hi: Optional[int] = None) -> int:
    _expect(isinstance(x, int) and not isinstance(x, bool), path, f"expected an integer, got {x!r}")
    _expect(lo is None or x >= lo, path, f"{x} < {lo}")
    _expect(hi is None or x <= hi, path, f"{x} > {hi}")
    return x


def dumps(data, indent: int = 2, _level: int = 0) -> str:
    """JSON with objects indented and dict-free lists kept on one line."""
    pad = " " * (indent * (_level + 1))
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in sorted(data.items())]
        return "{\n" + ",\n".join(items) + "\n" + " " * (indent * _level) + "}"
    if isinstance(data, list) and any(isinstance(v, (dict, list)) and _has_dict(v) for v in data):
        items = [pad + dumps(v, indent, _level + 1) for v in data]
        return "[\n" + ",\n".join(items) + "\n" + " " * (indent * _level) + "]"
    return json.dumps(data, separators=(", ", ": "))


def _has_dict(x) -> bool:
    if isinstance(x, dict):
        return True
    return isinstance(x, list) and any(_has_dict(v) for v in x)


# -- polynomials and forms --------------------------------------------------

def poly_to_data(p: Poly) -> list:
    return [[list(e), format_rational(c)] for e, c in sorted(p.terms.items())]


def poly_from_data(data, nvars: int, path: str = "poly") -> Poly:
    _expect(isinstance(data, list), path, "expected a list of [exponents, coefficient] terms")
    terms: dict = {}
    for i, term in enumerate(data):
        tp = f"{path}[{i}]"
        _expect(isinstance(term, list) and len(term) == 2, tp, "expected [exponents, coefficient]")
        exps, coeff = term
        _expect(isinstance(exps, list) and len(exps) == nvars, tp, f"expected {nvars} exponents")
        e = tuple(_int(v, f"{tp}[0][{j}]", lo=0) for j, v in enumerate(exps))
        terms[e] = terms.get(e, Fraction(0)) + _rational(coeff, f"{tp}[1]")
    return Poly(nvars, terms)


def form_to_data(a: PolyForm) -> list:
    return [[[i + 1 for i in idx], poly_to_data(p)] for idx, p in sorted(a.comps.items())]


def form_from_data(data, nvars: int, degree: int, path: str = "form") -> PolyForm:
    _expect(isinstance(data, list), path, "expected a list of [indices, poly] components")
    out = PolyForm.zero(nvars, degree)
    for i, comp in enumerate(data):
        cp = f"{path}[{i}]"
        _expect(isinstance(comp, list) and len(comp) == 2, cp, "expected [indices, poly]")
        idx, poly = comp
        _expect(isinstance(idx, list) and len(idx) == degree, cp, f"expected {degree} indices")
        idx0 = [_int(v, f"{cp}[0][{j}]", lo=1, hi=nvars) - 1 for j, v in enumerate(idx)]
        _expect(len(set(idx0)) == len(idx0), cp, "repeated index")
        p = poly_from_data(poly, nvars, f"{cp}[1]")
        order = sorted(range(len(idx0)), key=lambda t: idx0[t])
        inversions = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
        out = out + PolyForm.basic(nvars, sorted(idx0), p * (-1 if inversions % 2 else 1))
    return out


def vec_to_data(v: PolyVec) -> list:
    return [poly_to_data(c) for c in v.comps]


def vec_from_data(data, nvars: int, path: str = "field") -> PolyVec:
    _expect(isinstance(data, list) and len(data) == nvars, path, f"expected {nvars} component polynomials")
    return PolyVec([poly_from_data(c, nvars, f"{path}[{i}]") for i, c in enumerate(data)])


def vector_to_data(v) -> list:
    return [format_rational(c) for c in v]


# -- scenes ---------------------------------------------------------------

@dataclass
class Scene:
    algebra: LieAlgebra
    structure: Optional[NPlecticStructure] = None
    action: Optional[GAction] = None
    pairing: Optional[list] = None
    settings: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True, separators=(",", ":")).encode()).hexdigest()

    def require_geometry(self) -> tuple[GAction, NPlecticStructure]:
        if self.action is None or self.structure is None:
            raise SceneError("$", "this command needs the structure and action sections")
        return self.action, self.structure


def algebra_from_data(data, path: str = "lie_algebra") -> LieAlgebra:
    _expect(isinstance(data, dict), path, "expected an object")
    dim = _int(data.get("dim"), f"{path}.dim", lo=0)
    triples = []
    for i, t in enumerate(data.get("brackets", [])):
        tp = f"{path}.brackets[{i}]"
        _expect(isinstance(t, list) and len(t) == 4, tp, "expected [i, j, k, coefficient]")
        a, b, c = (_int(t[m], f"{tp}[{m}]", lo=1, hi=dim) for m in range(3))
        _expect(a != b, tp, "bracket of a basis vector with itself")
        triples.append((a, b, c, _rational(t[3], f"{tp}[3]")))
    name = data.get("name", "")
    _expect(isinstance(name, str), f"{path}.name", "expected a string")
    try:
        return LieAlgebra.from_triples(dim, triples, name)
    except ValueError as exc:
        raise SceneError(path, str(exc)) from None


def algebra_to_data(g: LieAlgebra) -> dict:
    return {"name": g.name, "dim": g.dim,
            "brackets": [[i, j, k, format_rational(c)] for i, j, k, c in g.triples()]}


def parse_scene(data: Any) -> Scene:
    _expect(isinstance(data, dict), "$", "scene must be an object")
    known = {"lie_algebra", "structure", "action", "cartan", "settings", "description", "moment_map"}
    for key in data:
        _expect(key in known, f"$.{key}", "unknown section")
    _expect("lie_algebra" in data, "$", "missing lie_algebra section")
    g = algebra_from_data(data["lie_algebra"])
    scene = Scene(g, raw=data)
    if "structure" in data:
        st = data["structure"]
        _expect(isinstance(st, dict), "structure", "expected an object")
        N = _int(st.get("N"), "structure.N", lo=1)
        n = _int(st.get("n"), "structure.n", lo=1, hi=N - 1)
        omega = form_from_data(st.get("omega"), N, n + 1, "structure.omega")
        bp = st.get("basepoint", [])
        _expect(isinstance(bp, list) and len(bp) in (0, N), "structure.basepoint", f"expected {N} coordinates")
        bp = tuple(_rational(x, f"structure.basepoint[{i}]") for i, x in enumerate(bp))
        scene.structure = NPlecticStructure(N, n, omega, bp)
    if "action" in data:
        _expect(scene.structure is not None, "action", "an action needs a structure section")
        acts = data["action"]
        _expect(isinstance(acts, list) and len(acts) == g.dim, "action", f"expected {g.dim} vector fields")
        gens = tuple(vec_from_data(v, scene.structure.N, f"action[{i}]") for i, v in enumerate(acts))
        scene.action = GAction(g, gens)
    if "cartan" in data:
        cp = data["cartan"]
        _expect(isinstance(cp, dict), "cartan", "expected an object")
        pairing = cp.get("pairing")
        if pairing is not None:
            _expect(isinstance(pairing, list) and len(pairing) == g.dim, "cartan.pairing",
                    f"expected a {g.dim}x{g.dim} matrix")
            scene.pairing = []
            for i, row in enumerate(pairing):
                _expect(isinstance(row, list) and len(row) == g.dim, f"cartan.pairing[{i}]", f"expected {g.dim} entries")
                scene.pairing.append([_rational(x, f"cartan.pairing[{i}][{j}]") for j, x in enumerate(row)])
    settings = data.get("settings", {})
    _expect(isinstance(settings, dict), "settings", "expected an object")
    for key in ("degree_cap", "sample_points", "seed"):
        if key in settings:
            _int(settings[key], f"settings.{key}", lo=0)
    scene.settings = dict(settings)
    return scene


def scene_to_data(scene: Scene) -> dict:
    out: dict = {"lie_algebra": algebra_to_data(scene.algebra)}
    s = scene.structure
    if s is not None:
        out["structure"] = {"N": s.N, "n": s.n, "omega": form_to_data(s.omega),
                            "basepoint": vector_to_data(s.basepoint)}
    if scene.action is not None:
        out["action"] = [vec_to_data(v) for v in scene.action.generators]
    if scene.pairing is not None:
        out["cartan"] = {"pairing": [vector_to_data(r) for r in scene.pairing]}
    if scene.settings:
        out["settings"] = dict(scene.settings)
    return out


def load_scene(path: str) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_scene(data)


def fixture_names() -> list[str]:
    root = resources.files("multimoment") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_data(name: str) -> dict:
    text = (resources.files("multimoment") / "fixtures" / f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_fixture(name: str) -> Scene:
    return parse_scene(fixture_data(name))


# -- moment-map files -------------------------------------------------------

def map_to_data(f) -> dict:
    flavor = f.flavor
    comps = []
    basis = {}
    for k in f.arities():
        if flavor == "weak":
            basis[str(k)] = [vector_to_data(b) for b in lie_kernel(f.algebra, k).basis]
        else:
            basis[str(k)] = [[i + 1 for i in idx] for idx in f.algebra.basis(k)]
        for i, fm in enumerate(f.forms(k)):
            if not fm.is_zero():
                comps.append({"arity": k, "index": i + 1, "form": form_to_data(fm)})
    return {"flavor": flavor, "N": f.N, "n": f.n, "components": comps, "basis": basis}


def map_from_data(data: Any, g: LieAlgebra, N: int, n: int):
    _expect(isinstance(data, dict), "$", "map file must be an object")
    flavor = data.get("flavor")
    _expect(flavor in ("weak", "homotopy"), "$.flavor", "expected 'weak' or 'homotopy'")
    _expect(data.get("N", N) == N and data.get("n", n) == n, "$", "map dimensions differ from the scene")
    top = min(n, g.dim)
    dims = {k: (lie_kernel(g, k).dim if flavor == "weak" else len(g.basis(k))) for k in range(1, top + 1)}
    comps = {k: [PolyForm.zero(N, n - k) for _ in range(d)] for k, d in dims.items()}
    entries = data.get("components", [])
    _expect(isinstance(entries, list), "$.components", "expected a list")
    for i, entry in enumerate(entries):
        ep = f"$.components[{i}]"
        _expect(isinstance(entry, dict), ep, "expected an object")
        k = _int(entry.get("arity"), f"{ep}.arity", lo=1, hi=top)
        _expect(dims[k] > 0, f"{ep}.arity", "empty domain at this arity")
        idx = _int(entry.get("index"), f"{ep}.index", lo=1, hi=dims[k])
        comps[k][idx - 1] = comps[k][idx - 1] + form_from_data(entry.get("form"), N, n - k, f"{ep}.form")
    cls = WeakMomentMap if flavor == "weak" else HomotopyMomentMap
    return cls(g, N, n, {k: tuple(v) for k, v in comps.items()})


def load_map(path: str, scene: Scene):
    act, s = scene.require_geometry()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return map_from_data(data, scene.algebra, s.N, s.n)


def cochain_to_data(c) -> dict:
    return {"flavor": c.flavor, "total_degree": c.total_degree,
            "components": [{"arity": k, "index": i + 1, "form": form_to_data(fm)}
                           for k, forms in sorted(c.components.items()) for i, fm in enumerate(forms)
                           if not fm.is_zero()]}
