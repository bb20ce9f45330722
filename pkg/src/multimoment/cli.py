"""Command-line front end.

Exit codes: 0 success, 2 parse or validation failure (including violated
hypotheses), 3 a mathematical "no" (obstruction, failed verification),
4 undecided within the degree cap.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import __version__
from .action import validate_action
from .complexes import phi, sample_points
from .exactalg import format_rational
from .liealg import cartan_cocycle, ce_cohomology, cohomology_restriction_rank, jacobi_check, lie_kernel
from .moment import (UNDECIDED, HypothesisViolation, Obstructed, construct_homotopy, construct_weak,
                     equivariance_check, equivariantize, existence_report, strict_extension, verify_homotopy,
                     verify_weak)
from .scene import (Scene, SceneError, cochain_to_data, dumps, fixture_names, form_to_data, load_fixture, load_map,
                    load_scene, map_to_data, poly_to_data, vec_to_data, vector_to_data)

EXIT_OK, EXIT_INVALID, EXIT_NO, EXIT_UNDECIDED = 0, 2, 3, 4


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _open_scene(source: str) -> Scene:
    if source.startswith("fixture:"):
        name = source[len("fixture:"):]
        if name not in fixture_names():
            raise CommandError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
        return load_fixture(name)
    return load_scene(source)


def _setting(args, scene: Scene, key: str, default):
    val = getattr(args, key, None)
    if val is not None:
        return val
    return scene.settings.get(key, default)


def _points(args, scene: Scene):
    s = scene.structure
    return sample_points(s.N, _setting(args, scene, "sample_points", 3), _setting(args, scene, "seed", 0))


def _write_json(path: str, data):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(data) + "\n")


def _residuals(rep) -> dict:
    return {f"{k}:{i}": form_to_data(r) for (k, i), r in sorted(rep.residuals.items())}


def _require_valid(scene: Scene, args):
    act, s = scene.require_geometry()
    rep = validate_action(act, s, _points(args, scene))
    if not rep.passed:
        raise CommandError("scene does not validate; run the validate command for details")
    return act, s


def _load_map(args, scene: Scene, flavor: Optional[str] = None):
    if not args.map:
        raise CommandError("--map is required")
    f = load_map(args.map, scene)
    if flavor is not None and f.flavor != flavor:
        raise CommandError(f"expected a {flavor} map, got a {f.flavor} map")
    return f


# -- commands ---------------------------------------------------------------

def cmd_validate(scene: Scene, args) -> tuple[int, dict, dict]:
    if scene.action is None:
        ok, triple = jacobi_check(scene.algebra)
        verdicts = {"jacobi": ok, "passed": ok}
        return (EXIT_OK if ok else EXIT_INVALID), verdicts, {"jacobi_triple": list(triple) if triple else None}
    rep = validate_action(scene.action, scene.structure, _points(args, scene))
    verdicts = {
        "jacobi": rep.jacobi_ok,
        "closed": rep.closed,
        "homomorphism": not rep.homomorphism_failures,
        "preserves_omega": not rep.preservation_failures,
        "nondegenerate": all(ok for _, ok, _ in rep.nondegeneracy),
        "passed": rep.passed,
    }
    residuals = {
        "jacobi_triple": list(rep.jacobi_triple) if rep.jacobi_triple else None,
        "d_omega": form_to_data(rep.d_omega) if rep.d_omega is not None else None,
        "homomorphism": {f"{i}:{j}": vec_to_data(v) for (i, j), v in rep.homomorphism_failures},
        "preservation": {str(i): form_to_data(lv) for i, lv in rep.preservation_failures},
        "nondegeneracy": [{"point": vector_to_data(pt), "ok": ok, "kernel": [vector_to_data(v) for v in ker]}
                          for pt, ok, ker in rep.nondegeneracy],
    }
    return (EXIT_OK if rep.passed else EXIT_INVALID), verdicts, residuals


def _algebra_summary(scene: Scene, top: int) -> dict:
    g = scene.algebra
    out = {
        "kernel_dims": {str(k): lie_kernel(g, k).dim for k in range(1, g.dim + 1)},
        "cohomology_dims": {str(k): ce_cohomology(g, k).dim for k in range(0, min(top, g.dim) + 1)},
        "restriction_ranks": {str(k): list(cohomology_restriction_rank(g, k)) for k in range(1, min(top, g.dim) + 1)},
    }
    return out


def _cartan_summary(scene: Scene) -> dict:
    res = cartan_cocycle(scene.algebra, scene.pairing)
    return {
        "theta": [format_rational(v) for v in res.theta.values],
        "closed": res.closed,
        "class_zero": res.class_zero,
        "pairing_invariant": res.pairing_invariant,
    }


def cmd_analyze(scene: Scene, args) -> tuple[int, dict, dict]:
    g = scene.algebra
    if scene.action is None:
        ok, _ = jacobi_check(g)
        if not ok:
            raise CommandError("algebra fails the Jacobi identity")
        data = _algebra_summary(scene, g.dim)
        data["cartan"] = _cartan_summary(scene)
        verdicts = {"cartan_class_zero": data["cartan"]["class_zero"]}
        return EXIT_OK, verdicts, data
    act, s = _require_valid(scene, args)
    pts = _points(args, scene)
    rep = existence_report(act, s, len(pts), _setting(args, scene, "seed", 0))
    data = _algebra_summary(scene, s.n + 1)
    data["phi"] = {"values": [poly_to_data(v) for v in rep.phi.values],
                   "kernel_basis": [vector_to_data(b) for b in rep.phi.kernel]}
    obs = rep.obstruction
    data["c"] = {
        "point": vector_to_data(obs.point),
        "values": [format_rational(v) for v in obs.c_cocycle.values],
        "primitive": [format_rational(v) for v in obs.c_primitive.values] if obs.c_primitive else None,
        "points_checked": [vector_to_data(p) for p in obs.sample_points_checked],
    }
    data["corollary_hypotheses"] = {
        "low_cohomology_vanishes": rep.low_cohomology_vanishes,
        "kernel_invariants": {str(k): v for k, v in rep.kernel_invariants.items()},
        "kernel_dual_invariants": {str(k): v for k, v in rep.kernel_dual_invariants.items()},
        "invariants_vanish": rep.invariants_vanish,
    }
    if scene.pairing is not None:
        data["cartan"] = _cartan_summary(scene)
    verdicts = {
        "weak_exists": rep.weak_exists,
        "phi_zero": rep.phi.is_zero,
        "c_class_zero": obs.c_class_zero,
        "c_point_independent": obs.point_independent,
        "homotopy_exists": rep.homotopy_exists,
        "dichotomy_consistent": rep.consistent,
    }
    return EXIT_OK, verdicts, data


def cmd_construct(scene: Scene, args) -> tuple[int, dict, dict]:
    act, s = _require_valid(scene, args)
    if args.weak:
        f = construct_weak(act, s)
        ok = verify_weak(f, act, s).passed
    else:
        try:
            f = construct_homotopy(act, s, extra_points=_points(args, scene))
        except Obstructed as exc:
            rep = exc.report
            data = {
                "residual": [poly_to_data(r) for r in exc.residual],
                "residual_on_kernel": [poly_to_data(r) for r in exc.restricted],
                "phi": [poly_to_data(v) for v in phi(act, s).values],
                "c_values": [format_rational(v) for v in rep.c_cocycle.values],
                "c_class_zero": rep.c_class_zero,
            }
            return EXIT_NO, {"obstructed": True, "constructed": False}, data
        ok = verify_homotopy(f, act, s).passed
    payload = map_to_data(f)
    if args.out:
        _write_json(args.out, payload)
    return (EXIT_OK if ok else EXIT_NO), {"constructed": True, "verified": ok}, {"map": payload}


def cmd_verify(scene: Scene, args) -> tuple[int, dict, dict]:
    act, s = scene.require_geometry()
    f = _load_map(args, scene, "weak" if args.weak else "homotopy" if args.homotopy else None)
    rep = verify_weak(f, act, s) if f.flavor == "weak" else verify_homotopy(f, act, s)
    verdicts = {"flavor": f.flavor, "passed": rep.passed, "checked": rep.checked}
    return (EXIT_OK if rep.passed else EXIT_NO), verdicts, {"residuals": _residuals(rep)}


def cmd_extend(scene: Scene, args) -> tuple[int, dict, dict]:
    act, s = _require_valid(scene, args)
    f = _load_map(args, scene, "weak")
    try:
        rep = strict_extension(f, act, s)
    except HypothesisViolation as exc:
        raise CommandError(str(exc)) from None
    data = {
        "gamma": cochain_to_data(rep.gamma),
        "gamma_top": [form_to_data(fm) for fm in rep.gamma.forms(s.n + 1)] if s.n + 1 <= scene.algebra.dim else [],
    }
    verdicts = {
        "gamma_zero": rep.gamma.is_zero(),
        "gamma_top_zero": rep.gamma_top_zero,
        "gamma_in_image": rep.in_image,
        "gamma_closed": rep.closed,
        "extendable": rep.extendable,
        "extension_verified": rep.extension_verified,
        "restricts_to_input": rep.restricts_to_input,
    }
    if not rep.extendable:
        return EXIT_NO, verdicts, data
    payload = map_to_data(rep.extension)
    data["extension"] = payload
    if args.out:
        _write_json(args.out, payload)
    ok = rep.extension_verified and rep.restricts_to_input
    return (EXIT_OK if ok else EXIT_NO), verdicts, data


def cmd_equivariance(scene: Scene, args) -> tuple[int, dict, dict]:
    act, s = _require_valid(scene, args)
    f = _load_map(args, scene)
    ver = verify_weak(f, act, s) if f.flavor == "weak" else verify_homotopy(f, act, s)
    if not ver.passed:
        raise CommandError("the map does not verify")
    check = equivariance_check(f, act)
    data = {"residuals": {f"{x}:{k}:{i}": form_to_data(r) for (x, k, i), r in sorted(check.residuals.items())}}
    if check.equivariant:
        return EXIT_OK, {"equivariant": True, "obstruction": "vanishes"}, data
    rep = equivariantize(f, act, s, _setting(args, scene, "degree_cap", None))
    verdicts = {"equivariant": False, "obstruction": rep.obstruction_status, "degree_cap": rep.degree_cap}
    if rep.corrected is None:
        return (EXIT_UNDECIDED if rep.obstruction_status == UNDECIDED else EXIT_NO), verdicts, data
    data["correction"] = cochain_to_data(rep.correction)
    data["corrected"] = map_to_data(rep.corrected)
    if args.out:
        _write_json(args.out, data["corrected"])
    if args.correction_out:
        _write_json(args.correction_out, data["correction"])
    return EXIT_OK, verdicts, data


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "extend": cmd_extend,
    "equivariance": cmd_equivariance,
}


# -- plumbing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", required=True, help="scene file, or fixture:NAME for a shipped one")
    common.add_argument("--map", help="moment map file")
    common.add_argument("--out", help="where to write the resulting map")
    common.add_argument("--degree-cap", dest="degree_cap", type=int)
    common.add_argument("--sample-points", dest="sample_points", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("text", "structured"), default="structured")
    parser = argparse.ArgumentParser(prog="multimoment", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common])
    sub.add_parser("analyze", parents=[common])
    for name in ("construct", "verify"):
        p = sub.add_parser(name, parents=[common])
        flv = p.add_mutually_exclusive_group(required=name == "construct")
        flv.add_argument("--weak", action="store_true")
        flv.add_argument("--homotopy", action="store_true")
    sub.add_parser("extend", parents=[common])
    p = sub.add_parser("equivariance", parents=[common])
    p.add_argument("--correction-out", dest="correction_out")
    sub.add_parser("fixtures", help="list shipped fixtures")
    return parser


def _text(report: dict) -> str:
    lines = [f"{report['command']}: exit {report['exit_code']}"]
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    for key, val in report.get("verdicts", {}).items():
        lines.append(f"  {key}: {val}")
    if report.get("scene_digest"):
        lines.append(f"  scene: {report['scene_digest'][:16]}")
    return "\n".join(lines)


def run(argv: Optional[list[str]] = None) -> tuple[int, dict]:
    """Run a command and return ``(exit_code, report)`` without printing."""
    return execute(build_parser().parse_args(argv), argv)


def execute(args: argparse.Namespace, argv: Optional[list[str]] = None) -> tuple[int, dict]:
    if args.command == "fixtures":
        return EXIT_OK, {"command": "fixtures", "fixtures": fixture_names(), "exit_code": EXIT_OK,
                         "version": __version__}
    start = time.perf_counter()
    report: dict = {"command": args.command, "argv": list(argv) if argv is not None else sys.argv[1:],
                    "version": __version__}
    try:
        scene = _open_scene(args.scene)
        report["scene_digest"] = scene.digest
        report["scene_name"] = scene.algebra.name
        code, verdicts, data = COMMANDS[args.command](scene, args)
        report["verdicts"] = verdicts
        report["data"] = data
    except (SceneError, CommandError, FileNotFoundError, ValueError) as exc:
        code = getattr(exc, "code", EXIT_INVALID)
        report["error"] = str(exc)
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    code, report = execute(args, argv)
    if getattr(args, "format", "structured") == "text":
        print(_text(report))
    else:
        print(dumps(report))
    if report.get("error"):
        print(f"multimoment: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
