"""Command-line front end: ``projmetric <command> ...``.

Every command builds one report (a nested dict of strings, numbers, lists)
and renders it either as indented text or, with ``--json``, as JSON with the
same fields.  Exit codes: 0 success, 2 input error, 3 precondition failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .algebra import Poly
from .errors import (
    FelsError,
    InputError,
    InvariantViolation,
    PreconditionError,
    ProjmetricError,
    SlotError,
    VarianceError,
)
from .geometry import curvature, weyl_v
from .io import StructureFile, connection_of, load_structure
from .metrisability import (
    constraint_residual,
    det_sigma,
    metric_from_sigma,
    metrisability_residual,
    pairing,
)
from .obstructions import (
    T_METHODS,
    T_ROUTE_RATIOS,
    THEOREM2_LABELS,
    Covariants,
    check_metric_vanishing,
    constraint_map,
    einstein_weyl_obstructions,
    t_tensor,
    tensor_to_sextic,
    theorem2_tensors,
)
from .ode import connection_from_system, fels_residual, system_from_connection
from .reptheory import sl2_branch, sl3_sym_decompose
from .invariants import span_analysis
from .tensor import Tensor

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4
NOT_METRISABLE_NOTE = "vanishing obstructions do not imply metrisability"
OBSTRUCTION_SETS = ("q", "s", "t", "theorem2", "all")


# ---------------------------------------------------------------------------
# report values

def rat(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def tensor_listing(t: Tensor, name: str) -> list[str]:
    return t.format(name).split("\n")


def verdict(t: Tensor, name: str) -> dict[str, Any]:
    comps = t.nonzero_components()
    if not comps:
        return {"verdict": "zero"}
    listing = tensor_listing(t, name)
    return {"verdict": "nonzero", "witness": listing[0], "components": listing}


# ---------------------------------------------------------------------------
# rendering

def render_text(report: dict) -> str:
    lines: list[str] = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list):
            if not value:
                lines.append(f"{pad}{key}: []")
            elif all(not isinstance(v, (dict, list)) for v in value):
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  {v}" for v in value)
            else:
                lines.append(f"{pad}{key}:")
                for i, v in enumerate(value, 1):
                    emit(f"[{i}]", v, indent + 1)
        else:
            if isinstance(value, bool):
                value = "yes" if value else "no"
            lines.append(f"{pad}{key}: {value}")

    for k, v in report.items():
        emit(k, v, 0)
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# helpers

def _v_of(sf: StructureFile) -> Tensor:
    if sf.kind == "weyl_tensor_v":
        return sf.obj
    return weyl_v(connection_of(sf))


def _parse_point(items: Sequence[str] | None, variables: Sequence[str]) -> dict[str, Fraction]:
    point: dict[str, Fraction] = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise InputError(f"--at expects name=value, got {part!r}")
            name, value = (s.strip() for s in part.split("=", 1))
            if name not in variables:
                raise InputError(f"--at: unknown variable {name!r}; known: {', '.join(variables)}")
            try:
                point[name] = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise InputError(f"--at: {value!r} is not a rational number") from None
    return point


def _header(command: str, argv: Sequence[str]) -> dict:
    return {"command": " ".join(["projmetric", command, *argv])}


def _structure_info(sf: StructureFile) -> dict:
    info = {"kind": sf.kind}
    if "name" in sf.meta:
        info["name"] = sf.meta["name"]
    info["coordinates"] = ", ".join(sf.coordinates)
    if sf.parameters:
        info["parameters"] = ", ".join(sf.parameters)
    return info


# ---------------------------------------------------------------------------
# commands

def cmd_curvature(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    gamma = connection_of(sf)
    dec = curvature(gamma)
    V = weyl_v(gamma)
    report = {
        "structure": _structure_info(sf),
        "connection": tensor_listing(gamma.gamma.permute((2, 0, 1)), "Gamma"),
        "riemann": tensor_listing(dec.riemann, "R"),
        "schouten": tensor_listing(dec.schouten, "P"),
        "beta": tensor_listing(dec.beta, "beta"),
        "weyl": tensor_listing(dec.weyl, "W"),
        "V": tensor_listing(V, "V"),
    }
    return report, EXIT_OK


def cmd_obstructions(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    wanted = {s.strip() for s in args.set.split(",") if s.strip()}
    bad = wanted - set(OBSTRUCTION_SETS)
    if bad:
        raise InputError(f"--set: unknown obstruction(s) {', '.join(sorted(bad))}; "
                         f"choose from {', '.join(OBSTRUCTION_SETS)}")
    if "all" in wanted:
        wanted = {"q", "s", "t", "theorem2"}
    V = _v_of(sf)
    cv = Covariants(V)
    obs: dict[str, Any] = {}
    all_zero = True
    if "q" in wanted:
        obs["Q"] = verdict(cv["Q"], "Q")
        all_zero &= cv["Q"].is_zero()
    if "s" in wanted:
        obs["S"] = verdict(cv["S"], "S")
        all_zero &= cv["S"].is_zero()
    if "t" in wanted:
        T = t_tensor(V, args.method, covariants=cv)
        entry = verdict(T, "T")
        entry["method"] = args.method
        if args.method != "combination":
            entry["normalisation_relative_to_combination"] = rat(
                T_ROUTE_RATIOS[(args.method, "combination")])
        entry["sextic"] = str(tensor_to_sextic(T))
        obs["T"] = entry
        all_zero &= T.is_zero()
    if "theorem2" in wanted:
        for label, t in zip(THEOREM2_LABELS, theorem2_tensors(V, cv)):
            obs[label] = verdict(t, label)
            all_zero &= t.is_zero()
    report: dict[str, Any] = {"structure": _structure_info(sf),
                              "V": tensor_listing(V, "V"),
                              "obstructions": obs}
    if sf.kind == "weyl_structure":
        ew = einstein_weyl_obstructions(sf.obj)
        report["einstein_weyl"] = {
            "einstein_weyl": ew.data.phi.is_zero(),
            "f": tensor_listing(ew.data.f, "f"),
            "closed_form_V_ratio": rat(ew.v_ratio) if ew.v_ratio is not None else "not proportional",
            "closed_form_Q_ratio": rat(ew.q_ratio) if ew.q_ratio is not None else "not proportional",
        }
    if all_zero:
        report["note"] = NOT_METRISABLE_NOTE
    return report, EXIT_OK


def cmd_constraints(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    V = _v_of(sf)
    point = _parse_point(args.at, sf.variables)
    if point:
        V = V.subs(point)
    cm = constraint_map(V)
    report: dict[str, Any] = {"structure": _structure_info(sf)}
    if point:
        report["point"] = ", ".join(f"{k}={rat(v)}" for k, v in sorted(point.items()))
    report["matrix_columns"] = "s11 s12 s13 s22 s23 s33"
    report["matrix"] = [" ".join(rat(x) for x in row) for row in cm.matrix]
    if cm.kernel is None:
        report["kernel"] = "entries are not constant; pass --at to evaluate at a point"
    else:
        report["kernel_dimension"] = cm.kernel_dimension
        report["kernel"] = [", ".join(f"{k}={rat(v)}" for k, v in vec.items() if v)
                            for vec in cm.kernel_description()]
    return report, EXIT_OK


def cmd_verify_sigma(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    ssf = load_structure(args.sigma)
    if ssf.kind != "sigma_candidate":
        raise InputError(f"{args.sigma}: expected a sigma_candidate file, got {ssf.kind}")
    gamma = connection_of(sf)
    names = sf.coordinates + tuple(p for p in ssf.parameters if p not in sf.coordinates)
    sigma = ssf.obj.map(lambda x: Poly.coerce(x).over(names) if isinstance(x, Poly) else x)
    res = metrisability_residual(gamma, sigma)
    d = det_sigma(sigma)
    V = weyl_v(gamma)
    report: dict[str, Any] = {
        "structure": _structure_info(sf),
        "sigma": tensor_listing(sigma, "sigma"),
        "metrisability_residual": verdict(res, "E"),
        "constraint_residual": verdict(constraint_residual(V, sigma), "Xi"),
        "det_sigma": tensor_listing(d, "det"),
        "pairing_with_det_sigma": verdict(pairing(gamma, sigma, d), "pairing"),
    }
    solves = res.is_zero()
    report["solves_metrisability_equation"] = solves
    if solves and not d.is_zero():
        try:
            g = metric_from_sigma(sigma)
            report["inverse_metric"] = tensor_listing(g, "g")
        except PreconditionError as exc:
            report["inverse_metric"] = f"not rational: {exc}"
    elif solves:
        report["inverse_metric"] = "degenerate solution (det sigma = 0)"
    return report, EXIT_OK


def _ode_of(sf: StructureFile):
    if sf.kind != "ode_system":
        raise InputError(f"expected an ode_system file, got {sf.kind}")
    return sf.obj


def cmd_fels(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    sys_ = _ode_of(sf)
    res = fels_residual(sys_)
    bad = [f"S^{i}_({j}{k}{l}) = {v}" for (i, j, k, l), v in sorted(res.items()) if v]
    report = {"structure": _structure_info(sf), "system": sys_.format().split("\n"),
              "fels_conditions_hold": not bad}
    if bad:
        report["failing_components"] = bad
    return report, EXIT_OK if not bad else EXIT_PRECONDITION


def cmd_to_ode(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    sys_ = system_from_connection(connection_of(sf))
    return {"structure": _structure_info(sf), "F2": str(sys_.F2), "F3": str(sys_.F3)}, EXIT_OK


def cmd_from_ode(args) -> tuple[dict, int]:
    sf = load_structure(args.file)
    gamma = connection_from_system(_ode_of(sf))
    return {
        "structure": _structure_info(sf),
        "connection": tensor_listing(gamma.gamma.permute((2, 0, 1)), "Gamma"),
        "V": tensor_listing(weyl_v(gamma), "V"),
    }, EXIT_OK


def cmd_rep(args) -> tuple[dict, int]:
    if args.rep_command == "sym":
        dec = sl3_sym_decompose(args.k, (args.a, args.b))
        return {"representation": f"Sym^{args.k}({args.a},{args.b})",
                "dimension": dec.dimension(),
                "decomposition": dec.format()}, EXIT_OK
    br = sl2_branch((args.a, args.b))
    return {"representation": f"({args.a},{args.b})",
            "sl2_branching": ", ".join(f"{k}:{m}" for k, m in br.items())}, EXIT_OK


def cmd_span(args) -> tuple[dict, int]:
    sa = span_analysis(args.degree)
    report = {
        "degree": sa.degree,
        "schemes": len(sa.schemes),
        "span_dimension": sa.span_dim,
        "vanishing_dimension": sa.vanishing_dim,
        "sl3_multiplicity": sa.sl3_multiplicity,
        "basis": [sa.schemes[i].describe() for i in sa.basis],
        "vanishing_combinations": [
            " + ".join(f"({rat(c)})[{s.describe()}]" for s, c in sorted(combo.items()))
            for combo in sa.vanishing_basis],
        "all_certified": sa.all_certified,
    }
    if not sa.all_certified:
        return report, EXIT_INTERNAL
    return report, EXIT_OK


def cmd_metric_vanishing(args) -> tuple[dict, int]:
    v = check_metric_vanishing(args.expr)
    report: dict[str, Any] = {
        "expression": v.expression,
        "vanishes_on_metric_family": v.vanishes_on_metric_family,
    }
    if v.witness is not None:
        report["generic_witness"] = {
            "V": tensor_listing(v.witness, "V"),
            "component": ",".join(map(str, v.witness_component)),
            "value": rat(v.witness_value),
        }
    else:
        report["generic_witness"] = "none found (expression may vanish identically)"
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projmetric",
                                description="Projective metrisability obstructions in dimension 3.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("curvature", parents=[common], help="curvature decomposition and V")
    s.add_argument("file")
    s.set_defaults(func=cmd_curvature)

    s = sub.add_parser("obstructions", parents=[common], help="Q, S, T and the relation tensors")
    s.add_argument("file")
    s.add_argument("--set", default="all", help="comma list from q,s,t,theorem2,all")
    s.add_argument("--method", default="combination", choices=T_METHODS)
    s.set_defaults(func=cmd_obstructions)

    s = sub.add_parser("constraints", parents=[common], help="the algebraic constraint map")
    s.add_argument("file")
    s.add_argument("--at", action="append", help="evaluation point, e.g. x1=1,x2=0")
    s.set_defaults(func=cmd_constraints)

    s = sub.add_parser("verify-sigma", parents=[common], help="check a metrisability solution")
    s.add_argument("file")
    s.add_argument("--sigma", required=True)
    s.set_defaults(func=cmd_verify_sigma)

    for name, func, text in (("fels", cmd_fels, "check the Fels conditions"),
                             ("to-ode", cmd_to_ode, "geodesic ODE system of a connection"),
                             ("from-ode", cmd_from_ode, "connection of an ODE system")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("rep", help="sl3 representation theory")
    rsub = s.add_subparsers(dest="rep_command", required=True)
    r = rsub.add_parser("sym", parents=[common], help="decompose Sym^K of (A,B)")
    r.add_argument("k", type=int)
    r.add_argument("a", type=int)
    r.add_argument("b", type=int)
    r.set_defaults(func=cmd_rep)
    r = rsub.add_parser("branch", parents=[common], help="principal sl2 branching of (A,B)")
    r.add_argument("a", type=int)
    r.add_argument("b", type=int)
    r.set_defaults(func=cmd_rep)

    s = sub.add_parser("span", parents=[common], help="enumerate degree-D covariants")
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_span)

    s = sub.add_parser("metric-vanishing", parents=[common],
                       help="does an expression in named covariants vanish on metric-form V")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_metric_vanishing)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        body, code = args.func(args)
    except (InputError, VarianceError, SlotError) as exc:
        err.write(f"projmetric: input error: {exc}\n")
        return EXIT_INPUT
    except FelsError as exc:
        err.write(f"projmetric: {exc}\n")
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        err.write(f"projmetric: precondition failed ({type(exc).__name__}): {exc}\n")
        return EXIT_PRECONDITION
    except InvariantViolation as exc:
        err.write(f"projmetric: internal check failed: {exc}\n")
        return EXIT_INTERNAL
    except ProjmetricError as exc:
        err.write(f"projmetric: input error: {exc}\n")
        return EXIT_INPUT
    sub_argv = argv[argv.index(args.command) + 1:] if args.command in argv else []
    report = {**_header(args.command, [a for a in sub_argv if a != "--json"]), **body}
    out.write(render_json(report) if args.json else render_text(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
