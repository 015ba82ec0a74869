"""Command-line entry point: ``oscpoisson <command> ...``.

Every command writes one JSON document (stdout or ``--output``) carrying
``schema_version``.  Exit codes: 0 all checks pass, 1 a verification failed,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .algebra import (
    PreconditionError,
    check_assoc_comm,
    check_form_invariance,
    check_jacobi,
    check_poisson,
    check_symmetric_leibniz,
    derivations,
    form_from_symmetric_coords,
    invariant_symmetric_forms,
    linear_map_from_coords,
    split_admissible,
)
from .bialgebra import (
    Coproduct,
    build_delta_leibniz,
    build_delta_lie,
    build_phi,
    check_cocycle,
    check_leibniz_bialgebra,
    check_phi_pairing_invariance,
    check_r_condition,
    dual_product,
)
from .classify import classify_oscillator, classify_report
from .exactmath import InconsistentSystem, Poly, as_poly, coeff_to_json, parse_coeff
from .geometry import (
    christoffels_at,
    christoffels_closed_form,
    curvature,
    fd_frame_at,
    frame_at,
    holonomy_span,
    inverse_frame_at,
    metric_at,
    metric_compat_residual,
    nabla,
    nabla0,
    pullback_metric_at,
    random_point,
    torsion,
    covariant_derivative_R,
)
from .oscillator import (
    Lambda,
    build_k_lambda,
    build_oscillator,
    is_generic,
    leibniz_product,
    oscillator_basis,
    poisson_product,
)

SCHEMA_VERSION = io.SCHEMA_VERSION
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    lam: Lambda | None = None
    c: object = None
    gamma: object = None
    mu: list = field(default_factory=list)
    r: str = ""
    u0: str = ""
    seed: int = 42
    samples: int = 100
    output: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass
class Outcome:
    report: dict
    passed: bool
    lines: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _require_lambda(cfg: RunConfig) -> Lambda:
    if cfg.lam is None:
        raise InputError("--lambda is required")
    return cfg.lam


def _genericity_warnings(lam: Lambda) -> list[str]:
    if is_generic(lam):
        return []
    return [f"lambda = ({lam}) is not generic: needs 0 < l1 < ... < ln and l_k != l_i + l_j"]


def _load(path: str, role: str | None = None):
    try:
        obj = io.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse {path}: {exc}") from None
    if role == "product" and isinstance(obj, Coproduct):
        raise InputError(f"{path} holds a coproduct, expected a product")
    if role == "coproduct" and not isinstance(obj, Coproduct):
        raise InputError(f"{path} holds a product, expected a coproduct")
    return obj


def _mu(cfg: RunConfig, lam: Lambda) -> list:
    mu = cfg.mu or [0] * lam.n
    if len(mu) != lam.n:
        raise InputError(f"--mu has {len(mu)} entries, lambda has {lam.n}")
    return mu


def _bialgebra_inputs(cfg: RunConfig):
    lam = _require_lambda(cfg)
    basis = oscillator_basis(lam.n)
    r = io.parse_r(cfg.r, basis)
    u0 = io.parse_vector(cfg.u0, basis)
    return lam, r, u0, _mu(cfg, lam)


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------


def cmd_build(cfg: RunConfig) -> Outcome:
    lam = _require_lambda(cfg)
    warnings = _genericity_warnings(lam)
    kind = cfg.target
    if kind == "oscillator":
        obj = build_oscillator(lam)
    elif kind == "poisson":
        obj = poisson_product(lam, cfg.c if cfg.c is not None else "c")
    elif kind == "leibniz":
        obj = leibniz_product(lam, cfg.c if cfg.c is not None else "c")
    elif kind == "delta-lie":
        lam, r, u0, mu = _bialgebra_inputs(cfg)
        obj = build_delta_lie(lam, r, u0, mu)
    elif kind == "delta-leibniz":
        lam, r, u0, mu = _bialgebra_inputs(cfg)
        obj = build_delta_leibniz(lam, cfg.gamma if cfg.gamma is not None else "gamma", r, u0, mu)
    else:
        raise InputError(f"unknown build target {kind!r}")
    data = io.algebra_to_json(obj)
    data["lambda"] = str(lam)
    data["warnings"] = warnings
    return Outcome(data, True, warnings=warnings)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _bracket_from(cfg: RunConfig):
    path = cfg.extra.get("bracket") or cfg.extra.get("algebra")
    if path:
        return _load(path, "product")
    return build_oscillator(_require_lambda(cfg))


def cmd_check(cfg: RunConfig) -> Outcome:
    what = cfg.target
    lines: list[str] = []
    warnings = _genericity_warnings(cfg.lam) if cfg.lam is not None else []
    if what == "jacobi":
        rep = check_jacobi(_bracket_from(cfg))
        reports = {"jacobi": rep.to_json()}
        passed = rep.passed
    elif what == "poisson":
        bracket = _bracket_from(cfg)
        if cfg.extra.get("circ"):
            circ = _load(cfg.extra["circ"], "product")
        else:
            circ = poisson_product(_require_lambda(cfg), cfg.c if cfg.c is not None else "c")
        reps = {"poisson": check_poisson(bracket, circ), "assoc_comm": check_assoc_comm(circ)}
        reports = {k: v.to_json() for k, v in reps.items()}
        passed = all(v.passed for v in reps.values())
    elif what == "leibniz":
        if cfg.extra.get("algebra"):
            prod = _load(cfg.extra["algebra"], "product")
        else:
            prod = leibniz_product(_require_lambda(cfg), cfg.c if cfg.c is not None else "c")
        reps = {"symmetric_leibniz": check_symmetric_leibniz(prod)}
        bracket, circ = split_admissible(prod)
        try:
            reps["poisson_of_split"] = check_poisson(bracket, circ)
        except PreconditionError:
            pass
        if cfg.lam is not None and not cfg.extra.get("algebra"):
            reps["k_lambda_invariance"] = check_form_invariance(build_k_lambda(cfg.lam), prod, "product")
        reports = {k: v.to_json() for k, v in reps.items()}
        passed = all(v.passed for v in reps.values())
    elif what == "bialgebra":
        lam, r, u0, mu = _bialgebra_inputs(cfg)
        c = cfg.c if cfg.c is not None else "c"
        gamma = cfg.gamma if cfg.gamma is not None else "gamma"
        prod = leibniz_product(lam, c)
        if cfg.extra.get("coproduct"):
            delta = _load(cfg.extra["coproduct"], "coproduct")
        else:
            delta = build_delta_leibniz(lam, gamma, r, u0, mu)
        rep = check_leibniz_bialgebra(prod, delta)
        for k, sub in rep.conditions.items():
            lines.append(f"condition {k}: {'PASS' if sub.passed else 'FAIL'}")
        reports = {"bialgebra": rep.to_json()}
        passed = rep.passed
        if cfg.extra.get("double"):
            phi = build_phi(prod, delta)
            extra = {"phi_symmetric_leibniz": check_symmetric_leibniz(phi), "phi_pairing": check_phi_pairing_invariance(phi)}
            reports.update({k: v.to_json() for k, v in extra.items()})
            passed = passed and all(v.passed for v in extra.values())
    elif what == "r-condition":
        lam, r, u0, mu = _bialgebra_inputs(cfg)
        residual = check_r_condition(lam, r, mu)
        ok = all(x == 0 for row in residual.matrix for x in row)
        delta = build_delta_lie(lam, r, u0, mu)
        bracket = build_oscillator(lam)
        cocycle = check_cocycle(bracket, delta)
        dual_jac = check_jacobi(dual_product(delta))
        reports = {
            "r_condition": {"passed": ok, "residual": residual.to_json()},
            "cocycle": cocycle.to_json(),
            "dual_jacobi": dual_jac.to_json(),
        }
        passed = ok and cocycle.passed and dual_jac.passed
    else:
        raise InputError(f"unknown check {what!r}")
    for name, rep in reports.items():
        if name != "bialgebra":
            lines.append(f"{name}: {'PASS' if rep['passed'] else 'FAIL'}")
    return Outcome({"check": what, "passed": passed, "reports": reports, "warnings": warnings}, passed, lines, warnings)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> Outcome:
    bracket = _bracket_from(cfg)
    basis = bracket.basis
    if cfg.target == "invariant-forms":
        space = invariant_symmetric_forms(bracket)
        forms = [form_from_symmetric_coords(basis, v).to_json() for v in space.nullspace_basis]
        data = {"solve": "invariant-forms", "dim": space.dim, "basis": forms}
    elif cfg.target == "derivations":
        kernel = [io.parse_vector(x, basis) for x in cfg.extra.get("kernel", [])]
        space = derivations(bracket, kernel)
        maps = [linear_map_from_coords(basis, v).to_json() for v in space.nullspace_basis]
        data = {"solve": "derivations", "dim": space.dim, "kernel": [basis.format(v) for v in kernel], "basis": maps}
    else:
        raise InputError(f"unknown solve target {cfg.target!r}")
    data["labels"] = list(basis.labels)
    return Outcome(data, True)


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def cmd_classify(cfg: RunConfig) -> Outcome:
    kw = dict(
        seed=cfg.seed,
        samples=cfg.samples,
        num_range=cfg.extra.get("num_range", (-9, 9)),
        den_range=cfg.extra.get("den_range", (1, 9)),
    )
    warnings: list[str] = []
    if cfg.extra.get("algebra"):
        rep = classify_report(_load(cfg.extra["algebra"], "product"), **kw)
        passed = True
    else:
        lam = _require_lambda(cfg)
        warnings = _genericity_warnings(lam)
        rep = classify_oscillator(lam, **kw)
        passed = bool(rep.family_contained) and rep.all_excluded and all(rep.checkpoints.values())
    data = {"classify": str(cfg.lam) if cfg.lam else cfg.extra.get("algebra"), "seed": cfg.seed, **rep.to_json()}
    data["passed"] = passed
    data["warnings"] = warnings
    return Outcome(data, passed, warnings=warnings)


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


def _geometry_exact(lam: Lambda, c) -> list[dict]:
    bracket = build_oscillator(lam)
    n0, n1 = nabla0(lam), nabla(lam, "c")
    R0, R1 = curvature(n0, bracket), curvature(n1, bracket)
    k = build_k_lambda(lam)
    res0 = metric_compat_residual(n0, k)
    res1 = metric_compat_residual(n1, k)
    comp = res1[0][0][0]
    comp_value = as_poly(comp).evaluate({"c": c})
    # every entry of the ∇ residual is c times a constant
    scaled = all(as_poly(x).substitute({"c": 1}) * Poly.var("c") == as_poly(x) for p in res1 for row in p for x in row)
    h0 = holonomy_span(n0, R0)
    h1 = holonomy_span(n1, R1)
    return [
        {"name": "torsion_free_nabla0", "passed": not torsion(n0, bracket)},
        {"name": "torsion_free_nabla", "passed": not torsion(n1, bracket)},
        {"name": "curvature_equal", "passed": R0 == R1},
        {"name": "nabla_R_zero", "passed": not covariant_derivative_R(n1, R1) and not covariant_derivative_R(n0, R0)},
        {"name": "holonomy_equal", "passed": h0 == h1, "dim": len(h1)},
        {"name": "metric_residual_nabla0_zero", "passed": all(x == 0 for p in res0 for row in p for x in row)},
        {
            "name": "metric_residual_nabla_nonzero",
            "passed": scaled and comp == Poly.var("c") * -2 and comp_value != 0,
            "component": "(e-1; e-1, e-1)",
            "symbolic": coeff_to_json(comp),
            "value": coeff_to_json(comp_value),
        },
    ]


def _geometry_float(lam: Lambda, c, seed: int, samples: int, step: float, tol: float) -> list[dict]:
    rng = np.random.default_rng(seed)
    cf = float(c)
    errs = {"frame_inverse": 0.0, "frame_fd": 0.0, "metric_pullback": 0.0, "christoffel": 0.0}
    for _ in range(samples):
        p = random_point(rng, lam.n)
        F = frame_at(lam, p)
        errs["frame_inverse"] = max(errs["frame_inverse"], float(np.abs(F @ inverse_frame_at(lam, p) - np.eye(lam.dim)).max()))
        errs["frame_fd"] = max(errs["frame_fd"], float(np.abs(fd_frame_at(lam, p, step) - F).max()))
        errs["metric_pullback"] = max(errs["metric_pullback"], float(np.abs(metric_at(lam, p) - pullback_metric_at(lam, p)).max()))
        diff = christoffels_at(lam, c, p, step) - christoffels_closed_form(lam, cf, p)
        errs["christoffel"] = max(errs["christoffel"], float(np.abs(diff).max()))
    tols = {"frame_inverse": 1e-12, "frame_fd": tol, "metric_pullback": 1e-12, "christoffel": tol}
    return [{"name": k, "passed": errs[k] <= tols[k], "max_error": errs[k], "tol": tols[k]} for k in errs]


def cmd_geometry(cfg: RunConfig) -> Outcome:
    if cfg.target != "verify":
        raise InputError(f"unknown geometry action {cfg.target!r}")
    lam = _require_lambda(cfg)
    c = cfg.c if cfg.c is not None else 1
    if isinstance(c, Poly):
        raise InputError("--c must be a rational number for geometry verify")
    checks = _geometry_exact(lam, c)
    checks += _geometry_float(lam, c, cfg.seed, cfg.samples, cfg.extra["fd_step"], cfg.extra["tol"])
    passed = all(ch["passed"] for ch in checks)
    lines = [f"{ch['name']}: {'PASS' if ch['passed'] else 'FAIL'}" for ch in checks]
    data = {"geometry": "verify", "lambda": str(lam), "c": coeff_to_json(c), "seed": cfg.seed, "passed": passed, "checks": checks}
    return Outcome(data, passed, lines)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, lam_required: bool = False):
    p.add_argument("--lambda", dest="lam", required=lam_required, help='comma-separated rationals, e.g. "1,3/2,4"')
    p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")


def _add_bialgebra(p: argparse.ArgumentParser):
    p.add_argument("--c", help="Poisson parameter (rational or a symbol name)")
    p.add_argument("--gamma", help="nonzero rational or a symbol name")
    p.add_argument("--r", default="", help='terms coeff:x^y, e.g. "a:e1^ê1,2:e1^e2"')
    p.add_argument("--mu", help="comma-separated, one per lambda entry")
    p.add_argument("--u0", default="", help='vector in S, e.g. "e1" or "2:e1,1/2:ê1"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscpoisson", description="Exact checks for oscillator Poisson and Leibniz structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write an algebra or coproduct as JSON")
    b.add_argument("target", choices=["oscillator", "poisson", "leibniz", "delta-lie", "delta-leibniz"])
    _add_common(b, lam_required=True)
    _add_bialgebra(b)

    ch = sub.add_parser("check", help="verify an identity")
    ch.add_argument("target", choices=["jacobi", "poisson", "leibniz", "bialgebra", "r-condition"])
    _add_common(ch)
    _add_bialgebra(ch)
    ch.add_argument("--algebra", help="product file (jacobi/leibniz)")
    ch.add_argument("--bracket", help="bracket file (jacobi/poisson)")
    ch.add_argument("--circ", help="commutative product file (poisson)")
    ch.add_argument("--coproduct", help="coproduct file (bialgebra)")
    ch.add_argument("--double", action="store_true", help="also check the double (bialgebra)")

    s = sub.add_parser("solve", help="solve a linear problem exactly")
    s.add_argument("target", choices=["invariant-forms", "derivations"])
    _add_common(s)
    s.add_argument("--algebra", help="bracket file instead of --lambda")
    s.add_argument("--kernel", default="", help="comma-separated basis elements killed by the derivation")

    c = sub.add_parser("classify", help="classify Poisson-admissible products over a bracket")
    _add_common(c)
    c.add_argument("--algebra", help="bracket file instead of --lambda")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--num-range", default="-9,9")
    c.add_argument("--den-range", default="1,9")

    g = sub.add_parser("geometry", help="bi-invariant connections on the oscillator group")
    g.add_argument("target", choices=["verify"])
    _add_common(g, lam_required=True)
    g.add_argument("--c", default="1")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--samples", type=int, default=20)
    g.add_argument("--fd-step", type=float, default=1e-6)
    g.add_argument("--tol", type=float, default=1e-6)
    return parser


def _int_pair(text: str, flag: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"{flag} expects two integers 'lo,hi'") from None
    if lo > hi:
        raise InputError(f"{flag}: lo > hi")
    return lo, hi


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    try:
        lam = Lambda.parse(ns.lam) if getattr(ns, "lam", None) else None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cfg = RunConfig(command=ns.command, target=getattr(ns, "target", None), lam=lam, output=ns.output)
    try:
        if getattr(ns, "c", None) is not None:
            cfg.c = parse_coeff(ns.c)
        if getattr(ns, "gamma", None) is not None:
            cfg.gamma = parse_coeff(ns.gamma)
            if cfg.gamma == 0:
                raise InputError("--gamma must be nonzero")
        if getattr(ns, "mu", None):
            cfg.mu = io.parse_coeff_list(ns.mu)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    cfg.r = getattr(ns, "r", "") or ""
    cfg.u0 = getattr(ns, "u0", "") or ""
    cfg.seed = getattr(ns, "seed", 42)
    cfg.samples = getattr(ns, "samples", 100)
    if cfg.samples < 0:
        raise InputError("--samples must be nonnegative")
    for key in ("algebra", "bracket", "circ", "coproduct", "double"):
        if getattr(ns, key, None):
            cfg.extra[key] = getattr(ns, key)
    if ns.command == "solve":
        cfg.extra["kernel"] = [x for x in ns.kernel.split(",") if x.strip()]
    if ns.command == "classify":
        cfg.extra["num_range"] = _int_pair(ns.num_range, "--num-range")
        cfg.extra["den_range"] = _int_pair(ns.den_range, "--den-range")
        if cfg.extra["den_range"][0] < 1:
            raise InputError("--den-range must be positive")
    if ns.command == "geometry":
        if ns.fd_step <= 0 or ns.tol <= 0:
            raise InputError("--fd-step and --tol must be positive")
        cfg.extra["fd_step"] = ns.fd_step
        cfg.extra["tol"] = ns.tol
    return cfg


COMMANDS = {
    "build": cmd_build,
    "check": cmd_check,
    "solve": cmd_solve,
    "classify": cmd_classify,
    "geometry": cmd_geometry,
}


def run(cfg: RunConfig) -> Outcome:
    return COMMANDS[cfg.command](cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INPUT
    try:
        cfg = config_from_args(ns)
        out = run(cfg)
    except (InputError, PreconditionError, InconsistentSystem, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT

    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command, **out.report}
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    for w in out.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for line in out.lines:
        print(line, file=sys.stderr)
    return EXIT_PASS if out.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
