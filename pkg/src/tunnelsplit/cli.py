"""``tunnelsplit`` command line: analyze, verify and sweep.

Exit codes: 0 success, 2 input or validation error, 3 failed verification.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

from . import oracle, report
from . import semiclassical as sc
from .errors import InvalidParameter, NoSeparation, TunnelsplitError
from .expr import parse_potential
from .potential import PhysicalContext, analyze_profile, scaled
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 2, 3

SWEEP_COLUMNS = [
    "param",
    "omega",
    "P",
    "S0",
    "epsilon",
    "S",
    "delta_e_semi",
    "delta_e_herring",
    "delta_e_exact",
    "ratio_semi_exact",
    "flip_rate",
    "error",
]


@dataclass(frozen=True)
class VerifyTolerances:
    epsilon_rel: float = 0.01
    ratio_low: float = 0.75
    ratio_high: float = 1.25
    period_rel: float = 1e-10
    key_fact_abs: float = 1e-3
    action_residual: float = 0.05
    energy_fractions: tuple[float, ...] = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class RunConfig:
    potential_text: str
    hbar: float = 0.1
    mass: float = 1.0
    command: str = "analyze"
    sweep_param: str = "hbar"
    sweep_values: tuple[float, ...] = ()
    output_format: str = "table"
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    grid: oracle.GridConfig = field(default_factory=oracle.GridConfig)
    tolerances: VerifyTolerances = field(default_factory=VerifyTolerances)
    q_search_max: float = 10.0
    wkb_lower_limit: str = "literal"
    jobs: int = 1


def _profile(cfg: RunConfig, hbar: float | None = None, scale: float | None = None):
    expr = parse_potential(cfg.potential_text)
    if scale is not None:
        expr = scaled(expr, scale)
    ctx = PhysicalContext(cfg.mass, cfg.hbar if hbar is None else hbar)
    return analyze_profile(expr, ctx, cfg.q_search_max, text=cfg.potential_text)


def _profile_doc(profile) -> dict:
    return {
        "expr": profile.text or str(profile.expr),
        "mass": profile.mass,
        "hbar": profile.hbar,
        "shift": profile.shift,
        "a": profile.a,
        "v_max": profile.v_max,
        "d2_at_well": profile.d2_at_well,
        "omega": profile.omega,
        "p_central": profile.p_central,
    }


def run_analyze(cfg: RunConfig) -> dict:
    profile = _profile(cfg)
    semi = sc.ground_splitting(profile, cfg.quad)
    budget = sc.time_budget(profile, cfg.quad)
    wkb = sc.splitting_wkb_direct(profile, cfg.wkb_lower_limit, cfg.quad)
    return {
        "profile": _profile_doc(profile),
        "time_budget": report.plain(budget),
        "semiclassical": report.plain(semi),
        "wkb": report.plain(wkb),
    }


def _check(name: str, value, bound: str, passed: bool) -> dict:
    return {"name": name, "value": value, "bound": bound, "passed": bool(passed)}


def _monotone_down(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def run_verify(cfg: RunConfig) -> dict:
    """Semiclassical chain side by side with the brute-force oracle.

    Every check is evaluated against ``cfg.tolerances`` and recorded in the
    document together with those tolerances.
    """
    tol = cfg.tolerances
    profile = _profile(cfg)
    semi = sc.ground_splitting(profile, cfg.quad)
    budget = sc.time_budget(profile, cfg.quad)
    wkb = sc.splitting_wkb_direct(profile, cfg.wkb_lower_limit, cfg.quad)
    integrated = sc.splitting_integrated(profile, cfg.quad)
    energies = [profile.v_max * f for f in tol.energy_fractions]

    checks = []
    values: dict = {
        "delta_e_semiclassical": semi.delta_e,
        "delta_e_herring": wkb.delta_e_herring,
        "delta_e_integrated": integrated,
        "epsilon": semi.epsilon,
    }

    try:
        pair = oracle.eigen_splitting(profile, cfg.grid)
    except NoSeparation as exc:
        pair = None
        checks.append(_check("exact_splitting_resolved", None, "e1 - e0 above noise floor", False))
        values["exact_splitting_message"] = str(exc)
    if pair is not None:
        ratio = semi.delta_e / pair.delta_e
        ratio_h = wkb.delta_e_herring / pair.delta_e
        values.update(
            delta_e_exact=pair.delta_e,
            delta_e_exact_error=pair.error,
            e0=pair.e0,
            e1=pair.e1,
            ratio_semi_exact=ratio,
            ratio_herring_exact=ratio_h,
            ratio_integrated_exact=integrated / pair.delta_e,
        )
        bounds = f"[{tol.ratio_low:g}, {tol.ratio_high:g}]"
        checks.append(_check("delta_e_ratio", ratio, bounds, tol.ratio_low <= ratio <= tol.ratio_high))
        checks.append(_check("herring_ratio", ratio_h, bounds, tol.ratio_low <= ratio_h <= tol.ratio_high))

    fit = oracle.fit_epsilon(profile, energies, cfg.quad)
    eps_rel = abs(fit.epsilon / semi.epsilon - 1.0)
    values["epsilon_fit"] = fit.epsilon
    checks.append(_check("epsilon_fit", eps_rel, f"< {tol.epsilon_rel:g}", eps_rel < tol.epsilon_rel))

    w = profile.omega
    lhs = -2.0 / w * math.log(profile.hbar * w / (2.0 * semi.epsilon))
    pid = abs(lhs - budget.period_eq7) / abs(lhs)
    values["period_log_form"] = lhs
    values["period_time_budget"] = budget.period_eq7
    checks.append(_check("period_identity", pid, f"< {tol.period_rel:g}", pid < tol.period_rel))

    gaps = []
    s_samples = []
    for E in energies:
        t2 = oracle.quarter_time_exact(profile, E, cfg.quad)
        gaps.append([E, abs(t2 - oracle.t1_exact(profile, E) - budget.defect)])
        s_samples.append((E, oracle.action_exact(profile, E, cfg.quad)))
    values["key_fact_gap"] = gaps
    g = [x[1] for x in gaps]
    checks.append(
        _check(
            "key_fact",
            g[-1],
            f"decreasing and < {tol.key_fact_abs:g}",
            _monotone_down(g) and g[-1] < tol.key_fact_abs,
        )
    )

    residuals = oracle.action_residuals(profile, s_samples, cfg.quad)
    values["action_residuals"] = [list(r) for r in residuals]
    values["action_residuals_integrated"] = [
        [E, abs(S - sc.action_S_integrated(profile, E, cfg.quad)) / E] for E, S in s_samples
    ]
    r = [x[1] for x in residuals]
    checks.append(
        _check(
            "action_residual",
            r[-1],
            f"decreasing and < {tol.action_residual:g}",
            _monotone_down(r) and r[-1] < tol.action_residual,
        )
    )

    return {
        "profile": _profile_doc(profile),
        "tolerances": report.plain(tol),
        "grid": report.plain(cfg.grid),
        "values": values,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def sweep_row(cfg: RunConfig, value: float) -> dict:
    row: dict = {"param": value}
    try:
        if cfg.sweep_param == "hbar":
            if not value > 0:
                raise InvalidParameter("hbar>0 required")
            profile = _profile(cfg, hbar=value)
        else:
            if not value > 0:
                raise InvalidParameter("scale>0 required")
            profile = _profile(cfg, scale=value)
        semi = sc.ground_splitting(profile, cfg.quad)
        row.update(
            omega=profile.omega,
            P=profile.p_central,
            S0=semi.s0,
            epsilon=semi.epsilon,
            S=semi.s_action,
            delta_e_semi=semi.delta_e,
            flip_rate=semi.flip_rate,
        )
        row["delta_e_herring"] = sc.splitting_wkb_direct(
            profile, cfg.wkb_lower_limit, cfg.quad
        ).delta_e_herring
        pair = oracle.eigen_splitting(profile, cfg.grid)
        row["delta_e_exact"] = pair.delta_e
        row["ratio_semi_exact"] = semi.delta_e / pair.delta_e
    except TunnelsplitError as exc:
        row["error"] = str(exc)
    return row


def _sweep_row_star(args):
    return sweep_row(*args)


def run_sweep(cfg: RunConfig) -> list[dict]:
    if not cfg.sweep_values:
        raise InvalidParameter("sweep needs at least one value")
    if cfg.sweep_param not in ("hbar", "scale"):
        raise InvalidParameter(f"unknown sweep parameter {cfg.sweep_param!r}")
    parse_potential(cfg.potential_text)
    work = [(cfg, v) for v in cfg.sweep_values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_sweep_row_star, work))
    return [sweep_row(*w) for w in work]


# --- argument handling -------------------------------------------------------

def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunnelsplit",
        description="Explicit semiclassical ground-state splitting of a symmetric double well.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("expr", nargs="?", help="potential in q, e.g. '(q^2-1)^2'")
    common.add_argument("--potential", help="potential in q (alternative to the positional form)")
    common.add_argument("--hbar", type=float, default=0.1)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--format", dest="output_format", choices=["table", "json", "csv"])
    common.add_argument("--tol-quad", type=float, default=1e-10, help="relative quadrature tolerance")
    common.add_argument("--grid-points", type=int, default=4096)
    common.add_argument("--refinement-levels", type=int, default=3)
    common.add_argument("--box-half-width", type=float)
    common.add_argument("--q-search-max", type=float, default=10.0)
    common.add_argument(
        "--wkb-lower-limit", choices=["literal", "turning_point"], default="literal"
    )
    sub.add_parser("analyze", parents=[common], help="semiclassical chain for one potential")
    verify = sub.add_parser("verify", parents=[common], help="compare with the brute-force oracle")
    verify.add_argument("--tol-epsilon", type=float, default=VerifyTolerances.epsilon_rel)
    verify.add_argument("--ratio-bounds", type=_floats, default=(0.75, 1.25))
    verify.add_argument("--tol-key-fact", type=float, default=VerifyTolerances.key_fact_abs)
    verify.add_argument("--tol-action-residual", type=float, default=VerifyTolerances.action_residual)
    sweep = sub.add_parser("sweep", parents=[common], help="one CSV row per parameter value")
    sweep.add_argument("--sweep-param", choices=["hbar", "scale"], default="hbar")
    sweep.add_argument("--sweep-values", type=_floats, default=())
    sweep.add_argument("--jobs", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    text = args.potential or args.expr
    if not text:
        raise InvalidParameter("a potential is required (positional or --potential)")
    fmt = args.output_format or ("csv" if args.command == "sweep" else "table")
    tolerances = VerifyTolerances()
    if args.command == "verify":
        if len(args.ratio_bounds) != 2:
            raise InvalidParameter("--ratio-bounds needs two values")
        tolerances = replace(
            tolerances,
            epsilon_rel=args.tol_epsilon,
            ratio_low=args.ratio_bounds[0],
            ratio_high=args.ratio_bounds[1],
            key_fact_abs=args.tol_key_fact,
            action_residual=args.tol_action_residual,
        )
    return RunConfig(
        potential_text=text,
        hbar=args.hbar,
        mass=args.mass,
        command=args.command,
        sweep_param=getattr(args, "sweep_param", "hbar"),
        sweep_values=getattr(args, "sweep_values", ()),
        output_format=fmt,
        quad=QuadratureConfig(rel_tol=args.tol_quad),
        grid=oracle.GridConfig(
            box_half_width=args.box_half_width,
            n_points=args.grid_points,
            refinement_levels=args.refinement_levels,
        ),
        tolerances=tolerances,
        q_search_max=args.q_search_max,
        wkb_lower_limit=args.wkb_lower_limit,
        jobs=getattr(args, "jobs", 1),
    )


def _render_doc(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return report.dumps(doc)
    rows = report.flatten(report.plain(doc))
    if fmt == "csv":
        return report.to_csv(["key", "value"], [{"key": k, "value": v} for k, v in rows])
    return report.to_table(doc)


def _render_verify(doc: dict, fmt: str) -> str:
    if fmt != "table":
        return _render_doc(doc, fmt)
    lines = report.to_table({k: doc[k] for k in ("profile", "values", "tolerances")})
    lines += report.rows_table(["name", "value", "bound", "passed"], doc["checks"])
    lines += f"verification {'passed' if doc['passed'] else 'FAILED'}\n"
    return lines


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "analyze":
            sys.stdout.write(_render_doc(run_analyze(cfg), cfg.output_format))
            return EXIT_OK
        if cfg.command == "verify":
            doc = run_verify(cfg)
            sys.stdout.write(_render_verify(doc, cfg.output_format))
            return EXIT_OK if doc["passed"] else EXIT_FAILED
        rows = run_sweep(cfg)
        if cfg.output_format == "json":
            out = report.dumps(rows)
        elif cfg.output_format == "table":
            out = report.rows_table(SWEEP_COLUMNS, rows)
        else:
            out = report.to_csv(SWEEP_COLUMNS, rows)
        sys.stdout.write(out)
        return EXIT_OK
    except TunnelsplitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
