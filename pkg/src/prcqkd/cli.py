"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical-domain error,
4 bracket/infeasibility error, 1 when ``mc-validate`` reports a failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

from . import analysis, config, montecarlo, presets
from .errors import PrcError
from .keyrate import secret_key_rate
from .params import build_scenario

OUTPUT_DIR_ENV = "PRCQKD_OUTPUT_DIR"
SWEEP_COLUMNS = ("axis", "key_rate", "i_ab", "chi_be", "eps_prc", "feasible")


def fmt(x) -> str:
    """Locale-independent CSV cell with 9 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, float)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".9g")
    return str(x)


def _json_num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def to_json(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return _json_num(float(o)) if isinstance(o, float) else o

    return json.dumps(clean(obj), indent=2) + "\n"


def resolve_output(path) -> Path:
    p = Path(path)
    root = os.environ.get(OUTPUT_DIR_ENV)
    if root and not p.is_absolute():
        p = Path(root) / p
    return p


def emit(text: str, cfg: config.RunConfig, out=None):
    if cfg.output is None:
        (out or sys.stdout).write(text)
        return
    p = resolve_output(cfg.output)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def keyrate_fields(r) -> dict:
    ch, nz, cov = r.channel, r.noise, r.cov
    return {
        "key_rate": r.key_rate,
        "feasible": r.feasible,
        "i_ab": r.i_ab,
        "chi_be": r.chi_be,
        "lambda1": r.lambda1,
        "lambda2": r.lambda2,
        "lambda3": r.lambda3,
        "plob": r.plob,
        "t_a": ch.t_a,
        "t_b": ch.t_b,
        "chi_a": ch.chi_a,
        "chi_b": ch.chi_b,
        "g_sq": ch.g_sq,
        "eta": ch.eta,
        "eps_c": ch.eps_c,
        "v_laser": nz.v_laser,
        "v_measure": nz.v_measure,
        "v_prc": nz.v_prc,
        "eps_prc": nz.eps_prc,
        "eps_prc_mode": nz.mode,
        "chi_t": ch.chi_t,
        "a": cov.a,
        "b": cov.b,
        "c": cov.c,
    }


def _report(cmd, cfg, result, default_format="json"):
    if (cfg.format or default_format) == "csv":
        return to_csv(("field", "value"), result.items())
    return to_json({"command": cmd, "input": cfg.to_dict(), "result": result})


def _params(cfg):
    return build_scenario(cfg.scenario_kind(), cfg.system_params())


def cmd_keyrate(cfg):
    r = secret_key_rate(_params(cfg), cfg.ideal_calibration)
    return _report("keyrate", cfg, keyrate_fields(r))


def cmd_sweep(cfg):
    spec = analysis.SweepSpec(cfg.axis, cfg.start, cfg.stop, cfg.points, cfg.scale)
    rows = analysis.sweep(spec, cfg.system_params(), cfg.scenario_kind(), cfg.ideal_calibration)
    table = [(r.axis_value, r.key_rate, r.i_ab, r.chi_be, r.eps_prc, r.feasible) for r in rows]
    if (cfg.format or "csv") == "csv":
        return to_csv(SWEEP_COLUMNS, table)
    return to_json({
        "command": "sweep",
        "input": cfg.to_dict(),
        "rows": [dict(zip(SWEEP_COLUMNS, t)) for t in table],
    })


def cmd_tolerance(cfg):
    p = cfg.system_params()
    v = analysis.tolerance_v_laser(p, cfg.scenario_kind(), (cfg.v_laser_low, cfg.v_laser_high))
    k = analysis.key_rate_at(p, cfg.scenario_kind(), "v_laser", v).key_rate
    return _report("tolerance", cfg, {
        "v_laser_max": v,
        "eps_prc_tolerance": v * p.v_mod,
        "key_rate_at_root": k,
    })


def cmd_optimize_vm(cfg):
    v, k = analysis.optimize_vm(cfg.system_params(), cfg.scenario_kind(),
                                (cfg.vm_min, cfg.vm_max), cfg.vm_tol, cfg.ideal_calibration)
    return _report("optimize-vm", cfg, {"v_mod_opt": v, "key_rate_max": k})


def cmd_max_distance(cfg):
    d = analysis.max_distance(cfg.system_params(), cfg.scenario_kind(), (0.0, cfg.max_km),
                              cfg.distance_tol, cfg.ideal_calibration)
    return _report("max-distance", cfg, {"distance_km": d})


def mc_checks(rep, ref) -> dict:
    def within(hat, want, rel):
        return abs(hat - want) <= rel * want + 1e-12

    se = rep.eps_prc_se
    return {
        "drift_variance_within_5pct": within(rep.v_laser_hat, ref["v_laser"], 0.05),
        "v_prc_within_5pct": within(rep.v_prc_hat, ref["v_prc"], 0.05),
        "eps_prc_within_10pct_of_exact": within(rep.eps_prc_hat, ref["eps_prc_exact"], 0.10),
        "eps_prc_between_exact_and_approx": (
            ref["eps_prc_exact"] - 3 * se <= rep.eps_prc_hat <= ref["eps_prc_approx"] + 3 * se
        ),
    }


def cmd_mc_validate(cfg):
    p = _params(cfg)
    mc = montecarlo.McConfig(cfg.n_pulses, cfg.seed, p, cfg.workers)
    rep = montecarlo.simulate_calibration(mc)
    ref = montecarlo.analytic_reference(p)
    checks = mc_checks(rep, ref)
    result = {
        "n": rep.n,
        "v_laser_hat": rep.v_laser_hat,
        "v_prc_hat": rep.v_prc_hat,
        "eps_prc_hat": rep.eps_prc_hat,
        "eps_prc_se": rep.eps_prc_se,
        **{f"ref_{k}": v for k, v in ref.items()},
        **{k: "PASS" if ok else "FAIL" for k, ok in checks.items()},
    }
    return _report("mc-validate", cfg, result), all(checks.values())


def cmd_preset(cfg, name):
    t = presets.PRESETS[name]()
    if (cfg.format or "csv") == "csv":
        return to_csv(t.columns, t.rows)
    return to_json({
        "preset": t.name,
        "description": t.description,
        "columns": t.columns,
        "rows": [list(r) for r in t.rows],
    })


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    for f in fields(config.RunConfig):
        flag = "--" + f.name.replace("_", "-")
        base = f.type.removeprefix("Optional[").removesuffix("]")
        if base == "bool":
            p.add_argument(flag, action="store_true", default=argparse.SUPPRESS)
            continue
        kind = {"float": float, "int": int, "str": str}[base]
        names = [flag, "--v-laser"] if f.name == "v_laser_override" else [flag]
        p.add_argument(*names, dest=f.name, type=kind, default=argparse.SUPPRESS, metavar=base.upper())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_config_flags(common)
    ap = argparse.ArgumentParser(
        prog="prcqkd",
        description="CV-MDI-QKD key rates under imperfect phase reference calibration",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "keyrate": "key rate and all intermediate quantities at one point",
        "sweep": "key rate along one parameter axis (CSV by default)",
        "tolerance": "largest V_laser with a positive key rate",
        "optimize-vm": "modulation variance maximising the key rate",
        "max-distance": "distance at which the key rate reaches zero",
        "mc-validate": "Monte Carlo check of the calibration noise model",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    pp = sub.add_parser("preset", parents=[common], help="regenerate a figure's data table")
    pp.add_argument("name", choices=sorted(presets.PRESETS))
    return ap


def main(argv=None, out=None) -> int:
    args = vars(build_parser().parse_args(argv))
    cmd = args.pop("command")
    name = args.pop("name", None)
    path = args.pop("config", None)
    try:
        base = config.load(path) if path else None
        cfg = config.from_dict(args, base)
        if cmd == "preset" and cfg.output is None and os.environ.get(OUTPUT_DIR_ENV):
            cfg = replace(cfg, output=f"{name}.{cfg.format or 'csv'}")
        ok = True
        if cmd == "keyrate":
            text = cmd_keyrate(cfg)
        elif cmd == "sweep":
            text = cmd_sweep(cfg)
        elif cmd == "tolerance":
            text = cmd_tolerance(cfg)
        elif cmd == "optimize-vm":
            text = cmd_optimize_vm(cfg)
        elif cmd == "max-distance":
            text = cmd_max_distance(cfg)
        elif cmd == "mc-validate":
            text, ok = cmd_mc_validate(cfg)
        else:
            text = cmd_preset(cfg, name)
        emit(text, cfg, out)
    except PrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
