"""Command-line frontend.

Subcommands map onto the library layers: ``transform`` emits a spectrum and
its energy-conservation verdict, ``ppr`` checks the spectral-moment
identity, ``verify`` runs one inequality end to end, ``sweep`` reproduces
the family sweeps, ``bound-table`` and ``gap-curve`` evaluate the closed-form
bound comparison, and ``energy`` emits the four energy densities.

Exit codes: 0 all requested checks passed, 1 an inequality or check failed,
2 configuration error, 3 a numerical precondition failed.  All floats in
CSV/JSON output are printed with 17 significant digits so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import NumericsError
from .signals import (
    AnalyticSignal,
    Grid,
    SampledSignal,
    WeightFunction,
    energy,
    exp_weight,
    gaussian_chirp,
    make_grid,
    quadrature_weights,
    unit_weight,
)
from .transform import OlctParams, olct_forward, parseval_gap
from .moments import ppr_check
from .bounds import (
    HpwConfig,
    bound_gap_factor,
    reference_bound_closed_form,
    sharpened_bound_closed_form,
)
from .verify import (
    SWEEP_SCENARIOS,
    minimizer_signal,
    sweep_r,
    verify_hpw,
    verify_hw,
    verify_shw,
)

__all__ = ["main", "ScenarioConfig", "ConfigError"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICS = 3

DEFAULT_PPR_TOL = 1e-4


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration."""


# --------------------------------------------------------------------------
# deterministic formatting


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats fixed at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return f"{obj:.17g}"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return json.dumps(obj)


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def csv_text(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# scenario configuration


def _parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be T_MIN:T_MAX:N, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}")


def _parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be START:STOP:STEP, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), float(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range spec {text!r}: {exc}")


@dataclass(frozen=True)
class ScenarioConfig:
    """One scenario: signal, weight, transform parameters, moment setup,
    auxiliary-term mode, grid, tolerances and sweep ranges.

    Every omitted key falls back to the defaults below; a config written
    with :meth:`to_text` parses back to an identical object.
    """

    name: str = "scenario"
    signal: str = "gaussian_chirp"      # gaussian_chirp | minimizer
    signal_r: float = 2.0
    signal_chirp: Optional[float] = None  # None -> a/(2b)
    c0: float = 1.0
    c_p: float = 1.0
    weight: str = "exp"                 # exp | unit
    weight_r: Optional[float] = None    # None -> signal_r
    a: float = 0.0
    b: float = 1.0
    c: float = -1.0
    d: float = 0.0
    tau: float = 0.0
    eta: float = 0.0
    strict_params: bool = True
    p: int = 1
    t_m: float = 0.0
    xi_m: float = 0.0
    a_mode: str = "saturating"          # zero | fixed | gram | saturating
    a_value: float = 1.0
    grid: tuple = (-8.0, 8.0, 4097)
    tol: float = 1e-6
    r_values: tuple = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)
    r_range: tuple = (0.05, 10.0, 0.05)
    reference_value: Optional[float] = None  # published value to compare with

    @classmethod
    def from_section(cls, section: configparser.SectionProxy,
                     name: str) -> "ScenarioConfig":
        kwargs = {"name": name}
        known = {f.name for f in fields(cls)} - {"name"}
        for key in section:
            if key not in known:
                raise ConfigError(f"unknown config key {key!r} in [{name}]")
        def get(key, conv, default):
            raw = section.get(key, None)
            if raw is None:
                return default
            raw = raw.strip()
            try:
                return conv(raw)
            except (ValueError, ConfigError) as exc:
                raise ConfigError(f"[{name}] {key}: {exc}")
        opt_float = lambda s: None if s.lower() == "auto" else float(s)
        as_bool = lambda s: {"true": True, "false": False}[s.lower()]
        as_list = lambda s: tuple(float(x) for x in s.split(","))
        defaults = cls()
        kwargs["signal"] = get("signal", str, defaults.signal)
        kwargs["signal_r"] = get("signal_r", float, defaults.signal_r)
        kwargs["signal_chirp"] = get("signal_chirp", opt_float, defaults.signal_chirp)
        kwargs["c0"] = get("c0", float, defaults.c0)
        kwargs["c_p"] = get("c_p", float, defaults.c_p)
        kwargs["weight"] = get("weight", str, defaults.weight)
        kwargs["weight_r"] = get("weight_r", opt_float, defaults.weight_r)
        for key in ("a", "b", "c", "d", "tau", "eta", "t_m", "xi_m",
                    "a_value", "tol"):
            kwargs[key] = get(key, float, getattr(defaults, key))
        kwargs["strict_params"] = get("strict_params", as_bool, defaults.strict_params)
        kwargs["p"] = get("p", int, defaults.p)
        kwargs["a_mode"] = get("a_mode", str, defaults.a_mode)
        kwargs["grid"] = get("grid", _parse_grid, defaults.grid)
        kwargs["r_values"] = get("r_values", as_list, defaults.r_values)
        kwargs["r_range"] = get("r_range", _parse_range, defaults.r_range)
        none_or_float = lambda s: None if s.lower() == "none" else float(s)
        kwargs["reference_value"] = get("reference_value", none_or_float,
                                        defaults.reference_value)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.signal not in ("gaussian_chirp", "minimizer"):
            raise ConfigError(f"unknown signal family {self.signal!r}")
        if self.weight not in ("exp", "unit"):
            raise ConfigError(f"unknown weight {self.weight!r}")
        if self.a_mode not in ("zero", "fixed", "gram", "saturating"):
            raise ConfigError(f"unknown a_mode {self.a_mode!r}")
        if not self.signal_r > 0:
            raise ConfigError(f"signal_r must be positive, got {self.signal_r}")
        if self.p < 1:
            raise ConfigError(f"p must be >= 1, got {self.p}")

    def to_text(self) -> str:
        """Config-file section with every effective value spelled out."""
        lines = [f"[{self.name}]"]
        auto = lambda v: "auto" if v is None else fmt(v)
        lines += [
            f"signal = {self.signal}",
            f"signal_r = {fmt(self.signal_r)}",
            f"signal_chirp = {auto(self.signal_chirp)}",
            f"c0 = {fmt(self.c0)}",
            f"c_p = {fmt(self.c_p)}",
            f"weight = {self.weight}",
            f"weight_r = {auto(self.weight_r)}",
        ]
        for key in ("a", "b", "c", "d", "tau", "eta"):
            lines.append(f"{key} = {fmt(getattr(self, key))}")
        lines += [
            f"strict_params = {fmt(self.strict_params)}",
            f"p = {self.p}",
            f"t_m = {fmt(self.t_m)}",
            f"xi_m = {fmt(self.xi_m)}",
            f"a_mode = {self.a_mode}",
            f"a_value = {fmt(self.a_value)}",
            f"grid = {fmt(self.grid[0])}:{fmt(self.grid[1])}:{self.grid[2]}",
            f"tol = {fmt(self.tol)}",
            "r_values = " + ",".join(fmt(r) for r in self.r_values),
            f"r_range = {fmt(self.r_range[0])}:{fmt(self.r_range[1])}:{fmt(self.r_range[2])}",
            "reference_value = " + ("none" if self.reference_value is None
                                    else fmt(self.reference_value)),
        ]
        return "\n".join(lines) + "\n"

    # -- builders ----------------------------------------------------------

    def grid_obj(self) -> Grid:
        try:
            return make_grid(*self.grid)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}")

    def params_obj(self) -> OlctParams:
        try:
            return OlctParams(self.a, self.b, self.c, self.d, self.tau,
                              self.eta, strict=self.strict_params)
        except ValueError as exc:
            raise ConfigError(f"params: {exc}")

    def weight_obj(self) -> WeightFunction:
        if self.weight == "unit":
            return unit_weight()
        r = self.signal_r if self.weight_r is None else self.weight_r
        return exp_weight(r)

    def signal_obj(self, params: OlctParams) -> AnalyticSignal:
        if self.signal == "minimizer":
            return minimizer_signal(self.c0, self.c_p, self.t_m, self.xi_m,
                                    params)
        if self.signal_chirp is None:
            if params.is_degenerate:
                raise ConfigError(
                    "signal_chirp = auto needs b != 0; set an explicit value")
            chirp = params.chirp_rate
        else:
            chirp = self.signal_chirp
        return gaussian_chirp(self.signal_r, chirp)

    def sampled_signal(self, params: OlctParams) -> SampledSignal:
        return self.signal_obj(params).sample(self.grid_obj())

    def hpw_config(self) -> HpwConfig:
        return HpwConfig(p=self.p, t_m=self.t_m, xi_m=self.xi_m,
                         omega=self.weight_obj())


def load_config(path: Optional[str], scenario: Optional[str],
                overrides: argparse.Namespace) -> ScenarioConfig:
    if path is None:
        cfg = ScenarioConfig()
    else:
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}")
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config {path!r}: {exc}")
        names = parser.sections()
        if not names:
            raise ConfigError(f"config {path!r} has no scenario sections")
        pick = scenario or names[0]
        if pick not in names:
            raise ConfigError(
                f"scenario {pick!r} not in {path!r}; available: {names}")
        cfg = ScenarioConfig.from_section(parser[pick], pick)
    if getattr(overrides, "grid", None):
        cfg = replace(cfg, grid=_parse_grid(overrides.grid))
    if getattr(overrides, "tol", None) is not None:
        cfg = replace(cfg, tol=float(overrides.tol))
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# subcommands


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        sys.stdout.write(dumps(payload) + "\n")
    else:
        sys.stdout.write(human + "\n")


def _report_payload(report, bound: str) -> dict:
    slack = {"hpw": report.slack_hpw, "shw": report.slack_shw,
             "hw": report.slack_hw}
    rel = {"hpw": report.rel_slack_hpw, "shw": report.rel_slack_shw,
           "hw": report.rel_slack_hw}
    passed = {"hpw": report.passed_hpw, "shw": report.passed_shw,
              "hw": report.passed_hw}
    return {
        "scenario": report.scenario,
        "p": report.p,
        "lhs": report.lhs,
        "rhs_hpw": report.hpw_rhs,
        "rhs_shw": report.shw_rhs,
        "rhs_hw": report.hw_rhs,
        "slack": slack[bound],
        "rel_slack": rel[bound],
        "passed": passed[bound],
        "ppr_gap": report.ppr_gap,
        "parseval_gap": report.parseval_gap,
        "grid": {"t_min": report.grid.t_min, "t_max": report.grid.t_max,
                 "n": report.grid.n},
        "params": {"a": report.params.a, "b": report.params.b,
                   "c": report.params.c, "d": report.params.d,
                   "tau": report.params.tau, "eta": report.params.eta},
    }


def cmd_transform(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    params = cfg.params_obj()
    f = cfg.sampled_signal(params)
    spectrum = olct_forward(f, params)
    gap = parseval_gap(f, spectrum)
    out_dir = Path(args.out or ".")
    xi = spectrum.grid.points()
    rows = list(zip(xi.tolist(), spectrum.values.real.tolist(),
                    spectrum.values.imag.tolist()))
    write_text(out_dir / "spectrum.csv", csv_text(["xi", "real", "imag"], rows))
    ok = gap <= cfg.tol
    _emit(args, {"scenario": cfg.name, "parseval_gap": gap, "tol": cfg.tol,
                 "passed": ok, "spectrum_csv": str(out_dir / "spectrum.csv")},
          f"parseval_gap = {fmt(gap)} (tol {fmt(cfg.tol)}): "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_ppr(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    tol = float(args.tol) if args.tol is not None else DEFAULT_PPR_TOL
    params = cfg.params_obj()
    f = cfg.sampled_signal(params)
    res = ppr_check(f, params, cfg.p, cfg.xi_m)
    ok = res.rel_gap <= tol
    payload = {"scenario": cfg.name, "p": cfg.p, "xi_m": cfg.xi_m,
               "lhs": res.lhs, "rhs": res.rhs, "rel_gap": res.rel_gap,
               "tol": tol, "passed": ok}
    if args.out:
        write_text(Path(args.out) / "ppr.json", dumps(payload) + "\n")
    _emit(args, payload,
          f"moment identity p={cfg.p}: lhs={fmt(res.lhs)} rhs={fmt(res.rhs)} "
          f"rel_gap={fmt(res.rel_gap)} (tol {fmt(tol)}): "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    params = cfg.params_obj()
    f = cfg.sampled_signal(params)
    if args.bound == "hpw":
        report = verify_hpw(f, params, cfg.hpw_config(), tol=cfg.tol,
                            scenario=cfg.name)
    elif args.bound == "shw":
        report = verify_shw(f, params, cfg.hpw_config(), a_mode=cfg.a_mode,
                            a_value=cfg.a_value, tol=cfg.tol,
                            scenario=cfg.name)
    else:
        if cfg.p < 2:
            raise ConfigError("bound 'hw' needs p >= 2")
        report = verify_hw(f, params, cfg.p, t_m=cfg.t_m, xi_m=cfg.xi_m,
                           tol=cfg.tol, scenario=cfg.name)
    payload = _report_payload(report, args.bound)
    note = ""
    if args.bound == "shw" and report.a_admissible is False:
        payload["a_admissible"] = False
        note = " [A exceeds admissible range; bound not applicable]"
    if cfg.reference_value is not None:
        payload["reference_value"] = cfg.reference_value
        payload["computed_over_reference"] = report.lhs / cfg.reference_value
        note = (f" [reference {fmt(cfg.reference_value)}, computed/reference "
                f"= {fmt(payload['computed_over_reference'])}]")
    if args.out:
        write_text(Path(args.out) / f"verify_{args.bound}.json",
                   dumps(payload) + "\n")
    rhs = payload["rhs_" + args.bound]
    _emit(args, payload,
          f"{args.bound} [{cfg.name}]: lhs={fmt(report.lhs)} rhs={fmt(rhs)} "
          f"slack={fmt(payload['slack'])}: "
          f"{'PASS' if payload['passed'] else 'FAIL'}{note}")
    return EXIT_OK if payload["passed"] else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, None, args)
    scenario = args.scenario or cfg.a_mode
    alias = {"zero": "a0", "fixed": "a1"}
    scenario = alias.get(scenario, scenario)
    if scenario not in SWEEP_SCENARIOS:
        raise ConfigError(
            f"unknown sweep scenario {scenario!r}; expected one of "
            f"{sorted(SWEEP_SCENARIOS)}")
    params = cfg.params_obj()
    rows = sweep_r(cfg.r_values, scenario, params, p=cfg.p)
    out_dir = Path(args.out or ".")
    path = out_dir / f"sweep_{scenario}.csv"
    write_text(path, csv_text(["r", "lhs", "rhs"],
                              [(row.r, row.lhs, row.rhs) for row in rows]))
    bad = [row for row in rows if row.lhs < row.rhs - cfg.tol * abs(row.lhs)]
    ok = not bad
    _emit(args, {"scenario": scenario, "rows": len(rows), "passed": ok,
                 "csv": str(path)},
          f"sweep {scenario}: {len(rows)} rows, "
          f"{'all lhs >= rhs' if ok else f'{len(bad)} violations'}: "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_bound_table(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    rows = []
    ok = True
    for r in cfg.r_values:
        sharp = sharpened_bound_closed_form(r, cfg.b)
        ref = reference_bound_closed_form(r, cfg.b)
        ok = ok and sharp > ref
        rows.append((r, sharp, ref))
    out_dir = Path(args.out or ".")
    path = out_dir / "bound_table.csv"
    write_text(path, csv_text(["r", "sharpened", "reference"], rows))
    lines = [f"r={fmt(r)}: sharpened={fmt(s)} reference={fmt(ref)}"
             for r, s, ref in rows]
    _emit(args, {"b": cfg.b, "rows": [{"r": r, "sharpened": s, "reference": ref}
                                      for r, s, ref in rows],
                 "passed": ok, "csv": str(path)},
          "\n".join(lines) + f"\nsharpened > reference in every row: "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gap_curve(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    start, stop, step = cfg.r_range
    if start <= 0 or step <= 0 or stop < start:
        raise ConfigError(f"bad r_range {cfg.r_range}")
    rs = np.arange(start, stop + step / 2.0, step)
    rows = [(float(r), bound_gap_factor(float(r))) for r in rs]
    out_dir = Path(args.out or ".")
    path = out_dir / "gap_curve.csv"
    write_text(path, csv_text(["r", "gap"], rows))
    ok = all(gap > 0 for _, gap in rows)
    _emit(args, {"rows": len(rows), "min_gap": min(g for _, g in rows),
                 "passed": ok, "csv": str(path)},
          f"gap factor on ({fmt(start)}, {fmt(stop)}] step {fmt(step)}: "
          f"min={fmt(min(g for _, g in rows))}, all positive: "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def _density_rows(x: np.ndarray, dens: np.ndarray) -> list:
    return list(zip(x.tolist(), dens.tolist()))


def _second_central_moment(x: np.ndarray, dens: np.ndarray, w: np.ndarray) -> dict:
    total = float(np.sum(w * dens))
    centroid = float(np.sum(w * x * dens) / total) if total > 0 else 0.0
    spread = (float(np.sum(w * (x - centroid) ** 2 * dens) / total)
              if total > 0 else 0.0)
    return {"energy": total, "centroid": centroid,
            "second_central_moment": spread}


def cmd_energy(args) -> int:
    cfg = load_config(args.config, args.scenario, args)
    params = cfg.params_obj()
    f = cfg.sampled_signal(params)
    t = f.grid.points()
    w_t = quadrature_weights(f.grid.n, f.grid.dt)
    omega = cfg.weight_obj()

    dens_time = np.abs(f.values) ** 2
    dens_weighted = np.abs(omega(t) * f.values) ** 2
    from .transform import ft_params
    ft = olct_forward(f, ft_params())
    olct_spec = olct_forward(f, params)

    out_dir = Path(args.out or ".")
    files = {
        "energy_time.csv": (["t", "density"], _density_rows(t, dens_time)),
        "energy_weighted.csv": (["t", "density"], _density_rows(t, dens_weighted)),
        "energy_ft.csv": (["xi", "density"],
                          _density_rows(ft.grid.points(),
                                        np.abs(ft.values) ** 2)),
        "energy_olct.csv": (["xi", "density"],
                            _density_rows(olct_spec.grid.points(),
                                          np.abs(olct_spec.values) ** 2)),
    }
    for name, (header, rows) in files.items():
        write_text(out_dir / name, csv_text(header, rows))

    w_ft = quadrature_weights(ft.grid.n, ft.grid.dt)
    w_ol = quadrature_weights(olct_spec.grid.n, olct_spec.grid.dt)
    summary = {
        "scenario": cfg.name,
        "time": _second_central_moment(t, dens_time, w_t),
        "weighted": _second_central_moment(t, dens_weighted, w_t),
        "ft": _second_central_moment(ft.grid.points(),
                                     np.abs(ft.values) ** 2, w_ft),
        "olct": _second_central_moment(olct_spec.grid.points(),
                                       np.abs(olct_spec.values) ** 2, w_ol),
    }
    write_text(out_dir / "energy_summary.json", dumps(summary) + "\n")
    _emit(args, summary,
          "\n".join(f"{k}: spread={fmt(v['second_central_moment'])}"
                    for k, v in summary.items() if isinstance(v, dict)))
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="scenario config file (INI sections)")
    sub.add_argument("--scenario", help="section name inside the config")
    sub.add_argument("--out", help="output directory (file-producing commands default to the working directory)")
    sub.add_argument("--tol", type=float, default=None,
                     help="tolerance override")
    sub.add_argument("--grid", help="grid override T_MIN:T_MAX:N")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable JSON to stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="olct",
        description="Offset linear canonical transform and "
                    "duration-bandwidth bound checks",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("transform", help="emit a spectrum and the "
                          "energy-conservation verdict")
    _add_common(sub)
    sub.set_defaults(func=cmd_transform)

    sub = subs.add_parser("ppr", help="check the spectral-moment identity")
    _add_common(sub)
    sub.set_defaults(func=cmd_ppr)

    sub = subs.add_parser("verify", help="verify one inequality end to end")
    _add_common(sub)
    sub.add_argument("--bound", choices=("hpw", "shw", "hw"), default="shw")
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("sweep", help="family sweep over r")
    _add_common(sub)
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("bound-table", help="closed-form bound comparison")
    _add_common(sub)
    sub.set_defaults(func=cmd_bound_table)

    sub = subs.add_parser("gap-curve", help="closed-form bound gap factor")
    _add_common(sub)
    sub.set_defaults(func=cmd_gap_curve)

    sub = subs.add_parser("energy", help="emit the four energy densities")
    _add_common(sub)
    sub.set_defaults(func=cmd_energy)
    return parser


def _error_payload(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        report = _error_payload("config", str(exc))
        if getattr(args, "json", False):
            sys.stdout.write(dumps(report) + "\n")
        else:
            sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except NumericsError as exc:
        report = _error_payload("numerics", str(exc))
        if getattr(args, "json", False):
            sys.stdout.write(dumps(report) + "\n")
        else:
            sys.stderr.write(f"numerical precondition failed: {exc}\n")
        return EXIT_NUMERICS
    except ValueError as exc:
        report = _error_payload("config", str(exc))
        if getattr(args, "json", False):
            sys.stdout.write(dumps(report) + "\n")
        else:
            sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
