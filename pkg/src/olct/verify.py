"""End-to-end inequality verification: assemble the moment products and all
right-hand sides into reports, detect equality cases, and run the parameter
sweeps behind the reproduction scenarios.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NumericsError
from .signals import (
    AnalyticSignal,
    Grid,
    SampledSignal,
    energy,
    exp_quadratic,
    exp_weight,
    gaussian_chirp,
    make_grid,
)
from .transform import (
    OlctParams,
    Spectrum,
    default_xi_grid,
    olct_forward,
    parseval_gap,
)
from .moments import (
    MomentSpec,
    abs_moment_p,
    ppr_check,
    spectral_moment_2p,
    time_moment_2p,
)
from .bounds import (
    HpwConfig,
    default_unit_gaussian,
    gram_offset,
    hw_rhs,
    hpw_core,
    moment_pair,
    saturating_gram_term,
)

__all__ = [
    "UncertaintyReport",
    "SweepRow",
    "verify_hpw",
    "verify_shw",
    "verify_hw",
    "minimizer_signal",
    "family_grid",
    "sweep_r",
    "report_to_dict",
    "reports_to_csv",
    "report_to_json",
    "REPORT_COLUMNS",
    "SWEEP_SCENARIOS",
]

DEFAULT_TOL = 1e-6

# Fixed column order of the CSV serialization (one report per row).
REPORT_COLUMNS = [
    "scenario", "bound", "p", "lhs", "hpw_rhs", "shw_rhs", "hw_rhs",
    "slack_hpw", "slack_shw", "slack_hw",
    "rel_slack_hpw", "rel_slack_shw", "rel_slack_hw",
    "passed_hpw", "passed_shw", "passed_hw",
    "ppr_gap", "parseval_gap", "core", "gram_term", "sharpened",
    "a_mode", "a_admissible", "mu_time", "mu_spec", "energy",
    "holder_time_slack", "holder_spec_slack", "tol",
    "t_min", "t_max", "n", "a", "b", "c", "d", "tau", "eta",
]


@dataclass(frozen=True)
class UncertaintyReport:
    """One verified inequality: left side, right sides, slacks and flags."""

    scenario: str
    bound: str
    p: int
    lhs: float
    parseval_gap: float
    mu_time: float
    mu_spec: float
    energy: float
    tol: float
    grid: Grid
    params: OlctParams
    hpw_rhs: Optional[float] = None
    shw_rhs: Optional[float] = None
    hw_rhs: Optional[float] = None
    slack_hpw: Optional[float] = None
    slack_shw: Optional[float] = None
    slack_hw: Optional[float] = None
    rel_slack_hpw: Optional[float] = None
    rel_slack_shw: Optional[float] = None
    rel_slack_hw: Optional[float] = None
    passed_hpw: Optional[bool] = None
    passed_shw: Optional[bool] = None
    passed_hw: Optional[bool] = None
    ppr_gap: Optional[float] = None
    core: Optional[float] = None
    gram_term: Optional[float] = None
    sharpened: Optional[float] = None
    a_mode: Optional[str] = None
    a_admissible: Optional[bool] = None
    holder_time_slack: Optional[float] = None
    holder_spec_slack: Optional[float] = None

    @property
    def passed(self) -> bool:
        flags = [f for f in (self.passed_hpw, self.passed_shw, self.passed_hw)
                 if f is not None]
        return bool(flags) and all(flags)


def _slack(lhs: float, rhs: float, tol: float) -> tuple:
    slack = lhs - rhs
    rel = slack / lhs if lhs != 0.0 else math.inf if slack > 0 else 0.0
    return slack, rel, bool(slack >= -tol * abs(lhs))


@contextmanager
def _scenario_context(scenario: str):
    """Attach the scenario label to numerical failures raised downstream."""
    try:
        yield
    except NumericsError as exc:
        if scenario:
            raise NumericsError(f"[{scenario}] {exc}") from exc
        raise


def _transform_once(f: SampledSignal, params: OlctParams, xi_m: float,
                    xi_grid: Optional[Grid]) -> Spectrum:
    if xi_grid is None:
        xi_grid = default_xi_grid(f, params, xi_m=xi_m)
    return olct_forward(f, params, xi_grid)


def verify_hpw(f: SampledSignal, params: OlctParams, cfg: HpwConfig,
               tol: float = DEFAULT_TOL, scenario: str = "",
               xi_grid: Optional[Grid] = None) -> UncertaintyReport:
    """Verify the 2p-order bound on one signal/parameter configuration.

    The left side is the product of the 2p-th roots of the weighted time
    moment and the output-domain moment (computed by direct quadrature of
    the transform); the right side comes from the bound functional.  The
    report also carries the relative gap of the spectral-moment identity and
    the energy-conservation gap as numerical health checks.
    """
    with _scenario_context(scenario):
        spectrum = _transform_once(f, params, cfg.xi_m, xi_grid)
        spec = MomentSpec(p=cfg.p, t_m=cfg.t_m, xi_m=cfg.xi_m, omega=cfg.omega)
        mu_t = time_moment_2p(f, spec)
        mu_s = spectral_moment_2p(spectrum, cfg.p, cfg.xi_m)
        lhs = (mu_t * mu_s) ** (1.0 / (2.0 * cfg.p))
        breakdown = hpw_core(f, params, cfg)
        ppr = ppr_check(f, params, cfg.p, cfg.xi_m, xi_grid=spectrum.grid)
        slack, rel, ok = _slack(lhs, breakdown.hpw_rhs, tol)
    return UncertaintyReport(
        scenario=scenario, bound="hpw", p=cfg.p, lhs=lhs,
        hpw_rhs=breakdown.hpw_rhs, slack_hpw=slack, rel_slack_hpw=rel,
        passed_hpw=ok, ppr_gap=ppr.rel_gap,
        parseval_gap=parseval_gap(f, spectrum),
        core=breakdown.core, gram_term=0.0, sharpened=breakdown.sharpened,
        mu_time=mu_t, mu_spec=mu_s, energy=energy(f), tol=tol,
        grid=f.grid, params=params,
    )


def verify_shw(f: SampledSignal, params: OlctParams, cfg: HpwConfig,
               a_mode: str = "saturating", a_value: Optional[float] = None,
               h: Optional[SampledSignal] = None, tol: float = DEFAULT_TOL,
               scenario: str = "",
               xi_grid: Optional[Grid] = None) -> UncertaintyReport:
    """Verify the sharpened bound, with the auxiliary term chosen by mode.

    Modes: ``"zero"`` (A = 0, reduces to the plain bound), ``"fixed"``
    (A = ``a_value`` as given), ``"gram"`` (A = ||u|| x0 - ||v|| y0 against
    the auxiliary function ``h``, default a unit Gaussian), ``"saturating"``
    (the largest admissible A, which turns the bound into an equality
    whenever the plain inequality chain is tight).

    A fixed A beyond the admissible range can push the right side above the
    left; the report flags that case through ``a_admissible`` instead of
    calling it a bound violation.
    """
    if a_mode == "fixed" and a_value is None:
        raise ValueError("a_mode='fixed' needs a_value")
    if a_mode not in ("zero", "fixed", "gram", "saturating"):
        raise ValueError(f"unknown a_mode {a_mode!r}")
    with _scenario_context(scenario):
        spectrum = _transform_once(f, params, cfg.xi_m, xi_grid)
        spec = MomentSpec(p=cfg.p, t_m=cfg.t_m, xi_m=cfg.xi_m, omega=cfg.omega)
        mu_t = time_moment_2p(f, spec)
        mu_s = spectral_moment_2p(spectrum, cfg.p, cfg.xi_m)
        lhs = (mu_t * mu_s) ** (1.0 / (2.0 * cfg.p))

        breakdown = hpw_core(f, params, cfg)
        u, v = moment_pair(f, params, cfg)
        a_star = saturating_gram_term(u, v)
        if a_mode == "zero":
            a_term = 0.0
        elif a_mode == "fixed":
            a_term = float(a_value)
        elif a_mode == "gram":
            if h is None:
                h = default_unit_gaussian(f.grid, cfg.t_m)
            a_term = gram_offset(u, v, h)
        else:
            a_term = a_star

        sharpened = breakdown.with_gram(a_term, params.b, cfg.p)
        ppr = ppr_check(f, params, cfg.p, cfg.xi_m, xi_grid=spectrum.grid)
        slack_h, rel_h, ok_h = _slack(lhs, sharpened.hpw_rhs, tol)
        slack_s, rel_s, ok_s = _slack(lhs, sharpened.shw_rhs, tol)
        admissible = bool(abs(a_term) <= a_star * (1.0 + 1e-12) + 1e-300)
    return UncertaintyReport(
        scenario=scenario, bound="shw", p=cfg.p, lhs=lhs,
        hpw_rhs=sharpened.hpw_rhs, shw_rhs=sharpened.shw_rhs,
        slack_hpw=slack_h, rel_slack_hpw=rel_h, passed_hpw=ok_h,
        slack_shw=slack_s, rel_slack_shw=rel_s,
        passed_shw=ok_s or (not admissible and a_mode == "fixed"),
        ppr_gap=ppr.rel_gap, parseval_gap=parseval_gap(f, spectrum),
        core=sharpened.core, gram_term=sharpened.gram_term,
        sharpened=sharpened.sharpened, a_mode=a_mode, a_admissible=admissible,
        mu_time=mu_t, mu_spec=mu_s, energy=energy(f), tol=tol,
        grid=f.grid, params=params,
    )


def verify_hw(f: SampledSignal, params: OlctParams, p: int,
              t_m: float = 0.0, xi_m: float = 0.0, tol: float = DEFAULT_TOL,
              scenario: str = "",
              xi_grid: Optional[Grid] = None) -> UncertaintyReport:
    """Verify the absolute-moment bound for p >= 2, including the
    intermediate power-mean inequality (mu_p)^(2/p) E^(1-2/p) >= mu_2 on
    both domains (stored as slacks)."""
    p = int(p)
    if p < 2:
        raise ValueError(f"absolute-moment order must be >= 2, got {p}")
    with _scenario_context(scenario):
        spectrum = _transform_once(f, params, xi_m, xi_grid)
        mu_t = abs_moment_p(f, p, t_m)
        mu_s = abs_moment_p(spectrum, p, xi_m)
        lhs = (mu_t * mu_s) ** (1.0 / p)
        e_f = energy(f)
        e_o = energy(spectrum)
        rhs = hw_rhs(e_f, params.b, p)
        slack, rel, ok = _slack(lhs, rhs, tol)

        mu2_t = abs_moment_p(f, 2, t_m)
        mu2_s = abs_moment_p(spectrum, 2, xi_m)
        holder_t = mu_t ** (2.0 / p) * e_f ** (1.0 - 2.0 / p) - mu2_t
        holder_s = mu_s ** (2.0 / p) * e_o ** (1.0 - 2.0 / p) - mu2_s
    return UncertaintyReport(
        scenario=scenario, bound="hw", p=p, lhs=lhs,
        hw_rhs=rhs, slack_hw=slack, rel_slack_hw=rel, passed_hw=ok,
        parseval_gap=parseval_gap(f, spectrum),
        mu_time=mu_t, mu_spec=mu_s, energy=e_f, tol=tol,
        holder_time_slack=holder_t, holder_spec_slack=holder_s,
        grid=f.grid, params=params,
    )


def minimizer_signal(c0: float, c_p: float, t_m: float, xi_m: float,
                     params: OlctParams) -> AnalyticSignal:
    """The equality-attaining signal
    c0 * exp(-c_p (t - t_m)^2) * exp(j (xi_m/b t - a/(2b) t^2)).

    Its demodulated form is a Gaussian centered at t_m times a unimodular
    factor, so with a unit weight, centered moments, and tau = 0 the
    second-order bound is saturated.
    """
    if not c_p > 0:
        raise ValueError(f"Gaussian rate must be positive, got c_p={c_p}")
    if params.is_degenerate:
        raise ValueError("the minimizer requires b != 0")
    q2 = -c_p - 1j * params.chirp_rate
    q1 = 2.0 * c_p * t_m + 1j * xi_m / params.b
    q0 = -c_p * t_m * t_m
    return exp_quadratic(c0, q2, q1, q0,
                         label=f"minimizer(c0={c0}, c_p={c_p}, t_m={t_m})")


def family_grid(r: float, dt_target: float = 16.0 / 4096.0,
                t_half_min: float = 8.0) -> Grid:
    """Grid wide enough that the Gaussian family exp(-(r/2) t^2) decays
    below the spectral-differentiation edge tolerance."""
    if not r > 0:
        raise ValueError(f"family parameter must be positive, got r={r}")
    t_half = max(t_half_min, math.sqrt(48.0 / r))
    half_n = int(math.ceil(t_half / dt_target))
    return make_grid(-t_half, t_half, 2 * half_n + 1)


@dataclass(frozen=True)
class SweepRow:
    r: float
    lhs: float
    rhs: float


SWEEP_SCENARIOS = {
    "gram": ("gram", None),
    "a0": ("zero", None),
    "a1": ("fixed", 1.0),
    "saturating": ("saturating", None),
}


def _max_workers() -> int:
    raw = os.environ.get("OLCT_NUM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep_r(r_values: Sequence[float], scenario: str, params: OlctParams,
            p: int = 1) -> list:
    """Run the sharpened verification over the chirped-Gaussian family
    f = exp(-(r/2) t^2) exp(-j a/(2b) t^2) with weight exp(-r t), for each r.

    ``scenario`` picks the auxiliary-term mode: ``gram`` (default unit
    Gaussian), ``a0`` (A = 0), ``a1`` (A = 1) or ``saturating``.  Rows come
    back in input order regardless of how the sweep is parallelized
    (``OLCT_NUM_THREADS`` caps the worker count).
    """
    try:
        a_mode, a_value = SWEEP_SCENARIOS[scenario]
    except KeyError:
        raise ValueError(
            f"unknown sweep scenario {scenario!r}; expected one of "
            f"{sorted(SWEEP_SCENARIOS)}"
        )
    rs = [float(r) for r in r_values]
    if any(r <= 0 for r in rs):
        raise ValueError("sweep values must be positive")

    def row(r: float) -> SweepRow:
        grid = family_grid(r)
        f = gaussian_chirp(r, params.chirp_rate).sample(grid)
        cfg = HpwConfig(p=p, omega=exp_weight(r))
        rep = verify_shw(f, params, cfg, a_mode=a_mode, a_value=a_value)
        return SweepRow(r=r, lhs=rep.lhs, rhs=rep.shw_rhs)

    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(row, rs))
    return [row(r) for r in rs]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def report_to_dict(report: UncertaintyReport) -> dict:
    """Flat snake_case dictionary of every report field."""
    out = {}
    for col in REPORT_COLUMNS:
        if col in ("t_min", "t_max", "n"):
            out[col] = getattr(report.grid, col)
        elif col in ("a", "b", "c", "d", "tau", "eta"):
            out[col] = getattr(report.params, col)
        else:
            out[col] = getattr(report, col)
    return out


def report_to_json(report: UncertaintyReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=False)


def reports_to_csv(reports: Iterable[UncertaintyReport]) -> str:
    """CSV with one report per row and the fixed :data:`REPORT_COLUMNS`
    order; floats carry 17 significant digits."""
    lines = [",".join(REPORT_COLUMNS)]
    for rep in reports:
        d = report_to_dict(rep)
        lines.append(",".join(_fmt(d[col]) for col in REPORT_COLUMNS))
    return "\n".join(lines) + "\n"
