import math

import numpy as np
import pytest

import olct
from olct.errors import NumericsError

from conftest import DEFAULT_GRID, EXAMPLE_PARAMS, completed_params, ft_eq3, rquad


# ---------------------------------------------------------------------------
# coefficients


def test_derivative_product_coeffs():
    assert olct.derivative_product_coeff(1, 0) == 1.0
    assert olct.derivative_product_coeff(2, 1) == -2.0
    assert olct.derivative_product_coeff(4, 2) == 2.0
    with pytest.raises(ValueError):
        olct.derivative_product_coeff(2, 2)
    with pytest.raises(ValueError):
        olct.derivative_product_coeff(1, -1)


def test_modulation_square_coeffs():
    for q in range(5):
        assert olct.modulation_square_coeff(q, q, 3.7) == 1.0
    assert olct.modulation_square_coeff(1, 0, 2.0) == 4.0
    assert olct.modulation_square_coeff(2, 2, 0.0) == 1.0  # alpha^0 at alpha=0
    with pytest.raises(ValueError):
        olct.modulation_square_coeff(1, 2, 1.0)


def test_modulation_cross_coeffs():
    assert olct.modulation_cross_coeff(1, 0, 1, 2.0, 1) == 2.0
    assert olct.modulation_cross_coeff(1, 0, 1, 2.0, -1) == -2.0
    with pytest.raises(ValueError):
        olct.modulation_cross_coeff(1, 1, 1, 2.0, 1)  # needs i < z
    with pytest.raises(ValueError):
        olct.modulation_cross_coeff(1, 0, 1, 2.0, 2)


def test_derived_signs():
    assert olct.derived_sign(1, 0) == -1
    assert olct.derived_sign(2, 0) == 1
    assert olct.derived_sign(2, 1) == -1


# ---------------------------------------------------------------------------
# weighted integrals


def test_weighted_square_integral_p1(grid):
    # p = 1, q = n = 0 with unit weight: the integrand is d/dt[t] |g|^2 and
    # the integrated-by-parts sign is (-1), so the value is minus the energy
    g = olct.SampledSignal(grid, np.exp(-grid.points() ** 2))
    cfg = olct.HpwConfig(p=1)
    val = olct.weighted_square_integral(g, cfg, 0, 0)
    assert val == pytest.approx(-olct.energy(g), rel=1e-12)


def test_weighted_square_integral_odd_weight_vanishes(grid):
    # odd weight derivative against an even |g|^2
    ramp = olct.WeightFunction(
        eval_fn=lambda t: np.asarray(t, dtype=float),
        deriv_factory=lambda k: (
            (lambda t: np.ones_like(np.asarray(t, dtype=float))) if k == 1
            else (lambda t: np.zeros_like(np.asarray(t, dtype=float)))),
        max_order=8, label="ramp")
    g = olct.SampledSignal(grid, np.exp(-grid.points() ** 2))
    cfg = olct.HpwConfig(p=1, omega=ramp)
    # (t * t)' = 2t is odd
    assert abs(olct.weighted_square_integral(g, cfg, 0, 0)) <= 1e-10


def test_weighted_cross_integral_requires_distinct_indices(grid):
    g = olct.SampledSignal(grid, np.exp(-grid.points() ** 2))
    cfg = olct.HpwConfig(p=2)
    with pytest.raises(ValueError, match="i < z"):
        olct.weighted_cross_integral(g, cfg, 1, 1, 1)


def test_weight_deriv_centered_leibniz():
    w = olct.exp_weight(2.0)
    t = np.linspace(-1.5, 1.5, 11)
    # [(t - 0.3)^2 e^{-2t}]'' by hand
    u = t - 0.3
    expected = np.exp(-2 * t) * (2.0 - 8.0 * u + 4.0 * u * u)
    got = olct.weight_deriv_centered(w, 2, 0.3, 2, t)
    assert np.max(np.abs(got - expected)) < 1e-12


# ---------------------------------------------------------------------------
# the bound functional


def test_core_p1_unit_weight_is_energy(grid, example_params):
    f = olct.gaussian_chirp(2.0, example_params.chirp_rate).sample(grid)
    breakdown = olct.hpw_core(f, example_params, olct.HpwConfig(p=1))
    assert abs(breakdown.core) == pytest.approx(olct.energy(f), rel=1e-10)
    # integrated-by-parts sign makes the functional the negative closed form
    assert breakdown.core == pytest.approx(-olct.energy(f), rel=1e-10)


def test_core_p1_weighted_oracle(example_signal, example_params):
    cfg = olct.HpwConfig(p=1, omega=olct.exp_weight(2.0))
    breakdown = olct.hpw_core(example_signal, example_params, cfg)
    oracle = rquad(lambda t: (1 - 2 * t) * np.exp(-2 * t - 2 * t * t), -30, 30)
    assert abs(breakdown.core) == pytest.approx(abs(oracle), rel=1e-8)
    assert breakdown.core == pytest.approx(-oracle, rel=1e-8)
    assert oracle == pytest.approx(2.0 * math.exp(0.5) * math.sqrt(math.pi / 2.0),
                                   rel=1e-10)


@pytest.mark.parametrize("t_m", [0.0, 0.4])
@pytest.mark.parametrize("weight_rate", [None, 1.0, 3.0])
@pytest.mark.parametrize("params", [EXAMPLE_PARAMS, completed_params(0.6, 0.5),
                                    completed_params(0.0, 1.0, tau=1.0)])
def test_core_matches_second_order_closed_form(t_m, weight_rate, params):
    w = olct.unit_weight() if weight_rate is None else olct.exp_weight(weight_rate)
    f = olct.gaussian_chirp(2.0, params.chirp_rate).sample(DEFAULT_GRID)
    cfg = olct.HpwConfig(p=1, t_m=t_m, omega=w)
    breakdown = olct.hpw_core(f, params, cfg)
    closed = olct.second_order_core_closed_form(f, w, t_m)
    assert abs(breakdown.core) == pytest.approx(abs(closed), rel=1e-6)
    assert breakdown.core == pytest.approx(-closed, rel=1e-6)


def test_core_p1_printed_parity_flips_sign(example_signal, example_params):
    cfg = olct.HpwConfig(p=1, omega=olct.exp_weight(2.0), parity_rule="q")
    breakdown = olct.hpw_core(example_signal, example_params, cfg)
    closed = olct.second_order_core_closed_form(
        example_signal, olct.exp_weight(2.0))
    assert breakdown.core == pytest.approx(closed, rel=1e-8)


def test_core_p2_unweighted_gaussian(grid):
    # q=0 term: integral (t^2)'' e^{-2t^2} = 2 sqrt(pi/2); q=1 term (alpha=0):
    # D_1 * integral t^2 |g'|^2 = -2 * (3/4) sqrt(pi/2); total (1/2) sqrt(pi/2)
    f = olct.SampledSignal(grid, np.exp(-grid.points() ** 2))
    breakdown = olct.hpw_core(f, olct.ft_params(), olct.HpwConfig(p=2))
    assert breakdown.core == pytest.approx(0.5 * math.sqrt(math.pi / 2.0), rel=1e-8)
    assert [term.q for term in breakdown.terms] == [0, 1]
    assert breakdown.terms[0].coeff == 1.0
    assert breakdown.terms[1].coeff == -2.0


def test_core_p2_weighted_modulated_oracle():
    """Full independent check of the p = 2 machinery with active cross terms.

    The oracle rebuilds E = sum_q D_q F_q from scratch: analytic derivatives
    of the chirp-multiplied signal, hand-expanded weight derivatives, and
    adaptive quadrature, sharing no code with the library path.
    """
    params = completed_params(0.6, 0.5, tau=1.0)   # chirp rate 0.6
    f = olct.gaussian_chirp(2.0, 1.5).sample(DEFAULT_GRID)
    t_m, xi_m = 0.2, 1.5
    cfg = olct.HpwConfig(p=2, t_m=t_m, xi_m=xi_m, omega=olct.exp_weight(1.0))
    breakdown = olct.hpw_core(f, params, cfg)

    alpha = (xi_m - params.tau) / params.b          # = 1.0
    gam = -1.0 + 1j * (params.chirp_rate - 1.5)     # g = exp(gam t^2)
    g0 = lambda t: np.exp(gam * t * t)
    g1 = lambda t: 2.0 * gam * t * np.exp(gam * t * t)

    def w2(t, order):
        # derivatives of (t - t_m)^2 e^{-t}
        u = t - t_m
        if order == 0:
            return u * u * np.exp(-t)
        if order == 2:
            return np.exp(-t) * (2.0 - 4.0 * u + u * u)
        raise AssertionError

    i_00 = rquad(lambda t: w2(t, 2) * abs(g0(t)) ** 2, -30, 30)
    i_10 = rquad(lambda t: w2(t, 0) * abs(g0(t)) ** 2, -30, 30)
    i_11 = rquad(lambda t: w2(t, 0) * abs(g1(t)) ** 2, -30, 30)
    i_101 = rquad(lambda t: w2(t, 0)
                  * np.real(1j * g0(t) * np.conj(g1(t))), -30, 30)
    f0 = i_00                                        # B_00 = 1, sign (+1)^2
    f1 = alpha**2 * i_10 + i_11 + 2.0 * (-alpha) * i_101
    oracle = 1.0 * f0 + (-2.0) * f1
    assert breakdown.core == pytest.approx(oracle, rel=1e-6)


def test_core_assembles_from_public_integrals(grid):
    # the aggregate path must agree with manual assembly from the per-index
    # operations and coefficient functions
    params = completed_params(0.6, 0.5, tau=1.0)
    f = olct.gaussian_chirp(2.0, 1.5).sample(grid)
    cfg = olct.HpwConfig(p=2, t_m=0.2, xi_m=1.5, omega=olct.exp_weight(1.0))
    breakdown = olct.hpw_core(f, params, cfg)

    t = grid.points()
    g = f.with_values(f.values * np.exp(1j * params.chirp_rate * t * t))
    alpha = olct.demodulation_freq(params, cfg.xi_m)
    total = 0.0
    for q in (0, 1):
        f_q = sum(olct.modulation_square_coeff(q, n, alpha)
                  * olct.weighted_square_integral(g, cfg, q, n)
                  for n in range(q + 1))
        for i in range(q + 1):
            for z in range(i + 1, q + 1):
                c = olct.modulation_cross_coeff(q, i, z, alpha,
                                                olct.derived_sign(q, i))
                f_q += 2.0 * c * olct.weighted_cross_integral(g, cfg, q, i, z)
        total += olct.derivative_product_coeff(cfg.p, q) * f_q
    assert breakdown.core == pytest.approx(total, rel=1e-12)


def test_core_rejects_degenerate(grid):
    f = olct.SampledSignal(grid, np.exp(-grid.points() ** 2))
    with pytest.raises(ValueError, match="b != 0"):
        olct.hpw_core(f, olct.OlctParams(2.0, 0.0, 0.0, 0.5), olct.HpwConfig(p=1))


def test_hpw_config_validation():
    with pytest.raises(ValueError):
        olct.HpwConfig(p=0)
    with pytest.raises(ValueError):
        olct.HpwConfig(p=5)
    with pytest.raises(ValueError):
        olct.HpwConfig(p=1, parity_rule="x")


# ---------------------------------------------------------------------------
# gram terms


def test_gram_offset_symmetric_cases(grid):
    h = olct.default_unit_gaussian(grid)
    u = h.with_values(1.7 * h.values)
    assert abs(olct.gram_offset(u, u, h)) <= 1e-12
    assert abs(olct.gram_offset(h, h, h)) <= 1e-12


def test_gram_offset_rejects_unnormalized(grid):
    h = olct.default_unit_gaussian(grid)
    bad = h.with_values(2.0 * h.values)
    with pytest.raises(NumericsError, match="unit norm"):
        olct.gram_offset(h, h, bad)


def test_gram_offset_is_admissible(example_signal, example_params):
    cfg = olct.HpwConfig(p=1, omega=olct.exp_weight(2.0))
    u, v = olct.moment_pair(example_signal, example_params, cfg)
    h = olct.default_unit_gaussian(example_signal.grid)
    a = olct.gram_offset(u, v, h)
    a_star = olct.saturating_gram_term(u, v)
    assert abs(a) <= a_star * (1.0 + 1e-12)


def test_saturating_term_definition(example_signal, example_params):
    cfg = olct.HpwConfig(p=1, omega=olct.exp_weight(2.0))
    u, v = olct.moment_pair(example_signal, example_params, cfg)
    a_star = olct.saturating_gram_term(u, v)
    w = olct.quadrature_weights(u.grid.n, u.grid.dt)
    uv = float(np.sum(w * np.abs(u.values) * np.abs(v.values)))
    assert a_star**2 + uv**2 == pytest.approx(
        olct.energy(u) * olct.energy(v), rel=1e-12)


def test_saturating_term_zero_for_proportional_pair(grid, example_params):
    # with a unit weight the minimizer gives |u| proportional to |v|
    f = olct.minimizer_signal(1.0, 1.0, 0.0, 0.0, example_params).sample(grid)
    cfg = olct.HpwConfig(p=1)
    u, v = olct.moment_pair(f, example_params, cfg)
    a_star = olct.saturating_gram_term(u, v)
    assert a_star**2 <= 1e-10 * olct.energy(u) * olct.energy(v)


# ---------------------------------------------------------------------------
# right-hand sides


def test_rhs_values_and_ordering():
    assert olct.hpw_rhs(0.0, 0.5, 1) == 0.0
    assert olct.shw_rhs(2.0, 0.05, 1) == pytest.approx(0.05)
    core, b, p = -1.3, 0.4, 2
    plain = olct.hpw_rhs(core, b, p)
    for a in (0.0, 1e-3, 0.5, 10.0):
        sharp = olct.shw_rhs(math.hypot(core, 2 * a), b, p)
        if a == 0.0:
            assert sharp == plain
        else:
            assert sharp > plain
    with pytest.raises(ValueError):
        olct.hw_rhs(1.0, 0.5, 1)
    with pytest.raises(ValueError):
        olct.hpw_rhs(1.0, 0.0, 1)


def test_breakdown_sharpening_invariants(example_signal, example_params):
    cfg = olct.HpwConfig(p=1, omega=olct.exp_weight(2.0))
    breakdown = olct.hpw_core(example_signal, example_params, cfg)
    for a in (0.0, 0.3, 2.0):
        sharp = breakdown.with_gram(a, example_params.b, cfg.p)
        assert sharp.sharpened >= abs(sharp.core)
        assert sharp.shw_rhs >= sharp.hpw_rhs
        if a == 0.0:
            assert sharp.shw_rhs == sharp.hpw_rhs
        else:
            assert sharp.shw_rhs - sharp.hpw_rhs > 1e-12


# ---------------------------------------------------------------------------
# closed-form bound pair


def test_sharpened_bound_closed_form_value():
    val = olct.sharpened_bound_closed_form(2.0, 0.05)
    assert val == pytest.approx((0.0025 / 2.0) * math.pi * math.exp(2.0) * 1.25,
                                rel=1e-14)
    assert val == pytest.approx(0.036270944308380286, rel=1e-12)


def test_gap_factor_positive():
    for r in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        assert olct.bound_gap_factor(r) > 0.0


def test_bound_difference_identity():
    for r in (0.1, 0.37, 1.0, 2.0, 4.5, 9.95):
        for b in (0.05, 1.0):
            diff = (olct.sharpened_bound_closed_form(r, b)
                    - olct.reference_bound_closed_form(r, b))
            identity = (b * b / 2.0) * math.pi * math.exp(r / 2.0) \
                * olct.bound_gap_factor(r)
            assert diff == pytest.approx(identity, rel=1e-10)


def test_closed_forms_reject_nonpositive_r():
    for fn in (olct.sharpened_bound_closed_form, olct.reference_bound_closed_form):
        with pytest.raises(ValueError):
            fn(0.0, 1.0)
    with pytest.raises(ValueError):
        olct.bound_gap_factor(-1.0)


# ---------------------------------------------------------------------------
# reduction to the plain Fourier convention


def test_ft_reduction_bridges_conventions(grid):
    """With the Fourier parameter set, the bound equals 2*pi times the bound
    of the cycles-convention pipeline evaluated at sigma_m = xi_m / (2*pi)."""
    f = olct.gaussian_chirp(2.0, 0.8).sample(grid)
    w = olct.exp_weight(1.0)
    t_m, xi_m = 0.1, 0.7
    cfg = olct.HpwConfig(p=1, t_m=t_m, xi_m=xi_m, omega=w)
    ft = olct.ft_params()

    spec = olct.olct_forward(f, ft, olct.default_xi_grid(f, ft, xi_m=xi_m))
    mu_t = olct.time_moment_2p(f, olct.MomentSpec(p=1, t_m=t_m, xi_m=xi_m, omega=w))
    mu_s = olct.spectral_moment_2p(spec, 1, xi_m)
    lhs_olct = math.sqrt(mu_t) * math.sqrt(mu_s)
    rhs_olct = olct.hpw_core(f, ft, cfg).hpw_rhs

    # cycles-convention side, fully independent quadrature
    sigma_m = xi_m / (2.0 * math.pi)
    sigma = np.linspace(-4.0, 4.0, 2049)
    fhat = ft_eq3(f, sigma)
    w_s = olct.quadrature_weights(2049, sigma[1] - sigma[0])
    mu_s_ft = float(np.sum(w_s * (sigma - sigma_m) ** 2 * np.abs(fhat) ** 2))
    lhs_ft = math.sqrt(mu_t) * math.sqrt(mu_s_ft)
    core_ft = rquad(lambda t: (np.exp(-t) - (t - t_m) * np.exp(-t))
                    * np.exp(-2 * t * t), -30, 30)
    rhs_ft = 1.0 / (2.0 * math.pi * 2.0) * abs(core_ft)

    assert lhs_olct == pytest.approx(2.0 * math.pi * lhs_ft, rel=1e-5)
    assert rhs_olct == pytest.approx(2.0 * math.pi * rhs_ft, rel=1e-5)


# ---------------------------------------------------------------------------
# identity validators


def test_identity1_product_rule(grid):
    f = olct.gaussian_chirp(2.0, 0.0)
    assert olct.check_identity1(f, 1, grid) <= 1e-8


def test_identity1_second_order_chirp(grid):
    f = olct.gaussian_chirp(2.0, 3.0)
    assert olct.check_identity1(f, 2, grid) <= 1e-6


def test_identity1_real_odd_order(grid):
    f = olct.gaussian_chirp(2.0, 0.0)
    assert olct.check_identity1(f, 3, grid) <= 1e-6


def test_identity2_order_zero(grid):
    f = olct.gaussian_chirp(2.0, 1.0)
    fit = olct.check_identity2(f, 2.0, 0, grid)
    assert fit.residual <= 1e-12


def test_identity2_first_order(grid):
    f = olct.gaussian_chirp(2.0, 0.0)
    fit = olct.check_identity2(f, 2.0, 1, grid)
    assert fit.best_residual <= 1e-6
    assert fit.residual <= 1e-6  # derived convention already satisfies it


def test_identity2_zero_modulation_kills_cross_terms(grid):
    f = olct.gaussian_chirp(2.0, 1.3)
    fit = olct.check_identity2(f, 0.0, 1, grid)
    assert fit.residual <= 1e-8


@pytest.mark.parametrize("q,expected", [
    (1, {(1, 0): -1}),
    (2, {(2, 0): 1, (2, 1): -1}),
])
def test_identity2_sign_search_finds_derived_assignment(grid, q, expected):
    # a complex chirp is needed: cross terms vanish identically on real signals
    f = olct.gaussian_chirp(2.0, 0.7)
    fit = olct.check_identity2(f, 2.0, q, grid)
    assert fit.best_signs == expected
    assert fit.best_residual <= 1e-6
    print(f"q={q}: identity-satisfying signs {fit.best_signs}")


def test_identity2_rejects_large_q(grid):
    f = olct.gaussian_chirp(2.0, 0.0)
    with pytest.raises(ValueError):
        olct.check_identity2(f, 1.0, 3, grid)
