"""Dual-strike digital options, superhedge costs, dominance diagnostics."""

import math

import numpy as np
import pytest

from xccy_eps import (
    EpsStructure,
    MarketParams,
    bs_option,
    delta_q,
    make_buffer,
    make_floor,
    price_eps_domestic,
    price_eps_effective,
    price_eps_quanto,
    psi,
)
from xccy_eps.basket_pricing import McConfig, mc_basket_eps
from xccy_eps.superhedge import (
    approx_hedge_cost,
    dominance_check,
    dual_digital_call_dom,
    dual_digital_call_for,
    dual_digital_put_dom,
    dual_digital_put_for,
    quanto_dual_digital_call_dom,
    quanto_dual_digital_call_for,
    quanto_dual_digital_put_dom,
    quanto_dual_digital_put_for,
    rho_effective,
    rho_quanto,
    superhedge_cost,
    superhedge_payoff,
)

from oracles import joint_normalized_terminals

T = 1.0


def params_with(base, **kwargs):
    fields = dict(r_d=base.r_d, r_f=base.r_f, sigma_d=base.sigma_d,
                  sigma_f=base.sigma_f, sigma_q=base.sigma_q,
                  q0=base.q0, s_d0=base.s_d0, s_f0=base.s_f0)
    fields.update(kwargs)
    return MarketParams(**fields)


# ---------------------------------------------------------------------------
# correlations
# ---------------------------------------------------------------------------

def test_rho_quanto_equals_input_correlation(params, params_rounded):
    assert rho_quanto(params) == pytest.approx(0.10, abs=1e-12)
    assert rho_quanto(params_rounded) == pytest.approx(0.10, abs=1e-3)


def test_rho_effective_reduces_without_fx_vol(params):
    p = params_with(params, sigma_q=[0.0] * 3)
    assert rho_effective(p) == pytest.approx(rho_quanto(p), abs=1e-15)


def test_rho_effective_parallel_is_one(params):
    p = params_with(params, sigma_f=[0.07, 0.0, 0.0], sigma_q=[0.05, 0.0, 0.0])
    assert rho_effective(p) == pytest.approx(1.0, abs=1e-15)


def test_rho_rejects_zero_vol(params):
    p = params_with(params, sigma_d=[0.0] * 3)
    with pytest.raises(ValueError):
        rho_effective(p)


# ---------------------------------------------------------------------------
# dual digitals: limits and degenerate cases
# ---------------------------------------------------------------------------

def test_dual_digital_small_strike_limits(params):
    k = 1e-12
    assert dual_digital_call_dom(k, params, T) == pytest.approx(1.0, abs=1e-9)
    assert dual_digital_call_for(k, params, T) == pytest.approx(1.0, abs=1e-9)
    assert dual_digital_put_dom(k, params, T) == pytest.approx(0.0, abs=1e-12)
    assert dual_digital_put_for(k, params, T) == pytest.approx(0.0, abs=1e-12)
    assert quanto_dual_digital_call_dom(k, params, T) == pytest.approx(1.0, abs=1e-9)
    expected = math.exp(delta_q(params) * T)
    assert quanto_dual_digital_call_for(k, params, T) == pytest.approx(expected, abs=1e-9)


def test_dual_digital_identical_assets_is_vanilla(params):
    # sigma_f + sigma_q aligned with sigma_d: the indicator is implied
    p = params_with(params, sigma_f=[0.07, 0.0, 0.0], sigma_q=[0.03, 0.0, 0.0])
    for k in (0.9, 1.0, 1.1):
        vanilla = bs_option("call", 1.0, k, p.r_d, 0.0, p.vol_d, T)
        assert abs(dual_digital_call_dom(k, p, T) - vanilla) < 1e-10
        assert abs(dual_digital_call_for(k, p, T) - vanilla) < 1e-10


def test_dual_digital_symmetric_assets_match(params):
    p = params_with(params, sigma_f=[0.02, 0.08, 0.0], sigma_q=[0.08, -0.08, 0.0])
    assert np.allclose(p.sigma_fe, p.sigma_d)
    for k in (0.9, 1.05):
        assert dual_digital_call_dom(k, p, T) == pytest.approx(
            dual_digital_call_for(k, p, T), abs=1e-12)


def test_dual_digital_large_strike_put(params):
    k = 10.0
    k_tilde = k * math.exp(-params.r_d * T)
    got = dual_digital_put_dom(k, params, T)
    assert abs(got - (k_tilde - 1.0)) < 1e-3
    got = dual_digital_put_for(k, params, T)
    assert abs(got - (k_tilde - 1.0)) < 1e-3


def test_dual_digital_below_vanilla(params):
    for k in np.linspace(0.8, 1.2, 9):
        call = bs_option("call", 1.0, k, params.r_d, 0.0, params.vol_d, T)
        put = bs_option("put", 1.0, k, params.r_d, 0.0, params.vol_d, T)
        assert dual_digital_call_dom(k, params, T) <= call + 1e-14
        assert dual_digital_put_dom(k, params, T) <= put + 1e-14


def test_quanto_dual_digitals_reduce_to_effective(params):
    p = params_with(params, r_f=params.r_d, sigma_q=[0.0] * 3)
    assert delta_q(p) == 0.0
    for k in (0.9, 1.0, 1.15):
        assert quanto_dual_digital_call_dom(k, p, T) == pytest.approx(
            dual_digital_call_dom(k, p, T), abs=1e-14)
        assert quanto_dual_digital_call_for(k, p, T) == pytest.approx(
            dual_digital_call_for(k, p, T), abs=1e-14)
        assert quanto_dual_digital_put_for(k, p, T) == pytest.approx(
            dual_digital_put_for(k, p, T), abs=1e-14)


def test_dual_digital_validates(params):
    with pytest.raises(ValueError):
        dual_digital_call_dom(0.0, params, T)
    with pytest.raises(ValueError):
        dual_digital_call_dom(1.0, params, 0.0)


# ---------------------------------------------------------------------------
# dual digitals against Monte Carlo payoff oracles
# ---------------------------------------------------------------------------

def _oracle(payoffs, rate):
    disc = math.exp(-rate * T) * payoffs
    return disc.mean(), disc.std(ddof=1) / math.sqrt(disc.size)


def test_dual_digitals_match_mc_oracles(params):
    rng = np.random.default_rng(314159)
    s_d, s_f, s_fe = joint_normalized_terminals(rng, 1_000_000, params, T)
    q_scale = math.exp(0.0)
    for k in (0.95, 1.10):
        cases = [
            (dual_digital_call_dom, np.maximum(s_d - k, 0.0) * (s_fe >= k)),
            (dual_digital_call_for, np.maximum(s_fe - k, 0.0) * (s_d >= k)),
            (dual_digital_put_dom, np.maximum(k - s_d, 0.0) * (s_fe <= k)),
            (dual_digital_put_for, np.maximum(k - s_fe, 0.0) * (s_d <= k)),
            (quanto_dual_digital_call_dom, np.maximum(s_d - k, 0.0) * (s_f >= k)),
            (quanto_dual_digital_call_for, q_scale * np.maximum(s_f - k, 0.0) * (s_d >= k)),
            (quanto_dual_digital_put_dom, np.maximum(k - s_d, 0.0) * (s_f <= k)),
            (quanto_dual_digital_put_for, q_scale * np.maximum(k - s_f, 0.0) * (s_d <= k)),
        ]
        for pricer, payoff in cases:
            mean, se = _oracle(payoff, params.r_d)
            assert abs(pricer(k, params, T) - mean) < 3.0 * se, pricer.__name__


# ---------------------------------------------------------------------------
# superhedge cost
# ---------------------------------------------------------------------------

def test_superhedge_effective_benchmark_rows(params):
    b = make_buffer(-0.05, 0.05, 0.5, 0.5)
    got = superhedge_cost(b, "effective", 0.5, params, T)
    assert 100.0 * got.value == pytest.approx(-0.378, abs=0.002)
    f = make_floor(-0.05, 0.10, 0.8, 0.5)
    got = superhedge_cost(f, "effective", 0.2, params, T)
    assert 100.0 * got.value == pytest.approx(2.163, abs=0.002)


def test_superhedge_cost_equals_expected_payoff(params):
    # closed form vs the discounted pathwise dominating claim
    rng = np.random.default_rng(2718)
    s_d, s_f, s_fe = joint_normalized_terminals(rng, 1_000_000, params, T)
    cases = [
        (make_buffer(-0.05, 0.05, 0.5, 0.5), "effective", 0.5),
        (make_floor(-0.15, 0.10, 0.8, 0.5), "effective", 0.2),
        (make_buffer(-0.10, 0.10, 0.8, 0.5), "quanto", 0.8),
        (make_floor(-0.05, 0.10, 0.8, 0.5), "quanto", 0.2),
    ]
    for structure, variant, w in cases:
        fx = s_fe if variant == "effective" else s_f
        payoff = superhedge_payoff(structure, variant, w, s_d, fx)
        mean, se = _oracle(payoff, params.r_d)
        got = superhedge_cost(structure, variant, w, params, T).value
        assert abs(got - mean) < 3.0 * se


def test_superhedge_collapses_at_endpoints(params):
    b = make_buffer(-0.05, 0.05, 0.5, 0.5)
    f = make_floor(-0.10, 0.10, 0.8, 0.5)
    for s in (b, f):
        assert superhedge_cost(s, "effective", 1.0, params, T).value == pytest.approx(
            price_eps_domestic(s, params, T).value, abs=1e-12)
        assert superhedge_cost(s, "effective", 0.0, params, T).value == pytest.approx(
            price_eps_effective(s, params, T).value, abs=1e-12)
        assert superhedge_cost(s, "quanto", 0.0, params, T).value == pytest.approx(
            price_eps_quanto(s, params, T, q_bar=1.0).value, abs=1e-12)


def test_superhedge_dominates_mc_quote(params):
    cfg = McConfig(n_paths=200_000, seed=8, partitions=8)
    for structure, variant, w in [
        (make_buffer(-0.05, 0.05, 0.5, 0.5), "effective", 0.5),
        (make_floor(-0.15, 0.10, 0.8, 0.5), "quanto", 0.5),
    ]:
        est = mc_basket_eps(structure, variant, w, params, T, cfg)
        sup = superhedge_cost(structure, variant, w, params, T).value
        assert sup >= est.value + 3.0 * est.std_error


def test_superhedge_monotone_in_rates(params):
    base = superhedge_cost(make_buffer(-0.05, 0.10, 0.5, 0.5), "effective", 0.5, params, T).value
    up_fee = superhedge_cost(make_buffer(-0.05, 0.10, 0.5, 0.6), "effective", 0.5, params, T).value
    up_prot = superhedge_cost(make_buffer(-0.05, 0.10, 0.6, 0.5), "effective", 0.5, params, T).value
    assert up_fee < base < up_prot
    base = superhedge_cost(make_floor(-0.05, 0.10, 0.8, 0.5), "quanto", 0.5, params, T).value
    up_p1 = superhedge_cost(make_floor(-0.05, 0.10, 0.9, 0.5), "quanto", 0.5, params, T).value
    assert up_p1 > base


def test_superhedge_rejects_general_structures(params):
    multi = EpsStructure((-0.05, -0.10), (0.0, 0.5, 0.8), (0.10,), (0.0, 0.5))
    with pytest.raises(ValueError):
        superhedge_cost(multi, "effective", 0.5, params, T)
    first_fee = EpsStructure((-0.05,), (0.0, 0.5), (0.05,), (0.2, 0.5))
    with pytest.raises(ValueError):
        superhedge_cost(first_fee, "effective", 0.5, params, T)
    mixed = EpsStructure((-0.05,), (0.4, 0.5), (0.05,), (0.0, 0.5))
    with pytest.raises(ValueError):
        superhedge_cost(mixed, "effective", 0.5, params, T)


# ---------------------------------------------------------------------------
# approximate hedge
# ---------------------------------------------------------------------------

def test_approx_hedge_endpoints(params):
    s = make_buffer(-0.05, 0.05, 0.5, 0.5)
    assert approx_hedge_cost(s, "effective", 1.0, params, T) == pytest.approx(
        price_eps_domestic(s, params, T).value, abs=1e-15)
    assert approx_hedge_cost(s, "effective", 0.0, params, T) == pytest.approx(
        price_eps_effective(s, params, T).value, abs=1e-15)


def test_approx_hedge_is_the_weighted_net(params):
    s = make_buffer(-0.05, 0.05, 0.5, 0.5)
    got = approx_hedge_cost(s, "effective", 0.5, params, T)
    assert 100.0 * got == pytest.approx(-1.620, abs=0.002)


# ---------------------------------------------------------------------------
# dominance diagnostics
# ---------------------------------------------------------------------------

def test_dominance_no_violations(params):
    for structure, variant, w in [
        (make_buffer(-0.05, 0.05, 0.5, 0.5), "effective", 0.5),
        (make_buffer(-0.10, 0.10, 0.8, 0.5), "quanto", 0.2),
        (make_floor(-0.15, 0.10, 0.8, 0.8), "effective", 0.5),
        (make_floor(-0.05, 0.10, 0.8, 0.5), "quanto", 0.8),
    ]:
        report = dominance_check(structure, variant, w, params, T, 100_000, seed=7)
        assert report.violations == 0
        assert report.n_paths == 100_000


def test_dominance_collapses_at_endpoints(params):
    s = make_buffer(-0.05, 0.05, 0.5, 0.5)
    for w in (0.0, 1.0):
        report = dominance_check(s, "effective", w, params, T, 50_000, seed=3)
        assert report.violations == 0
        assert report.max_gap <= 1e-12


def test_dominance_gap_positive_inside(params):
    s = make_buffer(-0.05, 0.05, 0.5, 0.5)
    report = dominance_check(s, "effective", 0.5, params, T, 100_000, seed=7)
    assert report.mean_gap > 0.0
    # consistent with the superhedge cost exceeding the Monte Carlo quote
    est = mc_basket_eps(s, "effective", 0.5, params, T,
                        McConfig(n_paths=100_000, seed=7, partitions=4))
    assert superhedge_cost(s, "effective", 0.5, params, T).value > est.value


def test_superhedge_payoff_dominates_pointwise(params):
    # deterministic grid sweep, independent of simulation
    s_d, fx = np.meshgrid(np.linspace(0.5, 1.6, 111), np.linspace(0.5, 1.6, 111))
    s_d, fx = s_d.ravel(), fx.ravel()
    for structure in (make_buffer(-0.05, 0.05, 0.5, 0.5),
                      make_floor(-0.10, 0.10, 0.8, 0.5)):
        for w in (0.3, 0.5, 0.7):
            liability = -psi(structure, w * s_d + (1.0 - w) * fx - 1.0)
            y_hat = superhedge_payoff(structure, "effective", w, s_d, fx)
            assert np.all(y_hat - liability >= -1e-12)
