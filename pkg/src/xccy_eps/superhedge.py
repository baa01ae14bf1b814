"""Superhedging and approximate hedging of aggregated buffer/floor EPSs.

A basket option on S_w = w A + (1 - w) B is bracketed by single-asset
claims: puts are subadditive, and calls dominate their indicator-gated
counterparts (A_T - K)^+ 1{B_T >= K}.  Combining the two bounds gives a
claim Y_hat that dominates the provider's liability Y = -psi(R_w) pathwise
and is statically replicable with vanilla options plus dual-strike digital
options C*, P* (same strike on the payoff and the indicator asset), which
price in closed form through the bivariate normal CDF.

Quanto variants price every foreign leg per unit notional (guaranteed-rate
scale 1); the printed guaranteed-rate multiplier of the raw foreign-leg
formulas is available through the ``q_bar`` arguments for formula-level
checks but would double-count inside the normalised superhedge cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eps_core import EpsStructure, psi
from .market_model import MarketParams, delta_q, normalized_terminals
from .numerics import GaussianStream, bivariate_normal_cdf as _phi2
from .vanilla_pricing import bs_option

__all__ = [
    "SuperhedgeCost",
    "SuperhedgeLeg",
    "DominanceReport",
    "rho_effective",
    "rho_quanto",
    "dual_digital_call_dom",
    "dual_digital_call_for",
    "dual_digital_put_dom",
    "dual_digital_put_for",
    "quanto_dual_digital_call_dom",
    "quanto_dual_digital_call_for",
    "quanto_dual_digital_put_dom",
    "quanto_dual_digital_put_for",
    "superhedge_cost",
    "approx_hedge_cost",
    "dominance_check",
]


def rho_effective(params: MarketParams) -> float:
    """Instantaneous correlation between S_d and S_fe = Q S_f."""
    den = params.vol_d * params.vol_fe
    if den == 0.0:
        raise ValueError("correlation undefined for a zero volatility norm")
    return float(params.sigma_fe @ params.sigma_d) / den


def rho_quanto(params: MarketParams) -> float:
    """Instantaneous correlation between S_d and S_f."""
    den = params.vol_d * params.vol_f
    if den == 0.0:
        raise ValueError("correlation undefined for a zero volatility norm")
    return float(params.sigma_f @ params.sigma_d) / den


def _dual_digital_nodes(strike: float, params: MarketParams, T: float, quanto: bool):
    """Common abscissae of the four dual-digital formulas.

    Both assets grow at r_d; in the quanto family the second asset is the
    undiscounted foreign equity with drift adjustment delta_q.
    """
    if strike <= 0.0 or T <= 0.0:
        raise ValueError("strike and maturity must be strictly positive")
    sig2 = params.sigma_f if quanto else params.sigma_fe
    v1 = params.vol_d * math.sqrt(T)
    v2 = float(np.linalg.norm(sig2)) * math.sqrt(T)
    if v1 == 0.0 or v2 == 0.0:
        raise ValueError("dual digitals need strictly positive volatilities")
    c12 = float(params.sigma_d @ sig2) * T
    rho = c12 / (v1 * v2)
    dq_t = delta_q(params) * T if quanto else 0.0
    k_tilde = math.exp(-params.r_d * T) * strike
    log_k = -math.log(k_tilde)
    d1 = (log_k - 0.5 * v1 * v1) / v1
    d2 = (log_k + dq_t - 0.5 * v2 * v2) / v2
    g1 = (log_k + 0.5 * v1 * v1) / v1
    g2 = (log_k + dq_t + c12 - 0.5 * v2 * v2) / v2
    h1 = (log_k + c12 - 0.5 * v1 * v1) / v1
    h2 = (log_k + dq_t + 0.5 * v2 * v2) / v2
    return k_tilde, rho, d1, d2, g1, g2, h1, h2, dq_t


def dual_digital_call_dom(strike: float, params: MarketParams, T: float) -> float:
    """Price of (S_d_hat - K)^+ 1{S_fe_hat >= K}."""
    k, rho, d1, d2, g1, g2, _, _, _ = _dual_digital_nodes(strike, params, T, quanto=False)
    return _phi2(g1, g2, rho) - k * _phi2(d1, d2, rho)


def dual_digital_call_for(strike: float, params: MarketParams, T: float) -> float:
    """Price of (S_fe_hat - K)^+ 1{S_d_hat >= K}."""
    k, rho, d1, d2, _, _, h1, h2, _ = _dual_digital_nodes(strike, params, T, quanto=False)
    return _phi2(h1, h2, rho) - k * _phi2(d1, d2, rho)


def dual_digital_put_dom(strike: float, params: MarketParams, T: float) -> float:
    """Price of (K - S_d_hat)^+ 1{S_fe_hat <= K}."""
    k, rho, d1, d2, g1, g2, _, _, _ = _dual_digital_nodes(strike, params, T, quanto=False)
    return k * _phi2(-d1, -d2, rho) - _phi2(-g1, -g2, rho)


def dual_digital_put_for(strike: float, params: MarketParams, T: float) -> float:
    """Price of (K - S_fe_hat)^+ 1{S_d_hat <= K}."""
    k, rho, d1, d2, _, _, h1, h2, _ = _dual_digital_nodes(strike, params, T, quanto=False)
    return k * _phi2(-d1, -d2, rho) - _phi2(-h1, -h2, rho)


def quanto_dual_digital_call_dom(strike: float, params: MarketParams, T: float) -> float:
    """Price of (S_d_hat - K)^+ 1{S_f_hat >= K}."""
    k, rho, d1, d2, g1, g2, _, _, _ = _dual_digital_nodes(strike, params, T, quanto=True)
    return _phi2(g1, g2, rho) - k * _phi2(d1, d2, rho)


def quanto_dual_digital_call_for(strike: float, params: MarketParams, T: float,
                                 q_bar: float = 1.0) -> float:
    """Price of q_bar (S_f_hat - K)^+ 1{S_d_hat >= K} settled in domestic
    currency; q_bar = 1 is the normalised-superhedge convention."""
    k, rho, d1, d2, _, _, h1, h2, dq_t = _dual_digital_nodes(strike, params, T, quanto=True)
    return q_bar * (math.exp(dq_t) * _phi2(h1, h2, rho) - k * _phi2(d1, d2, rho))


def quanto_dual_digital_put_dom(strike: float, params: MarketParams, T: float) -> float:
    """Price of (K - S_d_hat)^+ 1{S_f_hat <= K}."""
    k, rho, d1, d2, g1, g2, _, _, _ = _dual_digital_nodes(strike, params, T, quanto=True)
    return k * _phi2(-d1, -d2, rho) - _phi2(-g1, -g2, rho)


def quanto_dual_digital_put_for(strike: float, params: MarketParams, T: float,
                                q_bar: float = 1.0) -> float:
    """Price of q_bar (K - S_f_hat)^+ 1{S_d_hat <= K} settled in domestic
    currency."""
    k, rho, d1, d2, _, _, h1, h2, dq_t = _dual_digital_nodes(strike, params, T, quanto=True)
    return q_bar * (k * _phi2(-d1, -d2, rho) - math.exp(dq_t) * _phi2(-h1, -h2, rho))


# ---------------------------------------------------------------------------
# superhedge and approximate-hedge costs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperhedgeLeg:
    """One option leg of the superhedge: signed weight times unit price."""

    option_kind: str  # "put" | "call"
    underlying: str   # "S_d" | "S_fe" | "QuantoS_f"
    gated: bool       # True when the payoff carries the other asset's indicator
    strike: float
    weight: float
    price: float


@dataclass(frozen=True)
class SuperhedgeCost:
    """Initial cost plus the itemised option legs."""

    value: float
    components: tuple


def _classify(structure: EpsStructure) -> str:
    """A superhedge is derived only for single-tier buffer and floor shapes."""
    if structure.n_loss != 1 or structure.n_gain != 1:
        raise ValueError("superhedging supports only single-tier buffer/floor structures")
    p1, p2 = structure.protection_rates
    f1, _ = structure.fee_rates
    if f1 != 0.0:
        raise ValueError("superhedging requires a zero first fee rate")
    if p1 == 0.0:
        return "buffer"
    if p2 == 0.0:
        return "floor"
    raise ValueError("structure is neither a buffer (p1 = 0) nor a floor (p2 = 0)")


def _leg_pricers(variant: str, params: MarketParams, T: float):
    """Vanilla put/call and dual-digital call/put pricers for the domestic
    leg and the foreign leg of the chosen variant (quanto legs at unit
    guaranteed-rate scale)."""
    if variant == "effective":
        def put_for(k): return bs_option("put", 1.0, k, params.r_d, 0.0, params.vol_fe, T)
        def call_for(k): return bs_option("call", 1.0, k, params.r_d, 0.0, params.vol_fe, T)
        dd_call_dom, dd_call_for = dual_digital_call_dom, dual_digital_call_for
        dd_put_dom, dd_put_for = dual_digital_put_dom, dual_digital_put_for
    elif variant == "quanto":
        dq = delta_q(params)
        def put_for(k): return bs_option("put", 1.0, k, params.r_d, dq, params.vol_f, T)
        def call_for(k): return bs_option("call", 1.0, k, params.r_d, dq, params.vol_f, T)
        dd_call_dom, dd_call_for = quanto_dual_digital_call_dom, quanto_dual_digital_call_for
        dd_put_dom, dd_put_for = quanto_dual_digital_put_dom, quanto_dual_digital_put_for
    else:
        raise ValueError("variant must be 'effective' or 'quanto'")

    def put_dom(k): return bs_option("put", 1.0, k, params.r_d, 0.0, params.vol_d, T)
    def call_dom(k): return bs_option("call", 1.0, k, params.r_d, 0.0, params.vol_d, T)
    return put_dom, call_dom, put_for, call_for, dd_call_dom, dd_call_for, dd_put_dom, dd_put_for


def superhedge_cost(structure: EpsStructure, variant: str, w: float,
                    params: MarketParams, T: float) -> SuperhedgeCost:
    """Initial cost of the dominating static portfolio for an aggregated
    buffer or floor EPS.

    At the weight endpoints w in {0, 1} the vanished leg's indicator is
    identically true, so the surviving dual digitals collapse to vanilla
    options and the cost coincides with the separate-EPS hedge.
    """
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    kind = _classify(structure)
    (put_dom, call_dom, put_for, call_for,
     dd_call_dom, dd_call_for, dd_put_dom, dd_put_for) = _leg_pricers(variant, params, T)
    k_l = 1.0 + structure.loss_breaks[0]
    k_g = 1.0 + structure.gain_breaks[0]
    for_tag = "S_fe" if variant == "effective" else "QuantoS_f"
    # indicator on the other asset is vacuous when the other leg has zero weight
    dom_gate = w < 1.0
    for_gate = w > 0.0
    gated_call_dom = (lambda k: dd_call_dom(k, params, T)) if dom_gate else call_dom
    gated_put_dom = (lambda k: dd_put_dom(k, params, T)) if dom_gate else put_dom
    gated_call_for = (lambda k: dd_call_for(k, params, T)) if for_gate else call_for
    gated_put_for = (lambda k: dd_put_for(k, params, T)) if for_gate else put_for

    if kind == "buffer":
        p2 = structure.protection_rates[1]
        f2 = structure.fee_rates[1]
        components = (
            SuperhedgeLeg("put", "S_d", False, k_l, w * p2, put_dom(k_l)),
            SuperhedgeLeg("call", "S_d", dom_gate, k_g, -w * f2, gated_call_dom(k_g)),
            SuperhedgeLeg("put", for_tag, False, k_l, (1.0 - w) * p2, put_for(k_l)),
            SuperhedgeLeg("call", for_tag, for_gate, k_g, -(1.0 - w) * f2, gated_call_for(k_g)),
        )
    else:
        p1 = structure.protection_rates[0]
        f2 = structure.fee_rates[1]
        components = (
            SuperhedgeLeg("put", "S_d", False, 1.0, w * p1, put_dom(1.0)),
            SuperhedgeLeg("put", "S_d", dom_gate, k_l, -w * p1, gated_put_dom(k_l)),
            SuperhedgeLeg("call", "S_d", dom_gate, k_g, -w * f2, gated_call_dom(k_g)),
            SuperhedgeLeg("put", for_tag, False, 1.0, (1.0 - w) * p1, put_for(1.0)),
            SuperhedgeLeg("put", for_tag, for_gate, k_l, -(1.0 - w) * p1, gated_put_for(k_l)),
            SuperhedgeLeg("call", for_tag, for_gate, k_g, -(1.0 - w) * f2, gated_call_for(k_g)),
        )
    value = sum(leg.weight * leg.price for leg in components)
    return SuperhedgeCost(value=value, components=components)


def approx_hedge_cost(structure: EpsStructure, variant: str, w: float,
                      params: MarketParams, T: float) -> float:
    """Cost of the indicator-free approximation: the weighted combination of
    the separate domestic and foreign EPS hedges at the aggregated strike
    levels.  Does not dominate the liability in general."""
    from .vanilla_pricing import price_eps_domestic, price_eps_effective, price_eps_quanto

    if variant not in ("effective", "quanto"):
        raise ValueError("variant must be 'effective' or 'quanto'")
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    dom = price_eps_domestic(structure, params, T).value
    if variant == "effective":
        foreign = price_eps_effective(structure, params, T).value
    else:
        foreign = price_eps_quanto(structure, params, T, q_bar=1.0).value
    return w * dom + (1.0 - w) * foreign


# ---------------------------------------------------------------------------
# pathwise dominance diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DominanceReport:
    violations: int
    max_gap: float
    mean_gap: float
    n_paths: int


def superhedge_payoff(structure: EpsStructure, variant: str, w: float,
                      s_d_hat: np.ndarray, fx_hat: np.ndarray) -> np.ndarray:
    """Terminal value of the dominating claim on simulated terminals."""
    kind = _classify(structure)
    k_l = 1.0 + structure.loss_breaks[0]
    k_g = 1.0 + structure.gain_breaks[0]
    ones = np.ones_like(s_d_hat)
    ind_fx_ge = ones if w == 1.0 else (fx_hat >= k_g).astype(float)
    ind_d_ge = ones if w == 0.0 else (s_d_hat >= k_g).astype(float)
    if kind == "buffer":
        p2 = structure.protection_rates[1]
        f2 = structure.fee_rates[1]
        dom = p2 * np.maximum(k_l - s_d_hat, 0.0) - f2 * np.maximum(s_d_hat - k_g, 0.0) * ind_fx_ge
        for_ = p2 * np.maximum(k_l - fx_hat, 0.0) - f2 * np.maximum(fx_hat - k_g, 0.0) * ind_d_ge
        return w * dom + (1.0 - w) * for_
    p1 = structure.protection_rates[0]
    f2 = structure.fee_rates[1]
    ind_fx_le = ones if w == 1.0 else (fx_hat <= k_l).astype(float)
    ind_d_le = ones if w == 0.0 else (s_d_hat <= k_l).astype(float)
    dom = (p1 * np.maximum(1.0 - s_d_hat, 0.0)
           - p1 * np.maximum(k_l - s_d_hat, 0.0) * ind_fx_le
           - f2 * np.maximum(s_d_hat - k_g, 0.0) * ind_fx_ge)
    for_ = (p1 * np.maximum(1.0 - fx_hat, 0.0)
            - p1 * np.maximum(k_l - fx_hat, 0.0) * ind_d_le
            - f2 * np.maximum(fx_hat - k_g, 0.0) * ind_d_ge)
    return w * dom + (1.0 - w) * for_


def dominance_check(structure: EpsStructure, variant: str, w: float,
                    params: MarketParams, T: float, n_paths: int,
                    seed: int) -> DominanceReport:
    """Evaluate the dominating claim against the liability -psi(R_w) on
    simulated terminal states and report violations beyond 1e-12."""
    if variant not in ("effective", "quanto"):
        raise ValueError("variant must be 'effective' or 'quanto'")
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    s_d_hat, s_f_hat, s_fe_hat = normalized_terminals(params, T, n_paths, GaussianStream(seed, 0))
    fx_hat = s_fe_hat if variant == "effective" else s_f_hat
    liability = -psi(structure, w * s_d_hat + (1.0 - w) * fx_hat - 1.0)
    gaps = superhedge_payoff(structure, variant, w, s_d_hat, fx_hat) - liability
    return DominanceReport(
        violations=int(np.sum(gaps < -1e-12)),
        max_gap=float(np.max(gaps)),
        mean_gap=float(np.mean(gaps)),
        n_paths=n_paths,
    )
