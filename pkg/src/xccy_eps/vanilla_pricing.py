"""Closed-form option prices and separate (single-underlying) EPS quotes.

Every EPS quote in this package is the hedge-portfolio cost

    H_0 = sum_i (p_{i+1} - p_i) Put_0(1 + l_i) - sum_j (f_{j+1} - f_j) Call_0(1 + g_j)

on the normalised underlying, i.e. the fair premium received by the
provider; a negative quote means the fee leg outweighs the protection leg.

Four families share one lognormal kernel, differing only in discount rate,
forward growth rate and volatility:

    domestic          disc r_d, growth r_d,           vol |sigma_d|
    nominal foreign   disc r_f, growth r_f,           vol |sigma_f|   (foreign ccy)
    effective foreign disc r_d, growth r_d,           vol |sigma_f + sigma_q|
    quanto foreign    disc r_d, growth r_d + delta_q, vol |sigma_f|   (x Q-bar)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eps_core import EpsStructure, replace_fee_rate
from .market_model import MarketParams, delta_q
from .numerics import std_normal_cdf as _phi

__all__ = [
    "EpsQuote",
    "bs_option",
    "effective_option",
    "quanto_option",
    "price_eps_domestic",
    "price_eps_nominal_foreign",
    "price_eps_effective",
    "price_eps_quanto",
    "in_domestic",
    "net_weighted_cost",
    "fair_fee",
]


@dataclass(frozen=True)
class EpsQuote:
    """EPS premium per unit notional (the CLI reports per 100)."""

    value: float
    kind: str
    currency: str = "domestic"
    std_error: float | None = None


def bs_option(kind: str, spot: float, strike: float, rate: float,
              carry: float, vol: float, T: float) -> float:
    """Lognormal option price with forward spot * exp((rate + carry) T),
    discounted at ``rate``.  With carry = 0 this is the classical
    Black-Scholes formula; vol = 0 returns discounted intrinsic on the
    forward."""
    if kind not in ("put", "call"):
        raise ValueError("kind must be 'put' or 'call'")
    if spot <= 0.0 or strike <= 0.0 or T <= 0.0:
        raise ValueError("spot, strike and maturity must be strictly positive")
    if vol < 0.0:
        raise ValueError("volatility must be non-negative")
    df = math.exp(-rate * T)
    fwd = spot * math.exp((rate + carry) * T)
    if vol == 0.0:
        intrinsic = fwd - strike if kind == "call" else strike - fwd
        return df * max(intrinsic, 0.0)
    sd = vol * math.sqrt(T)
    d_plus = (math.log(fwd / strike) + 0.5 * sd * sd) / sd
    d_minus = d_plus - sd
    if kind == "call":
        return df * (fwd * _phi(d_plus) - strike * _phi(d_minus))
    return df * (strike * _phi(-d_minus) - fwd * _phi(-d_plus))


def effective_option(kind: str, params: MarketParams, strike: float, T: float) -> float:
    """Option on the foreign equity struck in domestic currency: lognormal
    on S_fe = Q * S_f with rate r_d and volatility |sigma_f + sigma_q|.
    Price in domestic currency."""
    return bs_option(kind, params.s_fe0, strike, params.r_d, 0.0, params.vol_fe, T)


def quanto_option(kind: str, params: MarketParams, strike: float, T: float,
                  q_bar: float | None = None) -> float:
    """Guaranteed-exchange-rate option on S_f: payoff Q_bar (S_f - K)^+ in
    domestic currency; lognormal with drift adjustment delta_q and
    volatility |sigma_f|, discounted at r_d."""
    scale = params.q0 if q_bar is None else q_bar
    if scale <= 0.0:
        raise ValueError("guaranteed exchange rate must be strictly positive")
    return scale * bs_option(kind, params.s_f0, strike, params.r_d, delta_q(params), params.vol_f, T)


def _structure_sum(structure: EpsStructure, disc: float, growth: float,
                   vol: float, T: float) -> float:
    """Hedge cost sum over the structure's put and call legs on the
    normalised underlying, for a lognormal with the given discount rate,
    forward growth rate and volatility."""
    df = math.exp(-disc * T)
    mean = math.exp((growth - disc) * T)  # discounted unit forward
    sd = vol * math.sqrt(T)

    def put_term(level: float) -> float:
        k = 1.0 + level
        if sd == 0.0:
            return max(df * k - mean, 0.0)
        d_plus = (-math.log(k) + growth * T + 0.5 * sd * sd) / sd
        d_minus = d_plus - sd
        return df * k * _phi(-d_minus) - mean * _phi(-d_plus)

    def call_term(level: float) -> float:
        k = 1.0 + level
        if sd == 0.0:
            return max(mean - df * k, 0.0)
        d_plus = (-math.log(k) + growth * T + 0.5 * sd * sd) / sd
        d_minus = d_plus - sd
        return mean * _phi(d_plus) - df * k * _phi(d_minus)

    total = 0.0
    prev = 0.0
    for level, rate in zip((0.0,) + structure.loss_breaks, structure.protection_rates):
        total += (rate - prev) * put_term(level)
        prev = rate
    prev = 0.0
    for level, rate in zip((0.0,) + structure.gain_breaks, structure.fee_rates):
        total -= (rate - prev) * call_term(level)
        prev = rate
    return total


def price_eps_domestic(structure: EpsStructure, params: MarketParams, T: float) -> EpsQuote:
    """Domestic EPS premium per unit domestic notional."""
    value = _structure_sum(structure, params.r_d, params.r_d, params.vol_d, T)
    return EpsQuote(value, "domestic")


def price_eps_nominal_foreign(structure: EpsStructure, params: MarketParams, T: float) -> EpsQuote:
    """Nominal foreign EPS premium per unit foreign notional, quoted in the
    foreign currency; multiply by Q_0 (see ``in_domestic``) for the
    domestic value."""
    value = _structure_sum(structure, params.r_f, params.r_f, params.vol_f, T)
    return EpsQuote(value, "nominal_foreign", currency="foreign")


def price_eps_effective(structure: EpsStructure, params: MarketParams, T: float) -> EpsQuote:
    """Effective foreign EPS premium per unit domestic notional."""
    value = _structure_sum(structure, params.r_d, params.r_d, params.vol_fe, T)
    return EpsQuote(value, "effective_foreign")


def price_eps_quanto(structure: EpsStructure, params: MarketParams, T: float,
                     q_bar: float | None = None) -> EpsQuote:
    """Quanto foreign EPS premium in domestic currency per unit foreign
    notional, including the guaranteed-rate factor Q_bar (default Q_0)."""
    scale = params.q0 if q_bar is None else q_bar
    if scale <= 0.0:
        raise ValueError("guaranteed exchange rate must be strictly positive")
    dq = delta_q(params)
    value = scale * _structure_sum(structure, params.r_d, params.r_d + dq, params.vol_f, T)
    return EpsQuote(value, "quanto_foreign")


def in_domestic(quote: EpsQuote, q0: float) -> EpsQuote:
    """Convert a foreign-currency quote to domestic at the spot FX rate."""
    if quote.currency == "domestic":
        return quote
    return EpsQuote(q0 * quote.value, quote.kind, currency="domestic",
                    std_error=None if quote.std_error is None else q0 * quote.std_error)


def net_weighted_cost(w: float, domestic: EpsQuote, foreign: EpsQuote) -> EpsQuote:
    """Net cost w * domestic + (1 - w) * foreign of the split hedge; the
    foreign quote must already be domestic-denominated."""
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    if foreign.currency != "domestic":
        raise ValueError("convert the foreign quote with in_domestic first")
    value = w * domestic.value + (1.0 - w) * foreign.value
    return EpsQuote(value, foreign.kind)


def fair_fee(structure: EpsStructure, pricer, fee_index: int = -1) -> float:
    """Fee rate at the given slot that sets the EPS premium to zero.

    The premium is affine in each fee rate, so two evaluations (fee 0 and
    fee 1) pin the solution exactly; no root search is needed.  Raises when
    the fee leg's option value vanishes.
    """
    def value_at(fee: float) -> float:
        q = pricer(replace_fee_rate(structure, fee_index, fee))
        return q.value if isinstance(q, EpsQuote) else float(q)

    v0 = value_at(0.0)
    slope = v0 - value_at(1.0)  # price of the fee leg per unit rate
    if abs(slope) < 1e-300:
        raise ValueError("fee-leg option value vanishes; fair fee is undefined")
    return v0 / slope
