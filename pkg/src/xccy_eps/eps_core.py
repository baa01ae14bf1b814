"""Payoff algebra for equity protection swaps.

An EPS pays the provider ``N * psi(R_T)`` at maturity, where ``psi`` is a
piecewise-linear, continuous, non-decreasing adjusted-return function with
psi(0) = 0.  Losses are shaped by breakpoints l_1 > l_2 > ... in (-1, 0)
with marginal protection rates p_1, ..., p_{n+1}; gains by breakpoints
0 < g_1 < ... with marginal fee rates f_1, ..., f_{m+1}.

The model-free static hedge of the provider's exposure is a portfolio of
puts (long, quantities p_{i+1} - p_i at strikes 1 + l_i) and calls (short,
quantities f_{j+1} - f_j at strikes 1 + g_j) on the normalised underlying;
its payoff equals -psi(R_T) pathwise and its initial cost is the fair
premium quoted throughout this package.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EpsStructure",
    "HedgePosition",
    "PortfolioSplit",
    "make_buffer",
    "make_floor",
    "psi",
    "psi_protection",
    "psi_fee",
    "replication_weights",
    "replace_fee_rate",
    "portfolio_payoff",
    "effective_return",
    "aggregated_return",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpsStructure:
    """Breakpoints and marginal participation rates of one EPS.

    ``loss_breaks`` are strictly decreasing in (-1, 0), ``gain_breaks``
    strictly increasing and positive.  Rates must be non-negative; rates
    above 1 are rejected unless ``allow_high_rates`` is set (a warning is
    logged), since fee rates above 1 appear in fair-fee solutions but break
    the 1-Lipschitz property of psi.
    """

    loss_breaks: tuple
    protection_rates: tuple
    gain_breaks: tuple
    fee_rates: tuple
    allow_high_rates: bool = False

    def __post_init__(self):
        object.__setattr__(self, "loss_breaks", tuple(float(x) for x in self.loss_breaks))
        object.__setattr__(self, "protection_rates", tuple(float(x) for x in self.protection_rates))
        object.__setattr__(self, "gain_breaks", tuple(float(x) for x in self.gain_breaks))
        object.__setattr__(self, "fee_rates", tuple(float(x) for x in self.fee_rates))
        l, p, g, f = self.loss_breaks, self.protection_rates, self.gain_breaks, self.fee_rates
        if len(p) != len(l) + 1:
            raise ValueError("need one protection rate per loss interval (n + 1 rates)")
        if len(f) != len(g) + 1:
            raise ValueError("need one fee rate per gain interval (m + 1 rates)")
        for prev, cur in zip((0.0,) + l, l):
            if not (-1.0 < cur < prev):
                raise ValueError("loss breaks must satisfy 0 > l_1 > ... > l_n > -1 strictly")
        for prev, cur in zip((0.0,) + g, g):
            if not cur > prev:
                raise ValueError("gain breaks must satisfy 0 < g_1 < ... < g_m strictly")
        rates = p + f
        if any(r < 0.0 for r in rates):
            raise ValueError("participation rates must be non-negative")
        if any(r > 1.0 for r in rates):
            if not self.allow_high_rates:
                raise ValueError("rates above 1 require allow_high_rates=True")
            log.warning("EPS structure carries participation rates above 1")

    @property
    def n_loss(self) -> int:
        return len(self.loss_breaks)

    @property
    def n_gain(self) -> int:
        return len(self.gain_breaks)


def make_buffer(l1: float, g1: float, p2: float, f2: float,
                allow_high_rates: bool = False) -> EpsStructure:
    """Buffer EPS: dead zone on [l1, g1], protection rate p2 below l1 and
    fee rate f2 above g1, so psi(R) = -p2 (l1 - R)^+ + f2 (R - g1)^+."""
    return EpsStructure((l1,), (0.0, p2), (g1,), (0.0, f2), allow_high_rates)


def make_floor(l1: float, g1: float, p1: float, f2: float,
               allow_high_rates: bool = False) -> EpsStructure:
    """Floor EPS: losses covered at rate p1 down to l1 and capped below it,
    so psi(R) = -p1 (-R)^+ + p1 (l1 - R)^+ + f2 (R - g1)^+."""
    return EpsStructure((l1,), (p1, 0.0), (g1,), (0.0, f2), allow_high_rates)


def _check_returns(r: np.ndarray) -> None:
    if np.any(r <= -1.0):
        raise ValueError("simple returns must exceed -1")


def psi_protection(structure: EpsStructure, r):
    """Protection leg: psi restricted to losses (non-positive)."""
    arr = np.asarray(r, dtype=float)
    _check_returns(arr)
    lo = structure.loss_breaks + (-1.0,)
    hi = (0.0,) + structure.loss_breaks
    out = np.zeros_like(arr, dtype=float)
    for rate, lower, upper in zip(structure.protection_rates, lo, hi):
        out += rate * (np.clip(arr, lower, upper) - upper)
    return out if out.ndim else float(out)


def psi_fee(structure: EpsStructure, r):
    """Fee leg: psi restricted to gains (non-negative)."""
    arr = np.asarray(r, dtype=float)
    _check_returns(arr)
    lo = (0.0,) + structure.gain_breaks
    hi = structure.gain_breaks + (np.inf,)
    out = np.zeros_like(arr, dtype=float)
    for rate, lower, upper in zip(structure.fee_rates, lo, hi):
        out += rate * (np.clip(arr, lower, upper) - lower)
    return out if out.ndim else float(out)


def psi(structure: EpsStructure, r):
    """Adjusted return: sum of the protection and fee legs.

    Accepts scalars or arrays of simple returns R > -1.
    """
    arr = np.asarray(r, dtype=float)
    _check_returns(arr)
    out = psi_protection(structure, arr) + psi_fee(structure, arr)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class HedgePosition:
    """One leg of a static option portfolio; negative quantity = short."""

    option_kind: str  # "put" | "call"
    underlying: str
    strike: float
    quantity: float

    def __post_init__(self):
        if self.option_kind not in ("put", "call"):
            raise ValueError("option_kind must be 'put' or 'call'")
        if self.strike <= 0.0:
            raise ValueError("strike must be strictly positive")


def replication_weights(structure: EpsStructure, underlying: str = "normalized") -> list[HedgePosition]:
    """Static hedge of the provider's exposure on the normalised underlying.

    Long (p_{i+1} - p_i) puts at strikes 1 + l_i and short (f_{j+1} - f_j)
    calls at strikes 1 + g_j; the portfolio pays -psi(R_T) at maturity and
    its time-0 cost is the fair EPS premium.  Zero-quantity legs are dropped.
    """
    positions = []
    prev = 0.0
    for level, rate in zip((0.0,) + structure.loss_breaks, structure.protection_rates):
        qty = rate - prev
        prev = rate
        if qty != 0.0:
            positions.append(HedgePosition("put", underlying, 1.0 + level, qty))
    prev = 0.0
    for level, rate in zip((0.0,) + structure.gain_breaks, structure.fee_rates):
        qty = rate - prev
        prev = rate
        if qty != 0.0:
            positions.append(HedgePosition("call", underlying, 1.0 + level, -qty))
    return positions


def replace_fee_rate(structure: EpsStructure, fee_index: int, rate: float) -> EpsStructure:
    """Copy of ``structure`` with one fee rate replaced (used by the
    fair-fee solver).  Rates above 1 keep the logged-warning override."""
    fees = list(structure.fee_rates)
    fees[fee_index] = float(rate)
    return EpsStructure(
        structure.loss_breaks,
        structure.protection_rates,
        structure.gain_breaks,
        tuple(fees),
        allow_high_rates=structure.allow_high_rates or rate > 1.0,
    )


def portfolio_payoff(positions, level):
    """Terminal payoff of an option portfolio at underlying level(s)."""
    arr = np.asarray(level, dtype=float)
    out = np.zeros_like(arr, dtype=float)
    for pos in positions:
        if pos.option_kind == "put":
            out += pos.quantity * np.maximum(pos.strike - arr, 0.0)
        else:
            out += pos.quantity * np.maximum(arr - pos.strike, 0.0)
    return out if out.ndim else float(out)


def effective_return(r_f, r_q):
    """Foreign return measured in domestic currency: r_f + r_q + r_f r_q."""
    r_f = np.asarray(r_f, dtype=float)
    r_q = np.asarray(r_q, dtype=float)
    if np.any(r_f <= -1.0) or np.any(r_q <= -1.0):
        raise ValueError("simple returns must exceed -1")
    out = r_f + r_q + r_f * r_q
    return out if out.ndim else float(out)


def aggregated_return(w: float, r_d, r_foreign):
    """Weighted portfolio return w r_d + (1 - w) r_foreign."""
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    out = w * np.asarray(r_d, dtype=float) + (1.0 - w) * np.asarray(r_foreign, dtype=float)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PortfolioSplit:
    """Holdings behind a cross-currency reference portfolio of wealth N:
    alpha0 units of S_d and beta0 units of S_f."""

    notional: float
    w: float
    alpha0: float
    beta0: float

    @classmethod
    def from_market(cls, notional: float, w: float, s_d0: float, q0: float, s_f0: float) -> "PortfolioSplit":
        if not 0.0 <= w <= 1.0:
            raise ValueError("weight must lie in [0, 1]")
        return cls(
            notional=notional,
            w=w,
            alpha0=w * notional / s_d0,
            beta0=(1.0 - w) * notional / (q0 * s_f0),
        )
