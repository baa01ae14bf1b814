"""Aggregated (two-asset basket) EPS pricing.

The aggregated underlying is S_w = w S_d_hat + (1 - w) S_fx_hat where the
foreign factor is the effective asset S_fe_hat (stochastic FX) or the
quanto asset S_f_hat (guaranteed FX).  The basket is a sum of lognormals,
so EPS quotes are computed three ways:

  * geometric  -- Gentle's geometric-mean proxy with a strike shift that
                  preserves the basket forward;
  * moments    -- shifted-lognormal c (exp(s Z + m) + tau) matched to the
                  basket's first three moments;
  * mc         -- plain Monte Carlo on exact joint lognormal terminals,
                  partitioned over independent substreams so results are
                  reproducible and worker-count independent.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eps_core import EpsStructure, psi
from .market_model import MarketParams, delta_q, normalized_terminals
from .numerics import GaussianStream, sgn, std_normal_cdf as _phi
from .vanilla_pricing import EpsQuote

__all__ = [
    "MomentSummary",
    "ShiftedLognormalParams",
    "McConfig",
    "McEstimate",
    "geometric_basket_effective",
    "geometric_basket_quanto",
    "basket_moments",
    "fit_shifted_lognormal",
    "shifted_lognormal_moments",
    "mm_basket_call",
    "mm_basket_put",
    "mc_basket_eps",
    "price_eps_aggregated",
]

VARIANTS = ("effective", "quanto")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _check_weight(w: float) -> None:
    if not 0.0 <= w <= 1.0:
        raise ValueError("weight must lie in [0, 1]")


# ---------------------------------------------------------------------------
# geometric-averaging approximation
# ---------------------------------------------------------------------------

def _geometric_value(kind: str, w: float, strike: float, T: float,
                     sig1: np.ndarray, sig2: np.ndarray,
                     disc: float, drift2: float) -> float:
    """Shared geometric proxy: lognormal G with variance |w sig1 + (1-w) sig2|^2 T,
    mean lam, priced against the shifted strike K_hat = K_tilde + lam - mean."""
    if kind not in ("put", "call"):
        raise ValueError("kind must be 'put' or 'call'")
    if strike <= 0.0 or T <= 0.0:
        raise ValueError("strike and maturity must be strictly positive")
    k_tilde = math.exp(-disc * T) * strike
    lam = math.exp(-0.5 * w * (1.0 - w) * float(np.dot(sig1 - sig2, sig1 - sig2)) * T
                   + (1.0 - w) * drift2 * T)
    mean = w + (1.0 - w) * math.exp(drift2 * T)
    k_hat = k_tilde + lam - mean
    v = float(np.linalg.norm(w * sig1 + (1.0 - w) * sig2))
    sd = v * math.sqrt(T)
    if k_hat <= 0.0:
        # shifted strike collapses: exercise certain for the call
        call = lam - k_hat
    elif sd == 0.0:
        call = max(lam - k_hat, 0.0)
    else:
        d_plus = (math.log(lam / k_hat) + 0.5 * sd * sd) / sd
        d_minus = d_plus - sd
        call = lam * _phi(d_plus) - k_hat * _phi(d_minus)
    if kind == "call":
        return call
    return call - (mean - k_tilde)  # parity on the true basket forward


def geometric_basket_effective(kind: str, w: float, strike: float,
                               params: MarketParams, T: float) -> float:
    """Geometric-proxy price of a basket option on w S_d_hat + (1-w) S_fe_hat,
    per unit notional, domestic currency."""
    _check_weight(w)
    return _geometric_value(kind, w, strike, T, params.sigma_d, params.sigma_fe,
                            params.r_d, 0.0)


def geometric_basket_quanto(kind: str, w: float, strike: float,
                            params: MarketParams, T: float) -> float:
    """Geometric-proxy price of a basket option on w S_d_hat + (1-w) S_f_hat,
    where the discounted quanto leg drifts at delta_q."""
    _check_weight(w)
    return _geometric_value(kind, w, strike, T, params.sigma_d, params.sigma_f,
                            params.r_d, delta_q(params))


# ---------------------------------------------------------------------------
# three-moment shifted-lognormal approximation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentSummary:
    """First three raw moments of the discounted normalised basket, plus
    mean / standard deviation / skewness."""

    m1: float
    m2: float
    m3: float
    mu: float
    sigma: float
    eta: float


def basket_moments(variant: str, w: float, params: MarketParams, T: float) -> MomentSummary:
    """Raw moments of the discounted basket w1 X1 + w2 X2 with lognormal
    martingale factors X_i; the quanto leg carries weight (1-w) e^{delta_q T}."""
    _check_variant(variant)
    _check_weight(w)
    if T <= 0.0:
        raise ValueError("maturity must be strictly positive")
    if variant == "effective":
        w1, w2 = w, 1.0 - w
        sig1, sig2 = params.sigma_d, params.sigma_fe
    else:
        w1, w2 = w, (1.0 - w) * math.exp(delta_q(params) * T)
        sig1, sig2 = params.sigma_d, params.sigma_f
    v11 = float(sig1 @ sig1) * T
    v22 = float(sig2 @ sig2) * T
    v12 = float(sig1 @ sig2) * T
    m1 = w1 + w2
    m2 = w1**2 * math.exp(v11) + 2.0 * w1 * w2 * math.exp(v12) + w2**2 * math.exp(v22)
    m3 = (
        w1**3 * math.exp(3.0 * v11)
        + 3.0 * w1**2 * w2 * math.exp(v11 + 2.0 * v12)
        + 3.0 * w1 * w2**2 * math.exp(v22 + 2.0 * v12)
        + w2**3 * math.exp(3.0 * v22)
    )
    var = m2 - m1 * m1
    if var <= 0.0:
        raise ValueError("basket distribution is degenerate (zero variance)")
    sigma = math.sqrt(var)
    eta = (m3 - 3.0 * m1 * var - m1**3) / sigma**3
    return MomentSummary(m1=m1, m2=m2, m3=m3, mu=m1, sigma=sigma, eta=eta)


@dataclass(frozen=True)
class ShiftedLognormalParams:
    """Parameters of the matched law c (exp(s Z + m) + tau), c = +/-1."""

    c: float
    s: float
    m: float
    tau: float


def fit_shifted_lognormal(summary: MomentSummary) -> ShiftedLognormalParams:
    """Closed-form three-moment fit.

    x solves the cubic skewness relation through the two real cube roots;
    then s = sqrt(ln x), m = ln(sigma^2 / (x(x-1))) / 2 and
    tau = sgn(eta) mu - sigma / sqrt(x - 1).  For |eta| below 1e-12 the
    expression degenerates (x -> 1), so a plain two-moment lognormal
    (tau = 0) is fitted instead.
    """
    mu, sigma, eta = summary.mu, summary.sigma, summary.eta
    if sigma <= 0.0:
        raise ValueError("need a strictly positive standard deviation")
    if abs(eta) < 1e-12:
        s2 = math.log(1.0 + (sigma / mu) ** 2)
        return ShiftedLognormalParams(c=1.0, s=math.sqrt(s2),
                                      m=math.log(mu) - 0.5 * s2, tau=0.0)
    root = math.sqrt(1.0 + 0.25 * eta * eta)
    x = float(np.cbrt(1.0 + 0.5 * eta * eta + eta * root)
              + np.cbrt(1.0 + 0.5 * eta * eta - eta * root)) - 1.0
    s = math.sqrt(math.log(x))
    m = 0.5 * math.log(sigma * sigma / (x * (x - 1.0)))
    tau = sgn(eta) * mu - sigma / math.sqrt(x - 1.0)
    return ShiftedLognormalParams(c=sgn(eta), s=s, m=m, tau=tau)


def shifted_lognormal_moments(fit: ShiftedLognormalParams) -> tuple[float, float, float]:
    """First three raw moments of c (exp(s Z + m) + tau)."""
    c, s, m, tau = fit.c, fit.s, fit.m, fit.tau
    e1 = math.exp(0.5 * s * s + m)
    e2 = math.exp(2.0 * s * s + 2.0 * m)
    e3 = math.exp(4.5 * s * s + 3.0 * m)
    m1 = c * (e1 + tau)
    m2 = c * c * (e2 + 2.0 * tau * e1 + tau * tau)
    m3 = c**3 * (e3 + 3.0 * tau * e2 + 3.0 * tau * tau * e1 + tau**3)
    return m1, m2, m3


def mm_basket_call(fit: ShiftedLognormalParams, strike: float, r_d: float, T: float) -> float:
    """Moment-matched basket call value E[(B - K_tilde)^+], K_tilde = e^{-r_d T} K.

    Four cases depending on the sign c and on whether the discounted strike
    clears the location shift.
    """
    if strike <= 0.0 or T <= 0.0:
        raise ValueError("strike and maturity must be strictly positive")
    k = math.exp(-r_d * T) * strike
    s, m, tau = fit.s, fit.m, fit.tau
    fwd = math.exp(m + 0.5 * s * s)
    if fit.c > 0.0:
        if k <= tau:
            return fwd + tau - k
        if s == 0.0:
            return max(fwd + tau - k, 0.0)
        d11 = (-math.log(k - tau) + m + s * s) / s
        d12 = (-math.log(k - tau) + m) / s
        return fwd * _phi(d11) - (k - tau) * _phi(d12)
    if k > -tau:
        return 0.0
    d21 = (math.log(-k - tau) - m - s * s) / s
    d22 = (math.log(-k - tau) - m) / s
    return -fwd * _phi(d21) + (-k - tau) * _phi(d22)


def mm_basket_put(fit: ShiftedLognormalParams, strike: float, r_d: float, T: float) -> float:
    """Put from the matched call via exact parity on the fitted mean."""
    mean = shifted_lognormal_moments(fit)[0]
    k = math.exp(-r_d * T) * strike
    return mm_basket_call(fit, strike, r_d, T) - (mean - k)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McConfig:
    """Path count, seed and the fixed substream partitioning.

    Results are bit-identical for fixed (seed, n_paths, partitions)
    regardless of ``workers``: each partition draws from its own Philox
    substream and partial sums are reduced in partition order.
    """

    n_paths: int = 1_000_000
    seed: int = 20240701
    partitions: int = 16
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        if self.partitions < 1:
            raise ValueError("partitions must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_paths: int


def _partition_sizes(n: int, parts: int) -> list[int]:
    base, extra = divmod(n, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def basket_liability(structure: EpsStructure, variant: str, w: float,
                     s_d_hat: np.ndarray, s_f_hat: np.ndarray, s_fe_hat: np.ndarray) -> np.ndarray:
    """Pathwise hedge-portfolio payoff -psi(R_w) on simulated terminals."""
    fx = s_fe_hat if variant == "effective" else s_f_hat
    r_w = w * s_d_hat + (1.0 - w) * fx - 1.0
    return -psi(structure, r_w)


def mc_basket_eps(structure: EpsStructure, variant: str, w: float,
                  params: MarketParams, T: float, config: McConfig) -> McEstimate:
    """Monte Carlo EPS quote: mean of e^{-r_d T} times the hedge payoff
    -psi(R_w) over exact joint lognormal terminals."""
    _check_variant(variant)
    _check_weight(w)
    sizes = [m for m in _partition_sizes(config.n_paths, config.partitions) if m > 0]
    df = math.exp(-params.r_d * T)

    def run_partition(item):
        index, m = item
        stream = GaussianStream(config.seed, index)
        s_d_hat, s_f_hat, s_fe_hat = normalized_terminals(params, T, m, stream)
        y = df * basket_liability(structure, variant, w, s_d_hat, s_f_hat, s_fe_hat)
        if config.antithetic:
            a_d, a_f, a_fe = _antithetic_terminals(params, T, m, stream)
            y = 0.5 * (y + df * basket_liability(structure, variant, w, a_d, a_f, a_fe))
        return m, float(np.sum(y)), float(np.sum(y * y))

    items = list(enumerate(sizes))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            stats = list(pool.map(run_partition, items))
    else:
        stats = [run_partition(item) for item in items]

    n = sum(s[0] for s in stats)
    total = sum(s[1] for s in stats)
    total_sq = sum(s[2] for s in stats)
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1) if n > 1 else 0.0
    return McEstimate(value=mean, std_error=math.sqrt(var / n), n_paths=n)


def _antithetic_terminals(params: MarketParams, T: float, n: int, stream: GaussianStream):
    from .market_model import _terminal_logs
    from .numerics import gaussian_matrix

    z = -gaussian_matrix(stream, n, 3)
    x_d, x_f, x_q = _terminal_logs(params, T, z)
    s_d_hat = np.exp(x_d)
    s_f_hat = np.exp(x_f)
    return s_d_hat, s_f_hat, s_f_hat * np.exp(x_q)


# ---------------------------------------------------------------------------
# quote assembly
# ---------------------------------------------------------------------------

def price_eps_aggregated(structure: EpsStructure, variant: str, w: float,
                         params: MarketParams, T: float, method: str,
                         mc_config: McConfig | None = None) -> EpsQuote:
    """Aggregated EPS quote: sum of basket puts at strikes 1 + l_i minus
    basket calls at strikes 1 + g_j, priced by the chosen method."""
    _check_variant(variant)
    _check_weight(w)
    kind = f"aggregated_{variant}"
    if method == "mc":
        est = mc_basket_eps(structure, variant, w, params, T, mc_config or McConfig())
        return EpsQuote(est.value, kind, std_error=est.std_error)
    if method == "geometric":
        if variant == "effective":
            def put(k): return geometric_basket_effective("put", w, k, params, T)
            def call(k): return geometric_basket_effective("call", w, k, params, T)
        else:
            def put(k): return geometric_basket_quanto("put", w, k, params, T)
            def call(k): return geometric_basket_quanto("call", w, k, params, T)
    elif method == "moments":
        fit = fit_shifted_lognormal(basket_moments(variant, w, params, T))
        def put(k): return mm_basket_put(fit, k, params.r_d, T)
        def call(k): return mm_basket_call(fit, k, params.r_d, T)
    else:
        raise ValueError("method must be 'geometric', 'moments' or 'mc'")

    value = 0.0
    prev = 0.0
    for level, rate in zip((0.0,) + structure.loss_breaks, structure.protection_rates):
        value += (rate - prev) * put(1.0 + level)
        prev = rate
    prev = 0.0
    for level, rate in zip((0.0,) + structure.gain_breaks, structure.fee_rates):
        value -= (rate - prev) * call(1.0 + level)
        prev = rate
    return EpsQuote(value, kind)
