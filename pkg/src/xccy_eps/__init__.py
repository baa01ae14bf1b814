"""Pricing and static hedging of cross-currency equity protection swaps."""

from .eps_core import (
    EpsStructure,
    HedgePosition,
    PortfolioSplit,
    aggregated_return,
    effective_return,
    make_buffer,
    make_floor,
    portfolio_payoff,
    psi,
    psi_fee,
    psi_protection,
    replication_weights,
)
from .market_model import (
    CorrelationInputs,
    MarketParams,
    TerminalSample,
    build_vol_vectors,
    delta_q,
    normalized_terminals,
    simulate_path,
    simulate_terminal,
)
from .numerics import GaussianStream, bivariate_normal_cdf, gaussian_samples, std_normal_cdf
from .vanilla_pricing import (
    EpsQuote,
    bs_option,
    effective_option,
    fair_fee,
    in_domestic,
    net_weighted_cost,
    price_eps_domestic,
    price_eps_effective,
    price_eps_nominal_foreign,
    price_eps_quanto,
    quanto_option,
)

__version__ = "0.1.0"
