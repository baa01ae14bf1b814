"""Benchmark table assembly: separate EPS nets and aggregated EPS quotes.

All values are per 100 units of domestic notional.  Table 2 reports the
domestic quote plus three net weighted costs, where the foreign leg gets
weight (1 - w); nominal and quanto quotes are converted to domestic terms
first (x Q_0), the effective quote already is domestic.  Tables 3 and 4
price the aggregated effective / quanto EPS by Monte Carlo, geometric
averaging and moment matching, and report the superhedge cost alongside.
"""

from __future__ import annotations

from .basket_pricing import mc_basket_eps, price_eps_aggregated
from .config import EpsRow, RunConfig
from .superhedge import superhedge_cost
from .vanilla_pricing import (
    in_domestic,
    net_weighted_cost,
    price_eps_domestic,
    price_eps_effective,
    price_eps_nominal_foreign,
    price_eps_quanto,
)

__all__ = [
    "TABLE_COLUMNS",
    "table2_row",
    "table_aggregated_row",
    "compute_table",
]

TABLE_COLUMNS = {
    2: ("domestic", "nominal", "effective", "quanto"),
    3: ("simulation", "std_error", "geometric", "moments", "super"),
    4: ("simulation", "std_error", "geometric", "moments", "super"),
}

_ROW_FIELDS = ("kind", "w", "l1", "g1", "p_rate", "f_rate")


def _row_info(row: EpsRow) -> dict:
    return {name: getattr(row, name) for name in _ROW_FIELDS}


def table2_row(row: EpsRow, config: RunConfig) -> dict:
    """Domestic price and the three net weighted costs, per 100 notional."""
    params, T = config.market, config.maturity
    s = row.structure()
    dom = price_eps_domestic(s, params, T)
    nominal = net_weighted_cost(
        row.w, dom, in_domestic(price_eps_nominal_foreign(s, params, T), params.q0))
    effective = net_weighted_cost(row.w, dom, price_eps_effective(s, params, T))
    quanto = net_weighted_cost(
        row.w, dom, price_eps_quanto(s, params, T, q_bar=row.q_bar))
    out = _row_info(row)
    out.update(
        domestic=100.0 * dom.value,
        nominal=100.0 * nominal.value,
        effective=100.0 * effective.value,
        quanto=100.0 * quanto.value,
    )
    return out


def table_aggregated_row(row: EpsRow, config: RunConfig, variant: str) -> dict:
    """Simulation / geometric / moments quotes plus the superhedge cost."""
    params, T = config.market, config.maturity
    s = row.structure()
    est = mc_basket_eps(s, variant, row.w, params, T, config.mc)
    geo = price_eps_aggregated(s, variant, row.w, params, T, "geometric")
    mom = price_eps_aggregated(s, variant, row.w, params, T, "moments")
    sup = superhedge_cost(s, variant, row.w, params, T)
    out = _row_info(row)
    out.update(
        simulation=100.0 * est.value,
        std_error=100.0 * est.std_error,
        geometric=100.0 * geo.value,
        moments=100.0 * mom.value,
        super=100.0 * sup.value,
    )
    return out


def compute_table(table_id: int, config: RunConfig) -> list[dict]:
    if table_id == 2:
        return [table2_row(r, config) for r in config.rows]
    if table_id == 3:
        return [table_aggregated_row(r, config, "effective") for r in config.rows]
    if table_id == 4:
        return [table_aggregated_row(r, config, "quanto") for r in config.rows]
    raise ValueError(f"unknown table id {table_id}; expected 2, 3 or 4")
