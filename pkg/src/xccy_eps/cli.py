"""Command-line front end.

Subcommands: ``tables`` (benchmark table reproduction as CSV/JSON),
``price`` (one EPS quote), ``hedge`` (static hedge tickets), ``fair-fee``
(zero-premium fee solve), ``paths`` (simulated path dump for plotting) and
``init-config`` (write the self-describing default configuration).

Exit codes: 0 success, 1 numeric/model error, 2 usage or config error.
All commands are deterministic given (config, seed): re-runs produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys

from .basket_pricing import McConfig, mc_basket_eps, price_eps_aggregated
from .config import ConfigError, RunConfig, default_config, default_config_text, load_config
from .eps_core import replication_weights
from .market_model import simulate_path
from .numerics import GaussianStream
from .superhedge import approx_hedge_cost, superhedge_cost
from .tables import TABLE_COLUMNS, compute_table
from .vanilla_pricing import (
    fair_fee,
    price_eps_domestic,
    price_eps_effective,
    price_eps_nominal_foreign,
    price_eps_quanto,
)

SEPARATE_KINDS = ("domestic", "nominal", "effective", "quanto")
AGGREGATED_KINDS = ("aggregated-effective", "aggregated-quanto")
ALL_KINDS = SEPARATE_KINDS + AGGREGATED_KINDS

__all__ = ["main", "build_parser"]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _load_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else default_config()
    mc = config.mc
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "paths", None) is not None:
        overrides["n_paths"] = args.paths
    if overrides:
        mc = dataclasses.replace(mc, **overrides)
        config = dataclasses.replace(config, mc=mc)
    return config


def _write_text(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(columns, rows, formats=None) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([
            (formats or {}).get(col, "{}").format(row[col]) if isinstance(row[col], float)
            else row[col]
            for col in columns
        ])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _separate_quote(kind: str, structure, config: RunConfig, q_bar=None):
    params, T = config.market, config.maturity
    if kind == "domestic":
        return price_eps_domestic(structure, params, T)
    if kind == "nominal":
        return price_eps_nominal_foreign(structure, params, T)
    if kind == "effective":
        return price_eps_effective(structure, params, T)
    if kind == "quanto":
        return price_eps_quanto(structure, params, T, q_bar=q_bar)
    raise ConfigError(f"unknown return kind {kind!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_tables(args) -> int:
    config = _load_config(args)
    rows = compute_table(args.table, config)
    value_cols = TABLE_COLUMNS[args.table]
    columns = ("kind", "w", "l1", "g1", "p_rate", "f_rate") + value_cols
    if args.format == "json":
        _write_text(_json_text(rows), args.out)
        return 0
    formats = {col: "{:.3f}" for col in value_cols}
    formats["std_error"] = "{:.4f}"
    formats.update({c: "{:g}" for c in ("w", "l1", "g1", "p_rate", "f_rate")})
    _write_text(_csv_text(columns, rows, formats), args.out)
    return 0


def cmd_price(args) -> int:
    config = _load_config(args)
    row = config.row(args.row)
    structure = row.structure()
    method = args.method
    if args.kind in SEPARATE_KINDS:
        if method not in (None, "closed"):
            raise ConfigError(f"kind {args.kind!r} is priced in closed form; "
                              f"method {method!r} is not applicable")
        quote = _separate_quote(args.kind, structure, config, q_bar=row.q_bar)
        method = "closed"
    else:
        if method in (None, "closed"):
            raise ConfigError(f"kind {args.kind!r} needs --method geometric|moments|mc")
        variant = args.kind.split("-")[1]
        quote = price_eps_aggregated(structure, variant, row.w, config.market,
                                     config.maturity, method, config.mc)
    per_100 = 100.0 * quote.value
    notional_value = config.notional * quote.value
    line = f"{per_100:.3f} per 100"
    if quote.std_error is not None:
        line += f" (std error {100.0 * quote.std_error:.4f})"
    line += f"  [{quote.kind}, {quote.currency}]"
    line += f"  notional value: {notional_value:.2f}\n"
    sys.stdout.write(line)
    payload = {
        "value": per_100,
        "per": "100-notional",
        "method": method,
        "kind": quote.kind,
        "currency": quote.currency,
        "notional_value": notional_value,
        "inputs": {
            "row": dataclasses.asdict(row),
            "maturity": config.maturity,
            "notional": config.notional,
        },
    }
    if quote.std_error is not None:
        payload["std_error"] = 100.0 * quote.std_error
        payload["n_paths"] = config.mc.n_paths
        payload["seed"] = config.mc.seed
    if args.format == "json" or args.out:
        _write_text(_json_text(payload), args.out)
    return 0


_UNDERLYING_LABEL = {
    "S_d": "domestic equity",
    "S_f": "foreign equity (foreign ccy)",
    "S_fe": "foreign equity in domestic ccy",
    "QuantoS_f": "quanto foreign equity",
    "BasketEffective": "effective cross-currency basket",
    "BasketQuanto": "quanto cross-currency basket",
}


def _underlying_level(tag: str, config: RunConfig, w: float) -> float:
    m = config.market
    if tag == "S_d":
        return m.s_d0
    if tag in ("S_f", "QuantoS_f"):
        return m.s_f0
    if tag == "S_fe":
        return m.s_fe0
    if tag in ("BasketEffective", "BasketQuanto"):
        return w * m.s_d0 + (1.0 - w) * m.s_fe0
    raise ConfigError(f"unknown underlying tag {tag!r}")


def _replication_ticket(kind: str, row, config: RunConfig):
    m = config.market
    notional = config.notional
    structure = row.structure()
    if kind == "domestic":
        tag, leg_notional, ccy = "S_d", row.w * notional, "domestic"
    elif kind == "nominal":
        tag, leg_notional, ccy = "S_f", (1.0 - row.w) * notional / m.q0, "foreign"
    elif kind == "effective":
        tag, leg_notional, ccy = "S_fe", (1.0 - row.w) * notional, "domestic"
    elif kind == "quanto":
        tag, leg_notional, ccy = "QuantoS_f", (1.0 - row.w) * notional / m.q0, "domestic"
    elif kind == "aggregated-effective":
        tag, leg_notional, ccy = "BasketEffective", notional, "domestic"
    else:
        tag, leg_notional, ccy = "BasketQuanto", notional, "domestic"
    level = _underlying_level(tag, config, row.w)
    positions = []
    if leg_notional > 0.0:
        for pos in replication_weights(structure, tag):
            positions.append({
                "option_kind": pos.option_kind,
                "underlying": tag,
                "strike": pos.strike * level,
                "units": leg_notional * pos.quantity / level,
            })
    if kind in SEPARATE_KINDS:
        quote = _separate_quote(kind, structure, config, q_bar=row.q_bar)
        premium = leg_notional * quote.value
        if kind == "nominal":
            premium *= m.q0  # convert the USD premium at spot
    else:
        variant = kind.split("-")[1]
        est = mc_basket_eps(structure, variant, row.w, m, config.maturity, config.mc)
        premium = leg_notional * est.value
    return positions, premium, ccy, level


def _superhedge_ticket(kind: str, row, config: RunConfig):
    if kind not in AGGREGATED_KINDS:
        raise ConfigError("superhedge tickets exist only for aggregated kinds")
    variant = kind.split("-")[1]
    cost = superhedge_cost(row.structure(), variant, row.w, config.market, config.maturity)
    positions = []
    if config.notional > 0.0:
        for leg in cost.components:
            level = _underlying_level(leg.underlying, config, row.w)
            positions.append({
                "option_kind": leg.option_kind + (" (indicator-gated)" if leg.gated else ""),
                "underlying": leg.underlying,
                "strike": leg.strike * level,
                "units": config.notional * leg.weight / level,
            })
    return positions, config.notional * cost.value, "domestic", None


def _approximate_ticket(kind: str, row, config: RunConfig):
    if kind not in AGGREGATED_KINDS:
        raise ConfigError("approximate tickets exist only for aggregated kinds")
    variant = kind.split("-")[1]
    structure = row.structure()
    m = config.market
    for_tag = "S_fe" if variant == "effective" else "QuantoS_f"
    positions = []
    if config.notional > 0.0:
        for tag, leg_notional in (("S_d", row.w * config.notional),
                                  (for_tag, (1.0 - row.w) * config.notional)):
            if leg_notional == 0.0:
                continue
            level = _underlying_level(tag, config, row.w)
            for pos in replication_weights(structure, tag):
                positions.append({
                    "option_kind": pos.option_kind,
                    "underlying": tag,
                    "strike": pos.strike * level,
                    "units": leg_notional * pos.quantity / level,
                })
    premium = config.notional * approx_hedge_cost(structure, variant, row.w,
                                                  m, config.maturity)
    return positions, premium, "domestic", None


def cmd_hedge(args) -> int:
    config = _load_config(args)
    row = config.row(args.row)
    if args.strategy == "replication":
        positions, premium, ccy, _ = _replication_ticket(args.kind, row, config)
    elif args.strategy == "superhedge":
        positions, premium, ccy, _ = _superhedge_ticket(args.kind, row, config)
    else:
        positions, premium, ccy, _ = _approximate_ticket(args.kind, row, config)

    lines = [f"hedge ticket: {args.strategy} for {args.kind} "
             f"(row {args.row}: {row.kind}, w={row.w:g}, l1={row.l1:g}, g1={row.g1:g})"]
    for pos in positions:
        side = "long" if pos["units"] >= 0 else "short"
        lines.append(
            f"  {side} {abs(round(pos['units']))} {pos['option_kind']}s"
            f" on {_UNDERLYING_LABEL.get(pos['underlying'], pos['underlying'])}"
            f" @ {pos['strike']:.3f}")
    lines.append(f"  premium: {premium:.2f} ({ccy})")
    sys.stdout.write("\n".join(lines) + "\n")
    payload = {
        "strategy": args.strategy,
        "kind": args.kind,
        "row": dataclasses.asdict(row),
        "positions": [
            {**pos, "units_display": int(round(pos["units"]))} for pos in positions
        ],
        "premium": premium,
        "currency": ccy,
        "notional": config.notional,
    }
    if args.format == "json" or args.out:
        _write_text(_json_text(payload), args.out)
    return 0


def cmd_fair_fee(args) -> int:
    config = _load_config(args)
    row = config.row(args.row)
    structure = row.structure()
    if args.kind in SEPARATE_KINDS:
        def pricer(s):
            return _separate_quote(args.kind, s, config, q_bar=row.q_bar)
    else:
        method = args.method or "geometric"
        if method == "mc":
            raise ConfigError("fair-fee needs a deterministic pricer; "
                              "use --method geometric or moments")
        variant = args.kind.split("-")[1]

        def pricer(s):
            return price_eps_aggregated(s, variant, row.w, config.market,
                                        config.maturity, method)
    fee = fair_fee(structure, pricer)
    from .eps_core import replace_fee_rate
    residual = pricer(replace_fee_rate(structure, -1, fee)).value
    sys.stdout.write(f"fair fee rate: {fee:.6f}\n")
    sys.stdout.write(f"repriced quote: {100.0 * residual:.3f} per 100"
                     f" (|residual| = {abs(residual):.2e})\n")
    if args.format == "json" or args.out:
        _write_text(_json_text({
            "fair_fee": fee,
            "repriced_quote_per_100": 100.0 * residual,
            "kind": args.kind,
            "row": dataclasses.asdict(row),
        }), args.out)
    return 0


def cmd_paths(args) -> int:
    config = _load_config(args)
    n_paths = args.paths if args.paths is not None else 2
    if args.steps < 1 or n_paths < 1:
        raise ConfigError("steps and paths must be at least 1")
    seed = args.seed if args.seed is not None else config.mc.seed
    rows = []
    for index in range(n_paths):
        grid = simulate_path(config.market, config.maturity, args.steps,
                             GaussianStream(seed, index))
        for i in range(args.steps + 1):
            rows.append({
                "path": index,
                "t": grid.t[i],
                "s_d": grid.s_d[i],
                "s_f": grid.s_f[i],
                "q": grid.q[i],
                "s_fe": grid.s_fe[i],
            })
    # shortest round-trip float repr: byte-identical re-runs, exact parse
    columns = ("path", "t", "s_d", "s_f", "q", "s_fe")
    _write_text(_csv_text(columns, rows), args.out)
    return 0


def cmd_init_config(args) -> int:
    _write_text(default_config_text(), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xccy-eps",
        description="Pricing and static hedging of cross-currency equity protection swaps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mc=True):
        p.add_argument("--config", help="config file (INI); defaults to built-in benchmark setup")
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if mc:
            p.add_argument("--seed", type=int, help="Monte Carlo seed override")
            p.add_argument("--paths", type=int, help="Monte Carlo path count override")

    p = sub.add_parser("tables", help="reproduce a benchmark table")
    p.add_argument("--table", type=int, choices=(2, 3, 4), required=True)
    common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("price", help="price one EPS row")
    p.add_argument("--kind", choices=ALL_KINDS, default="domestic")
    p.add_argument("--method", choices=("closed", "geometric", "moments", "mc"))
    p.add_argument("--row", type=int, default=1, help="1-based row index")
    common(p)
    p.set_defaults(func=cmd_price, format="csv")

    p = sub.add_parser("hedge", help="static hedge ticket for one row")
    p.add_argument("--row", type=int, default=1)
    p.add_argument("--strategy", choices=("replication", "superhedge", "approximate"),
                   default="replication")
    p.add_argument("--kind", choices=ALL_KINDS, default="aggregated-effective")
    common(p)
    p.set_defaults(func=cmd_hedge)

    p = sub.add_parser("fair-fee", help="fee rate that zeroes the EPS premium")
    p.add_argument("--row", type=int, default=1)
    p.add_argument("--kind", choices=ALL_KINDS, default="domestic")
    p.add_argument("--method", choices=("geometric", "moments", "mc"))
    common(p, mc=False)
    p.set_defaults(func=cmd_fair_fee)

    p = sub.add_parser("paths", help="dump simulated paths as CSV")
    p.add_argument("--steps", type=int, default=252)
    common(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("init-config", help="write the default config file")
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.set_defaults(func=cmd_init_config)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
