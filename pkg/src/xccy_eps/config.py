"""Run configuration: market parameters, EPS rows, Monte Carlo settings.

The config file is a self-describing INI document (``configparser``) with
``[market]``, ``[eps]``, ``[mc]`` and ``[rows]`` sections.  The market may
be given either as scalar volatilities plus pairwise correlations (vectors
are then built lower-triangularly) or as explicit 3-component volatility
vectors, but not both.  The built-in defaults reproduce the benchmark
market parameter set used throughout the docs and tests.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .basket_pricing import McConfig
from .eps_core import EpsStructure, make_buffer, make_floor
from .market_model import CorrelationInputs, MarketParams

__all__ = [
    "ConfigError",
    "EpsRow",
    "RunConfig",
    "default_config",
    "default_config_text",
    "load_config",
    "parse_config_text",
    "BENCHMARK_ROWS",
]


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class EpsRow:
    """One EPS to price: kind, portfolio weight and payoff parameters."""

    kind: str  # "buffer" | "floor"
    w: float
    l1: float
    g1: float
    p_rate: float
    f_rate: float
    q_bar: float | None = None

    def __post_init__(self):
        if self.kind not in ("buffer", "floor"):
            raise ConfigError(f"row kind must be 'buffer' or 'floor', got {self.kind!r}")
        if not 0.0 <= self.w <= 1.0:
            raise ConfigError("row weight must lie in [0, 1]")

    def structure(self) -> EpsStructure:
        if self.kind == "buffer":
            return make_buffer(self.l1, self.g1, self.p_rate, self.f_rate)
        return make_floor(self.l1, self.g1, self.p_rate, self.f_rate)


# The 26-row benchmark grid (12 buffer + 14 floor configurations).
BENCHMARK_ROWS: tuple[EpsRow, ...] = tuple(
    [EpsRow("buffer", *r) for r in [
        (0.50, -0.05, 0.05, 0.5, 0.5),
        (0.50, -0.05, 0.05, 0.8, 0.5),
        (0.20, -0.05, 0.10, 0.5, 0.5),
        (0.50, -0.05, 0.10, 0.5, 0.5),
        (0.80, -0.05, 0.10, 0.5, 0.5),
        (0.20, -0.05, 0.10, 0.8, 0.5),
        (0.50, -0.05, 0.10, 0.8, 0.5),
        (0.80, -0.05, 0.10, 0.8, 0.5),
        (0.50, -0.05, 0.10, 0.8, 0.8),
        (0.20, -0.10, 0.10, 0.8, 0.5),
        (0.50, -0.10, 0.10, 0.8, 0.5),
        (0.80, -0.10, 0.10, 0.8, 0.5),
    ]]
    + [EpsRow("floor", *r) for r in [
        (0.50, -0.05, 0.05, 0.8, 0.5),
        (0.50, -0.05, 0.10, 0.5, 0.5),
        (0.20, -0.05, 0.10, 0.8, 0.5),
        (0.50, -0.05, 0.10, 0.8, 0.5),
        (0.80, -0.05, 0.10, 0.8, 0.5),
        (0.50, -0.05, 0.10, 0.8, 0.8),
        (0.50, -0.10, 0.10, 0.8, 0.5),
        (0.20, -0.15, 0.10, 0.5, 0.5),
        (0.50, -0.15, 0.10, 0.5, 0.5),
        (0.80, -0.15, 0.10, 0.5, 0.5),
        (0.20, -0.15, 0.10, 0.8, 0.5),
        (0.50, -0.15, 0.10, 0.8, 0.5),
        (0.80, -0.15, 0.10, 0.8, 0.5),
        (0.50, -0.15, 0.10, 0.8, 0.8),
    ]]
)

DEFAULT_CORRELATIONS = CorrelationInputs(
    vol_d=0.10, vol_f=0.15, vol_q=0.09, rho_df=0.10, rho_dq=0.05, rho_fq=-0.05)
DEFAULT_RATES = {"r_d": 0.0435, "r_f": 0.0525}
DEFAULT_LEVELS = {"q0": 1.48, "s_d0": 76.5, "s_f0": 52.5}


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams
    rows: tuple = BENCHMARK_ROWS
    maturity: float = 1.0
    notional: float = 1_000_000.0
    mc: McConfig = field(default_factory=McConfig)

    def __post_init__(self):
        if self.maturity <= 0.0:
            raise ConfigError("maturity must be strictly positive")
        if self.notional < 0.0:
            raise ConfigError("notional must be non-negative")

    def row(self, index: int) -> EpsRow:
        """1-based row lookup."""
        if not 1 <= index <= len(self.rows):
            raise ConfigError(f"row {index} out of range 1..{len(self.rows)}")
        return self.rows[index - 1]


def default_config() -> RunConfig:
    market = MarketParams.from_correlations(
        DEFAULT_CORRELATIONS, **DEFAULT_RATES, **DEFAULT_LEVELS)
    return RunConfig(market=market)


_SCALAR_KEYS = ("vol_d", "vol_f", "vol_q", "rho_df", "rho_dq", "rho_fq")
_VECTOR_KEYS = ("sigma_d", "sigma_f", "sigma_q")


def _parse_vector(text: str) -> tuple[float, float, float]:
    parts = text.replace(",", " ").split()
    if len(parts) != 3:
        raise ConfigError(f"volatility vectors need 3 components, got {text!r}")
    return tuple(float(p) for p in parts)


def _parse_market(section) -> MarketParams:
    has_scalar = any(k in section for k in _SCALAR_KEYS)
    has_vector = any(k in section for k in _VECTOR_KEYS)
    if has_scalar and has_vector:
        raise ConfigError("give either scalar vols + correlations or sigma vectors, not both")
    if not has_scalar and not has_vector:
        raise ConfigError("[market] must define the volatility structure")
    try:
        common = dict(
            r_d=section.getfloat("r_d"),
            r_f=section.getfloat("r_f"),
            q0=section.getfloat("q0", DEFAULT_LEVELS["q0"]),
            s_d0=section.getfloat("s_d0", DEFAULT_LEVELS["s_d0"]),
            s_f0=section.getfloat("s_f0", DEFAULT_LEVELS["s_f0"]),
        )
        if common["r_d"] is None or common["r_f"] is None:
            raise ConfigError("[market] needs r_d and r_f")
        if has_scalar:
            missing = [k for k in _SCALAR_KEYS if k not in section]
            if missing:
                raise ConfigError(f"[market] missing keys: {missing}")
            inputs = CorrelationInputs(*(section.getfloat(k) for k in _SCALAR_KEYS))
            return MarketParams.from_correlations(inputs, **common)
        missing = [k for k in _VECTOR_KEYS if k not in section]
        if missing:
            raise ConfigError(f"[market] missing keys: {missing}")
        return MarketParams(
            sigma_d=_parse_vector(section["sigma_d"]),
            sigma_f=_parse_vector(section["sigma_f"]),
            sigma_q=_parse_vector(section["sigma_q"]),
            **common,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad [market] section: {exc}") from exc


def _parse_row(text: str) -> EpsRow:
    parts = text.split()
    if len(parts) not in (6, 7):
        raise ConfigError(
            f"row must be 'kind w l1 g1 p_rate f_rate [q_bar]', got {text!r}")
    kind = parts[0].lower()
    try:
        nums = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise ConfigError(f"bad row numbers in {text!r}") from exc
    q_bar = nums[5] if len(nums) == 6 else None
    return EpsRow(kind, *nums[:5], q_bar=q_bar)


def parse_config_text(text: str) -> RunConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if "market" not in parser:
        raise ConfigError("config needs a [market] section")
    market = _parse_market(parser["market"])

    eps = parser["eps"] if "eps" in parser else {}
    maturity = float(eps.get("maturity", 1.0))
    notional = float(eps.get("notional", 1_000_000.0))

    mc_sec = parser["mc"] if "mc" in parser else {}
    try:
        mc = McConfig(
            n_paths=int(mc_sec.get("n_paths", 1_000_000)),
            seed=int(mc_sec.get("seed", McConfig().seed)),
            partitions=int(mc_sec.get("partitions", 16)),
            antithetic=str(mc_sec.get("antithetic", "false")).lower() in ("1", "true", "yes"),
            workers=int(mc_sec.get("workers", 1)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad [mc] section: {exc}") from exc

    if "rows" in parser:
        def row_key(kv):
            key = kv[0]
            return (0, int(key)) if key.isdigit() else (1, key)
        items = sorted(parser["rows"].items(), key=row_key)
        rows = tuple(_parse_row(v) for _, v in items)
    else:
        rows = BENCHMARK_ROWS
    return RunConfig(market=market, rows=rows, maturity=maturity, notional=notional, mc=mc)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc


def default_config_text() -> str:
    """Self-describing INI matching the built-in defaults."""
    buf = io.StringIO()
    buf.write("# Cross-currency EPS pricing configuration.\n")
    buf.write("# [market] takes either scalar vols + correlations (below) or explicit\n")
    buf.write("# 3-component vectors sigma_d / sigma_f / sigma_q.\n\n")
    buf.write("[market]\n")
    buf.write(f"r_d = {DEFAULT_RATES['r_d']}\n")
    buf.write(f"r_f = {DEFAULT_RATES['r_f']}\n")
    c = DEFAULT_CORRELATIONS
    buf.write(f"vol_d = {c.vol_d}\nvol_f = {c.vol_f}\nvol_q = {c.vol_q}\n")
    buf.write(f"rho_df = {c.rho_df}\nrho_dq = {c.rho_dq}\nrho_fq = {c.rho_fq}\n")
    for k, v in DEFAULT_LEVELS.items():
        buf.write(f"{k} = {v}\n")
    buf.write("\n[eps]\nmaturity = 1.0\nnotional = 1000000\n")
    mc = McConfig()
    buf.write(f"\n[mc]\nn_paths = {mc.n_paths}\nseed = {mc.seed}\n")
    buf.write(f"partitions = {mc.partitions}\nworkers = {mc.workers}\n")
    buf.write("\n# rows: kind w l1 g1 p_rate f_rate [q_bar]\n[rows]\n")
    for i, r in enumerate(BENCHMARK_ROWS, 1):
        buf.write(f"{i:02d} = {r.kind} {r.w} {r.l1} {r.g1} {r.p_rate} {r.f_rate}\n")
    return buf.getvalue()
