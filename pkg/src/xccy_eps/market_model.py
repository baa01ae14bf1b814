"""Three-factor lognormal cross-currency market model.

Domestic equity, foreign equity and the direct FX quote are driven by a
shared 3-dimensional Brownian motion under the domestic martingale measure:

    dS_d = S_d (r_d dt + sigma_d dW)
    dS_f = S_f ((r_f - sigma_f . sigma_q) dt + sigma_f dW)
    dQ   = Q   ((r_d - r_f) dt + sigma_q dW)

Volatility vectors are row vectors of factor loadings; their Euclidean norms
are the scalar annualised volatilities and their pairwise cosines the
instantaneous correlations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .numerics import GaussianStream, gaussian_matrix

__all__ = [
    "CorrelationInputs",
    "MarketParams",
    "TerminalSample",
    "PathGrid",
    "build_vol_vectors",
    "delta_q",
    "simulate_terminal",
    "normalized_terminals",
    "simulate_path",
]


@dataclass(frozen=True)
class CorrelationInputs:
    """Scalar volatilities plus the three pairwise instantaneous correlations
    (domestic/foreign equity, domestic equity/FX, foreign equity/FX)."""

    vol_d: float
    vol_f: float
    vol_q: float
    rho_df: float
    rho_dq: float
    rho_fq: float

    def __post_init__(self):
        if min(self.vol_d, self.vol_f, self.vol_q) <= 0.0:
            raise ValueError("scalar volatilities must be strictly positive")
        for name in ("rho_df", "rho_dq", "rho_fq"):
            r = getattr(self, name)
            if not -1.0 <= r <= 1.0:
                raise ValueError(f"{name} must lie in [-1, 1], got {r}")


def build_vol_vectors(inputs: CorrelationInputs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lower-triangular (Cholesky-style) volatility vectors.

    sigma_d = v_d [1, 0, 0]
    sigma_f = v_f [rho_df, sqrt(1 - rho_df^2), 0]
    sigma_q = v_q [a1, a2, a3] with a1 = rho_dq,
              a2 = (rho_fq - rho_df rho_dq) / sqrt(1 - rho_df^2),
              a3 = sqrt(1 - a1^2 - a2^2).

    Raises if the implied 3x3 correlation matrix is not positive
    semi-definite (a3^2 < 0).
    """
    v_d, v_f, v_q = inputs.vol_d, inputs.vol_f, inputs.vol_q
    r12, r13, r23 = inputs.rho_df, inputs.rho_dq, inputs.rho_fq
    ortho = math.sqrt(1.0 - r12 * r12)
    if ortho == 0.0:
        if abs(r23 - r12 * r13) > 1e-14:
            raise ValueError("degenerate rho_df = +/-1 pins rho_fq = rho_df * rho_dq")
        a2 = 0.0
    else:
        a2 = (r23 - r12 * r13) / ortho
    a3_sq = 1.0 - r13 * r13 - a2 * a2
    if a3_sq < 0.0:
        raise ValueError("correlation inputs are not positive semi-definite")
    sigma_d = v_d * np.array([1.0, 0.0, 0.0])
    sigma_f = v_f * np.array([r12, ortho, 0.0])
    sigma_q = v_q * np.array([r13, a2, math.sqrt(a3_sq)])
    return sigma_d, sigma_f, sigma_q


def _as_vol_vector(v) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError("volatility vectors must have exactly 3 components")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class MarketParams:
    """Constants of the cross-currency model.

    Rates are continuously compounded per year; volatility vectors are
    annualised factor loadings.  The FX quote ``q0`` is domestic units per
    one foreign unit; equity initial levels are only used when denominating
    real-world option strikes, never by normalised EPS prices.
    """

    r_d: float
    r_f: float
    sigma_d: np.ndarray
    sigma_f: np.ndarray
    sigma_q: np.ndarray
    q0: float = 1.48
    s_d0: float = 76.5
    s_f0: float = 52.5

    def __post_init__(self):
        object.__setattr__(self, "sigma_d", _as_vol_vector(self.sigma_d))
        object.__setattr__(self, "sigma_f", _as_vol_vector(self.sigma_f))
        object.__setattr__(self, "sigma_q", _as_vol_vector(self.sigma_q))
        if min(self.q0, self.s_d0, self.s_f0) <= 0.0:
            raise ValueError("q0, s_d0 and s_f0 must be strictly positive")

    @classmethod
    def from_correlations(
        cls,
        inputs: CorrelationInputs,
        r_d: float,
        r_f: float,
        q0: float = 1.48,
        s_d0: float = 76.5,
        s_f0: float = 52.5,
    ) -> "MarketParams":
        sd, sf, sq = build_vol_vectors(inputs)
        return cls(r_d=r_d, r_f=r_f, sigma_d=sd, sigma_f=sf, sigma_q=sq,
                   q0=q0, s_d0=s_d0, s_f0=s_f0)

    @property
    def vol_d(self) -> float:
        return float(np.linalg.norm(self.sigma_d))

    @property
    def vol_f(self) -> float:
        return float(np.linalg.norm(self.sigma_f))

    @property
    def vol_q(self) -> float:
        return float(np.linalg.norm(self.sigma_q))

    @property
    def sigma_fe(self) -> np.ndarray:
        """Loadings of the foreign equity struck in domestic currency."""
        return self.sigma_f + self.sigma_q

    @property
    def vol_fe(self) -> float:
        return float(np.linalg.norm(self.sigma_fe))

    @property
    def s_fe0(self) -> float:
        return self.q0 * self.s_f0


def delta_q(params: MarketParams) -> float:
    """Quanto drift adjustment r_f - r_d - sigma_f . sigma_q."""
    return float(params.r_f - params.r_d - params.sigma_f @ params.sigma_q)


@dataclass(frozen=True)
class TerminalSample:
    """Joint terminal draws of (S_d, S_f, Q) under the domestic measure."""

    s_d: np.ndarray
    s_f: np.ndarray
    q: np.ndarray

    @property
    def s_fe(self) -> np.ndarray:
        return self.q * self.s_f


def _log_drifts(params: MarketParams, T: float) -> tuple[float, float, float]:
    sd2 = params.vol_d**2
    sf2 = params.vol_f**2
    sq2 = params.vol_q**2
    cross = float(params.sigma_f @ params.sigma_q)
    mu_d = (params.r_d - 0.5 * sd2) * T
    mu_f = (params.r_f - cross - 0.5 * sf2) * T
    mu_q = (params.r_d - params.r_f - 0.5 * sq2) * T
    return mu_d, mu_f, mu_q


def _terminal_logs(params: MarketParams, T: float, z: np.ndarray):
    """Exact log increments over [0, T] from standard normal rows ``z``."""
    mu_d, mu_f, mu_q = _log_drifts(params, T)
    sq_t = math.sqrt(T)
    x_d = mu_d + sq_t * (z @ params.sigma_d)
    x_f = mu_f + sq_t * (z @ params.sigma_f)
    x_q = mu_q + sq_t * (z @ params.sigma_q)
    return x_d, x_f, x_q


def simulate_terminal(params: MarketParams, T: float, n: int, stream: GaussianStream) -> TerminalSample:
    """Exact joint lognormal terminal draws (no time stepping)."""
    if T <= 0.0:
        raise ValueError("maturity must be strictly positive")
    if n < 1:
        raise ValueError("path count must be at least 1")
    z = gaussian_matrix(stream, n, 3)
    x_d, x_f, x_q = _terminal_logs(params, T, z)
    return TerminalSample(
        s_d=params.s_d0 * np.exp(x_d),
        s_f=params.s_f0 * np.exp(x_f),
        q=params.q0 * np.exp(x_q),
    )


def normalized_terminals(params: MarketParams, T: float, n: int, stream: GaussianStream):
    """Terminal draws of the unit-initial-value processes.

    Returns arrays (S_d_hat, S_f_hat, S_fe_hat); S_fe_hat is the exact
    elementwise product of the FX and foreign equity factors.
    """
    if T <= 0.0:
        raise ValueError("maturity must be strictly positive")
    if n < 1:
        raise ValueError("path count must be at least 1")
    z = gaussian_matrix(stream, n, 3)
    x_d, x_f, x_q = _terminal_logs(params, T, z)
    s_d_hat = np.exp(x_d)
    s_f_hat = np.exp(x_f)
    s_fe_hat = s_f_hat * np.exp(x_q)
    return s_d_hat, s_f_hat, s_fe_hat


@dataclass(frozen=True)
class PathGrid:
    """One simulated path on a uniform grid, with the composite S_fe = Q * S_f."""

    t: np.ndarray
    s_d: np.ndarray
    s_f: np.ndarray
    q: np.ndarray
    s_fe: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "s_fe", self.q * self.s_f)


def simulate_path(params: MarketParams, T: float, steps: int, stream: GaussianStream) -> PathGrid:
    """Exact lognormal increments on a ``steps``-interval uniform grid."""
    if T <= 0.0:
        raise ValueError("maturity must be strictly positive")
    if steps < 1:
        raise ValueError("step count must be at least 1")
    dt = T / steps
    z = gaussian_matrix(stream, steps, 3)
    x_d, x_f, x_q = _terminal_logs(params, dt, z)
    t = np.linspace(0.0, T, steps + 1)
    s_d = params.s_d0 * np.exp(np.concatenate([[0.0], np.cumsum(x_d)]))
    s_f = params.s_f0 * np.exp(np.concatenate([[0.0], np.cumsum(x_f)]))
    q = params.q0 * np.exp(np.concatenate([[0.0], np.cumsum(x_q)]))
    return PathGrid(t=t, s_d=s_d, s_f=s_f, q=q)
