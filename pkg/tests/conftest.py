import pytest

from xccy_eps import CorrelationInputs, MarketParams


@pytest.fixture(scope="session")
def params() -> MarketParams:
    """Default market: volatility vectors built exactly from the scalar
    vols and pairwise correlations of the benchmark setup."""
    return MarketParams.from_correlations(
        CorrelationInputs(vol_d=0.10, vol_f=0.15, vol_q=0.09,
                          rho_df=0.10, rho_dq=0.05, rho_fq=-0.05),
        r_d=0.0435, r_f=0.0525, q0=1.48, s_d0=76.5, s_f0=52.5)


@pytest.fixture(scope="session")
def params_rounded() -> MarketParams:
    """Same market with the 2-decimal-percent vectors as published."""
    return MarketParams(
        r_d=0.0435, r_f=0.0525,
        sigma_d=[0.10, 0.0, 0.0],
        sigma_f=[0.0150, 0.1493, 0.0],
        sigma_q=[0.0045, -0.0050, 0.0898],
        q0=1.48, s_d0=76.5, s_f0=52.5)
