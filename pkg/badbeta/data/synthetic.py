#!/usr/bin/env python3
###############################################################################
#
# MIT License
#
# Copyright (c) 2024 The BadBeta Authors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
###############################################################################
"""Synthetic one-factor economy with a VAR state block and Roll-model
microstructure, used as ground truth for the estimators"""

import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from badbeta.custom_errors import ConfigError
from badbeta.data.align import align
from badbeta.data.loaders import (write_aux_series, write_daily_panel,
                                  write_market_daily, write_panel,
                                  write_state_series)
from badbeta.data.panels import (AlignedDataset, AuxSeries,
                                 DailyMicrostructurePanel, ReturnPanel,
                                 StateSeries, TradingCalendar)
from badbeta.news.var_news import (NewsSeries, decompose_shocks, news_weights,
                                   spectral_radius, write_news)
from badbeta.utils.config_type import Frequency
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (DATE_FORMAT, DEFAULT_DAYS_PER_MONTH,
                                    DEFAULT_RHO, FACTOR_COLUMNS, STATE_COLUMNS,
                                    VOV_K)
from badbeta.utils.utility import derive_seed

LOGGER = setup_logger('synthetic')

#state block: market log excess return, yield spread, CAPE, value spread
DEFAULT_VAR_GAMMA = [
    [0.05, 0.30, -0.002, -0.05],
    [0.0, 0.92, 0.0, 0.0],
    [2.0, 0.0, 0.97, 0.0],
    [0.0, 0.0, 0.0, 0.95],
]
DEFAULT_VAR_NOISE_SD = [0.045, 0.002, 0.8, 0.03]
DEFAULT_VAR_NOISE_CORR = [
    [1.0, 0.0, 0.7, -0.2],
    [0.0, 1.0, 0.0, 0.0],
    [0.7, 0.0, 1.0, 0.0],
    [-0.2, 0.0, 0.0, 1.0],
]
VAR_BURN_IN = 200
MAX_DAYS_PER_MONTH = 28
MIN_RETURN = -0.95
DOLLAR_VOLUME_CAP = 1e15
VOLUME_NOISE_SD = 0.5


def _default_noise_cov():
  stdev = np.array(DEFAULT_VAR_NOISE_SD)
  return np.outer(stdev, stdev) * np.array(DEFAULT_VAR_NOISE_CORR)


@dataclass
class SynthConfig:
  """Parameters of the synthetic economy; per-asset arrays have n_assets
  entries"""
  #pylint: disable=too-many-instance-attributes
  n_assets: int = 100
  n_months: int = 240
  days_per_month: int = DEFAULT_DAYS_PER_MONTH
  true_betas: Any = 1.0
  alpha_profile: Any = 0.0
  market_vol: float = 0.045
  idio_vol: Any = 0.08
  roll_half_spread: Any = 0.005
  var_gamma: np.ndarray = field(
      default_factory=lambda: np.array(DEFAULT_VAR_GAMMA))
  var_noise_cov: np.ndarray = field(default_factory=_default_noise_cov)
  seed: int = 0
  cf_loading: Any = 0.0
  var_mu: Any = 0.0
  risk_free: float = 0.0
  rho: float = DEFAULT_RHO
  start: str = '1963-01'
  start_price: float = 50.0
  base_dollar_volume: float = 1e7

  def __post_init__(self):
    for name in ('true_betas', 'alpha_profile', 'idio_vol', 'roll_half_spread',
                 'cf_loading'):
      setattr(self, name, _broadcast(getattr(self, name), self.n_assets, name))
    self.var_gamma = np.asarray(self.var_gamma, dtype=float)
    self.var_noise_cov = np.asarray(self.var_noise_cov, dtype=float)
    self.var_mu = _broadcast(self.var_mu, len(STATE_COLUMNS), 'var_mu')

  def validate(self) -> None:
    """raise ConfigError on any violated invariant"""
    if self.n_assets < 1 or self.n_months < 2:
      raise ConfigError('synthetic economy needs assets and >= 2 months',
                        module='data_ingest')
    if not 1 <= self.days_per_month <= MAX_DAYS_PER_MONTH:
      raise ConfigError(
          f"days_per_month must be in [1, {MAX_DAYS_PER_MONTH}]",
          module='data_ingest')
    shape = (len(STATE_COLUMNS), len(STATE_COLUMNS))
    if self.var_gamma.shape != shape or self.var_noise_cov.shape != shape:
      raise ConfigError(f"var_gamma and var_noise_cov must be {shape}",
                        module='data_ingest')
    radius = spectral_radius(self.var_gamma)
    if radius >= 1.0:
      raise ConfigError(
          f"var_gamma is not stationary (spectral radius {radius:.6f})",
          module='data_ingest')
    if not np.allclose(self.var_noise_cov, self.var_noise_cov.T) or np.min(
        np.linalg.eigvalsh(self.var_noise_cov)) <= 0:
      raise ConfigError('var_noise_cov must be symmetric positive definite',
                        module='data_ingest')
    if self.market_vol <= 0 or (self.idio_vol < 0).any():
      raise ConfigError('volatilities must be positive', module='data_ingest')
    if (self.roll_half_spread < 0).any():
      raise ConfigError('spreads must be non negative', module='data_ingest')
    if not 0 < self.rho <= 1 or self.start_price <= 0:
      raise ConfigError('rho must lie in (0, 1], start_price > 0',
                        module='data_ingest')

  @classmethod
  def from_dict(cls, params: Dict[str, Any]) -> 'SynthConfig':
    """Build from a config section.
    Besides the field names it accepts beta_range, spread_range,
    cf_loading_range (uniform draws) and planted_alpha (+a for the low-beta
    half, -a for the high-beta half)."""
    params = dict(params)
    known = {f.name for f in fields(cls)}
    extras = {'beta_range', 'spread_range', 'cf_loading_range', 'planted_alpha'}
    unknown = set(params) - known - extras
    if unknown:
      raise ConfigError(f"unknown synthetic keys: {sorted(unknown)}",
                        module='cli')
    n_assets = int(params.get('n_assets', 100))
    seed = int(params.get('seed', 0))
    ranges = [('beta_range', 'true_betas'), ('spread_range', 'roll_half_spread'),
              ('cf_loading_range', 'cf_loading')]
    for range_key, target in ranges:
      if range_key in params:
        low, high = params.pop(range_key)
        rng = np.random.default_rng(derive_seed(seed, 'synth', range_key))
        params[target] = rng.uniform(low, high, n_assets)
    if 'planted_alpha' in params:
      alpha = float(params.pop('planted_alpha'))
      betas = _broadcast(params.get('true_betas', 1.0), n_assets, 'true_betas')
      order = np.argsort(betas, kind='stable')
      profile = np.full(n_assets, -alpha)
      profile[order[:n_assets // 2]] = alpha
      params['alpha_profile'] = profile
    return cls(**params)


def _broadcast(value: Any, size: int, name: str) -> np.ndarray:
  """scalar or sequence to a float vector of the given size"""
  arr = np.asarray(value, dtype=float)
  if arr.ndim == 0:
    return np.full(size, float(arr))
  if arr.shape != (size,):
    raise ConfigError(f"{name} must have {size} entries, got {arr.shape}",
                      module='data_ingest')
  return arr.copy()


@dataclass(frozen=True)
class GroundTruth:
  """Parameters and latent series the estimators should recover"""
  true_betas: pd.Series
  alpha_profile: pd.Series
  cf_loading: pd.Series
  half_spreads: pd.Series
  news: NewsSeries
  lambda_: np.ndarray
  shocks: pd.DataFrame
  market_daily: pd.Series
  mid_log_returns: pd.DataFrame


def _market_scaled_cov(config: SynthConfig) -> np.ndarray:
  """rescale the market row and column so the market shock stdev is
  market_vol"""
  cov = config.var_noise_cov.copy()
  scale = np.ones(len(cov))
  scale[0] = config.market_vol / np.sqrt(cov[0, 0])
  return cov * np.outer(scale, scale)


def synthetic_calendar(config: SynthConfig) -> pd.DatetimeIndex:
  """days 1..days_per_month of each simulated month"""
  months = pd.period_range(config.start, periods=config.n_months, freq='M')
  offsets = pd.to_timedelta(np.arange(config.days_per_month), unit='D')
  return pd.DatetimeIndex(
      [month.start_time + off for month in months for off in offsets])


def _simulate_states(config: SynthConfig,
                     rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
  """VAR(1) path after burn-in and the shocks that drove it"""
  chol = np.linalg.cholesky(_market_scaled_cov(config))
  n_total = VAR_BURN_IN + config.n_months
  shocks = rng.standard_normal((n_total, len(STATE_COLUMNS))) @ chol.T
  eye = np.eye(len(STATE_COLUMNS))
  state = np.linalg.solve(eye - config.var_gamma, config.var_mu)
  path = np.empty_like(shocks)
  for t in range(n_total):
    state = config.var_mu + config.var_gamma @ state + shocks[t]
    path[t] = state
  return path[VAR_BURN_IN:], shocks[VAR_BURN_IN:]


def generate_synthetic(
    config: SynthConfig) -> Tuple[AlignedDataset, GroundTruth]:
  """Simulate states, monthly and daily returns and microstructure.
  Deterministic given config.seed."""
  #pylint: disable=too-many-locals
  config.validate()
  n_m, n_a, n_d = config.n_months, config.n_assets, config.days_per_month
  seed = config.seed

  def stream(name):
    return np.random.default_rng(derive_seed(seed, 'synth', name))

  states, shocks = _simulate_states(config, stream('var'))
  lam = news_weights(config.var_gamma, config.rho)
  n_dr, n_cf, unexpected = decompose_shocks(shocks, lam)

  risk_free = config.risk_free
  market = (1.0 + risk_free) * np.exp(states[:, 0]) - 1.0
  eps = stream('idio').standard_normal((n_m, n_a)) * config.idio_vol
  monthly = (risk_free + config.alpha_profile +
             config.true_betas * (market - risk_free)[:, None] +
             config.cf_loading * n_cf[:, None] + eps)
  n_clipped = int((monthly < MIN_RETURN).sum())
  if n_clipped:
    LOGGER.warning('Clipped %u synthetic monthly returns at %.2f', n_clipped,
                   MIN_RETURN)
    monthly = np.maximum(monthly, MIN_RETURN)

  #daily market log returns that compound to the monthly market return
  mkt_log = np.log1p(market)
  mkt_daily_sd = config.market_vol / np.sqrt(n_d)
  draws = stream('market_daily').standard_normal((n_m, n_d)) * mkt_daily_sd
  mkt_days = draws - draws.mean(axis=1, keepdims=True) + (mkt_log / n_d)[:, None]

  #daily asset log returns: beta times market day plus idiosyncratic days
  #whose sum is the month's idiosyncratic shock, then an exact per-month shift
  idio_daily_sd = config.idio_vol / np.sqrt(n_d)
  draws = stream('idio_daily').standard_normal((n_m, n_d, n_a)) * idio_daily_sd
  idio_days = draws - draws.mean(axis=1, keepdims=True) + (eps / n_d)[:, None, :]
  log_days = config.true_betas * mkt_days[:, :, None] + idio_days
  shift = (np.log1p(monthly) - log_days.sum(axis=1)) / n_d
  log_days = log_days + shift[:, None, :]
  log_days = log_days.reshape(n_m * n_d, n_a)
  mid = config.start_price * np.exp(np.cumsum(log_days, axis=0))

  #Roll bounce and intraday range
  half = config.roll_half_spread
  sign = stream('bounce').choice([-1.0, 1.0], size=mid.shape)
  close = mid * np.exp(half * sign)
  day_sd = np.sqrt((config.true_betas * mkt_daily_sd)**2 + idio_daily_sd**2)
  ranges = stream('range')
  upper = np.abs(ranges.standard_normal(mid.shape)) * day_sd
  lower = np.abs(ranges.standard_normal(mid.shape)) * day_sd
  high = np.maximum(mid * np.exp(upper + half), close)
  low = np.minimum(mid * np.exp(-lower - half), close)

  #dollar volume consistent with the volume-over-volatility power law
  with np.errstate(divide='ignore', invalid='ignore'):
    target_dv = np.where(half > 0,
                         VOV_K**3 * day_sd**2 / (2.0 * half)**3,
                         config.base_dollar_volume)
  target_dv = np.minimum(target_dv, DOLLAR_VOLUME_CAP)
  noise = stream('volume').standard_normal(mid.shape) * VOLUME_NOISE_SD
  dollar_volume = target_dv * np.exp(noise - 0.5 * VOLUME_NOISE_SD**2)
  volume = dollar_volume / close

  daily_dates = synthetic_calendar(config)
  calendar = TradingCalendar.from_daily(daily_dates)
  stamps = calendar.monthly_dates
  width = max(4, len(str(n_a)))
  assets = [f"A{i:0{width}d}" for i in range(1, n_a + 1)]

  def daily_frame(arr):
    return pd.DataFrame(arr, index=daily_dates, columns=assets)

  monthly_frame = pd.DataFrame(monthly, index=stamps, columns=assets)
  monthly_panel = ReturnPanel(calendar=TradingCalendar.from_monthly(stamps),
                              frequency=Frequency.monthly,
                              assets=assets,
                              values=monthly_frame,
                              mask=monthly_frame.notna())
  daily_panel = DailyMicrostructurePanel(calendar=calendar,
                                         assets=assets,
                                         close=daily_frame(close),
                                         high=daily_frame(high),
                                         low=daily_frame(low),
                                         volume=daily_frame(volume),
                                         mask=daily_frame(
                                             np.ones(mid.shape, dtype=bool)))
  state_series = StateSeries(calendar=stamps,
                             values=pd.DataFrame(states,
                                                 index=stamps,
                                                 columns=STATE_COLUMNS))

  factor_rng = stream('factors')
  factors = factor_rng.normal(0.003, 0.03, (n_m, len(FACTOR_COLUMNS)))
  factors[:, 0] = market - risk_free
  aux = AuxSeries(calendar=stamps,
                  risk_free=pd.Series(np.full(n_m, risk_free), index=stamps),
                  factor_returns=pd.DataFrame(factors,
                                              index=stamps,
                                              columns=FACTOR_COLUMNS))
  market_daily = pd.Series(np.expm1(mkt_days.ravel()),
                           index=daily_dates,
                           name='mkt')

  dataset = align(monthly_panel, daily_panel, state_series, aux, market_daily)
  truth = GroundTruth(
      true_betas=pd.Series(config.true_betas, index=assets),
      alpha_profile=pd.Series(config.alpha_profile, index=assets),
      cf_loading=pd.Series(config.cf_loading, index=assets),
      half_spreads=pd.Series(half, index=assets),
      news=NewsSeries(calendar=stamps,
                      n_dr=pd.Series(n_dr, index=stamps, name='n_dr'),
                      n_cf=pd.Series(n_cf, index=stamps, name='n_cf'),
                      unexpected_market=pd.Series(unexpected,
                                                  index=stamps,
                                                  name='unexpected_mkt')),
      lambda_=lam,
      shocks=pd.DataFrame(shocks, index=stamps, columns=STATE_COLUMNS),
      market_daily=market_daily,
      mid_log_returns=daily_frame(log_days))
  LOGGER.info('Synthetic economy: %u assets, %u months, %u days per month',
              n_a, n_m, n_d)
  return dataset, truth


def write_dataset(dataset: AlignedDataset,
                  truth: Optional[GroundTruth],
                  out_dir: str) -> Dict[str, str]:
  """Write every input in its CSV schema plus ground truth files.
  Returns the written paths keyed by input name."""
  os.makedirs(out_dir, exist_ok=True)
  paths = {
      name: os.path.join(out_dir, f"{name}.csv")
      for name in ('monthly', 'daily', 'states', 'aux', 'market_daily')
  }
  write_panel(dataset.monthly, paths['monthly'])
  write_daily_panel(dataset.daily, paths['daily'])
  write_state_series(dataset.states, paths['states'])
  write_aux_series(dataset.aux, paths['aux'])
  write_market_daily(dataset.market_daily, paths['market_daily'])
  if truth is not None:
    paths['truth_assets'] = os.path.join(out_dir, 'truth_assets.csv')
    frame = pd.DataFrame({
        'asset_id': truth.true_betas.index,
        'beta': truth.true_betas.values,
        'alpha': truth.alpha_profile.values,
        'cf_loading': truth.cf_loading.values,
        'half_spread': truth.half_spreads.values
    })
    frame.to_csv(paths['truth_assets'], index=False, date_format=DATE_FORMAT)
    paths['truth_news'] = os.path.join(out_dir, 'truth_news.csv')
    write_news(truth.news, paths['truth_news'])
  LOGGER.info('Wrote synthetic dataset to %s', out_dir)
  return paths
