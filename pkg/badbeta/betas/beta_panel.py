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
"""Real-time beta panels: one estimate per month end and asset, built from
data up to and including that month"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from badbeta.betas.beta_spec import BetaEstimatorSpec
from badbeta.betas import estimators as est
from badbeta.custom_errors import ConfigError, NumericError
from badbeta.data.panels import AlignedDataset
from badbeta.news.var_news import NewsSeries
from badbeta.utils.config_type import BetaKind
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import BETA_HEADER, DATE_FORMAT
from badbeta.utils.utility import parallel_map, resolve_threads, split_packets

LOGGER = setup_logger('beta_panel')


@dataclass(frozen=True)
class BetaPanel:
  """month x asset betas of one estimator"""
  calendar: pd.DatetimeIndex
  assets: List[str]
  values: pd.DataFrame
  mask: pd.DataFrame
  spec: BetaEstimatorSpec

  @property
  def name(self) -> str:
    """panel name embedding the estimator kind"""
    return self.spec.name

  def masked(self) -> pd.DataFrame:
    """values with undefined cells as NaN"""
    return self.values.where(self.mask)

  def cross_section(self, date: Any) -> pd.Series:
    """defined betas at a month end"""
    row = self.masked().loc[pd.Timestamp(date)]
    return row.dropna()

  def coverage(self) -> float:
    """share of defined cells"""
    return float(self.mask.values.mean()) if self.mask.size else 0.0


def _daily_cell(kind: BetaKind, spec: BetaEstimatorSpec, stock: np.ndarray,
                market: np.ndarray) -> float:
  """estimator on one daily window ending at a month end"""
  #pylint: disable=too-many-return-statements
  short = spec.vol_days
  need = spec.required(short)
  if kind == BetaKind.fp:
    return est.beta_fp(stock, market, spec.vol_days, spec.corr_days,
                       spec.overlap_days, spec.min_fraction)
  if kind in (BetaKind.dimson, BetaKind.standard):
    #lagged market column needs dimson_lags days ahead of the window
    span = short + spec.dimson_lags
    stock, market = stock[-span:], market[-span:]
    weight = (spec.dimson_shrink_weight
              if kind == BetaKind.dimson else spec.shrink_weight)
    return est.beta_dimson(stock, market, spec.dimson_lags, weight,
                           spec.shrink_target, need)
  stock, market = stock[-short:], market[-short:]
  if kind == BetaKind.ols:
    return est.beta_ols(stock, market, need)
  if kind == BetaKind.ols3d:
    return est.beta_ols3d(stock, market, need, spec.overlap_days)
  if kind == BetaKind.welch:
    return est.beta_welch(stock, market, spec.welch_delta, need)
  raise ConfigError(f"{kind} is not a daily time-series estimator",
                    module='beta_lab')


def _daily_packet(args) -> Dict[str, Any]:
  """betas (and OLS standard errors for vasicek) for a packet of assets"""
  spec, returns, market, month_ends = args
  n_months, n_assets = len(month_ends), returns.shape[1]
  values = np.full((n_months, n_assets), np.nan)
  errors = np.full((n_months, n_assets), np.nan)
  lookback = spec.corr_days if spec.kind == BetaKind.fp else spec.vol_days
  lookback += spec.dimson_lags if spec.kind in (BetaKind.dimson,
                                                BetaKind.standard) else 0
  failed = 0
  for i, end in enumerate(month_ends):
    if end < 0:
      continue
    start = max(0, end + 1 - lookback)
    mkt = market[start:end + 1]
    for j in range(n_assets):
      stock = returns[start:end + 1, j]
      try:
        if spec.kind == BetaKind.vasicek:
          short = spec.vol_days
          values[i, j], errors[i, j] = est.ols_slope(
              stock[-short:], mkt[-short:], spec.required(short))
        else:
          values[i, j] = _daily_cell(spec.kind, spec, stock, mkt)
      except NumericError:
        failed += 1
  return {'values': values, 'errors': errors, 'failed': failed}


def _monthly_packet(args) -> Dict[str, Any]:
  """bad or good betas for a packet of assets"""
  spec, log_returns, n_cf, n_dr, unexpected, denominators = args
  n_months, n_assets = log_returns.shape
  window = spec.cf_months
  news = n_cf if spec.kind == BetaKind.cf else n_dr
  func = est.beta_cf if spec.kind == BetaKind.cf else est.beta_dr
  values = np.full((n_months, n_assets), np.nan)
  failed = 0
  for i in range(n_months):
    start = max(0, i + 1 - window)
    denom = None if denominators is None else denominators[i]
    if denominators is not None and not np.isfinite(denom):
      continue
    for j in range(n_assets):
      try:
        values[i, j] = func(log_returns[start:i + 1, j], news[start:i + 1],
                            unexpected[start:i + 1], spec.cf_required, denom)
      except NumericError:
        failed += 1
  return {'values': values, 'failed': failed}


def expanding_denominator(news: NewsSeries, need: int) -> np.ndarray:
  """variance of unexpected market news over all defined months up to t"""
  unexpected = news.unexpected_market.values.astype(float)
  out = np.full(len(unexpected), np.nan)
  for i in range(len(unexpected)):
    hist = unexpected[:i + 1]
    hist = hist[np.isfinite(hist)]
    if len(hist) >= max(need, 2):
      out[i] = hist.var(ddof=1)
  return out


def _vasicek_pass(raw: np.ndarray, errors: np.ndarray,
                  min_assets: int) -> np.ndarray:
  """cross-sectional shrinkage month by month; thin months fully masked"""
  out = np.full(raw.shape, np.nan)
  thin = 0
  for i in range(raw.shape[0]):
    if not np.isfinite(raw[i]).any():
      continue
    try:
      out[i] = est.beta_vasicek(raw[i], errors[i], min_assets)
    except NumericError:
      thin += 1
  if thin:
    LOGGER.info('Vasicek: %u months below the minimum cross-section', thin)
  return out


def build_beta_panel(dataset: AlignedDataset,
                     spec: BetaEstimatorSpec,
                     news: Optional[NewsSeries] = None,
                     threads: Optional[int] = 1) -> BetaPanel:
  """! @brief Apply the estimator at every month end and asset
    @param news required for the cf and dr kinds
  """
  calendar = dataset.calendar.monthly_dates
  assets = dataset.assets
  workers = resolve_threads(threads)
  pack_sz = max(1, int(np.ceil(len(assets) / workers)))
  columns = split_packets(range(len(assets)), pack_sz)

  if spec.kind.is_daily():
    returns = dataset.daily.returns().values
    market = dataset.market_daily.reindex(
        dataset.calendar.daily_dates).values.astype(float)
    month_ends = dataset.calendar.month_end_positions()
    packets = [(spec, returns[:, cols], market, month_ends) for cols in columns]
    results = parallel_map(_daily_packet, packets, workers)
    values = np.column_stack([res['values'] for res in results])
    if spec.kind == BetaKind.vasicek:
      errors = np.column_stack([res['errors'] for res in results])
      values = _vasicek_pass(values, errors, spec.vasicek_min_assets)
  else:
    if news is None:
      raise ConfigError(f"{spec.kind} betas need a news series",
                        module='beta_lab')
    news = news.reindex(calendar)
    log_returns = dataset.monthly.log_values.values
    denominators = None
    if spec.cf_denominator == 'expanding':
      denominators = expanding_denominator(news, spec.cf_required)
    packets = [(spec, log_returns[:, cols], news.n_cf.values,
                news.n_dr.values, news.unexpected_market.values, denominators)
               for cols in columns]
    results = parallel_map(_monthly_packet, packets, workers)
    values = np.column_stack([res['values'] for res in results])

  failed = sum(res['failed'] for res in results)
  frame = pd.DataFrame(values, index=calendar, columns=assets)
  mask = frame.notna()
  panel = BetaPanel(calendar=calendar,
                    assets=list(assets),
                    values=frame.fillna(0.0),
                    mask=mask,
                    spec=spec)
  LOGGER.info('%s panel: %.1f%% cells defined, %u estimation failures',
              spec.name, 100.0 * panel.coverage(), failed)
  return panel


def firm_average(panel: BetaPanel) -> pd.Series:
  """time-series average beta per asset"""
  return panel.masked().mean(axis=0)


def write_beta_panel(panel: BetaPanel, path: str) -> None:
  """CSV export `date,asset_id,beta` of the defined cells"""
  long = panel.masked().stack().reset_index()
  long.columns = BETA_HEADER
  long.to_csv(path, index=False, date_format=DATE_FORMAT)
