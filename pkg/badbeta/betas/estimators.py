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
"""Per-asset beta estimators on a single window of returns.
Inputs are aligned arrays that may hold NaN for unavailable observations."""

from typing import Optional, Tuple

import numpy as np

from badbeta.custom_errors import (InsufficientBreadthError,
                                   InsufficientDataError, UndefinedBetaError)
from badbeta.utils.metadata import (DIMSON_LAGS, OVERLAP_DAYS,
                                    STANDARD_SHRINK_TARGET,
                                    STANDARD_SHRINK_WEIGHT, VASICEK_MIN_ASSETS,
                                    WELCH_DELTA)


def _pairs(stock, market) -> Tuple[np.ndarray, np.ndarray]:
  """drop observations where either side is missing"""
  stock = np.asarray(stock, dtype=float)
  market = np.asarray(market, dtype=float)
  keep = np.isfinite(stock) & np.isfinite(market)
  return stock[keep], market[keep]


def _require(n_valid: int, need: int, what: str) -> None:
  if n_valid < max(need, 3):
    raise InsufficientDataError(f"{what}: {n_valid} observations, need {need}",
                                module='beta_lab')


def ols_slope(stock, market, need: int = 0) -> Tuple[float, float]:
  """slope of an intercept OLS and its standard error"""
  y, x = _pairs(stock, market)
  _require(len(x), need, 'ols window')
  xd = x - x.mean()
  yd = y - y.mean()
  sxx = float(np.dot(xd, xd))
  if sxx <= 0.0:
    raise UndefinedBetaError('zero market variance', module='beta_lab')
  slope = float(np.dot(xd, yd)) / sxx
  resid = yd - slope * xd
  dof = len(x) - 2
  se = float(np.sqrt(np.dot(resid, resid) / dof / sxx)) if dof > 0 else np.nan
  return slope, se


def correlation(stock, market, need: int = 0) -> float:
  """Pearson correlation over jointly available observations"""
  y, x = _pairs(stock, market)
  _require(len(x), need, 'correlation window')
  xd = x - x.mean()
  yd = y - y.mean()
  denom = np.sqrt(np.dot(xd, xd) * np.dot(yd, yd))
  if denom <= 0.0:
    raise UndefinedBetaError('zero variance in correlation window',
                             module='beta_lab')
  return float(np.dot(xd, yd) / denom)


def overlapping_returns(returns, days: int = OVERLAP_DAYS) -> np.ndarray:
  """sums of `days` consecutive returns ending at each observation, NaN when
  any of them is missing"""
  returns = np.asarray(returns, dtype=float)
  if days == 1:
    return returns.copy()
  out = np.full(len(returns), np.nan)
  if len(returns) < days:
    return out
  windows = np.lib.stride_tricks.sliding_window_view(returns, days)
  out[days - 1:] = windows.sum(axis=1)
  return out


def beta_fp(stock, market, vol_days: int, corr_days: int,
            overlap_days: int = OVERLAP_DAYS,
            min_fraction: float = 0.8) -> float:
  """! @brief Volatility from a short window, correlation from a long window
    of overlapping returns: (rho_long / rho_short) * beta_short
    @param stock daily returns over the long window, latest last
  """
  stock = np.asarray(stock, dtype=float)
  market = np.asarray(market, dtype=float)
  short_s, short_m = stock[-vol_days:], market[-vol_days:]
  need_short = int(np.ceil(min_fraction * vol_days))
  need_long = int(np.ceil(min_fraction * corr_days))
  beta_short, _ = ols_slope(short_s, short_m, need_short)
  rho_short = correlation(short_s, short_m, need_short)
  if rho_short == 0.0:
    raise UndefinedBetaError('zero short window correlation',
                             module='beta_lab')
  long_s = overlapping_returns(stock[-corr_days:], overlap_days)
  long_m = overlapping_returns(market[-corr_days:], overlap_days)
  rho_long = correlation(long_s, long_m, need_long - overlap_days + 1)
  return rho_long / rho_short * beta_short


def beta_ols(stock, market, need: int = 0) -> float:
  """OLS slope with intercept"""
  return ols_slope(stock, market, need)[0]


def beta_ols3d(stock, market, need: int = 0,
               overlap_days: int = OVERLAP_DAYS) -> float:
  """OLS slope on overlapping multi-day returns"""
  return ols_slope(overlapping_returns(stock, overlap_days),
                   overlapping_returns(market, overlap_days),
                   max(need - overlap_days + 1, 0))[0]


def dimson_raw(stock, market, lags: int = DIMSON_LAGS, need: int = 0) -> float:
  """sum of slopes on the contemporaneous and lagged market returns"""
  stock = np.asarray(stock, dtype=float)
  market = np.asarray(market, dtype=float)
  cols = [market]
  for lag in range(1, lags + 1):
    lagged = np.full(len(market), np.nan)
    lagged[lag:] = market[:-lag]
    cols.append(lagged)
  design = np.column_stack(cols)
  keep = np.isfinite(stock) & np.isfinite(design).all(axis=1)
  _require(int(keep.sum()), need, 'dimson window')
  rhs = np.column_stack([np.ones(int(keep.sum())), design[keep]])
  if np.linalg.matrix_rank(rhs) < rhs.shape[1]:
    raise UndefinedBetaError('collinear dimson regressors', module='beta_lab')
  params = np.linalg.lstsq(rhs, stock[keep], rcond=None)[0]
  return float(params[1:].sum())


def shrink(raw: float, weight: float, target: float) -> float:
  """weight * raw + (1 - weight) * target"""
  return weight * raw + (1.0 - weight) * target


def beta_dimson(stock,
                market,
                lags: int = DIMSON_LAGS,
                shrink_weight: float = 1.0,
                shrink_target: float = STANDARD_SHRINK_TARGET,
                need: int = 0) -> float:
  """Dimson beta, optionally shrunk toward a target"""
  if shrink_weight == 0.0:
    return float(shrink_target)
  return shrink(dimson_raw(stock, market, lags, need), shrink_weight,
                shrink_target)


def beta_standard(stock,
                  market,
                  lags: int = DIMSON_LAGS,
                  shrink_weight: float = STANDARD_SHRINK_WEIGHT,
                  shrink_target: float = STANDARD_SHRINK_TARGET,
                  need: int = 0) -> float:
  """Dimson beta shrunk toward one"""
  return beta_dimson(stock, market, lags, shrink_weight, shrink_target, need)


def welch_clip(stock, market, delta: float = WELCH_DELTA) -> np.ndarray:
  """clamp stock returns between (1 - delta) r_m and (1 + delta) r_m"""
  stock = np.asarray(stock, dtype=float)
  market = np.asarray(market, dtype=float)
  bound_a = (1.0 - delta) * market
  bound_b = (1.0 + delta) * market
  with np.errstate(invalid='ignore'):
    return np.clip(stock, np.minimum(bound_a, bound_b),
                   np.maximum(bound_a, bound_b))


def beta_welch(stock, market, delta: float = WELCH_DELTA,
               need: int = 0) -> float:
  """OLS on market-relative winsorized stock returns"""
  return ols_slope(welch_clip(stock, market, delta), market, need)[0]


def beta_vasicek(raw_betas,
                 standard_errors,
                 min_assets: int = VASICEK_MIN_ASSETS) -> np.ndarray:
  """Shrink a cross-section toward its mean with weight
  var_cross / (var_cross + se_i^2); NaN where the input is undefined"""
  raw = np.asarray(raw_betas, dtype=float)
  se = np.asarray(standard_errors, dtype=float)
  valid = np.isfinite(raw) & np.isfinite(se)
  n_valid = int(valid.sum())
  if n_valid < min_assets:
    raise InsufficientBreadthError(
        f"{n_valid} assets with a raw beta, need {min_assets}",
        module='beta_lab')
  prior_mean = raw[valid].mean()
  sampling = np.mean(se[valid]**2)
  var_cross = max(raw[valid].var(ddof=1) - sampling, 0.0)
  denom = var_cross + se[valid]**2
  with np.errstate(invalid='ignore', divide='ignore'):
    weight = np.where(denom > 0, var_cross / denom, 1.0)
  out = np.full(len(raw), np.nan)
  out[valid] = weight * raw[valid] + (1.0 - weight) * prior_mean
  return out


def news_beta(stock_log,
              news,
              unexpected,
              need: int = 0,
              denominator: Optional[float] = None) -> float:
  """cov(stock, news) / var(unexpected market) on jointly available months"""
  stock_log = np.asarray(stock_log, dtype=float)
  news = np.asarray(news, dtype=float)
  unexpected = np.asarray(unexpected, dtype=float)
  keep = np.isfinite(stock_log) & np.isfinite(news) & np.isfinite(unexpected)
  _require(int(keep.sum()), need, 'news beta window')
  r = stock_log[keep]
  n = news[keep]
  cov = float(np.dot(r - r.mean(), n - n.mean())) / (len(r) - 1)
  if denominator is None:
    u = unexpected[keep]
    denominator = float(np.dot(u - u.mean(), u - u.mean())) / (len(u) - 1)
  if denominator <= 0.0:
    raise UndefinedBetaError('zero unexpected market variance',
                             module='beta_lab')
  return cov / denominator


def beta_cf(stock_log, n_cf, unexpected, need: int = 0,
            denominator: Optional[float] = None) -> float:
  """bad beta: covariance with cash-flow news"""
  return news_beta(stock_log, n_cf, unexpected, need, denominator)


def beta_dr(stock_log, n_dr, unexpected, need: int = 0,
            denominator: Optional[float] = None) -> float:
  """good beta: covariance with the negative of discount-rate news, so that
  beta_cf + beta_dr = cov(stock, unexpected) / var(unexpected)"""
  return news_beta(stock_log, -np.asarray(n_dr, dtype=float), unexpected,
                   need, denominator)
