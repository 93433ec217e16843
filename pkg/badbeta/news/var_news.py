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
"""First-order VAR on the state variables and the cash-flow / discount-rate
news decomposition of the unexpected market return"""

from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np
import pandas as pd

from badbeta.custom_errors import (InsufficientDataError, NonStationaryError,
                                   NumericError, SingularFitError)
from badbeta.data.panels import StateSeries
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (DATE_FORMAT, DEFAULT_RHO, MIN_VAR_OBS,
                                    NEWS_HEADER, STATE_COLUMNS)
from badbeta.utils.utility import parallel_map, resolve_threads, split_packets

LOGGER = setup_logger('var_news')

N_STATES = len(STATE_COLUMNS)


@dataclass(frozen=True)
class VarModel:
  """x_{t+1} = mu + gamma x_t + u_{t+1}, fit equation by equation with OLS"""
  mu: np.ndarray
  gamma: np.ndarray
  residuals: pd.DataFrame
  rho: float
  lambda_: np.ndarray
  sample_end: pd.Timestamp
  gamma_se: np.ndarray
  sigma: np.ndarray
  scale: np.ndarray

  @property
  def n_obs(self) -> int:
    """number of fitted transitions"""
    return len(self.residuals)

  def spectral_radius(self) -> float:
    """largest eigenvalue modulus of rho * gamma"""
    return spectral_radius(self.rho * self.gamma)


@dataclass(frozen=True)
class NewsSeries:
  """discount-rate and cash-flow news, NaN on dates that could not be
  estimated"""
  calendar: pd.DatetimeIndex
  n_dr: pd.Series
  n_cf: pd.Series
  unexpected_market: pd.Series

  @property
  def valid(self) -> pd.Series:
    """dates with defined news"""
    return self.n_cf.notna() & self.n_dr.notna() & self.unexpected_market.notna(
    )

  def to_frame(self) -> pd.DataFrame:
    """news as one frame with the export column names"""
    return pd.DataFrame(
        {
            'n_cf': self.n_cf.values,
            'n_dr': self.n_dr.values,
            'unexpected_mkt': self.unexpected_market.values
        },
        index=self.calendar)

  def reindex(self, dates: pd.DatetimeIndex) -> 'NewsSeries':
    """news on another calendar, NaN where absent"""
    dates = pd.DatetimeIndex(dates)
    return NewsSeries(calendar=dates,
                      n_dr=self.n_dr.reindex(dates),
                      n_cf=self.n_cf.reindex(dates),
                      unexpected_market=self.unexpected_market.reindex(dates))


def spectral_radius(matrix: np.ndarray) -> float:
  """max |eigenvalue|"""
  return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def news_weights(gamma: np.ndarray, rho: float = DEFAULT_RHO) -> np.ndarray:
  """Solve lambda (I - rho gamma) = e1' rho gamma for the row vector lambda"""
  gamma = np.asarray(gamma, dtype=float)
  radius = spectral_radius(rho * gamma)
  if radius >= 1.0:
    raise NonStationaryError('rho * gamma is not stable',
                             radius=radius,
                             module='var_news')
  eye = np.eye(gamma.shape[0])
  rhs = rho * gamma[0, :]
  return np.linalg.solve((eye - rho * gamma).T, rhs)


def decompose_shocks(shocks: np.ndarray,
                     lam: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
  """(n_dr, n_cf, unexpected) for rows of VAR shocks"""
  shocks = np.atleast_2d(shocks)
  n_dr = shocks @ lam
  unexpected = shocks[:, 0]
  n_cf = unexpected + n_dr
  return n_dr, n_cf, unexpected


def estimate_var(states: StateSeries,
                 end_date: Any,
                 rho: float = DEFAULT_RHO,
                 min_obs: int = MIN_VAR_OBS,
                 standardize: bool = False) -> VarModel:
  """! @brief OLS fit of the VAR(1) on states observed up to end_date
    @param standardize divide non-market columns by their sample stdev first;
    the news series is invariant to this rescaling
  """
  end_date = pd.Timestamp(end_date)
  window = states.upto(end_date)
  values = window.values.values.astype(float)
  if len(values) < min_obs:
    raise InsufficientDataError(
        f"{len(values)} monthly states up to end date, need {min_obs}",
        module='var_news',
        date=end_date)

  scale = np.ones(values.shape[1])
  if standardize:
    stdev = values[:, 1:].std(axis=0, ddof=1)
    if (stdev <= 0).any():
      raise SingularFitError('constant state column, cannot standardize',
                             module='var_news',
                             date=end_date)
    scale[1:] = stdev
    values = values / scale

  #regress x_{t+1} on [1, x_t]
  rhs = np.column_stack([np.ones(len(values) - 1), values[:-1]])
  lhs = values[1:]
  if np.linalg.matrix_rank(rhs) < rhs.shape[1]:
    raise SingularFitError('state regressors are rank deficient',
                           module='var_news',
                           date=end_date)
  params = np.linalg.lstsq(rhs, lhs, rcond=None)[0]
  resid = lhs - rhs @ params
  mu = params[0]
  gamma = params[1:].T

  dof = len(lhs) - rhs.shape[1]
  sigma = resid.T @ resid / dof
  xtx_inv = np.linalg.inv(rhs.T @ rhs)
  gamma_se = np.sqrt(np.outer(np.diag(sigma), np.diag(xtx_inv)[1:]))

  radius = spectral_radius(rho * gamma)
  if radius >= 1.0:
    raise NonStationaryError('estimated rho * gamma is not stable',
                             radius=radius,
                             module='var_news',
                             date=end_date)
  lam = news_weights(gamma, rho)

  residuals = pd.DataFrame(resid,
                           index=window.calendar[1:],
                           columns=window.values.columns)
  LOGGER.debug('VAR through %s: %u obs, radius %.4f', end_date.date(),
               len(lhs), radius)
  return VarModel(mu=mu,
                  gamma=gamma,
                  residuals=residuals,
                  rho=rho,
                  lambda_=lam,
                  sample_end=window.calendar[-1],
                  gamma_se=gamma_se,
                  sigma=sigma,
                  scale=scale)


def news_decompose(model: VarModel) -> NewsSeries:
  """News for every residual date of the model"""
  n_dr, n_cf, unexpected = decompose_shocks(model.residuals.values,
                                            model.lambda_)
  dates = model.residuals.index
  return NewsSeries(calendar=dates,
                    n_dr=pd.Series(n_dr, index=dates, name='n_dr'),
                    n_cf=pd.Series(n_cf, index=dates, name='n_cf'),
                    unexpected_market=pd.Series(unexpected,
                                                index=dates,
                                                name='unexpected_mkt'))


def _news_packet(args) -> List[Tuple[pd.Timestamp, Optional[np.ndarray], str]]:
  """news at each date of a packet from a model fit through that date"""
  states, dates, rho, min_obs, standardize = args
  out = []
  for date in dates:
    try:
      model = estimate_var(states, date, rho, min_obs, standardize)
    except NumericError as err:
      out.append((date, None, str(err)))
      continue
    n_dr, n_cf, unexpected = decompose_shocks(model.residuals.values[-1:],
                                              model.lambda_)
    out.append((date, np.array([n_dr[0], n_cf[0], unexpected[0]]), ''))
  return out


def expanding_news(states: StateSeries,
                   first_estimation_date: Any = None,
                   rho: float = DEFAULT_RHO,
                   min_obs: int = MIN_VAR_OBS,
                   standardize: bool = False,
                   threads: Optional[int] = 1) -> NewsSeries:
  """Real-time news: at each month t the VAR is re-fit on states through t and
  the news at t is the final residual of that fit"""
  calendar = states.calendar
  if first_estimation_date is None:
    if len(calendar) < min_obs:
      raise InsufficientDataError(
          f"{len(calendar)} monthly states, need {min_obs}", module='var_news')
    first_estimation_date = calendar[min_obs - 1]
  first_estimation_date = pd.Timestamp(first_estimation_date)
  n_before = int((calendar <= first_estimation_date).sum())
  if n_before < min_obs:
    raise InsufficientDataError(
        f"first estimation date leaves {n_before} states, need {min_obs}",
        module='var_news',
        date=first_estimation_date)

  dates = list(calendar[calendar >= first_estimation_date])
  workers = resolve_threads(threads)
  pack_sz = max(1, int(np.ceil(len(dates) / workers)))
  packets = [(states, pack, rho, min_obs, standardize)
             for pack in split_packets(dates, pack_sz)]
  results = [
      row for packet in parallel_map(_news_packet, packets, workers)
      for row in packet
  ]

  values = np.full((len(calendar), 3), np.nan)
  pos = pd.Series(np.arange(len(calendar)), index=calendar)
  failed = 0
  for date, row, msg in results:
    if row is None:
      failed += 1
      LOGGER.debug('news masked: %s', msg)
      continue
    values[pos[date]] = row
  if failed:
    LOGGER.warning('Expanding VAR failed on %u of %u dates, news masked',
                   failed, len(dates))
  LOGGER.info('Expanding news: %u dates from %s', len(dates) - failed,
              first_estimation_date.strftime(DATE_FORMAT))
  return NewsSeries(calendar=calendar,
                    n_dr=pd.Series(values[:, 0], index=calendar, name='n_dr'),
                    n_cf=pd.Series(values[:, 1], index=calendar, name='n_cf'),
                    unexpected_market=pd.Series(values[:, 2],
                                                index=calendar,
                                                name='unexpected_mkt'))


def write_news(news: NewsSeries, path: str) -> None:
  """CSV export `date,n_cf,n_dr,unexpected_mkt`"""
  frame = news.to_frame()
  frame.insert(0, 'date', frame.index)
  frame = frame[NEWS_HEADER]
  frame.to_csv(path, index=False, date_format=DATE_FORMAT, na_rep='')
