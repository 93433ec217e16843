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
"""Monthly rebalanced BAB / BABB factor construction"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from badbeta.betas.beta_panel import BetaPanel
from badbeta.custom_errors import (EmptyLegError, InsufficientDataError,
                                   LeverageUndefinedError, NumericError)
from badbeta.data.panels import AlignedDataset
from badbeta.portfolio.sorts import (SortAssignment, double_sort_3x3,
                                     tercile_sort)
from badbeta.utils.config_type import LegMode, SortScheme
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (DATE_FORMAT, FACTOR_HEADER,
                                    MIN_ASSETS_DOUBLE, MIN_ASSETS_TERCILE,
                                    MIN_VALID_MONTHS)

LOGGER = setup_logger('backtest')

LEGS = ('low', 'high')


@dataclass
class FactorSeries:
  """Factor returns indexed by realization month t+1, with the diagnostics of
  the portfolios formed at month end t"""
  #pylint: disable=too-many-instance-attributes
  name: str
  calendar: pd.DatetimeIndex
  gross: pd.Series
  net: pd.Series
  leg_returns: pd.DataFrame
  leg_betas: pd.DataFrame
  leverage: pd.Series
  turnover: pd.DataFrame
  cost_drag: pd.Series
  formation: pd.Series
  assignments: Dict[pd.Timestamp, SortAssignment] = field(default_factory=dict)
  trades: Dict[pd.Timestamp, Dict[str, pd.Series]] = field(
      default_factory=dict)
  bucket_returns: pd.DataFrame = field(default_factory=pd.DataFrame)
  bucket_counts: pd.DataFrame = field(default_factory=pd.DataFrame)
  bucket_turnover: pd.DataFrame = field(default_factory=pd.DataFrame)
  failures: Dict[str, int] = field(default_factory=dict)

  @property
  def valid(self) -> pd.Series:
    """months with a defined factor return"""
    return self.gross.notna()

  def ex_ante_beta(self) -> pd.Series:
    """beta of the levered long minus delevered short legs, zero by
    construction"""
    low = self.leg_betas['low']
    high = self.leg_betas['high']
    return low / low - high / high

  def to_frame(self) -> pd.DataFrame:
    """export layout"""
    frame = pd.DataFrame(
        {
            'date': self.calendar,
            'gross': self.gross.values,
            'net': self.net.values,
            'beta_low': self.leg_betas['low'].values,
            'beta_high': self.leg_betas['high'].values,
            'leverage': self.leverage.values,
            'turnover_low': self.turnover['low'].values,
            'turnover_high': self.turnover['high'].values,
            'cost_drag': self.cost_drag.values
        },
        index=self.calendar)
    return frame[FACTOR_HEADER]


def leg_labels(scheme: SortScheme,
               leg_mode: LegMode = LegMode.cell) -> Tuple[List[int], List[int]]:
  """(low, high) bucket labels of the long and short legs"""
  if scheme == SortScheme.tercile:
    return [1], [3]
  if leg_mode == LegMode.union:
    return [1, 2, 3], [7, 8, 9]
  return [1], [9]


def leg_aggregate(assignment: SortAssignment, labels: List[int],
                  next_returns: pd.Series,
                  betas: pd.Series) -> Tuple[float, float]:
  """Equal-weighted month t+1 return and month t beta of a leg.
  Constituents without a t+1 return are left out of the return average."""
  members = assignment.members(labels)
  if not members:
    raise EmptyLegError(f"no constituents in buckets {labels}",
                        module='portfolio',
                        date=assignment.date)
  rets = next_returns.reindex(members).dropna()
  if rets.empty:
    raise EmptyLegError(f"no realized returns in buckets {labels}",
                        module='portfolio',
                        date=assignment.date)
  return float(rets.mean()), float(betas.reindex(members).mean())


def factor_return(r_low: float, r_high: float, beta_low: float,
                  beta_high: float, risk_free: float) -> float:
  """(r_low - rf) / beta_low - (r_high - rf) / beta_high"""
  if not beta_low > 0 or not beta_high > 0:
    raise LeverageUndefinedError(
        f"leg betas must be positive, got {beta_low:.4f} and {beta_high:.4f}",
        module='portfolio')
  return (r_low - risk_free) / beta_low - (r_high - risk_free) / beta_high


def drift_weights(weights: pd.Series, returns: pd.Series) -> pd.Series:
  """weights after one period of returns; names without a return are
  dropped"""
  if weights.empty:
    return weights
  rets = returns.reindex(weights.index)
  grown = (weights * (1.0 + rets)).dropna()
  total = grown.sum()
  if grown.empty or total <= 0:
    return grown.iloc[0:0]
  return grown / total


def trade_sizes(target: pd.Series, previous: pd.Series) -> pd.Series:
  """|new weight - previous weight| over the union of names"""
  names = target.index.union(previous.index)
  return (target.reindex(names, fill_value=0.0) -
          previous.reindex(names, fill_value=0.0)).abs()


def turnover(target: pd.Series, previous: pd.Series) -> float:
  """one half of the summed absolute weight changes"""
  return 0.5 * float(trade_sizes(target, previous).sum())


def leg_weights(assignment: SortAssignment, labels: List[int]) -> pd.Series:
  """equal weights over the leg constituents"""
  members = assignment.members(labels)
  if not members:
    return pd.Series(dtype=float)
  return pd.Series(1.0 / len(members), index=members)


def _eligible(signal: pd.Series, prices: Optional[pd.Series],
              min_price: float) -> pd.Series:
  if prices is None or min_price <= 0:
    return signal
  keep = prices.reindex(signal.index) >= min_price
  return signal[keep.fillna(False).values]


@dataclass
class _BucketBook:
  """per-bucket holdings carried between rebalances"""
  held: Dict[int, pd.Series] = field(default_factory=dict)

  def step(self, assignment: SortAssignment,
           next_returns: pd.Series) -> Tuple[Dict[int, float], Dict[
               int, int], Dict[int, float]]:
    """bucket returns, counts and turnover for one formation month"""
    rets, counts, turns = {}, {}, {}
    for label in assignment.labels:
      target = leg_weights(assignment, [label])
      counts[label] = len(target)
      turns[label] = turnover(target, self.held.get(label, pd.Series(
          dtype=float))) if len(target) else np.nan
      realized = next_returns.reindex(target.index).dropna()
      rets[label] = float(realized.mean()) if len(realized) else np.nan
      self.held[label] = drift_weights(target, next_returns)
    return rets, counts, turns

  def clear(self):
    self.held = {}


def run_backtest(dataset: AlignedDataset,
                 beta_panel: BetaPanel,
                 bad_beta_panel: Optional[BetaPanel] = None,
                 scheme: SortScheme = SortScheme.tercile,
                 cost_panel: Any = None,
                 leg_mode: LegMode = LegMode.cell,
                 conditional: bool = False,
                 min_assets_tercile: int = MIN_ASSETS_TERCILE,
                 min_assets_double: int = MIN_ASSETS_DOUBLE,
                 min_price: float = 0.0,
                 leverage_scaled: bool = True,
                 min_valid_months: int = MIN_VALID_MONTHS,
                 name: Optional[str] = None) -> FactorSeries:
  """! @brief Form portfolios at each month end t from signals known at t,
    realize returns over t+1
    @param cost_panel CostPanel; when given, net = gross - cost drag
  """
  #pylint: disable=too-many-locals,too-many-arguments,too-many-statements
  scheme = SortScheme(str(scheme))
  leg_mode = LegMode(str(leg_mode))
  if scheme == SortScheme.double3x3 and bad_beta_panel is None:
    raise InsufficientDataError('double sort needs a bad beta panel',
                                module='portfolio')
  name = name or ('bab' if scheme == SortScheme.tercile else 'babb')
  calendar = dataset.calendar.monthly_dates
  returns = dataset.monthly.masked()
  risk_free = dataset.aux.risk_free
  betas = beta_panel.masked().reindex(index=calendar, columns=dataset.assets)
  bad = None
  if bad_beta_panel is not None:
    bad = bad_beta_panel.masked().reindex(index=calendar,
                                          columns=dataset.assets)
  prices = None
  if min_price > 0:
    ends = dataset.calendar.month_end_positions()
    closes = dataset.daily.close.where(dataset.daily.mask).values
    prices = pd.DataFrame(np.where(ends[:, None] >= 0, closes[ends], np.nan),
                          index=calendar,
                          columns=dataset.daily.assets)

  low_labels, high_labels = leg_labels(scheme, leg_mode)
  realized = calendar[1:]
  cols = {
      key: np.full(len(realized), np.nan) for key in
      ('gross', 'r_low', 'r_high', 'b_low', 'b_high', 't_low', 't_high')
  }
  formation = pd.Series(calendar[:-1], index=realized)
  assignments: Dict[pd.Timestamp, SortAssignment] = {}
  trades: Dict[pd.Timestamp, Dict[str, pd.Series]] = {}
  failures: Dict[str, int] = {}
  held = {leg: pd.Series(dtype=float) for leg in LEGS}
  book = _BucketBook()
  bucket_rows: Dict[str, List[Dict[int, Any]]] = {
      'returns': [],
      'counts': [],
      'turnover': []
  }

  for i, (date, next_date) in enumerate(zip(calendar[:-1], realized)):
    next_returns = returns.loc[next_date]
    try:
      signal = _eligible(betas.loc[date].dropna(),
                         None if prices is None else prices.loc[date],
                         min_price)
      if scheme == SortScheme.tercile:
        assignment = tercile_sort(signal, date, min_assets_tercile)
      else:
        assignment = double_sort_3x3(signal, bad.loc[date], date,
                                     min_assets_double, conditional)
      month_betas = betas.loc[date]
      r_low, b_low = leg_aggregate(assignment, low_labels, next_returns,
                                   month_betas)
      r_high, b_high = leg_aggregate(assignment, high_labels, next_returns,
                                     month_betas)
      rf_next = float(risk_free.loc[next_date])
      gross = factor_return(r_low, r_high, b_low, b_high, rf_next)
    except NumericError as err:
      kind = type(err).__name__
      failures[kind] = failures.get(kind, 0) + 1
      LOGGER.debug('month masked: %s', err)
      held = {leg: pd.Series(dtype=float) for leg in LEGS}
      book.clear()
      bucket_rows['returns'].append({})
      bucket_rows['counts'].append({})
      bucket_rows['turnover'].append({})
      continue

    assignments[date] = assignment
    month_trades = {}
    for leg, labels in zip(LEGS, (low_labels, high_labels)):
      target = leg_weights(assignment, labels)
      month_trades[leg] = trade_sizes(target, held[leg])
      cols[f"t_{leg}"][i] = 0.5 * float(month_trades[leg].sum())
      held[leg] = drift_weights(target, next_returns)
    trades[next_date] = month_trades
    cols['gross'][i] = gross
    cols['r_low'][i] = r_low - rf_next
    cols['r_high'][i] = r_high - rf_next
    cols['b_low'][i] = b_low
    cols['b_high'][i] = b_high
    b_rets, b_counts, b_turns = book.step(assignment, next_returns)
    bucket_rows['returns'].append(b_rets)
    bucket_rows['counts'].append(b_counts)
    bucket_rows['turnover'].append(b_turns)

  gross = pd.Series(cols['gross'], index=realized, name='gross')
  n_valid = int(gross.notna().sum())
  if n_valid < min_valid_months:
    raise InsufficientDataError(
        f"{name}: {n_valid} valid months, need {min_valid_months}",
        module='portfolio')
  if failures:
    LOGGER.info('%s: masked months by cause %s', name, failures)

  labels = (list(range(1, 4))
            if scheme == SortScheme.tercile else list(range(1, 10)))

  def bucket_frame(rows):
    return pd.DataFrame(rows, index=realized).reindex(columns=labels)

  leg_betas = pd.DataFrame({
      'low': cols['b_low'],
      'high': cols['b_high']
  },
                           index=realized)
  factor = FactorSeries(
      name=name,
      calendar=realized,
      gross=gross,
      net=gross.copy().rename('net'),
      leg_returns=pd.DataFrame({
          'low': cols['r_low'],
          'high': cols['r_high']
      },
                               index=realized),
      leg_betas=leg_betas,
      leverage=(leg_betas['high'] / leg_betas['low']).rename('leverage'),
      turnover=pd.DataFrame({
          'low': cols['t_low'],
          'high': cols['t_high']
      },
                            index=realized),
      cost_drag=pd.Series(np.where(gross.notna(), 0.0, np.nan),
                          index=realized,
                          name='cost_drag'),
      formation=formation,
      assignments=assignments,
      trades=trades,
      bucket_returns=bucket_frame(bucket_rows['returns']),
      bucket_counts=bucket_frame(bucket_rows['counts']),
      bucket_turnover=bucket_frame(bucket_rows['turnover']),
      failures=failures)

  if cost_panel is not None:
    #pylint: disable=import-outside-toplevel
    from badbeta.tcost.cost_panel import cost_drag
    drag, net = cost_drag(factor, cost_panel, leverage_scaled)
    factor = replace(factor, cost_drag=drag, net=net)
  LOGGER.info('%s: %u valid months, mean gross %.5f', name, n_valid,
              float(gross.mean()))
  return factor


def write_factor(factor: FactorSeries, path: str) -> None:
  """CSV export `date,gross,net,beta_low,beta_high,leverage,turnover_low,
  turnover_high,cost_drag`"""
  factor.to_frame().to_csv(path,
                           index=False,
                           date_format=DATE_FORMAT,
                           na_rep='')
