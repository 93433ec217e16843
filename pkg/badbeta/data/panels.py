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
"""Calendar and panel containers shared by every stage"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from badbeta.custom_errors import SchemaError, ValidationError
from badbeta.utils.config_type import Frequency
from badbeta.utils.metadata import STATE_COLUMNS, FACTOR_COLUMNS


def month_keys(dates: pd.DatetimeIndex) -> pd.PeriodIndex:
  """calendar month of each date"""
  return pd.DatetimeIndex(dates).to_period('M')


@dataclass(frozen=True)
class TradingCalendar:
  """Monthly stamps, daily trading dates and the daily -> month mapping.
  Monthly observations are stamped on the last trading day of their month."""
  monthly_dates: pd.DatetimeIndex
  daily_dates: pd.DatetimeIndex = field(
      default_factory=lambda: pd.DatetimeIndex([]))
  month_of: pd.Series = field(default_factory=lambda: pd.Series(
      [], dtype='datetime64[ns]'))

  def __post_init__(self):
    for name in ('monthly_dates', 'daily_dates'):
      dates = getattr(self, name)
      if not dates.is_unique:
        raise SchemaError(f"duplicate dates in {name}", module='data_ingest')
      if not dates.is_monotonic_increasing:
        raise SchemaError(f"{name} not strictly increasing",
                          module='data_ingest')
    if len(self.daily_dates):
      if not self.month_of.index.equals(self.daily_dates):
        raise SchemaError('month_of must cover every daily date',
                          module='data_ingest')
      if not pd.Index(self.month_of.values).isin(self.monthly_dates).all():
        raise SchemaError('daily date maps outside the monthly calendar',
                          module='data_ingest')

  @classmethod
  def from_daily(cls, daily_dates: Sequence[Any]) -> 'TradingCalendar':
    """derive month-end stamps from trading dates"""
    daily = pd.DatetimeIndex(daily_dates)
    stamps = pd.Series(daily, index=daily).groupby(
        month_keys(daily)).transform('max')
    monthly = pd.DatetimeIndex(stamps.unique())
    return cls(monthly_dates=monthly,
               daily_dates=daily,
               month_of=pd.Series(stamps.values, index=daily))

  @classmethod
  def from_monthly(cls, monthly_dates: Sequence[Any]) -> 'TradingCalendar':
    """calendar without a daily component"""
    monthly = pd.DatetimeIndex(monthly_dates)
    if not month_keys(monthly).is_unique:
      raise SchemaError('more than one monthly observation in a month',
                        module='data_ingest')
    return cls(monthly_dates=monthly)

  def month_end_positions(self) -> np.ndarray:
    """position in daily_dates of the last trading day of each month,
    -1 for months without daily data"""
    pos = pd.Series(np.arange(len(self.daily_dates)), index=self.daily_dates)
    last = pos.groupby(self.month_of.values).max()
    return last.reindex(self.monthly_dates).fillna(-1).astype(int).values


@dataclass(frozen=True)
class ReturnPanel:
  """date x asset simple returns with availability mask"""
  calendar: TradingCalendar
  frequency: Frequency
  assets: List[str]
  values: pd.DataFrame
  mask: pd.DataFrame

  def __post_init__(self):
    dates = self.dates
    if not self.values.index.equals(dates) or not self.mask.index.equals(
        dates):
      raise SchemaError('panel rows do not match calendar',
                        module='data_ingest')
    if list(self.values.columns) != list(self.assets) or list(
        self.mask.columns) != list(self.assets):
      raise SchemaError('panel columns do not match assets',
                        module='data_ingest')
    vals = self.values.values[self.mask.values]
    if not np.isfinite(vals).all():
      raise ValidationError('non finite return under mask')
    if (vals <= -1.0).any():
      raise ValidationError('return <= -1 under mask')

  @property
  def dates(self) -> pd.DatetimeIndex:
    """row dates for the panel frequency"""
    if self.frequency == Frequency.daily:
      return self.calendar.daily_dates
    return self.calendar.monthly_dates

  @property
  def log_values(self) -> pd.DataFrame:
    """log(1 + r) where available"""
    return np.log1p(self.values.where(self.mask))

  def masked(self) -> pd.DataFrame:
    """values with unavailable cells as NaN"""
    return self.values.where(self.mask)


@dataclass(frozen=True)
class StateSeries:
  """VAR state variables, excess market log return first"""
  calendar: pd.DatetimeIndex
  values: pd.DataFrame

  def __post_init__(self):
    if list(self.values.columns) != STATE_COLUMNS:
      raise SchemaError(f"state columns must be {STATE_COLUMNS}",
                        module='data_ingest')
    if not self.values.index.equals(self.calendar):
      raise SchemaError('state rows do not match calendar',
                        module='data_ingest')
    if not np.isfinite(self.values.values).all():
      raise ValidationError('non finite state value')

  def upto(self, end_date) -> 'StateSeries':
    """states observed on or before end_date"""
    keep = self.calendar <= pd.Timestamp(end_date)
    return StateSeries(calendar=self.calendar[keep], values=self.values[keep])


@dataclass(frozen=True)
class AuxSeries:
  """risk free rate and benchmark factor returns"""
  calendar: pd.DatetimeIndex
  risk_free: pd.Series
  factor_returns: pd.DataFrame

  def __post_init__(self):
    if list(self.factor_returns.columns) != FACTOR_COLUMNS:
      raise SchemaError(f"factor columns must be {FACTOR_COLUMNS}",
                        module='data_ingest')
    if not self.risk_free.index.equals(
        self.calendar) or not self.factor_returns.index.equals(self.calendar):
      raise SchemaError('aux rows do not match calendar', module='data_ingest')
    if not np.isfinite(self.risk_free.values).all() or not np.isfinite(
        self.factor_returns.values).all():
      raise ValidationError('non finite aux value')


@dataclass(frozen=True)
class DailyMicrostructurePanel:
  """daily close/high/low/volume per asset"""
  calendar: TradingCalendar
  assets: List[str]
  close: pd.DataFrame
  high: pd.DataFrame
  low: pd.DataFrame
  volume: pd.DataFrame
  mask: pd.DataFrame

  def __post_init__(self):
    for name in ('close', 'high', 'low', 'volume', 'mask'):
      frame = getattr(self, name)
      if not frame.index.equals(self.calendar.daily_dates) or list(
          frame.columns) != list(self.assets):
        raise SchemaError(f"daily {name} does not match calendar x assets",
                          module='data_ingest')
    close = self.close.values
    high = self.high.values
    low = self.low.values
    with np.errstate(invalid='ignore'):
      if (close <= 0).any() or (high <= 0).any() or (low <= 0).any():
        raise ValidationError('non positive price')
      if (self.volume.values < 0).any():
        raise ValidationError('negative volume')
      if (low > close).any() or (close > high).any():
        raise ValidationError('low <= close <= high violated')

  def returns(self) -> pd.DataFrame:
    """close to close simple returns, NaN across gaps"""
    close = self.close.where(self.mask)
    return close / close.shift(1) - 1.0

  def dollar_volume(self) -> pd.DataFrame:
    """close x share volume"""
    return (self.close * self.volume).where(self.mask)


@dataclass(frozen=True)
class AlignedDataset:
  """All inputs on one calendar and one universe; read-only after align"""
  calendar: TradingCalendar
  monthly: ReturnPanel
  daily: DailyMicrostructurePanel
  states: StateSeries
  aux: AuxSeries
  market_daily: pd.Series
  drop_report: Dict[str, List[str]] = field(default_factory=dict)

  @property
  def assets(self) -> List[str]:
    """aligned universe"""
    return self.monthly.assets
