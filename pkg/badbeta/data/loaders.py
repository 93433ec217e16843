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
"""Readers and writers for the documented CSV schemas"""

import os
from typing import List, Tuple

import numpy as np
import pandas as pd

from badbeta.custom_errors import DataError, ParseError, SchemaError, ValidationError
from badbeta.data.panels import (AuxSeries, DailyMicrostructurePanel,
                                 ReturnPanel, StateSeries, TradingCalendar,
                                 month_keys)
from badbeta.utils.config_type import Frequency
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (AUX_HEADER, DAILY_HEADER, DATE_FORMAT,
                                    FACTOR_COLUMNS, MARKET_DAILY_HEADER,
                                    MONTHLY_HEADER, STATE_COLUMNS, STATE_HEADER)

LOGGER = setup_logger('loaders')

#first data row sits on line 2, after the header
LINE_OFFSET = 2


def read_csv_checked(path: str, header: List[str]) -> pd.DataFrame:
  """Read a CSV as strings and check its header"""
  if not os.path.isfile(path):
    raise DataError(f"input file not found: {path}", module='data_ingest')
  try:
    dfr = pd.read_csv(path,
                      dtype=str,
                      keep_default_na=False,
                      encoding='utf-8',
                      skipinitialspace=False)
  except (pd.errors.ParserError, UnicodeDecodeError) as err:
    raise ParseError(f"{path}: {err}") from err
  if list(dfr.columns) != header:
    raise SchemaError(f"{path}: header {list(dfr.columns)} != {header}",
                      module='data_ingest')
  return dfr


def parse_dates(col: pd.Series, path: str) -> pd.Series:
  """YYYY-MM-DD dates, ParseError with the line number otherwise"""
  dates = pd.to_datetime(col.str.strip(), format=DATE_FORMAT, errors='coerce')
  bad = dates.isna()
  if bad.any():
    idx = int(np.flatnonzero(bad.values)[0])
    raise ParseError(f"{path}: malformed date '{col.iloc[idx]}'",
                     line=idx + LINE_OFFSET)
  return dates


def parse_numeric(col: pd.Series, name: str, path: str,
                  allow_blank: bool) -> pd.Series:
  """Decimal numbers; blank cells become NaN when allowed"""
  text = col.str.strip()
  blank = text == ''
  num = pd.to_numeric(text.where(~blank), errors='coerce')
  bad = num.isna() & ~blank
  if bad.any():
    idx = int(np.flatnonzero(bad.values)[0])
    raise ParseError(f"{path}: malformed {name} '{col.iloc[idx]}'",
                     line=idx + LINE_OFFSET)
  if blank.any() and not allow_blank:
    idx = int(np.flatnonzero(blank.values)[0])
    raise ValidationError(f"{path}: missing {name}", line=idx + LINE_OFFSET)
  infinite = ~blank & ~np.isfinite(num.fillna(0.0))
  if infinite.any():
    idx = int(np.flatnonzero(infinite.values)[0])
    raise ValidationError(f"{path}: non finite {name}", line=idx + LINE_OFFSET)
  return num.astype(float)


def check_sorted_unique(dates: pd.Series, keys: pd.Series, path: str) -> None:
  """Dates non decreasing and (date, key) unique"""
  if not dates.is_monotonic_increasing:
    idx = int(np.flatnonzero(dates.diff().dt.days.values < 0)[0])
    raise SchemaError(f"{path}: dates not sorted at line {idx + LINE_OFFSET}",
                      module='data_ingest')
  dup = pd.DataFrame({'d': dates, 'k': keys}).duplicated()
  if dup.any():
    idx = int(np.flatnonzero(dup.values)[0])
    raise SchemaError(
        f"{path}: duplicate (date, asset) row at line {idx + LINE_OFFSET}",
        module='data_ingest')


def load_return_panel(path: str, frequency: Frequency) -> ReturnPanel:
  """Load a `date,asset_id,ret` CSV into a ReturnPanel"""
  frequency = Frequency(frequency)
  dfr = read_csv_checked(path, MONTHLY_HEADER)
  dates = parse_dates(dfr['date'], path)
  assets = dfr['asset_id'].str.strip()
  rets = parse_numeric(dfr['ret'], 'ret', path, allow_blank=True)
  check_sorted_unique(dates, assets, path)

  low = rets <= -1.0
  if low.any():
    idx = int(np.flatnonzero(low.values)[0])
    raise ValidationError(f"{path}: return {rets.iloc[idx]} <= -1",
                          line=idx + LINE_OFFSET)

  long = pd.DataFrame({'date': dates, 'asset_id': assets, 'ret': rets})
  values = long.pivot(index='date', columns='asset_id', values='ret')
  values = values.sort_index(axis=1)
  values.index = pd.DatetimeIndex(values.index)
  values.index.name = None
  values.columns.name = None
  mask = values.notna()

  if frequency == Frequency.monthly:
    calendar = TradingCalendar.from_monthly(values.index)
  else:
    calendar = TradingCalendar.from_daily(values.index)
  LOGGER.info('Loaded %s panel %s: %u dates x %u assets, %u missing cells',
              frequency, path, values.shape[0], values.shape[1],
              int((~mask).values.sum()))
  return ReturnPanel(calendar=calendar,
                     frequency=frequency,
                     assets=list(values.columns),
                     values=values,
                     mask=mask)


def write_panel(panel: ReturnPanel, path: str) -> None:
  """Write a ReturnPanel in the long `date,asset_id,ret` schema"""
  long = panel.masked().stack(dropna=False).reset_index()
  long.columns = MONTHLY_HEADER
  long.to_csv(path, index=False, date_format=DATE_FORMAT, na_rep='')


def load_daily_panel(path: str) -> DailyMicrostructurePanel:
  """Load a `date,asset_id,close,high,low,volume` CSV"""
  dfr = read_csv_checked(path, DAILY_HEADER)
  dates = parse_dates(dfr['date'], path)
  assets = dfr['asset_id'].str.strip()
  check_sorted_unique(dates, assets, path)
  fields = {}
  for name in DAILY_HEADER[2:]:
    fields[name] = parse_numeric(dfr[name], name, path, allow_blank=True)

  close, high, low, volume = (fields['close'], fields['high'], fields['low'],
                              fields['volume'])
  with np.errstate(invalid='ignore'):
    checks: List[Tuple[pd.Series, str]] = [
        ((close <= 0) | (high <= 0) | (low <= 0), 'non positive price'),
        (volume < 0, 'negative volume'),
        ((low > close) | (close > high), 'low <= close <= high violated'),
    ]
  for bad, msg in checks:
    if bad.any():
      idx = int(np.flatnonzero(bad.values)[0])
      raise ValidationError(f"{path}: {msg}", line=idx + LINE_OFFSET)

  long = pd.DataFrame({'date': dates, 'asset_id': assets, **fields})
  frames = {}
  for name in DAILY_HEADER[2:]:
    frame = long.pivot(index='date', columns='asset_id', values=name)
    frame = frame.sort_index(axis=1)
    frame.index = pd.DatetimeIndex(frame.index)
    frame.index.name = None
    frame.columns.name = None
    frames[name] = frame
  mask = frames['close'].notna()
  calendar = TradingCalendar.from_daily(frames['close'].index)
  LOGGER.info('Loaded daily panel %s: %u dates x %u assets', path,
              mask.shape[0], mask.shape[1])
  return DailyMicrostructurePanel(calendar=calendar,
                                  assets=list(mask.columns),
                                  close=frames['close'],
                                  high=frames['high'],
                                  low=frames['low'],
                                  volume=frames['volume'],
                                  mask=mask)


def write_daily_panel(panel: DailyMicrostructurePanel, path: str) -> None:
  """Write the daily microstructure schema"""
  parts = []
  for name in DAILY_HEADER[2:]:
    frame = getattr(panel, name).where(panel.mask)
    parts.append(frame.stack(dropna=False).rename(name))
  long = pd.concat(parts, axis=1).reset_index()
  long.columns = DAILY_HEADER
  long.to_csv(path, index=False, date_format=DATE_FORMAT, na_rep='')


def _load_dated_frame(path: str, header: List[str]) -> pd.DataFrame:
  """date-indexed all-numeric frame with strictly increasing dates"""
  dfr = read_csv_checked(path, header)
  dates = parse_dates(dfr['date'], path)
  check_sorted_unique(dates, pd.Series(np.zeros(len(dates))), path)
  values = {}
  for name in header[1:]:
    values[name] = parse_numeric(dfr[name], name, path,
                                 allow_blank=False).values
  frame = pd.DataFrame(values, index=pd.DatetimeIndex(dates.values))
  return frame


def load_state_series(path: str) -> StateSeries:
  """Load `date,mkt_excess_log,yield_spread,cape,value_spread`"""
  frame = _load_dated_frame(path, STATE_HEADER)
  if not month_keys(frame.index).is_unique:
    raise SchemaError(f"{path}: more than one state row in a month",
                      module='data_ingest')
  return StateSeries(calendar=frame.index, values=frame[STATE_COLUMNS])


def load_aux_series(path: str) -> AuxSeries:
  """Load `date,rf,mkt,smb,hml,rmw,cma,umd`"""
  frame = _load_dated_frame(path, AUX_HEADER)
  if not month_keys(frame.index).is_unique:
    raise SchemaError(f"{path}: more than one aux row in a month",
                      module='data_ingest')
  return AuxSeries(calendar=frame.index,
                   risk_free=frame['rf'],
                   factor_returns=frame[FACTOR_COLUMNS])


def load_market_daily(path: str) -> pd.Series:
  """Load `date,mkt` daily market simple returns"""
  frame = _load_dated_frame(path, MARKET_DAILY_HEADER)
  if (frame['mkt'] <= -1.0).any():
    raise ValidationError(f"{path}: market return <= -1")
  return frame['mkt']


def write_state_series(states: StateSeries, path: str) -> None:
  """Write the state series schema"""
  frame = states.values.copy()
  frame.insert(0, 'date', states.calendar)
  frame.to_csv(path, index=False, date_format=DATE_FORMAT)


def write_aux_series(aux: AuxSeries, path: str) -> None:
  """Write the aux schema"""
  frame = aux.factor_returns.copy()
  frame.insert(0, 'rf', aux.risk_free.values)
  frame.insert(0, 'date', aux.calendar)
  frame.to_csv(path, index=False, date_format=DATE_FORMAT)


def write_market_daily(market: pd.Series, path: str) -> None:
  """Write the daily market schema"""
  frame = pd.DataFrame({'date': market.index, 'mkt': market.values})
  frame.to_csv(path, index=False, date_format=DATE_FORMAT)
