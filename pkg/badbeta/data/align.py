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
"""Calendar and universe alignment of all inputs"""

from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from badbeta.custom_errors import AlignmentError
from badbeta.data.panels import (AlignedDataset, AuxSeries,
                                 DailyMicrostructurePanel, ReturnPanel,
                                 StateSeries, TradingCalendar, month_keys)
from badbeta.data.loaders import (load_aux_series, load_daily_panel,
                                  load_market_daily, load_return_panel,
                                  load_state_series)
from badbeta.utils.config_type import Frequency
from badbeta.utils.logger import setup_logger

LOGGER = setup_logger('align')


def _restamp(frame, months: pd.PeriodIndex, stamps: pd.DatetimeIndex):
  """select rows of a monthly frame by month and restamp to month ends"""
  keyed = frame.copy()
  keyed.index = month_keys(frame.index)
  keyed = keyed.loc[months]
  keyed.index = stamps
  return keyed


def equal_weight_market(daily: DailyMicrostructurePanel) -> pd.Series:
  """market proxy: cross-sectional mean of daily close to close returns"""
  rets = daily.returns()
  market = rets.mean(axis=1, skipna=True)
  return market.fillna(0.0)


def align(monthly: ReturnPanel,
          daily: DailyMicrostructurePanel,
          states: StateSeries,
          aux: AuxSeries,
          market_daily: Optional[pd.Series] = None) -> AlignedDataset:
  """Intersect calendars and universes.
  Months are matched by calendar month and restamped on the last trading day
  present in the daily panel."""
  if not len(monthly.calendar.monthly_dates) or not len(
      daily.calendar.daily_dates) or not len(states.calendar) or not len(
          aux.calendar):
    raise AlignmentError('empty input', module='data_ingest')

  daily_months = month_keys(daily.calendar.daily_dates)
  common = month_keys(monthly.calendar.monthly_dates)
  for other in (pd.PeriodIndex(daily_months.unique()),
                month_keys(states.calendar), month_keys(aux.calendar)):
    common = common.intersection(other)
  common = common.sort_values()
  if not len(common):
    raise AlignmentError('empty calendar intersection', module='data_ingest')

  assets = [a for a in monthly.assets if a in set(daily.assets)]
  if not assets:
    raise AlignmentError('no asset present in both monthly and daily inputs',
                         module='data_ingest')

  keep_daily = daily_months.isin(common)
  daily_dates = daily.calendar.daily_dates[keep_daily]
  calendar = TradingCalendar.from_daily(daily_dates)
  stamps = calendar.monthly_dates

  drop_report: Dict[str, List[str]] = {
      'months':
          sorted({
              str(p) for src in (month_keys(monthly.calendar.monthly_dates),
                                 pd.PeriodIndex(daily_months.unique()),
                                 month_keys(states.calendar),
                                 month_keys(aux.calendar)) for p in src
          } - {str(p) for p in common}),
      'assets':
          sorted((set(monthly.assets) | set(daily.assets)) - set(assets)),
      'daily_dates': [
          d.strftime('%Y-%m-%d')
          for d in daily.calendar.daily_dates[~np.asarray(keep_daily)]
      ],
  }

  mvals = _restamp(monthly.values[assets], common, stamps)
  mmask = _restamp(monthly.mask[assets], common, stamps)
  new_monthly = ReturnPanel(calendar=calendar,
                            frequency=Frequency.monthly,
                            assets=assets,
                            values=mvals,
                            mask=mmask)

  dfields = {}
  for name in ('close', 'high', 'low', 'volume', 'mask'):
    dfields[name] = getattr(daily, name).loc[daily_dates, assets]
  new_daily = DailyMicrostructurePanel(calendar=calendar,
                                       assets=assets,
                                       **dfields)

  svals = _restamp(states.values, common, stamps)
  new_states = StateSeries(calendar=stamps, values=svals)
  new_aux = AuxSeries(calendar=stamps,
                      risk_free=_restamp(aux.risk_free, common, stamps),
                      factor_returns=_restamp(aux.factor_returns, common,
                                              stamps))

  if market_daily is None:
    market = equal_weight_market(new_daily)
  else:
    market = market_daily.reindex(daily_dates)
    n_missing = int(market.isna().sum())
    if n_missing:
      LOGGER.warning('daily market missing on %u trading dates', n_missing)
  market = market.astype(float)
  market.name = 'mkt'

  if drop_report['months'] or drop_report['assets']:
    LOGGER.info('Alignment dropped %u months and %u assets',
                len(drop_report['months']), len(drop_report['assets']))
  LOGGER.info('Aligned dataset: %u months, %u trading days, %u assets',
              len(stamps), len(daily_dates), len(assets))
  return AlignedDataset(calendar=calendar,
                        monthly=new_monthly,
                        daily=new_daily,
                        states=new_states,
                        aux=new_aux,
                        market_daily=market,
                        drop_report=drop_report)


def realign(dataset: AlignedDataset) -> AlignedDataset:
  """align an already aligned dataset; a fixed point of align"""
  return align(dataset.monthly, dataset.daily, dataset.states, dataset.aux,
               dataset.market_daily)


def dataset_checksum(dataset: AlignedDataset) -> str:
  """content fingerprint of an aligned dataset"""
  parts = [
      pd.util.hash_pandas_object(dataset.monthly.masked(), index=True).values,
      pd.util.hash_pandas_object(dataset.daily.close.where(dataset.daily.mask),
                                 index=True).values,
      pd.util.hash_pandas_object(dataset.states.values, index=True).values,
      pd.util.hash_pandas_object(dataset.aux.factor_returns,
                                 index=True).values,
      pd.util.hash_pandas_object(dataset.market_daily, index=True).values,
  ]
  return str(np.bitwise_xor.reduce(np.concatenate(parts)))


def load_dataset(inputs: Dict[str, str]) -> AlignedDataset:
  """Load every input file and align them"""
  monthly = load_return_panel(inputs['monthly'], Frequency.monthly)
  daily = load_daily_panel(inputs['daily'])
  states = load_state_series(inputs['states'])
  aux = load_aux_series(inputs['aux'])
  market = None
  if inputs.get('market_daily'):
    market = load_market_daily(inputs['market_daily'])
  LOGGER.info('Loaded %u monthly assets, %u daily assets, %u state months',
              len(monthly.assets), len(daily.assets), len(states.calendar))
  return align(monthly, daily, states, aux, market)
