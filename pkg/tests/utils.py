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

import os
import sys
import copy
import tempfile

import numpy as np
import pandas as pd

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.data.align import align
from badbeta.data.panels import (AuxSeries, DailyMicrostructurePanel,
                                 ReturnPanel, StateSeries, TradingCalendar)
from badbeta.data.synthetic import SynthConfig, generate_synthetic
from badbeta.utils.config_type import Frequency
from badbeta.utils.metadata import FACTOR_COLUMNS, STATE_COLUMNS

this_path = os.path.dirname(__file__)

SMALL_YAML = "{0}/sample_small.yaml".format(this_path)

#economy small enough for a full pipeline run in a test
SMALL_SYNTH = {
    'n_assets': 60,
    'n_months': 120,
    'days_per_month': 10,
    'beta_range': [0.4, 1.8],
    'planted_alpha': 0.002,
    'cf_loading_range': [0.0, 1.0],
    'spread_range': [0.002, 0.01],
}

SMALL_RUN = {
    'seed': 11,
    'synthetic': SMALL_SYNTH,
    'var': {
        'min_obs': 36
    },
    'beta': {
        'window_daily_vol': 0.25,
        'window_corr': 1.0
    },
    'sort': {
        'min_assets_double': 45
    },
    'tcost': {
        'refresh_months': 12,
        'gibbs_sweeps': 60,
        'gibbs_burn': 20
    },
    'report': {
        'estimators': ['ols', 'dimson']
    },
    'threads': 1,
}


def make_out_dir(name):
  return tempfile.mkdtemp(prefix=f"badbeta_{name}_")


def small_synth_config(**kwargs):
  params = dict(SMALL_SYNTH)
  params['seed'] = 11
  params.update(kwargs)
  return SynthConfig.from_dict(params)


def small_dataset(**kwargs):
  return generate_synthetic(small_synth_config(**kwargs))


def small_run_dict(out_dir, **sections):
  run = copy.deepcopy(SMALL_RUN)
  run['output'] = {'dir': out_dir}
  for key, val in sections.items():
    if isinstance(val, dict) and isinstance(run.get(key), dict):
      run[key].update(val)
    else:
      run[key] = val
  return run


def month_ends(n_months, start='2000-01'):
  """one trading day per month, on the last business day"""
  return pd.date_range(start, periods=n_months, freq='BM')


def toy_dataset(monthly_values, daily_closes=None, risk_free=0.0):
  """AlignedDataset around a small monthly return frame; the daily panel has
  one trading day per month so both calendars share their stamps"""
  monthly_values = pd.DataFrame(monthly_values)
  stamps = pd.DatetimeIndex(monthly_values.index)
  assets = list(monthly_values.columns)
  calendar = TradingCalendar.from_daily(stamps)
  monthly = ReturnPanel(calendar=TradingCalendar.from_monthly(stamps),
                        frequency=Frequency.monthly,
                        assets=assets,
                        values=monthly_values,
                        mask=monthly_values.notna())
  if daily_closes is None:
    daily_closes = pd.DataFrame(10.0, index=stamps, columns=assets)
  ones = pd.DataFrame(True, index=stamps, columns=assets)
  daily = DailyMicrostructurePanel(calendar=calendar,
                                   assets=assets,
                                   close=daily_closes,
                                   high=daily_closes * 1.01,
                                   low=daily_closes * 0.99,
                                   volume=daily_closes * 0.0 + 1000.0,
                                   mask=ones)
  rng = np.random.default_rng(3)
  states = StateSeries(calendar=stamps,
                       values=pd.DataFrame(rng.normal(0, 0.01,
                                                      (len(stamps), 4)),
                                           index=stamps,
                                           columns=STATE_COLUMNS))
  aux = AuxSeries(calendar=stamps,
                  risk_free=pd.Series(risk_free, index=stamps),
                  factor_returns=pd.DataFrame(rng.normal(
                      0, 0.03, (len(stamps), len(FACTOR_COLUMNS))),
                                              index=stamps,
                                              columns=FACTOR_COLUMNS))
  return align(monthly, daily, states, aux)


def truncate_dataset(dataset, end):
  """the dataset as it would have been loaded with data through end"""
  end = pd.Timestamp(end)
  cal = dataset.calendar
  stamps = cal.monthly_dates[cal.monthly_dates <= end]
  days = cal.daily_dates[cal.month_of.isin(stamps).values]
  monthly = ReturnPanel(calendar=TradingCalendar.from_monthly(stamps),
                        frequency=Frequency.monthly,
                        assets=dataset.assets,
                        values=dataset.monthly.values.loc[stamps],
                        mask=dataset.monthly.mask.loc[stamps])
  fields = {
      name: getattr(dataset.daily, name).loc[days]
      for name in ('close', 'high', 'low', 'volume', 'mask')
  }
  daily = DailyMicrostructurePanel(calendar=TradingCalendar.from_daily(days),
                                   assets=dataset.assets,
                                   **fields)
  states = StateSeries(calendar=stamps,
                       values=dataset.states.values.loc[stamps])
  aux = AuxSeries(calendar=stamps,
                  risk_free=dataset.aux.risk_free.loc[stamps],
                  factor_returns=dataset.aux.factor_returns.loc[stamps])
  return align(monthly, daily, states, aux, dataset.market_daily.loc[days])
