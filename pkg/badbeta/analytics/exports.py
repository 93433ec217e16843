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
"""Table and curve exports: headered CSV, plus JSON for regressions"""

import json
import os
from typing import Any, Dict, Mapping, Optional

import numpy as np
import pandas as pd

from badbeta.analytics.performance import cumulative_curve, perf_stats
from badbeta.analytics.regression import (RegressionResult, table_frame,
                                          table_to_dict)
from badbeta.betas.beta_panel import BetaPanel, firm_average
from badbeta.custom_errors import NumericError
from badbeta.portfolio.backtest import FactorSeries
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import DATE_FORMAT

LOGGER = setup_logger('exports')

#panel letter of each (factor, basis) regression table
REGRESSION_PANELS = {
    ('bab', 'gross'): 'A',
    ('bab', 'net'): 'B',
    ('babb', 'gross'): 'C',
    ('babb', 'net'): 'D'
}

RegressionTables = Dict[str, Dict[str, Dict[str, RegressionResult]]]


def write_frame(frame: pd.DataFrame, path: str, index: bool = True) -> str:
  """CSV with ISO dates, empty cells for missing values"""
  frame.to_csv(path,
               index=index,
               date_format=DATE_FORMAT,
               na_rep='',
               float_format='%.12g')
  return path


def write_json(payload: Dict[str, Any], path: str) -> str:
  """deterministic JSON: sorted keys, full float precision"""
  with open(path, 'w', encoding='utf8') as fout:
    json.dump(payload, fout, indent=2, sort_keys=True, allow_nan=True)
    fout.write('\n')
  return path


def regression_file_name(factor: str, basis: str) -> str:
  """factor_regressions_<panel>_<factor>_<basis>.csv"""
  panel = REGRESSION_PANELS.get((factor, basis), 'X')
  return f"factor_regressions_{panel}_{factor}_{basis}.csv"


def write_regression_tables(tables: RegressionTables,
                            out_dir: str) -> Dict[str, str]:
  """one CSV per factor and return basis, all tables in one JSON"""
  paths = {}
  payload: Dict[str, Any] = {}
  for factor, by_basis in tables.items():
    for basis, table in by_basis.items():
      path = os.path.join(out_dir, regression_file_name(factor, basis))
      paths[f"{factor}_{basis}"] = write_frame(table_frame(table), path)
      payload.setdefault(factor, {})[basis] = table_to_dict(table)
  paths['json'] = write_json(payload,
                             os.path.join(out_dir, 'factor_regressions.json'))
  return paths


def portfolio_stats_table(factor: FactorSeries,
                          bucket_spreads: Optional[pd.DataFrame] = None
                         ) -> pd.DataFrame:
  """Per bucket: average constituent count, average half-spread, average
  turnover and mean monthly return"""
  frame = pd.DataFrame({
      'avg_n_stocks': factor.bucket_counts.mean(axis=0),
      'avg_turnover': factor.bucket_turnover.mean(axis=0),
      'mean_return': factor.bucket_returns.mean(axis=0)
  })
  if bucket_spreads is not None:
    frame['avg_half_spread'] = bucket_spreads.mean(axis=0).reindex(frame.index)
  else:
    frame['avg_half_spread'] = np.nan
  frame.index.name = 'bucket'
  return frame[['avg_n_stocks', 'avg_half_spread', 'avg_turnover',
                'mean_return']]


def leg_beta_frame(factors: Mapping[str, FactorSeries]) -> pd.DataFrame:
  """month x (factor, leg) portfolio betas at formation"""
  parts = {}
  for name, factor in factors.items():
    for leg in factor.leg_betas.columns:
      parts[f"{name}_beta_{leg}"] = factor.leg_betas[leg]
  frame = pd.DataFrame(parts)
  frame.index.name = 'date'
  return frame


def leg_beta_summary(factors: Mapping[str, FactorSeries]) -> pd.DataFrame:
  """time-series average leg beta and leverage per factor"""
  rows = {}
  for name, factor in factors.items():
    rows[name] = {
        'avg_beta_low': float(factor.leg_betas['low'].mean()),
        'avg_beta_high': float(factor.leg_betas['high'].mean()),
        'avg_leverage': float(factor.leverage.mean())
    }
  frame = pd.DataFrame(rows).T
  frame.index.name = 'factor'
  return frame


def firm_beta_frame(beta_panel: BetaPanel,
                    bad_beta_panel: Optional[BetaPanel] = None
                   ) -> pd.DataFrame:
  """per asset time-series average beta and bad beta"""
  frame = pd.DataFrame({'beta': firm_average(beta_panel)})
  if bad_beta_panel is not None:
    frame['bad_beta'] = firm_average(bad_beta_panel).reindex(frame.index)
  frame.index.name = 'asset_id'
  return frame


def cumulative_frame(series: Mapping[str, pd.Series]) -> pd.DataFrame:
  """cumulative growth of each named series"""
  frame = pd.DataFrame(
      {name: cumulative_curve(ret) for name, ret in series.items()})
  frame.index.name = 'date'
  return frame


def leverage_frame(factors: Mapping[str, FactorSeries]) -> pd.DataFrame:
  """beta_high / beta_low per factor and month"""
  frame = pd.DataFrame(
      {name: factor.leverage for name, factor in factors.items()})
  frame.index.name = 'date'
  return frame


def sharpe_by_estimator(runs: Mapping[str, Mapping[str, pd.Series]]
                       ) -> pd.DataFrame:
  """annualized Sharpe per signal estimator (rows) and factor (columns);
  undefined Sharpes are left empty"""
  rows: Dict[str, Dict[str, float]] = {}
  for estimator, by_factor in runs.items():
    for name, returns in by_factor.items():
      try:
        rows.setdefault(estimator, {})[name] = perf_stats(returns).sharpe_ann
      except NumericError as err:
        LOGGER.info('%s %s: no Sharpe (%s)', estimator, name, err)
        rows.setdefault(estimator, {})[name] = np.nan
  frame = pd.DataFrame(rows).T
  frame.index.name = 'estimator'
  return frame
