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

import numpy as np
import pandas as pd
import pytest
from scipy.stats import spearmanr

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.betas.beta_panel import build_beta_panel
from badbeta.betas.beta_spec import BetaEstimatorSpec
from badbeta.custom_errors import ConfigError
from badbeta.portfolio.backtest import run_backtest
from badbeta.tcost.cost_panel import (CostPanel, CostSettings,
                                      bucket_half_spreads, build_cost_panel,
                                      combine_components, write_cost_panel)
from badbeta.utils.metadata import COST_COMPONENTS, COST_HEADER
from utils import make_out_dir, small_dataset

SETTINGS = CostSettings(refresh_months=12, sweeps=60, burn=20, seed=11)


def component_frames(values):
  stamps = pd.date_range('2000-01', periods=2, freq='M')
  return {
      name: pd.DataFrame([[val, val]], index=stamps[:1], columns=['A', 'B'])
      for name, val in zip(COST_COMPONENTS, values)
  }


def test_combine_components():
  half, mask = combine_components(component_frames([0.004] * 4))
  assert np.allclose(half.values, 0.002)
  assert mask.values.all()

  half, mask = combine_components(
      component_frames([0.002, np.nan, 0.004, 0.006]))
  assert np.allclose(half.values, 0.002)

  _, mask = combine_components(component_frames([0.002, np.nan, np.nan,
                                                 np.nan]),
                               min_components=2)
  assert not mask.values.any()


def test_build_cost_panel():
  dataset, truth = small_dataset(n_assets=30, n_months=36)
  panel = build_cost_panel(dataset, SETTINGS)
  assert list(panel.half_spread.columns) == dataset.assets
  assert set(panel.components) == set(COST_COMPONENTS)
  assert panel.mask.iloc[-1].all()
  assert (panel.masked().stack() >= 0).all()

  avg = panel.masked().iloc[12:].mean()
  assert spearmanr(avg.values, truth.half_spreads[avg.index].values)[0] > 0.5

  #gibbs is resampled every refresh_months and carried in between
  gibbs = panel.components['gibbs']
  assert gibbs.iloc[12:24].nunique().max() == 1

  again = build_cost_panel(dataset, SETTINGS, threads=2)
  assert again.half_spread.equals(panel.half_spread)

  path = os.path.join(make_out_dir('costs'), 'costs.csv')
  write_cost_panel(panel, path)
  assert list(pd.read_csv(path).columns) == COST_HEADER

  with pytest.raises(ConfigError):
    build_cost_panel(dataset, CostSettings(refresh_months=0))


def test_costs_on_factor():
  dataset, _ = small_dataset(n_assets=30, n_months=48)
  betas = build_beta_panel(
      dataset,
      BetaEstimatorSpec(kind='ols', window_daily_vol=0.25, window_corr=1.0))
  costs = build_cost_panel(dataset, SETTINGS)
  zero = CostPanel.zeros(dataset.calendar.monthly_dates, dataset.assets)

  free = run_backtest(dataset,
                      betas,
                      cost_panel=zero,
                      min_assets_tercile=30,
                      min_valid_months=12)
  assert np.allclose(free.net.dropna(), free.gross.dropna())

  unscaled = run_backtest(dataset,
                          betas,
                          cost_panel=costs,
                          leverage_scaled=False,
                          min_assets_tercile=30,
                          min_valid_months=12)
  scaled = run_backtest(dataset,
                        betas,
                        cost_panel=costs,
                        min_assets_tercile=30,
                        min_valid_months=12)
  valid = scaled.valid
  assert (scaled.cost_drag[valid] >= 0).all()
  assert (scaled.net[valid] <= scaled.gross[valid]).all()
  #scaled drag divides each leg by its beta
  date = scaled.calendar[valid.values][0]
  row = costs.masked().loc[scaled.formation.loc[date]]
  manual = 0.0
  for leg, sizes in scaled.trades[date].items():
    cell = row.reindex(sizes.index).fillna(row.median())
    manual += float((sizes * cell).sum()) / scaled.leg_betas.loc[date, leg]
  assert scaled.cost_drag.loc[date] == pytest.approx(manual)
  assert unscaled.cost_drag.loc[date] > 0.0

  by_bucket = bucket_half_spreads(scaled, costs)
  assert list(by_bucket.columns) == [1, 2, 3]
  assert len(by_bucket) == len(scaled.calendar)
