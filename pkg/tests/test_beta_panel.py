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

from badbeta.betas.beta_panel import (build_beta_panel, firm_average,
                                      write_beta_panel)
from badbeta.betas.beta_spec import BetaEstimatorSpec
from badbeta.betas import estimators as est
from badbeta.betas.estimators import news_beta
from badbeta.custom_errors import ConfigError
from badbeta.news.var_news import expanding_news
from badbeta.utils.config_type import BetaKind
from badbeta.utils.metadata import BETA_HEADER
from utils import make_out_dir, small_dataset, truncate_dataset

SHORT_WINDOWS = {'window_daily_vol': 0.25, 'window_corr': 1.0}


def test_beta_spec():
  spec = BetaEstimatorSpec(**SHORT_WINDOWS)
  assert spec.kind == BetaKind.fp
  assert spec.vol_days == 63
  assert spec.corr_days == 252
  assert spec.cf_months == 36 and spec.cf_required == 30
  assert spec.with_kind('cf').kind == BetaKind.cf
  assert spec.with_kind('cf').window_corr == 1.0
  assert spec.to_dict()['kind'] == 'fp'
  assert spec.name == 'beta_fp'

  with pytest.raises(ConfigError):
    BetaEstimatorSpec(window_corr=0)
  with pytest.raises(ConfigError):
    BetaEstimatorSpec(cf_denominator='full')
  with pytest.raises(ValueError):
    BetaEstimatorSpec(kind='capm')


def test_fp_panel_ranks_true_betas():
  dataset, truth = small_dataset()
  panel = build_beta_panel(dataset, BetaEstimatorSpec(**SHORT_WINDOWS))
  assert panel.coverage() > 0.5
  #no estimate before a full correlation window exists
  assert not panel.mask.iloc[:20].values.any()
  assert panel.mask.iloc[-1].all()

  avg = firm_average(panel)
  rank_corr = spearmanr(avg.values, truth.true_betas[avg.index].values)[0]
  assert rank_corr > 0.8
  last = panel.cross_section(panel.calendar[-1])
  assert spearmanr(last.values, truth.true_betas[last.index].values)[0] > 0.5


def test_panel_no_look_ahead():
  dataset, _ = small_dataset(n_assets=12, n_months=60)
  cut = dataset.calendar.monthly_dates[45]
  early = truncate_dataset(dataset, cut)

  spec = BetaEstimatorSpec(kind='ols', **SHORT_WINDOWS)
  full = build_beta_panel(dataset, spec).masked()
  part = build_beta_panel(early, spec).masked()
  assert np.allclose(full.loc[cut].values, part.loc[cut].values, atol=1e-12)

  news_full = expanding_news(dataset.states, min_obs=24)
  news_part = expanding_news(early.states, min_obs=24)
  spec = BetaEstimatorSpec(kind='cf', cf_window=1.5, **SHORT_WINDOWS)
  full = build_beta_panel(dataset, spec, news_full).masked()
  part = build_beta_panel(early, spec, news_part).masked()
  assert full.loc[cut].notna().all()
  assert np.allclose(full.loc[cut].values, part.loc[cut].values, atol=1e-12)


def test_cf_dr_additivity():
  dataset, _ = small_dataset(n_assets=10, n_months=80)
  news = expanding_news(dataset.states, min_obs=24)
  spec = BetaEstimatorSpec(kind='cf', cf_window=2, **SHORT_WINDOWS)
  bad = build_beta_panel(dataset, spec, news).masked()
  good = build_beta_panel(dataset, spec.with_kind('dr'), news).masked()
  assert bad.notna().values.sum() > 0

  log_returns = dataset.monthly.log_values
  i = len(dataset.calendar.monthly_dates) - 1
  window = slice(i + 1 - spec.cf_months, i + 1)
  date = dataset.calendar.monthly_dates[i]
  unexpected = news.unexpected_market.values[window]
  for asset in dataset.assets:
    total = news_beta(log_returns[asset].values[window], unexpected,
                      unexpected)
    assert bad.loc[date, asset] + good.loc[date, asset] == pytest.approx(
        total, abs=1e-10)


def test_expanding_denominator():
  dataset, _ = small_dataset(n_assets=6, n_months=80)
  news = expanding_news(dataset.states, min_obs=24)
  spec = BetaEstimatorSpec(kind='cf', cf_denominator='expanding',
                           **SHORT_WINDOWS)
  panel = build_beta_panel(dataset, spec, news)
  assert panel.coverage() > 0.0


def test_other_estimators():
  dataset, _ = small_dataset(n_assets=40, n_months=40)
  for kind in ('ols', 'ols3d', 'dimson', 'welch', 'standard', 'vasicek'):
    panel = build_beta_panel(dataset,
                             BetaEstimatorSpec(kind=kind, **SHORT_WINDOWS))
    assert panel.name == f"beta_{kind}"
    assert panel.mask.iloc[-1].all()
    assert np.isfinite(panel.masked().iloc[-1].values).all()

  with pytest.raises(ConfigError):
    build_beta_panel(dataset, BetaEstimatorSpec(kind='cf'))


def test_write_beta_panel():
  dataset, _ = small_dataset(n_assets=5, n_months=20)
  panel = build_beta_panel(dataset,
                           BetaEstimatorSpec(kind='ols', **SHORT_WINDOWS))
  path = os.path.join(make_out_dir('betas'), 'beta_ols.csv')
  write_beta_panel(panel, path)
  frame = pd.read_csv(path)
  assert list(frame.columns) == BETA_HEADER
  assert len(frame) == int(panel.mask.values.sum())


def test_dimson_panel_shrinkage_and_lag_window():
  dataset, _ = small_dataset(n_assets=8, n_months=30)
  spec = BetaEstimatorSpec(kind='dimson', **SHORT_WINDOWS)
  raw = build_beta_panel(dataset, spec)
  last = raw.calendar[-1]

  #the window feeds dimson_lags days ahead of the regression sample
  returns = dataset.daily.returns()
  market = dataset.market_daily.reindex(dataset.calendar.daily_dates)
  end = dataset.calendar.month_end_positions()[-1]
  span = spec.vol_days + spec.dimson_lags
  mkt = market.values[end + 1 - span:end + 1].astype(float)
  for asset in dataset.assets:
    stock = returns[asset].values[end + 1 - span:end + 1]
    assert raw.values.loc[last, asset] == pytest.approx(
        est.dimson_raw(stock, mkt, spec.dimson_lags), abs=1e-12)

  flat = build_beta_panel(
      dataset,
      BetaEstimatorSpec(kind='dimson',
                        dimson_shrink_weight=0.0,
                        shrink_target=0.8,
                        **SHORT_WINDOWS))
  assert np.all(flat.masked().stack().values == 0.8)

  half = build_beta_panel(
      dataset,
      BetaEstimatorSpec(kind='dimson', dimson_shrink_weight=0.5,
                        **SHORT_WINDOWS))
  expected = 0.5 * raw.masked() + 0.5
  assert np.allclose(half.masked().values, expected.values, equal_nan=True)

  standard = build_beta_panel(dataset, spec.with_kind('standard'))
  expected = 0.6 * raw.masked() + 0.4
  assert np.allclose(standard.masked().values,
                     expected.values,
                     equal_nan=True)

  with pytest.raises(ConfigError):
    BetaEstimatorSpec(kind='dimson', dimson_shrink_weight=1.5)
