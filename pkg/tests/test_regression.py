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

import sys

import numpy as np
import pandas as pd
import pytest

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.analytics.regression import (RegressionResult, alpha_gap,
                                          check_nested_r2, collinear_columns,
                                          ols_regress, regression_table,
                                          table_frame, table_to_dict)
from badbeta.custom_errors import (CollinearityError, InsufficientDataError,
                                   NumericError)
from badbeta.data.panels import AuxSeries
from badbeta.utils.config_type import CovType
from badbeta.utils.metadata import FACTOR_COLUMNS, FACTOR_MODELS
from utils import month_ends


def random_aux(n_months=240, seed=0):
  rng = np.random.default_rng(seed)
  stamps = month_ends(n_months)
  factors = pd.DataFrame(rng.normal(0.005, 0.04,
                                    (n_months, len(FACTOR_COLUMNS))),
                         index=stamps,
                         columns=FACTOR_COLUMNS)
  return AuxSeries(calendar=stamps,
                   risk_free=pd.Series(0.003, index=stamps),
                   factor_returns=factors)


def test_exact_fit():
  aux = random_aux()
  mkt = aux.factor_returns['mkt']
  res = ols_regress(0.5 + 1.2 * mkt, aux.factor_returns[['mkt']], 'capm')
  assert res.alpha == pytest.approx(0.5, abs=1e-12)
  assert res.coefficients['mkt'] == pytest.approx(1.2, abs=1e-12)
  assert res.r_squared == pytest.approx(1.0)
  assert res.n_obs == 240
  assert list(res.coefficients.index) == ['alpha', 'mkt']


def test_normal_equations():
  aux = random_aux(seed=1)
  rng = np.random.default_rng(2)
  X = aux.factor_returns[['mkt', 'smb', 'hml']]  #pylint: disable=invalid-name
  y = pd.Series(rng.normal(0.0, 0.05, len(X)), index=X.index)
  res = ols_regress(y, X, 'ff3', cov_type=CovType.hc0)

  design = np.column_stack([np.ones(len(X)), X.values])
  xtx_inv = np.linalg.inv(design.T @ design)
  coef = xtx_inv @ design.T @ y.values
  assert np.allclose(res.coefficients.values, coef, atol=1e-10)

  resid = y.values - design @ coef
  meat = design.T @ (design * resid[:, None]**2)
  se_white = np.sqrt(np.diag(xtx_inv @ meat @ xtx_inv))
  assert np.allclose(res.t_stats.values, coef / se_white, rtol=1e-8)
  ss_res = float(resid @ resid)
  ss_tot = float(((y - y.mean())**2).sum())
  assert res.r_squared == pytest.approx(1.0 - ss_res / ss_tot, abs=1e-10)

  plain = ols_regress(y, X, 'ff3', cov_type='plain')
  sigma2 = ss_res / (len(X) - 4)
  se_plain = np.sqrt(np.diag(xtx_inv) * sigma2)
  assert np.allclose(plain.t_stats.values, coef / se_plain, rtol=1e-8)
  nw = ols_regress(y, X, 'ff3', cov_type=CovType.newey_west)
  assert np.allclose(nw.coefficients.values, coef, atol=1e-10)


def test_missing_rows_dropped():
  aux = random_aux(seed=3)
  y = aux.factor_returns['smb'].copy()
  y.iloc[:5] = np.nan
  res = ols_regress(y, aux.factor_returns[['mkt']])
  assert res.n_obs == 235
  with pytest.raises(InsufficientDataError):
    ols_regress(y.iloc[:20], aux.factor_returns[['mkt']])


def test_collinearity():
  aux = random_aux(seed=4)
  X = aux.factor_returns[['mkt', 'smb', 'hml']].copy()  #pylint: disable=invalid-name
  X['hml'] = 2.0 * X['smb']
  assert collinear_columns(X) == ['hml']
  with pytest.raises(CollinearityError) as err:
    ols_regress(aux.factor_returns['umd'], X, 'ff3')
  assert err.value.columns == ['hml']

  X['hml'] = 0.01
  assert collinear_columns(X) == ['hml']


def test_zero_variance_dependent():
  aux = random_aux(seed=5)
  flat = pd.Series(0.01, index=aux.calendar)
  with pytest.raises(NumericError):
    ols_regress(flat, aux.factor_returns[['mkt']])


def test_regression_table():
  aux = random_aux(seed=6)
  table = regression_table(aux.factor_returns['mkt'], aux)
  assert list(table) == list(FACTOR_MODELS)
  capm = table['capm']
  assert capm.alpha == pytest.approx(0.0, abs=1e-10)
  assert capm.coefficients['mkt'] == pytest.approx(1.0, abs=1e-10)
  assert capm.r_squared == pytest.approx(1.0)

  rng = np.random.default_rng(7)
  y = pd.Series(rng.normal(0.006, 0.05, 240), index=aux.calendar)
  y.iloc[:12] = np.nan
  table = regression_table(y, aux)
  assert {res.n_obs for res in table.values()} == {228}
  #percent scaling leaves slopes and R2 alone
  raw = regression_table(y, aux, in_percent=False)
  for model_id, res in table.items():
    assert res.alpha == pytest.approx(100.0 * raw[model_id].alpha)
    assert res.coefficients.drop('alpha').values == pytest.approx(
        raw[model_id].coefficients.drop('alpha').values)
    assert res.r_squared == pytest.approx(raw[model_id].r_squared)
  assert table['ff6'].r_squared >= table['capm'].r_squared

  frame = table_frame(table)
  assert list(frame.columns) == [
      '(1) capm', '(2) ff3', '(3) carhart4', '(4) ff5', '(5) ff6'
  ]
  assert list(frame.index[:4]) == ['alpha', 't(alpha)', 'mkt', 't(mkt)']
  assert list(frame.index[-2:]) == ['r_squared', 'n_obs']
  assert np.isnan(frame.loc['umd', '(1) capm'])
  assert frame.loc['n_obs', '(5) ff6'] == 228

  out = table_to_dict(table, 'gross')
  assert out['gross']['ff6']['n_obs'] == 228
  assert out['gross']['capm']['cov_type'] == 'hc0'


def fake_result(model_id, r_squared, alpha=0.0):
  coefs = pd.Series([alpha], index=['alpha'])
  return RegressionResult(model_id=model_id,
                          coefficients=coefs,
                          t_stats=coefs,
                          r_squared=r_squared,
                          n_obs=100)


def test_nested_r2_and_alpha_gap():
  table = {
      'capm': fake_result('capm', 0.3, 0.8),
      'ff3': fake_result('ff3', 0.2, 0.7)
  }
  with pytest.raises(NumericError):
    check_nested_r2(table)
  table['ff3'] = fake_result('ff3', 0.3 - 1e-12, 0.7)
  check_nested_r2(table)

  net = {'capm': fake_result('capm', 0.3, 0.5)}
  assert alpha_gap(table, net) == {'capm': pytest.approx(0.3)}
