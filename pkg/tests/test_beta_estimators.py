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
import pytest

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.betas import estimators as est
from badbeta.custom_errors import (InsufficientBreadthError,
                                   InsufficientDataError, UndefinedBetaError)

MKT_VOL = 0.01


def market_days(rng, n_days):
  return rng.normal(0.0003, MKT_VOL, n_days)


def test_fp_exact():
  rng = np.random.default_rng(0)
  market = market_days(rng, 1260)
  assert est.beta_fp(market, market, 252, 1260) == pytest.approx(1.0,
                                                                   abs=1e-12)
  assert est.beta_fp(2.0 * market, market, 252, 1260) == pytest.approx(
      2.0, abs=1e-12)


def test_fp_recovery():
  estimates = []
  for seed in range(40):
    rng = np.random.default_rng(seed)
    market = market_days(rng, 1260)
    stock = 1.3 * market + rng.normal(0.0, 1.5 * MKT_VOL, 1260)
    estimates.append(est.beta_fp(stock, market, 252, 1260))
  assert abs(np.mean(estimates) - 1.3) < 0.15


def test_fp_missing_days():
  rng = np.random.default_rng(1)
  market = market_days(rng, 1260)
  stock = 0.8 * market + rng.normal(0.0, MKT_VOL, 1260)
  stock[-100:] = np.nan
  with pytest.raises(InsufficientDataError):
    est.beta_fp(stock, market, 252, 1260)


def test_ols():
  rng = np.random.default_rng(2)
  market = market_days(rng, 252)
  assert est.beta_ols(market + 0.01, market) == pytest.approx(1.0, abs=1e-12)

  stock = 0.7 * market + rng.normal(0.0, MKT_VOL, 252)
  mean_s = sum(stock) / len(stock)
  mean_m = sum(market) / len(market)
  cov = sum((s - mean_s) * (m - mean_m) for s, m in zip(stock, market))
  var = sum((m - mean_m)**2 for m in market)
  assert est.beta_ols(stock, market) == pytest.approx(cov / var, abs=1e-12)

  small = 0
  for seed in range(100):
    rng = np.random.default_rng(100 + seed)
    noise = rng.normal(0.0, MKT_VOL, 252)
    if abs(est.beta_ols(noise, market_days(rng, 252))) < 0.2:
      small += 1
  assert small >= 95

  with pytest.raises(UndefinedBetaError):
    est.beta_ols(stock, np.zeros(252))
  with pytest.raises(InsufficientDataError):
    est.beta_ols(stock[:10], market[:10], need=200)


def test_overlapping_returns():
  rets = np.array([0.01, 0.02, np.nan, 0.03, 0.04, 0.05])
  out = est.overlapping_returns(rets, 3)
  assert np.isnan(out[:5]).all()
  assert out[5] == pytest.approx(0.12)
  assert np.array_equal(est.overlapping_returns(rets, 1), rets,
                        equal_nan=True)


def test_dimson():
  diffs = []
  for seed in range(50):
    rng = np.random.default_rng(200 + seed)
    market = market_days(rng, 252)
    stock = 1.1 * market + rng.normal(0.0, MKT_VOL, 252)
    diffs.append(est.dimson_raw(stock, market) - est.beta_ols(stock, market))
  assert abs(np.mean(diffs)) < 0.05

  rng = np.random.default_rng(3)
  market = market_days(rng, 252)
  lagged = np.full(252, np.nan)
  lagged[1:] = 0.9 * market[:-1]
  assert abs(est.beta_ols(lagged, market)) < 0.25
  assert est.dimson_raw(lagged, market) == pytest.approx(0.9, abs=0.05)

  assert est.beta_dimson(lagged, market, shrink_weight=0.0,
                         shrink_target=0.7) == 0.7


def test_standard():
  rng = np.random.default_rng(4)
  market = market_days(rng, 252)
  assert est.shrink(2.0, 0.6, 1.0) == pytest.approx(1.6)
  assert est.shrink(1.0, 0.3, 1.0) == pytest.approx(1.0)
  assert est.beta_standard(2.0 * market, market) == pytest.approx(1.6,
                                                                   abs=1e-10)
  assert est.beta_standard(2.0 * market, market,
                           shrink_weight=1.0) == pytest.approx(2.0, abs=1e-10)


def test_welch():
  rng = np.random.default_rng(5)
  market = market_days(rng, 252)
  inside = 1.5 * market
  assert est.beta_welch(inside, market) == est.beta_ols(inside, market)

  clipped = est.welch_clip(np.array([0.05, -0.02]), np.array([0.0, 0.01]))
  assert clipped[0] == 0.0
  assert clipped[1] == pytest.approx(-0.02)

  better = 0
  for seed in range(100):
    rng = np.random.default_rng(300 + seed)
    market = market_days(rng, 252)
    stock = 1.2 * market + rng.normal(0.0, 0.3 * MKT_VOL, 252)
    stock[rng.integers(252)] += 3.0
    ols_err = abs(est.beta_ols(stock, market) - 1.2)
    welch_err = abs(est.beta_welch(stock, market) - 1.2)
    if welch_err < ols_err:
      better += 1
  assert better >= 90


def test_vasicek():
  raw = np.array([0.5, 1.0, 1.5, np.nan] + [1.0] * 30)
  out = est.beta_vasicek(raw, np.zeros(len(raw)))
  assert np.allclose(out[:3], raw[:3])
  assert np.isnan(out[3])

  flat = est.beta_vasicek(np.full(40, 1.2), np.full(40, 0.1))
  assert np.allclose(flat, 1.2)

  raw_mse, shrunk_mse = 0.0, 0.0
  for seed in range(50):
    rng = np.random.default_rng(400 + seed)
    truth = rng.normal(1.0, 0.3, 200)
    errors = rng.uniform(0.1, 0.5, 200)
    noisy = truth + rng.normal(0.0, 1.0, 200) * errors
    shrunk = est.beta_vasicek(noisy, errors)
    raw_mse += np.mean((noisy - truth)**2)
    shrunk_mse += np.mean((shrunk - truth)**2)
  assert shrunk_mse <= raw_mse

  with pytest.raises(InsufficientBreadthError):
    est.beta_vasicek(np.ones(5), np.ones(5))


def test_news_betas():
  rng = np.random.default_rng(6)
  unexpected = rng.normal(0.0, 0.045, 36)
  n_dr = rng.normal(0.0, 0.03, 36)
  n_cf = unexpected + n_dr
  stock = unexpected.copy()
  total = est.beta_cf(stock, n_cf, unexpected) + est.beta_dr(
      stock, n_dr, unexpected)
  assert total == pytest.approx(1.0, abs=1e-10)

  stock = 1.4 * unexpected + rng.normal(0.0, 0.05, 36)
  denom = float(np.var(unexpected, ddof=1))
  cov = float(np.cov(stock, unexpected, ddof=1)[0, 1])
  total = est.beta_cf(stock, n_cf, unexpected) + est.beta_dr(
      stock, n_dr, unexpected)
  assert total == pytest.approx(cov / denom, abs=1e-10)

  small = 0
  for seed in range(100):
    rng = np.random.default_rng(500 + seed)
    unexpected = rng.normal(0.0, 0.045, 36)
    n_dr = rng.normal(0.0, 0.03, 36)
    noise = rng.normal(0.0, 0.045, 36)
    if abs(est.beta_cf(noise, unexpected + n_dr, unexpected)) < 0.5:
      small += 1
  assert small >= 90

  with pytest.raises(InsufficientDataError):
    est.beta_cf(stock[:20], n_cf[:20], unexpected[:20], need=30)
