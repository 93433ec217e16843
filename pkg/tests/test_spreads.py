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

import math
import sys
import time

import numpy as np
import pytest

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.custom_errors import InsufficientDataError
from badbeta.tcost.spreads import (abdi_ranaldo_spread, corwin_schultz_spread,
                                   gibbs_converged, gibbs_spread, roll_gibbs,
                                   roll_gibbs_batch, vov_spread)
from badbeta.utils.logger import setup_logger

LOGGER = setup_logger('test_spreads')


def roll_closes(half_spread, n_days=250, seed=0, sigma=0.005):
  """closes around a geometric random walk with bid-ask bounce"""
  rng = np.random.default_rng(seed)
  mid = np.cumsum(rng.normal(0.0, sigma, n_days)) + np.log(20.0)
  side = rng.choice([-1.0, 1.0], n_days)
  return np.exp(mid + half_spread * side)


def test_gibbs_recovers_planted_spread():
  errors = []
  for seed in range(5):
    closes = roll_closes(0.005, seed=seed)
    errors.append(gibbs_spread(closes, sweeps=400, seed=seed, burn=100) -
                  0.005)
  assert abs(np.mean(errors)) < 0.0015


def test_gibbs_zero_spread():
  closes = roll_closes(0.0, seed=3)
  assert gibbs_spread(closes, sweeps=300, seed=1, burn=100) < 0.001


def test_gibbs_determinism():
  closes = roll_closes(0.004, seed=4)
  first = gibbs_spread(closes, sweeps=100, seed=9, burn=20)
  assert gibbs_spread(closes, sweeps=100, seed=9, burn=20) == first
  draws = roll_gibbs(np.log(closes), 100, np.random.default_rng(9))
  assert draws.shape == (100, 2)
  assert (draws[:, 0] >= 0).all() and (draws[:, 1] > 0).all()
  assert isinstance(gibbs_converged(draws, 20), bool)


def test_gibbs_batch_matches_single_chains():
  paths = [
      np.log(roll_closes(0.002 * (k + 1), n_days=150 + 40 * k, seed=k))
      for k in range(3)
  ]
  width = 260
  batch = roll_gibbs_batch(paths, 150,
                           [np.random.default_rng(20 + k) for k in range(3)],
                           width)
  assert batch.shape == (150, 3, 2)
  #a chain's draws do not depend on the chains sampled beside it
  for k, path in enumerate(paths):
    alone = roll_gibbs(path, 150, np.random.default_rng(20 + k), width)
    assert np.array_equal(batch[:, k, :], alone)
  reordered = roll_gibbs_batch(
      paths[::-1], 150, [np.random.default_rng(22 - k) for k in range(3)],
      width)
  assert np.array_equal(reordered[:, ::-1, :], batch)

  with pytest.raises(InsufficientDataError):
    roll_gibbs_batch([np.log([20.0, 20.1])], 10)
  assert roll_gibbs_batch([], 10).shape == (10, 0, 2)


def test_gibbs_batch_throughput():
  #one year of daily closes for 200 asset-months at the full chain length
  paths = [np.log(roll_closes(0.003, n_days=252, seed=k)) for k in range(200)]
  rngs = [np.random.default_rng(k) for k in range(200)]
  start = time.perf_counter()
  draws = roll_gibbs_batch(paths, 1000, rngs)
  elapsed = time.perf_counter() - start
  LOGGER.info('200 chains x 1000 sweeps in %.2f s', elapsed)
  assert elapsed < 30.0
  spreads = draws[200:, :, 0].mean(axis=0)
  assert abs(float(np.median(spreads)) - 0.003) < 0.0015


def test_gibbs_errors():
  with pytest.raises(InsufficientDataError):
    gibbs_spread(roll_closes(0.004, n_days=30))
  with pytest.raises(InsufficientDataError):
    gibbs_spread(roll_closes(0.004), sweeps=50, burn=50)


def test_corwin_schultz():
  flat = np.full(20, 10.0)
  assert corwin_schultz_spread(flat, flat) == 0.0

  high = np.array([10.5, 10.5])
  low = np.array([9.5, 9.5])
  beta = 2.0 * math.log(10.5 / 9.5)**2
  gamma = math.log(10.5 / 9.5)**2
  denom = 3.0 - 2.0 * math.sqrt(2.0)
  alpha = (math.sqrt(2.0 * beta) - math.sqrt(beta)) / denom - math.sqrt(
      gamma / denom)
  expected = (2.0 * (math.exp(alpha) - 1.0) / (1.0 + math.exp(alpha)))
  assert expected > 0.0
  assert corwin_schultz_spread(high, low, min_pairs=1) == pytest.approx(
      expected, abs=1e-14)

  #days with a missing price break their pairs
  high = np.array([10.2, np.nan] * 10)
  with pytest.raises(InsufficientDataError):
    corwin_schultz_spread(high, high * 0.98)


def test_abdi_ranaldo():
  rng = np.random.default_rng(5)
  high = 10.0 * np.exp(np.cumsum(rng.normal(0, 0.01, 40))) * 1.02
  low = high / 1.04
  mid_range = np.sqrt(high * low)
  assert abdi_ranaldo_spread(mid_range, high, low) == pytest.approx(0.0,
                                                                    abs=1e-7)
  assert abdi_ranaldo_spread(high, high, low) >= 0.0


def test_vov():
  rng = np.random.default_rng(6)
  rets = rng.normal(0.0, 0.02, 60)
  close = np.full(60, 20.0)
  volume = np.full(60, 50000.0)
  base = vov_spread(volume, close, rets)
  assert vov_spread(2.0 * volume, close, rets) == pytest.approx(
      base * 2.0**(-1.0 / 3.0))

  small = vov_spread(np.full(60, 1e6 / 20.0), close, rets)
  large = vov_spread(np.full(60, 8e6 / 20.0), close, rets)
  assert small / large == pytest.approx(2.0, abs=1e-12)

  assert vov_spread(volume, close, np.zeros(60)) == 0.0
  with pytest.raises(InsufficientDataError):
    vov_spread(np.zeros(60), close, rets)
