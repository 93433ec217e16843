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
"""Low-frequency effective spread estimators on daily data.
gibbs_spread returns a half-spread; the other three return full spreads."""

from typing import Optional, Sequence

import numpy as np
from scipy.special import expit
from scipy.stats import truncnorm

from badbeta.custom_errors import InsufficientDataError
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (GIBBS_BURN, GIBBS_MIN_OBS, GIBBS_RNG_CHUNK,
                                    GIBBS_SWEEPS, PAIR_MIN_OBS, VOV_K)

LOGGER = setup_logger('spreads')

#priors of the Roll model sampler
C_PRIOR_VAR = 1.0
VARU_PRIOR_SHAPE = 2.0
VARU_PRIOR_SCALE_FACTOR = 1e-4
CS_DENOM = 3.0 - 2.0 * np.sqrt(2.0)


def _trade_direction_draw(dp: np.ndarray, q: np.ndarray, c: np.ndarray,
                          varu: np.ndarray, parity: int,
                          uniforms: np.ndarray,
                          lengths: np.ndarray) -> np.ndarray:
  """Block draw of the q(t) at one parity given their neighbours, all chains
  at once. q(t) enters u(t) = dp(t) - c (q(t) - q(t-1)) and u(t+1)."""
  width = q.shape[1]
  idx = np.arange(parity, width, 2)
  inside = idx[None, :] < lengths[:, None]
  back = inside & (idx > 0)[None, :]
  ahead = idx[None, :] < (lengths - 1)[:, None]
  prev = q[:, np.maximum(idx - 1, 0)]
  nxt = q[:, np.minimum(idx + 1, width - 1)]
  dp_back = dp[:, np.maximum(idx - 1, 0)]
  dp_ahead = dp[:, np.minimum(idx, width - 2)]
  cost = c[:, None]
  two_var = 2.0 * varu[:, None]
  log_odds = np.zeros(back.shape)
  for sign in (1.0, -1.0):
    u_back = np.where(back, dp_back - cost * (sign - prev), 0.0)
    u_ahead = np.where(ahead, dp_ahead - cost * (nxt - sign), 0.0)
    log_odds -= sign * (u_back**2 + u_ahead**2) / two_var
  p_buy = expit(log_odds)
  drawn = np.where(uniforms[:, idx] < p_buy, 1.0, -1.0)
  q = q.copy()
  q[:, idx] = np.where(inside, drawn, q[:, idx])
  return q


def _chunk_draws(rngs: Sequence[np.random.Generator], lengths: np.ndarray,
                 shape: np.ndarray, size: int, width: int):
  """next `size` sweeps of uniforms and gamma variates, chain by chain"""
  n_chains = len(rngs)
  u_c = np.empty((n_chains, size))
  gammas = np.empty((n_chains, size))
  u_q = np.ones((n_chains, size, width))
  for k, rng in enumerate(rngs):
    u_c[k] = rng.random(size)
    gammas[k] = rng.standard_gamma(shape[k], size)
    u_q[k, :, :lengths[k]] = rng.random((size, lengths[k]))
  return u_c, gammas, u_q


def roll_gibbs_batch(log_prices: Sequence[np.ndarray],
                     sweeps: int = GIBBS_SWEEPS,
                     rngs: Optional[Sequence[np.random.Generator]] = None,
                     width: Optional[int] = None) -> np.ndarray:
  """! @brief Gibbs sampler for p(t) = m(t) + c q(t), m a random walk, run
    on many independent chains together
    @param rngs one generator per chain; a chain's draws depend only on its
    generator, its prices and width
    @param width padded chain length, at least the longest chain
    @return sweeps x chains x 2 draws of (c, var_u)
  """
  #pylint: disable=too-many-locals
  chains = [np.asarray(p, dtype=float) for p in log_prices]
  n_chains = len(chains)
  if rngs is None:
    rngs = [np.random.default_rng(k) for k in range(n_chains)]
  if len(rngs) != n_chains:
    raise ValueError('one generator per chain required')
  lengths = np.array([len(p) for p in chains], dtype=int)
  if n_chains == 0:
    return np.empty((sweeps, 0, 2))
  if lengths.min() < 3:
    raise InsufficientDataError('gibbs chains need at least 3 prices',
                                module='tcost')
  width = int(width or lengths.max())
  if width < lengths.max():
    raise ValueError(f"width {width} below the longest chain")

  prices = np.empty((n_chains, width))
  for k, chain in enumerate(chains):
    prices[k, :len(chain)] = chain
    prices[k, len(chain):] = chain[-1]
  dp = np.diff(prices, axis=1)
  valid_dp = np.arange(width - 1)[None, :] < (lengths - 1)[:, None]
  n_dp = lengths - 1
  mean_dp = dp.sum(axis=1) / n_dp
  centred = np.where(valid_dp, dp - mean_dp[:, None], 0.0)
  var_dp = np.maximum((centred * centred).sum(axis=1) / n_dp, 1e-12)

  q = np.ones((n_chains, width))
  q[:, 1:] = np.where(dp < 0, -1.0, 1.0)
  varu = var_dp.copy()
  prior_scale = VARU_PRIOR_SCALE_FACTOR * var_dp
  shape = VARU_PRIOR_SHAPE + n_dp / 2.0

  draws = np.empty((sweeps, n_chains, 2))
  for first in range(0, sweeps, GIBBS_RNG_CHUNK):
    size = min(GIBBS_RNG_CHUNK, sweeps - first)
    u_c, gammas, u_q = _chunk_draws(rngs, lengths, shape, size, width)
    for step in range(size):
      dq = np.where(valid_dp, np.diff(q, axis=1), 0.0)
      #cost coefficient: normal regression update truncated at zero
      precision = (dq * dq).sum(axis=1) / varu + 1.0 / C_PRIOR_VAR
      post_var = 1.0 / precision
      post_mean = post_var * (dq * dp).sum(axis=1) / varu
      post_sd = np.sqrt(post_var)
      c = truncnorm.ppf(u_c[:, step], -post_mean / post_sd, np.inf,
                        loc=post_mean, scale=post_sd)
      c = np.maximum(c, 0.0)
      #efficient price variance: inverse gamma update
      resid = dp - c[:, None] * dq
      scale = prior_scale + (resid * resid).sum(axis=1) / 2.0
      varu = np.maximum(scale / gammas[:, step], 1e-16)
      #trade directions
      for parity in (0, 1):
        q = _trade_direction_draw(dp, q, c, varu, parity, u_q[:, step],
                                  lengths)
      draws[first + step, :, 0] = c
      draws[first + step, :, 1] = varu
  return draws


def roll_gibbs(log_prices,
               sweeps: int = GIBBS_SWEEPS,
               rng: Optional[np.random.Generator] = None,
               width: Optional[int] = None) -> np.ndarray:
  """! @brief Single-chain Roll model sampler
    @return sweeps x 2 draws of (c, var_u)
  """
  rng = rng if rng is not None else np.random.default_rng(0)
  return roll_gibbs_batch([log_prices], sweeps, [rng], width)[:, 0, :]


def gibbs_converged(draws: np.ndarray, burn: int = GIBBS_BURN) -> bool:
  """posterior stdev of c not above its posterior mean"""
  kept = draws[burn:, 0]
  return bool(kept.std() <= kept.mean())


def gibbs_spread(daily_closes,
                 sweeps: int = GIBBS_SWEEPS,
                 seed: int = 0,
                 burn: int = GIBBS_BURN,
                 min_obs: int = GIBBS_MIN_OBS) -> float:
  """Posterior mean of the Roll half-spread on log closes"""
  closes = np.asarray(daily_closes, dtype=float)
  closes = closes[np.isfinite(closes) & (closes > 0)]
  if len(closes) < min_obs:
    raise InsufficientDataError(
        f"{len(closes)} daily closes, gibbs needs {min_obs}", module='tcost')
  if burn >= sweeps:
    raise InsufficientDataError('burn-in must be shorter than the chain',
                                module='tcost')
  draws = roll_gibbs(np.log(closes), sweeps, np.random.default_rng(seed))
  if not gibbs_converged(draws, burn):
    LOGGER.debug('gibbs: posterior stdev exceeds posterior mean')
  return float(draws[burn:, 0].mean())


def _consecutive_pairs(*series) -> np.ndarray:
  """index t of pairs (t, t+1) where every series is finite and positive"""
  ok = np.ones(len(series[0]), dtype=bool)
  for arr in series:
    with np.errstate(invalid='ignore'):
      ok &= np.isfinite(arr) & (arr > 0)
  return np.flatnonzero(ok[:-1] & ok[1:])


def corwin_schultz_spread(daily_high,
                          daily_low,
                          min_pairs: int = PAIR_MIN_OBS) -> float:
  """Mean over two-day pairs of the high-low spread, negatives floored"""
  high = np.asarray(daily_high, dtype=float)
  low = np.asarray(daily_low, dtype=float)
  pairs = _consecutive_pairs(high, low)
  if len(pairs) < min_pairs:
    raise InsufficientDataError(
        f"{len(pairs)} valid day pairs, need {min_pairs}", module='tcost')
  hl_sq = np.log(high / low)**2
  beta = hl_sq[pairs] + hl_sq[pairs + 1]
  gamma = np.log(
      np.maximum(high[pairs], high[pairs + 1]) /
      np.minimum(low[pairs], low[pairs + 1]))**2
  alpha = (np.sqrt(2.0 * beta) - np.sqrt(beta)) / CS_DENOM - np.sqrt(
      gamma / CS_DENOM)
  spread = 2.0 * (np.exp(alpha) - 1.0) / (1.0 + np.exp(alpha))
  return float(np.maximum(spread, 0.0).mean())


def abdi_ranaldo_spread(daily_close,
                        daily_high,
                        daily_low,
                        min_pairs: int = PAIR_MIN_OBS) -> float:
  """2 sqrt(max(mean (c_t - eta_t)(c_t - eta_t+1), 0)) with eta the log
  mid-range"""
  close = np.asarray(daily_close, dtype=float)
  high = np.asarray(daily_high, dtype=float)
  low = np.asarray(daily_low, dtype=float)
  pairs = _consecutive_pairs(close, high, low)
  if len(pairs) < min_pairs:
    raise InsufficientDataError(
        f"{len(pairs)} valid day pairs, need {min_pairs}", module='tcost')
  with np.errstate(invalid='ignore', divide='ignore'):
    eta = (np.log(high) + np.log(low)) / 2.0
    log_close = np.log(close)
  prod = (log_close[pairs] - eta[pairs]) * (log_close[pairs] - eta[pairs + 1])
  return float(2.0 * np.sqrt(max(prod.mean(), 0.0)))


def vov_spread(daily_volume,
               daily_close,
               daily_returns,
               k: float = VOV_K,
               min_days: int = PAIR_MIN_OBS) -> float:
  """k (sigma_d^2 / mean dollar volume)^(1/3)"""
  volume = np.asarray(daily_volume, dtype=float)
  close = np.asarray(daily_close, dtype=float)
  rets = np.asarray(daily_returns, dtype=float)
  dollar = close * volume
  with np.errstate(invalid='ignore'):
    traded = np.isfinite(dollar) & (dollar > 0)
  if int(traded.sum()) < min_days:
    raise InsufficientDataError(
        f"{int(traded.sum())} days with dollar volume, need {min_days}",
        module='tcost')
  rets = rets[np.isfinite(rets)]
  if len(rets) < 2:
    raise InsufficientDataError('too few returns for volatility',
                                module='tcost')
  sigma = float(rets.std(ddof=1))
  avg_dollar = float(dollar[np.isfinite(dollar)].mean())
  return float(k * np.cbrt(sigma**2 / avg_dollar))
