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
"""Annualized performance statistics and cumulative return curves"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd

from badbeta.custom_errors import InsufficientDataError, SharpeUndefinedError
from badbeta.utils.metadata import MIN_PERF_MONTHS, MONTHS_PER_YEAR

VOL_TOL = 1e-14
PERF_COLUMNS = ['mean_ann', 'vol_ann', 'sharpe_ann', 'max_drawdown', 'n_months']


@dataclass(frozen=True)
class PerfStats:
  """mean and volatility annualized by 12 and sqrt(12)"""
  mean_ann: float
  vol_ann: float
  sharpe_ann: float
  max_drawdown: float
  n_months: int

  def to_dict(self) -> Dict[str, Any]:
    """plain dict for JSON export"""
    return asdict(self)


def cumulative_curve(returns: pd.Series) -> pd.Series:
  """Running product of (1 + r); masked months stay flat"""
  if returns is None or len(returns) == 0:
    raise InsufficientDataError('cumulative curve of an empty series',
                                module='analytics')
  return (1.0 + returns.fillna(0.0)).cumprod().rename('cumulative')


def drawdown_curve(returns: pd.Series) -> pd.Series:
  """distance below the running peak, starting from a peak of one"""
  curve = cumulative_curve(returns)
  peak = np.maximum(curve.cummax(), 1.0)
  return (curve / peak - 1.0).rename('drawdown')


def max_drawdown(returns: pd.Series) -> float:
  """deepest drawdown as a non-positive fraction"""
  return float(drawdown_curve(returns).min())


def perf_stats(returns: pd.Series,
               min_months: int = MIN_PERF_MONTHS) -> PerfStats:
  """! @brief Annualized mean, volatility and Sharpe of monthly returns
    @param returns monthly series; missing months are left out
  """
  clean = returns.dropna()
  if len(clean) < min_months:
    raise InsufficientDataError(
        f"{len(clean)} months of returns, need {min_months}",
        module='analytics')
  mean_ann = MONTHS_PER_YEAR * float(clean.mean())
  vol_ann = np.sqrt(MONTHS_PER_YEAR) * float(clean.std(ddof=1))
  if vol_ann <= VOL_TOL * max(1.0, abs(mean_ann)):
    raise SharpeUndefinedError(
        f"zero volatility series (mean_ann {mean_ann:.6f})",
        module='analytics')
  return PerfStats(mean_ann=mean_ann,
                   vol_ann=vol_ann,
                   sharpe_ann=mean_ann / vol_ann,
                   max_drawdown=max_drawdown(returns),
                   n_months=len(clean))


def risk_return_table(factors: Mapping[str, pd.Series]) -> pd.DataFrame:
  """perf_stats per named series, one row each"""
  rows = {name: perf_stats(series).to_dict() for name, series in factors.items()}
  frame = pd.DataFrame.from_dict(rows, orient='index', columns=PERF_COLUMNS)
  frame.index.name = 'name'
  return frame
