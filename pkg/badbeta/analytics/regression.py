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
"""Intercept OLS factor regressions and the factor-model tables built on them"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import statsmodels.api as sm

from badbeta.custom_errors import (CollinearityError, InsufficientDataError,
                                   NumericError)
from badbeta.data.panels import AuxSeries
from badbeta.portfolio.backtest import FactorSeries
from badbeta.utils.config_type import CovType
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (FACTOR_COLUMNS, FACTOR_MODELS,
                                    MIN_REGRESSION_OBS, NESTED_MODELS,
                                    NEWEY_WEST_LAGS)

LOGGER = setup_logger('regression')

ALPHA = 'alpha'
PERCENT = 100.0
R2_TOL = 1e-10


@dataclass
class RegressionResult:
  """coefficients and t-stats are indexed alpha first, then the factors"""
  model_id: str
  coefficients: pd.Series
  t_stats: pd.Series
  r_squared: float
  n_obs: int
  cov_type: CovType = CovType.hc0
  residuals: pd.Series = field(default_factory=pd.Series, repr=False)

  @property
  def alpha(self) -> float:
    """regression intercept"""
    return float(self.coefficients[ALPHA])

  @property
  def alpha_t(self) -> float:
    """t-stat of the intercept"""
    return float(self.t_stats[ALPHA])

  def to_dict(self) -> Dict[str, Any]:
    """full precision serialization"""
    return {
        'model_id': self.model_id,
        'coefficients': {k: float(v) for k, v in self.coefficients.items()},
        't_stats': {k: float(v) for k, v in self.t_stats.items()},
        'r_squared': float(self.r_squared),
        'n_obs': int(self.n_obs),
        'cov_type': str(self.cov_type)
    }


def collinear_columns(X: pd.DataFrame) -> List[str]:
  """columns that add no rank to the intercept and the columns before them"""
  #pylint: disable=invalid-name
  basis = np.ones((len(X), 1))
  rank = 1
  offending = []
  for col in X.columns:
    trial = np.column_stack([basis, X[col].values])
    trial_rank = np.linalg.matrix_rank(trial)
    if trial_rank > rank:
      basis, rank = trial, trial_rank
    else:
      offending.append(str(col))
  return offending


def _fit_kwargs(cov_type: CovType, nw_lags: int) -> Dict[str, Any]:
  if cov_type == CovType.hc0:
    return {'cov_type': 'HC0'}
  if cov_type == CovType.newey_west:
    return {'cov_type': 'HAC', 'cov_kwds': {'maxlags': nw_lags}}
  return {'cov_type': 'nonrobust'}


def ols_regress(y: pd.Series,
                X: pd.DataFrame,
                model_id: str = 'custom',
                cov_type: CovType = CovType.hc0,
                nw_lags: int = NEWEY_WEST_LAGS,
                min_obs: int = MIN_REGRESSION_OBS) -> RegressionResult:
  """! @brief OLS of y on an intercept and the columns of X
    @param cov_type plain, White (hc0) or Newey-West standard errors
    @return coefficients in the units of y, rows with any missing value dropped
  """
  #pylint: disable=invalid-name,too-many-arguments
  cov_type = CovType(str(cov_type))
  if isinstance(X, pd.Series):
    X = X.to_frame()
  data = pd.concat([y.rename('__y__'), X], axis=1, join='inner').dropna()
  n_obs = len(data)
  if n_obs < min_obs:
    raise InsufficientDataError(
        f"{model_id}: {n_obs} observations, regression needs {min_obs}",
        module='analytics')
  regressors = data[list(X.columns)]
  offending = collinear_columns(regressors)
  if offending:
    raise CollinearityError(f"{model_id}: regressors not of full rank",
                            columns=offending,
                            module='analytics')

  design = sm.add_constant(regressors, has_constant='add')
  design = design.rename(columns={'const': ALPHA})
  with np.errstate(invalid='ignore', divide='ignore'):
    fit = sm.OLS(data['__y__'], design).fit(**_fit_kwargs(cov_type, nw_lags))
    t_stats = pd.Series(np.asarray(fit.tvalues, dtype=float),
                        index=design.columns)
  r_squared = float(fit.rsquared)
  if not np.isfinite(r_squared):
    raise NumericError(f"{model_id}: dependent series has zero variance",
                       module='analytics')
  return RegressionResult(model_id=model_id,
                          coefficients=pd.Series(np.asarray(fit.params,
                                                            dtype=float),
                                                 index=design.columns),
                          t_stats=t_stats,
                          r_squared=min(max(r_squared, 0.0), 1.0),
                          n_obs=n_obs,
                          cov_type=cov_type,
                          residuals=pd.Series(np.asarray(fit.resid),
                                              index=data.index))


def check_nested_r2(table: Dict[str, RegressionResult]) -> None:
  """R2 may not fall when regressors are added to a nested model"""
  for small, large in NESTED_MODELS:
    if small in table and large in table:
      if table[large].r_squared < table[small].r_squared - R2_TOL:
        raise NumericError(
            f"R2 of {large} ({table[large].r_squared:.12f}) below "
            f"{small} ({table[small].r_squared:.12f})",
            module='analytics')


def regression_table(y: pd.Series,
                     aux: AuxSeries,
                     cov_type: CovType = CovType.hc0,
                     nw_lags: int = NEWEY_WEST_LAGS,
                     min_obs: int = MIN_REGRESSION_OBS,
                     in_percent: bool = True) -> Dict[str, RegressionResult]:
  """! @brief capm, ff3, carhart4, ff5 and ff6 regressions of one series
    @details all five models use the months where y and all six factors are
    defined; with in_percent, y and factors are scaled to percent so the
    intercept reads as percent per month and slopes are unchanged
  """
  factors = aux.factor_returns.reindex(y.index)[FACTOR_COLUMNS]
  sample = pd.concat([y.rename('__y__'), factors], axis=1).dropna()
  scale = PERCENT if in_percent else 1.0
  table = {}
  for model_id, cols in FACTOR_MODELS.items():
    table[model_id] = ols_regress(sample['__y__'] * scale,
                                  sample[cols] * scale, model_id, cov_type,
                                  nw_lags, min_obs)
  check_nested_r2(table)
  return table


def factor_regression_table(factor: FactorSeries,
                            aux: AuxSeries,
                            basis: str = 'gross',
                            cov_type: CovType = CovType.hc0,
                            nw_lags: int = NEWEY_WEST_LAGS
                           ) -> Dict[str, RegressionResult]:
  """regression_table of the gross or net factor returns"""
  if basis not in ('gross', 'net'):
    raise NumericError(f"unknown return basis {basis}", module='analytics')
  series = factor.gross if basis == 'gross' else factor.net
  LOGGER.debug('%s %s: regressing %u months', factor.name, basis,
               int(series.notna().sum()))
  return regression_table(series, aux, cov_type, nw_lags)


def table_frame(table: Dict[str, RegressionResult]) -> pd.DataFrame:
  """Columns (1)..(5) per model; coefficient rows each followed by their
  t-stat, then R2 and N"""
  rows: Dict[str, Dict[str, float]] = {}
  for col, (model_id, result) in enumerate(table.items(), start=1):
    label = f"({col}) {model_id}"
    for name in [ALPHA] + FACTOR_COLUMNS:
      coef = result.coefficients.get(name, np.nan)
      tval = result.t_stats.get(name, np.nan)
      rows.setdefault(name, {})[label] = coef
      rows.setdefault(f"t({name})", {})[label] = tval
    rows.setdefault('r_squared', {})[label] = result.r_squared
    rows.setdefault('n_obs', {})[label] = result.n_obs
  frame = pd.DataFrame(rows).T
  frame.index.name = 'row'
  return frame


def portfolio_regression_table(factor: FactorSeries,
                               aux: AuxSeries,
                               model_id: str = 'ff6',
                               cov_type: CovType = CovType.hc0,
                               nw_lags: int = NEWEY_WEST_LAGS,
                               min_obs: int = MIN_REGRESSION_OBS
                              ) -> pd.DataFrame:
  """Excess return of every sort bucket on one factor model, one row per
  bucket label; buckets without enough months are left out"""
  #pylint: disable=too-many-arguments
  cols = FACTOR_MODELS[model_id]
  risk_free = aux.risk_free.reindex(factor.calendar)
  factors = aux.factor_returns.reindex(factor.calendar)[cols] * PERCENT
  rows: Dict[Any, Dict[str, float]] = {}
  for label in factor.bucket_returns.columns:
    excess = (factor.bucket_returns[label] - risk_free) * PERCENT
    try:
      res = ols_regress(excess, factors, f"{model_id}_bucket{label}",
                        cov_type, nw_lags, min_obs)
    except InsufficientDataError as err:
      LOGGER.info('bucket %s skipped: %s', label, err)
      continue
    row = {'mean_excess': float(excess.mean())}
    for name in [ALPHA] + cols:
      row[name] = float(res.coefficients[name])
      row[f"t({name})"] = float(res.t_stats[name])
    row['r_squared'] = res.r_squared
    row['n_obs'] = res.n_obs
    rows[label] = row
  frame = pd.DataFrame(rows).T
  frame.index.name = 'bucket'
  return frame


def alpha_gap(gross_table: Dict[str, RegressionResult],
              net_table: Dict[str, RegressionResult]) -> Dict[str, float]:
  """gross minus net alpha per model"""
  return {
      model_id: gross_table[model_id].alpha - net_table[model_id].alpha
      for model_id in gross_table
      if model_id in net_table
  }


def table_to_dict(table: Dict[str, RegressionResult],
                  label: Optional[str] = None) -> Dict[str, Any]:
  """JSON-ready form of a regression table"""
  out = {model_id: res.to_dict() for model_id, res in table.items()}
  if label is not None:
    return {label: out}
  return out
