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
"""Stage orchestration: ingest, news, betas, costs, factors and evaluation,
with hash-keyed caching of every intermediate"""

import json
import os
import time
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from badbeta.analytics import exports
from badbeta.analytics.performance import perf_stats, risk_return_table
from badbeta.analytics.regression import (alpha_gap, factor_regression_table,
                                          portfolio_regression_table,
                                          table_to_dict)
from badbeta.betas.beta_panel import build_beta_panel, write_beta_panel
from badbeta.cache import StageCache, cache_key
from badbeta.custom_errors import NumericError
from badbeta.data.align import dataset_checksum, load_dataset
from badbeta.data.synthetic import generate_synthetic
from badbeta.news.var_news import expanding_news, write_news
from badbeta.portfolio.backtest import FactorSeries, run_backtest, write_factor
from badbeta.run_config import RunConfig
from badbeta.stages import STAGE_DEPS, Stage
from badbeta.tcost.cost_panel import (CostPanel, bucket_half_spreads,
                                      build_cost_panel, write_cost_panel)
from badbeta.utils.config_type import SortScheme
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (BADBETA_CACHE_DIRNAME, BADBETA_VERSION,
                                    FACTOR_COLUMNS, REPORT_NAME)
from badbeta.utils.utility import file_hash, text_hash

LOGGER = setup_logger('pipeline')

#config sections read by each stage; a stage key also covers its upstream
STAGE_SECTIONS = {
    Stage.DATA: ('inputs', 'synthetic', 'seed'),
    Stage.NEWS: ('var',),
    Stage.BETAS: ('beta', 'report'),
    Stage.COSTS: ('tcost',),
    Stage.FACTOR: ('sort', 'filters'),
    Stage.EVAL: ('analytics',),
}

STAGE_ORDER = [
    Stage.DATA, Stage.NEWS, Stage.BETAS, Stage.COSTS, Stage.FACTOR, Stage.EVAL
]


def stage_closure(stage: Stage) -> List[Stage]:
  """the stage and everything upstream of it, in execution order"""
  seen = {stage}
  todo = [stage]
  while todo:
    for dep in STAGE_DEPS[todo.pop()]:
      if dep not in seen:
        seen.add(dep)
        todo.append(dep)
  return [stg for stg in STAGE_ORDER if stg in seen]


def json_safe(obj: Any) -> Any:
  """numpy scalars to python, non finite floats to None, dates to ISO"""
  #pylint: disable=too-many-return-statements
  if isinstance(obj, dict):
    return {str(key): json_safe(val) for key, val in obj.items()}
  if isinstance(obj, (list, tuple)):
    return [json_safe(val) for val in obj]
  if isinstance(obj, np.ndarray):
    return json_safe(obj.tolist())
  if isinstance(obj, (np.integer,)):
    return int(obj)
  if isinstance(obj, (float, np.floating)):
    return float(obj) if np.isfinite(obj) else None
  if isinstance(obj, (pd.Timestamp, datetime)):
    return obj.strftime('%Y-%m-%d')
  return obj


class BadBetaPipeline():
  """ Runs the stages of one configuration; every stage is computed at most
  once per instance and served from the cache when its key is unchanged """

  def __init__(self, config: RunConfig, use_cache: bool = True) -> None:
    self.config = config
    self.out_dir = config.out_dir
    os.makedirs(self.out_dir, exist_ok=True)
    self.cache = StageCache(
        os.path.join(self.out_dir, BADBETA_CACHE_DIRNAME) if use_cache else None)
    self._memo: Dict[Stage, Any] = {}
    self._input_hashes: Optional[Dict[str, str]] = None
    self._compute: Dict[Stage, Callable[[], Any]] = {
        Stage.DATA: self.compute_data,
        Stage.NEWS: self.compute_news,
        Stage.BETAS: self.compute_betas,
        Stage.COSTS: self.compute_costs,
        Stage.FACTOR: self.compute_factor,
        Stage.EVAL: self.compute_eval,
    }
    self._write: Dict[Stage, Callable[[Any], List[str]]] = {
        Stage.DATA: self.write_data,
        Stage.NEWS: self.write_news,
        Stage.BETAS: self.write_betas,
        Stage.COSTS: self.write_costs,
        Stage.FACTOR: self.write_factor,
        Stage.EVAL: self.write_eval,
    }

  @property
  def threads(self) -> Optional[int]:
    """worker count, None defers to BADBETA_THREADS"""
    return self.config.threads

  def input_hashes(self) -> Dict[str, str]:
    """content hashes of the input files, or of the synthetic section"""
    if self._input_hashes is None:
      if self.config.inputs is not None:
        self._input_hashes = {
            key: file_hash(path) for key, path in self.config.inputs.items()
        }
      else:
        self._input_hashes = {
            'synthetic':
                text_hash(
                    json.dumps(json_safe(self.config.raw['synthetic']),
                               sort_keys=True))
        }
    return self._input_hashes

  def stage_key(self, stage: Stage) -> str:
    """key over input hashes and the config sections of the stage closure"""
    sections = {}
    for stg in stage_closure(stage):
      for name in STAGE_SECTIONS[stg]:
        sections[name] = json_safe(self.config.raw.get(name))
    return cache_key(stage, {
        'inputs': self.input_hashes(),
        'sections': sections
    })

  def get(self, stage: Stage) -> Any:
    """stage output from memory, cache or a fresh computation"""
    if stage in self._memo:
      return self._memo[stage]
    key = self.stage_key(stage)
    value = self.cache.load(stage, key)
    if value is None:
      start = time.perf_counter()
      value = self._compute[stage]()
      LOGGER.info('stage %s computed in %.2f s', stage,
                  time.perf_counter() - start)
      self.cache.store(stage, key, value)
    self._memo[stage] = value
    return value

  def run_stage(self, stage: Stage) -> List[str]:
    """compute (upstream on demand) and write this stage's exports only"""
    value = self.get(stage)
    paths = self._write[stage](value)
    LOGGER.info('stage %s wrote %u files to %s', stage, len(paths),
                self.out_dir)
    return paths

  def run(self) -> List[str]:
    """every stage in order, all exports and report.json"""
    paths: List[str] = []
    for stage in STAGE_ORDER:
      paths.extend(self.run_stage(stage))
    return paths

  def _path(self, name: str) -> str:
    return os.path.join(self.out_dir, name)

  #stage computations

  def compute_data(self) -> Dict[str, Any]:
    """aligned dataset and, for synthetic runs, the ground truth"""
    if self.config.inputs is not None:
      return {'dataset': load_dataset(self.config.inputs), 'truth': None}
    dataset, truth = generate_synthetic(self.config.synthetic)
    return {'dataset': dataset, 'truth': truth}

  @property
  def dataset(self):
    """aligned dataset of this run"""
    return self.get(Stage.DATA)['dataset']

  def compute_news(self):
    """expanding-window news series"""
    cfg = self.config
    return expanding_news(self.dataset.states,
                          first_estimation_date=cfg.first_estimation_date,
                          rho=cfg.rho,
                          min_obs=cfg.var_min_obs,
                          standardize=cfg.var_standardize,
                          threads=self.threads)

  def compute_betas(self) -> Dict[str, Any]:
    """signal, bad and good beta panels plus the report estimators"""
    cfg = self.config
    news = self.get(Stage.NEWS)
    panels: Dict[str, Any] = {
        'signal': build_beta_panel(self.dataset, cfg.beta, news, self.threads),
        'cf': build_beta_panel(self.dataset, cfg.bad_beta, news, self.threads),
        'dr': build_beta_panel(self.dataset, cfg.good_beta, news,
                               self.threads),
        'alt': {}
    }
    for kind in cfg.report_estimators:
      if kind == cfg.beta.kind or not kind.is_daily():
        continue
      panels['alt'][str(kind)] = build_beta_panel(self.dataset,
                                                  cfg.beta.with_kind(kind),
                                                  news, self.threads)
    return panels

  def compute_costs(self) -> CostPanel:
    """cost panel, all zero when costs are disabled"""
    if not self.config.tcost_enabled:
      LOGGER.info('transaction costs disabled, net equals gross')
      return CostPanel.zeros(self.dataset.calendar.monthly_dates,
                             self.dataset.assets)
    return build_cost_panel(self.dataset, self.config.cost, self.threads)

  def _backtests(self, signal, bad, costs: CostPanel) -> Dict[str, FactorSeries]:
    cfg = self.config
    out = {}
    for name in cfg.scheme.factors():
      scheme = SortScheme.tercile if name == 'bab' else SortScheme.double3x3
      out[name] = run_backtest(self.dataset,
                               signal,
                               bad_beta_panel=bad,
                               scheme=scheme,
                               cost_panel=costs,
                               leg_mode=cfg.babb_legs,
                               conditional=cfg.conditional,
                               min_assets_tercile=cfg.min_assets_tercile,
                               min_assets_double=cfg.min_assets_double,
                               min_price=cfg.min_price,
                               leverage_scaled=cfg.leverage_scaled,
                               name=name)
    return out

  def compute_factor(self) -> Dict[str, Any]:
    """factors of the configured scheme and of each report estimator"""
    betas = self.get(Stage.BETAS)
    costs = self.get(Stage.COSTS)
    result: Dict[str, Any] = {
        'factors': self._backtests(betas['signal'], betas['cf'], costs),
        'alt': {}
    }
    for kind, panel in betas['alt'].items():
      try:
        result['alt'][kind] = self._backtests(panel, betas['cf'], costs)
      except NumericError as err:
        LOGGER.warning('estimator %s: no factor (%s)', kind, err)
    return result

  def compute_eval(self) -> Dict[str, Any]:
    """performance, regression tables and report payload"""
    #pylint: disable=too-many-locals
    cfg = self.config
    factors: Dict[str, FactorSeries] = self.get(Stage.FACTOR)['factors']
    alt = self.get(Stage.FACTOR)['alt']
    aux = self.dataset.aux
    bases = cfg.returns.bases()

    summary: Dict[str, Any] = {}
    tables: Dict[str, Dict[str, Any]] = {}
    named_returns: Dict[str, pd.Series] = {}
    portfolio_tables: Dict[str, pd.DataFrame] = {}
    for name, factor in factors.items():
      entry: Dict[str, Any] = {
          'n_valid_months': int(factor.valid.sum()),
          'mean_leverage': float(factor.leverage.mean()),
          'mean_turnover': {
              leg: float(factor.turnover[leg].mean())
              for leg in factor.turnover.columns
          },
          'mean_cost_drag': float(factor.cost_drag.mean()),
          'masked_months': dict(factor.failures),
          'perf': {},
          'regressions': {}
      }
      for basis in bases:
        series = factor.gross if basis == 'gross' else factor.net
        named_returns[f"{name}_{basis}"] = series
        try:
          entry['perf'][basis] = perf_stats(series).to_dict()
        except NumericError as err:
          entry['perf'][basis] = {'error': str(err)}
        try:
          table = factor_regression_table(factor, aux, basis, cfg.cov_type,
                                          cfg.nw_lags)
          tables.setdefault(name, {})[basis] = table
          entry['regressions'][basis] = table_to_dict(table)
        except NumericError as err:
          entry['regressions'][basis] = {'error': str(err)}
      if 'gross' in tables.get(name, {}) and 'net' in tables.get(name, {}):
        entry['alpha_gap'] = alpha_gap(tables[name]['gross'],
                                       tables[name]['net'])
      try:
        portfolio_tables[name] = portfolio_regression_table(
            factor, aux, 'ff6', cfg.cov_type, cfg.nw_lags)
      except NumericError as err:
        LOGGER.warning('%s: no portfolio regressions (%s)', name, err)
      summary[name] = entry

    calendar = next(iter(factors.values())).calendar
    for col in FACTOR_COLUMNS:
      named_returns[col] = aux.factor_returns[col].reindex(calendar)
    defined = {}
    for name, series in named_returns.items():
      try:
        perf_stats(series)
        defined[name] = series
      except NumericError as err:
        LOGGER.info('%s left out of the risk-return table: %s', name, err)
    risk_return = risk_return_table(defined)

    by_estimator = {
        str(cfg.beta.kind): {name: f.gross for name, f in factors.items()}
    }
    for kind, runs in alt.items():
      by_estimator[kind] = {name: f.gross for name, f in runs.items()}
    sharpe = exports.sharpe_by_estimator(by_estimator)

    data = self.get(Stage.DATA)
    report = {
        'manifest': {
            'version': BADBETA_VERSION,
            'config': self.config.raw,
            'input_hashes': self.input_hashes(),
            'dataset_checksum': dataset_checksum(data['dataset']),
            'n_assets': len(data['dataset'].assets),
            'n_months': len(data['dataset'].calendar.monthly_dates)
        },
        'factors': summary,
        'risk_return': risk_return.to_dict(orient='index'),
        'sharpe_by_estimator': sharpe.to_dict(orient='index'),
        'drop_report': data['dataset'].drop_report
    }
    return {
        'report': json_safe(report),
        'tables': tables,
        'portfolio_tables': portfolio_tables,
        'risk_return': risk_return,
        'sharpe': sharpe,
        'cumulative': exports.cumulative_frame(
            {k: v for k, v in named_returns.items() if k in defined})
    }

  #stage exports

  def write_data(self, value: Dict[str, Any]) -> List[str]:
    """drop report of the alignment"""
    path = exports.write_json(json_safe(value['dataset'].drop_report),
                              self._path('drop_report.json'))
    return [path]

  def write_news(self, news) -> List[str]:
    """news.csv"""
    path = self._path('news.csv')
    write_news(news, path)
    return [path]

  def write_betas(self, panels: Dict[str, Any]) -> List[str]:
    """one CSV per beta panel and the per-firm averages"""
    paths = []
    for key in ('signal', 'cf', 'dr'):
      path = self._path(f"{panels[key].name}.csv")
      write_beta_panel(panels[key], path)
      paths.append(path)
    for panel in panels['alt'].values():
      path = self._path(f"{panel.name}.csv")
      write_beta_panel(panel, path)
      paths.append(path)
    paths.append(
        exports.write_frame(
            exports.firm_beta_frame(panels['signal'], panels['cf']),
            self._path('firm_betas.csv')))
    return paths

  def write_costs(self, costs: CostPanel) -> List[str]:
    """costs.csv"""
    path = self._path('costs.csv')
    write_cost_panel(costs, path)
    return [path]

  def write_factor(self, value: Dict[str, Any]) -> List[str]:
    """factor series, leg betas, leverage and per-portfolio statistics"""
    factors: Dict[str, FactorSeries] = value['factors']
    costs = self.get(Stage.COSTS)
    paths = []
    for name, factor in factors.items():
      path = self._path(f"factor_{name}.csv")
      write_factor(factor, path)
      paths.append(path)
      stats = exports.portfolio_stats_table(factor,
                                            bucket_half_spreads(factor, costs))
      paths.append(
          exports.write_frame(stats, self._path(f"portfolio_stats_{name}.csv")))
    paths.append(
        exports.write_frame(exports.leg_beta_frame(factors),
                            self._path('leg_betas.csv')))
    paths.append(
        exports.write_frame(exports.leg_beta_summary(factors),
                            self._path('leg_beta_summary.csv')))
    paths.append(
        exports.write_frame(exports.leverage_frame(factors),
                            self._path('leverage.csv')))
    return paths

  def write_eval(self, value: Dict[str, Any]) -> List[str]:
    """regression tables, risk-return, cumulative curves and report.json"""
    paths = list(
        exports.write_regression_tables(value['tables'],
                                        self.out_dir).values())
    for name, frame in value['portfolio_tables'].items():
      paths.append(
          exports.write_frame(frame,
                              self._path(f"portfolio_regressions_{name}.csv")))
    paths.append(
        exports.write_frame(value['risk_return'], self._path('risk_return.csv')))
    paths.append(
        exports.write_frame(value['sharpe'],
                            self._path('sharpe_by_estimator.csv')))
    paths.append(
        exports.write_frame(value['cumulative'],
                            self._path('cumulative_returns.csv')))
    report = dict(value['report'])
    report['generated_at'] = datetime.now(timezone.utc).isoformat()
    paths.append(exports.write_json(report, self._path(REPORT_NAME)))
    return paths

