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
"""Typed run configuration built from a YAML file and command line overrides"""

import copy
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from badbeta.betas.beta_spec import BetaEstimatorSpec
from badbeta.custom_errors import ConfigError
from badbeta.data.synthetic import SynthConfig
from badbeta.tcost.cost_panel import CostSettings
from badbeta.utils.config_type import (BetaKind, CovType, FactorScheme, LegMode,
                                       ReturnBasis)
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (COST_WINDOW_MONTHS, DEFAULT_RHO,
                                    GIBBS_BURN, GIBBS_SWEEPS,
                                    MIN_ASSETS_DOUBLE, MIN_ASSETS_TERCILE,
                                    MIN_COST_COMPONENTS, MIN_VAR_OBS,
                                    NEWEY_WEST_LAGS, VOV_K)
from badbeta.yaml_parser import flatten_yaml, merge_yaml, parse_yaml

LOGGER = setup_logger('run_config')

INPUT_KEYS = ['monthly', 'daily', 'states', 'aux']
OPTIONAL_INPUT_KEYS = ['market_daily']

DEFAULT_CONFIG: Dict[str, Any] = {
    'var': {
        'rho': DEFAULT_RHO,
        'min_obs': MIN_VAR_OBS,
        'standardize': False,
        'first_estimation_date': None
    },
    'beta': BetaEstimatorSpec().to_dict(),
    'sort': {
        'scheme': 'both',
        'conditional': False,
        'babb_legs': 'cell',
        'min_assets_tercile': MIN_ASSETS_TERCILE,
        'min_assets_double': MIN_ASSETS_DOUBLE
    },
    'tcost': {
        'enabled': True,
        'window_months': COST_WINDOW_MONTHS,
        'refresh_months': 1,
        'gibbs_sweeps': GIBBS_SWEEPS,
        'gibbs_burn': GIBBS_BURN,
        'vov_k': VOV_K,
        'leverage_scaled': True,
        'min_components': MIN_COST_COMPONENTS
    },
    'analytics': {
        'cov_type': 'hc0',
        'nw_lags': NEWEY_WEST_LAGS,
        'returns': 'both'
    },
    'report': {
        'estimators': []
    },
    'filters': {
        'min_price': 0.0
    },
    'output': {
        'dir': 'badbeta_out'
    },
    'seed': 0,
    'threads': None,
}

#sections whose content is validated by their own builders
FREE_SECTIONS = ('inputs', 'synthetic')


def _check_known(config: Dict[str, Any]) -> None:
  """every key must exist in the defaults, free sections excepted"""
  known = set(flatten_yaml(DEFAULT_CONFIG))
  known.update(DEFAULT_CONFIG)
  unknown = []
  for key in flatten_yaml(config):
    if key.split('.')[0] in FREE_SECTIONS:
      continue
    if key not in known:
      unknown.append(key)
  if unknown:
    raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}",
                      module='cli')


@dataclass
class RunConfig:
  """Resolved configuration of one run"""
  #pylint: disable=too-many-instance-attributes
  raw: Dict[str, Any]
  inputs: Optional[Dict[str, str]]
  synthetic: Optional[SynthConfig]
  rho: float
  var_min_obs: int
  var_standardize: bool
  first_estimation_date: Optional[str]
  beta: BetaEstimatorSpec
  scheme: FactorScheme
  conditional: bool
  babb_legs: LegMode
  min_assets_tercile: int
  min_assets_double: int
  tcost_enabled: bool
  cost: CostSettings
  leverage_scaled: bool
  cov_type: CovType
  nw_lags: int
  returns: ReturnBasis
  min_price: float
  out_dir: str
  seed: int
  threads: Optional[int]
  report_estimators: List[BetaKind] = field(default_factory=list)

  @property
  def bad_beta(self) -> BetaEstimatorSpec:
    """cash-flow beta with the same bad beta window"""
    return self.beta.with_kind(BetaKind.cf)

  @property
  def good_beta(self) -> BetaEstimatorSpec:
    """discount-rate beta with the same window"""
    return self.beta.with_kind(BetaKind.dr)

  @classmethod
  def from_yaml(cls,
                path: str,
                overrides: Optional[Dict[str, Any]] = None) -> 'RunConfig':
    """parse_yaml then from_dict"""
    return cls.from_dict(parse_yaml(path), overrides)

  @classmethod
  def from_dict(cls,
                config: Dict[str, Any],
                overrides: Optional[Dict[str, Any]] = None) -> 'RunConfig':
    """! @brief Merge over the defaults and validate
      @param overrides nested values from command line flags, applied last
    """
    #pylint: disable=too-many-locals
    _check_known(config)
    merged = merge_yaml(copy.deepcopy(DEFAULT_CONFIG), config)
    if overrides:
      merged = merge_yaml(merged, overrides)

    has_inputs = merged.get('inputs') is not None
    has_synth = merged.get('synthetic') is not None
    if has_inputs == has_synth:
      raise ConfigError('exactly one of inputs and synthetic must be given',
                        module='cli')
    seed = int(merged['seed'])
    if seed < 0:
      raise ConfigError('seed must be non negative', module='cli')

    inputs = None
    synthetic = None
    if has_inputs:
      inputs = _resolve_inputs(merged['inputs'])
    else:
      params = dict(merged['synthetic'])
      params.setdefault('seed', seed)
      merged['synthetic'] = params
      synthetic = SynthConfig.from_dict(params)
      synthetic.validate()

    var, sort, tcost = merged['var'], merged['sort'], merged['tcost']
    analytics = merged['analytics']
    try:
      beta = BetaEstimatorSpec(**merged['beta'])
      scheme = FactorScheme(str(sort['scheme']))
      babb_legs = LegMode(str(sort['babb_legs']))
      cov_type = CovType(str(analytics['cov_type']))
      returns = ReturnBasis(str(analytics['returns']))
      estimators = [BetaKind(str(k)) for k in merged['report']['estimators']]
    except (ValueError, TypeError) as err:
      raise ConfigError(f"invalid option: {err}", module='cli') from err
    if not 0.0 < float(var['rho']) < 1.0:
      raise ConfigError(f"rho {var['rho']} must lie in (0, 1)", module='cli')
    if int(tcost['gibbs_burn']) >= int(tcost['gibbs_sweeps']):
      raise ConfigError('gibbs_burn must be below gibbs_sweeps', module='cli')
    threads = merged['threads']

    cfg = cls(raw=merged,
              inputs=inputs,
              synthetic=synthetic,
              rho=float(var['rho']),
              var_min_obs=int(var['min_obs']),
              var_standardize=bool(var['standardize']),
              first_estimation_date=var['first_estimation_date'],
              beta=beta,
              scheme=scheme,
              conditional=bool(sort['conditional']),
              babb_legs=babb_legs,
              min_assets_tercile=int(sort['min_assets_tercile']),
              min_assets_double=int(sort['min_assets_double']),
              tcost_enabled=bool(tcost['enabled']),
              cost=CostSettings(window_months=int(tcost['window_months']),
                                refresh_months=int(tcost['refresh_months']),
                                sweeps=int(tcost['gibbs_sweeps']),
                                burn=int(tcost['gibbs_burn']),
                                vov_k=float(tcost['vov_k']),
                                min_components=int(tcost['min_components']),
                                seed=seed),
              leverage_scaled=bool(tcost['leverage_scaled']),
              cov_type=cov_type,
              nw_lags=int(analytics['nw_lags']),
              returns=returns,
              min_price=float(merged['filters']['min_price']),
              out_dir=os.path.expanduser(str(merged['output']['dir'])),
              seed=seed,
              threads=None if threads is None else int(threads),
              report_estimators=estimators)
    LOGGER.debug('Run config: %s', flatten_yaml(merged))
    return cfg

  def section(self, *names: str) -> Dict[str, Any]:
    """raw sections by name, for manifests and cache keys"""
    return {name: self.raw.get(name) for name in names}


def _resolve_inputs(inputs: Dict[str, Any]) -> Dict[str, str]:
  """required paths present and existing"""
  if not isinstance(inputs, dict):
    raise ConfigError('inputs must be a section of file paths', module='cli')
  unknown = set(inputs) - set(INPUT_KEYS) - set(OPTIONAL_INPUT_KEYS)
  if unknown:
    raise ConfigError(f"unknown input keys: {sorted(unknown)}", module='cli')
  resolved = {}
  for key in INPUT_KEYS + OPTIONAL_INPUT_KEYS:
    if inputs.get(key) is None:
      if key in INPUT_KEYS:
        raise ConfigError(f"inputs.{key} is required", module='cli')
      continue
    path = os.path.expanduser(str(inputs[key]))
    if not os.path.isfile(path):
      raise ConfigError(f"inputs.{key}: file not found: {path}", module='cli')
    resolved[key] = path
  return resolved
