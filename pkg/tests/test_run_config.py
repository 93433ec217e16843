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

import pytest

sys.path.append("../badbeta")
sys.path.append("badbeta")

this_path = os.path.dirname(__file__)

from badbeta.custom_errors import EXIT_CONFIG, ConfigError
from badbeta.parse_args import args_to_overrides, get_parser
from badbeta.run_config import RunConfig
from badbeta.utils.config_type import (BetaKind, CovType, FactorScheme,
                                       ReturnBasis)
from utils import SMALL_YAML, make_out_dir, small_run_dict


def test_from_yaml():
  config = RunConfig.from_yaml(SMALL_YAML)
  assert config.inputs is None
  assert config.synthetic.n_assets == 60
  #the synthetic seed falls back to the root seed
  assert config.synthetic.seed == 11
  assert config.seed == 11
  assert config.scheme == FactorScheme.both
  assert config.cov_type == CovType.hc0
  assert config.returns == ReturnBasis.both
  assert config.beta.kind == BetaKind.fp
  assert config.beta.vol_days == 63
  assert config.bad_beta.kind == BetaKind.cf
  assert config.good_beta.kind == BetaKind.dr
  assert config.bad_beta.cf_months == 36
  assert config.cost.sweeps == 60 and config.cost.burn == 20
  assert config.cost.seed == 11
  assert config.report_estimators == [BetaKind.ols, BetaKind.dimson]
  assert config.out_dir == os.path.expanduser('~/badbeta_out/sample_small')


def test_overrides():
  parser = get_parser()
  args = parser.parse_args([
      'run', '-c', SMALL_YAML, '--net', '--seed', '3', '--scheme', 'bab',
      '-o', '/tmp/badbeta_override'
  ])
  assert args.subcommand == 'run'
  overrides = args_to_overrides(args.run)
  assert overrides == {
      'output': {
          'dir': '/tmp/badbeta_override'
      },
      'seed': 3,
      'sort': {
          'scheme': 'bab'
      },
      'analytics': {
          'returns': 'net'
      }
  }
  config = RunConfig.from_yaml(SMALL_YAML, overrides)
  assert config.seed == 3
  assert config.synthetic.seed == 3
  assert config.scheme == FactorScheme.bab
  assert config.returns == ReturnBasis.net
  assert config.out_dir == '/tmp/badbeta_override'

  args = parser.parse_args(['stage', 'betas', '-c', SMALL_YAML])
  assert args.subcommand == 'stage'
  assert args.stage.name == 'betas'
  assert args_to_overrides(args.stage) == {}


def test_exactly_one_source():
  out_dir = make_out_dir('config')
  run = small_run_dict(out_dir)
  run['inputs'] = {'monthly': 'monthly.csv'}
  with pytest.raises(ConfigError):
    RunConfig.from_dict(run)

  run = small_run_dict(out_dir)
  del run['synthetic']
  with pytest.raises(ConfigError):
    RunConfig.from_dict(run)


def test_missing_input_file():
  out_dir = make_out_dir('config')
  paths = {}
  for name in ('monthly', 'daily', 'states', 'aux'):
    paths[name] = os.path.join(out_dir, f"{name}.csv")
    if name != 'daily':
      with open(paths[name], 'w', encoding='utf8') as fout:
        fout.write('date\n')
  run = small_run_dict(out_dir)
  del run['synthetic']
  run['inputs'] = paths
  with pytest.raises(ConfigError) as err:
    RunConfig.from_dict(run)
  assert paths['daily'] in str(err.value)
  assert err.value.exit_code == EXIT_CONFIG


def test_invalid_values():
  out_dir = make_out_dir('config')
  bad_runs = [
      small_run_dict(out_dir, var={'rho': 1.0}),
      small_run_dict(out_dir, tcost={'gibbs_burn': 60}),
      small_run_dict(out_dir, sort={'scheme': 'momentum'}),
      small_run_dict(out_dir, analytics={'cov_type': 'hc3'}),
      small_run_dict(out_dir, beta={'shrink_weight': 1.5}),
      small_run_dict(out_dir, seed=-1),
      small_run_dict(out_dir, tcost={'spread_model': 'roll'}),
      small_run_dict(out_dir, synthetic={'n_assets': 0}),
  ]
  for run in bad_runs:
    with pytest.raises(ConfigError):
      RunConfig.from_dict(run)


def test_sections():
  out_dir = make_out_dir('config')
  config = RunConfig.from_dict(small_run_dict(out_dir))
  sections = config.section('sort', 'tcost')
  assert sections['sort']['min_assets_double'] == 45
  assert sections['tcost']['refresh_months'] == 12
  assert config.threads == 1
