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
""" Module to centralize command line argument parsing """
from enum import Enum
from typing import Any, Dict, List, Optional

import jsonargparse

from badbeta.stages import PUBLIC_STAGES, Subcommand
from badbeta.utils.config_type import FactorScheme


class BadBetaArgs(Enum):
  """ Enumeration of all the common arguments supported by setup_arg_parser """
  CONFIG: str = 'config'
  OUT: str = 'out'
  SEED: str = 'seed'
  THREADS: str = 'threads'
  SCHEME: str = 'scheme'
  RETURNS: str = 'returns'


RUN_ARGS = [
    BadBetaArgs.CONFIG, BadBetaArgs.OUT, BadBetaArgs.SEED, BadBetaArgs.THREADS,
    BadBetaArgs.SCHEME, BadBetaArgs.RETURNS
]


def setup_arg_parser(desc: str,
                     arg_list: List[BadBetaArgs]) -> jsonargparse.ArgumentParser:
  """ function to aggregate common command line args """
  parser = jsonargparse.ArgumentParser(description=desc)

  if BadBetaArgs.CONFIG in arg_list:
    parser.add_argument('-c',
                        '--config',
                        type=str,
                        dest='config',
                        required=True,
                        help='Path to the YAML run configuration')
  if BadBetaArgs.OUT in arg_list:
    parser.add_argument('-o',
                        '--out',
                        type=str,
                        dest='out',
                        default=None,
                        help='Output directory, overrides output.dir')
  if BadBetaArgs.SEED in arg_list:
    parser.add_argument('--seed',
                        type=int,
                        dest='seed',
                        default=None,
                        help='Root random seed, overrides seed')
  if BadBetaArgs.THREADS in arg_list:
    parser.add_argument(
        '-t',
        '--threads',
        type=int,
        dest='threads',
        default=None,
        help='Worker processes, 0 means all cores. Defaults to BADBETA_THREADS')
  if BadBetaArgs.SCHEME in arg_list:
    parser.add_argument('--scheme',
                        type=str,
                        dest='scheme',
                        default=None,
                        choices=[sch.value for sch in FactorScheme],
                        help='Factors to construct')
  if BadBetaArgs.RETURNS in arg_list:
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--net',
                       dest='net',
                       action='store_true',
                       default=False,
                       help='Report net-of-cost returns only')
    group.add_argument('--gross',
                       dest='gross',
                       action='store_true',
                       default=False,
                       help='Report gross returns only')

  return parser


def get_parser() -> jsonargparse.ArgumentParser:
  """Top level parser with the run, stage, synth and validate subcommands"""
  parser = jsonargparse.ArgumentParser(
      description='Backtest the BAB and BABB factors')
  subcommands = parser.add_subcommands(required=True, dest='subcommand')

  subcommands.add_subcommand(
      Subcommand.RUN.value,
      setup_arg_parser('Execute the full pipeline', RUN_ARGS))

  stage_parser = setup_arg_parser('Execute one stage and emit its outputs',
                                  RUN_ARGS)
  stage_parser.add_argument('name',
                            type=str,
                            choices=PUBLIC_STAGES,
                            help='Stage to execute')
  subcommands.add_subcommand(Subcommand.STAGE.value, stage_parser)

  subcommands.add_subcommand(
      Subcommand.SYNTH.value,
      setup_arg_parser('Write a synthetic dataset to disk',
                       [BadBetaArgs.CONFIG, BadBetaArgs.OUT, BadBetaArgs.SEED]))

  subcommands.add_subcommand(
      Subcommand.VALIDATE.value,
      setup_arg_parser('Check the configuration and input schemas',
                       [BadBetaArgs.CONFIG]))
  return parser


def args_to_overrides(args: Any) -> Dict[str, Any]:
  """nested config overrides from the flags that were given"""
  overrides: Dict[str, Any] = {}
  out: Optional[str] = getattr(args, 'out', None)
  if out is not None:
    overrides['output'] = {'dir': out}
  if getattr(args, 'seed', None) is not None:
    overrides['seed'] = int(args.seed)
  if getattr(args, 'threads', None) is not None:
    overrides['threads'] = int(args.threads)
  if getattr(args, 'scheme', None) is not None:
    overrides['sort'] = {'scheme': args.scheme}
  if getattr(args, 'net', False):
    overrides['analytics'] = {'returns': 'net'}
  elif getattr(args, 'gross', False):
    overrides['analytics'] = {'returns': 'gross'}
  return overrides
