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
"""! @brief Script to run the backtest pipeline, single stages, the synthetic
dataset writer or configuration checks"""

import logging
import sys
from typing import List, Optional

from badbeta.custom_errors import EXIT_OK, ConfigError, CustomError
from badbeta.data.align import load_dataset
from badbeta.data.synthetic import generate_synthetic, write_dataset
from badbeta.parse_args import args_to_overrides, get_parser
from badbeta.pipeline import BadBetaPipeline
from badbeta.run_config import RunConfig
from badbeta.stages import Stage, Subcommand
from badbeta.utils.logger import setup_logger

LOGGER: logging.Logger = setup_logger('go_babb')


def cmd_run(config: RunConfig) -> int:
  """full pipeline, all exports plus report.json"""
  paths = BadBetaPipeline(config).run()
  LOGGER.info('Run finished: %u files in %s', len(paths), config.out_dir)
  return EXIT_OK


def cmd_stage(config: RunConfig, stage: str) -> int:
  """one stage, upstream computed or read from the cache"""
  paths = BadBetaPipeline(config).run_stage(Stage(stage))
  LOGGER.info('Stage %s finished: %u files in %s', stage, len(paths),
              config.out_dir)
  return EXIT_OK


def cmd_synth(config: RunConfig) -> int:
  """write the synthetic dataset of the config in the input schemas"""
  if config.synthetic is None:
    raise ConfigError("synth needs a synthetic section in the config",
                      module='cli')
  dataset, truth = generate_synthetic(config.synthetic)
  write_dataset(dataset, truth, config.out_dir)
  return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
  """config checks, and schema checks of every input file"""
  if config.inputs is not None:
    dataset = load_dataset(config.inputs)
    LOGGER.info('Inputs valid: %u assets over %u months',
                len(dataset.assets), len(dataset.calendar.monthly_dates))
  else:
    LOGGER.info('Synthetic config valid: %u assets over %u months',
                config.synthetic.n_assets, config.synthetic.n_months)
  return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
  """Main function to start badbeta, returns the process exit code"""
  parser = get_parser()
  args = parser.parse_args(argv if argv is not None else sys.argv[1:])
  subcommand = Subcommand(args.subcommand)
  sub_args = getattr(args, subcommand.value)

  try:
    config = RunConfig.from_yaml(sub_args.config, args_to_overrides(sub_args))
    if subcommand == Subcommand.RUN:
      return cmd_run(config)
    if subcommand == Subcommand.STAGE:
      return cmd_stage(config, sub_args.name)
    if subcommand == Subcommand.SYNTH:
      return cmd_synth(config)
    return cmd_validate(config)
  except CustomError as err:
    LOGGER.error('%s failed: %s', subcommand, err)
    return err.exit_code
  except KeyboardInterrupt:
    LOGGER.warning('Interrupt signal caught')
    return 1


if __name__ == '__main__':
  sys.exit(main())
