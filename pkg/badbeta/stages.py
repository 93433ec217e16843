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
"""Module that encapsulates the pipeline stages and subcommands of badbeta"""
from enum import Enum
from typing import List


#pylint: disable=too-few-public-methods
class Stage(str, Enum):
  """Enumerate pipeline stages, in execution order"""
  DATA: str = "data"
  NEWS: str = "news"
  BETAS: str = "betas"
  COSTS: str = "costs"
  FACTOR: str = "factor"
  EVAL: str = "eval"

  def __str__(self) -> str:
    return self.value

  def upstream(self) -> List['Stage']:
    """stages whose outputs this stage consumes"""
    return STAGE_DEPS[self]


class Subcommand(str, Enum):
  """Enumerate command line subcommands"""
  RUN: str = "run"
  STAGE: str = "stage"
  SYNTH: str = "synth"
  VALIDATE: str = "validate"

  def __str__(self) -> str:
    return self.value


STAGE_DEPS = {
    Stage.DATA: [],
    Stage.NEWS: [Stage.DATA],
    Stage.BETAS: [Stage.DATA, Stage.NEWS],
    Stage.COSTS: [Stage.DATA],
    Stage.FACTOR: [Stage.DATA, Stage.BETAS, Stage.COSTS],
    Stage.EVAL: [Stage.DATA, Stage.FACTOR],
}

#stages that may be requested with `stage <name>`
PUBLIC_STAGES = [
    Stage.NEWS.value, Stage.BETAS.value, Stage.FACTOR.value, Stage.COSTS.value,
    Stage.EVAL.value
]
