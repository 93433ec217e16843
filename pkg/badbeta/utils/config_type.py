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
"""Module that encapsulates the enumerated option types supported by badbeta"""
from enum import Enum


#pylint: disable=too-few-public-methods
class Frequency(Enum):
  """Sampling frequency of a return panel"""
  # pylint: disable=invalid-name
  monthly: str = "monthly"
  daily: str = "daily"

  def __str__(self):
    return self.value


class BetaKind(Enum):
  """Enumerate supported beta estimators"""
  # pylint: disable=invalid-name
  fp: str = "fp"
  ols: str = "ols"
  ols3d: str = "ols3d"
  dimson: str = "dimson"
  welch: str = "welch"
  vasicek: str = "vasicek"
  standard: str = "standard"
  cf: str = "cf"
  dr: str = "dr"

  def __str__(self):
    return self.value

  def is_daily(self) -> bool:
    """estimators computed on daily returns"""
    return self not in (BetaKind.cf, BetaKind.dr)


class SortScheme(Enum):
  """Univariate tercile or independent/conditional 3x3 double sort"""
  # pylint: disable=invalid-name
  tercile: str = "tercile"
  double3x3: str = "double3x3"

  def __str__(self):
    return self.value


class FactorScheme(Enum):
  """Which factors a run constructs"""
  # pylint: disable=invalid-name
  bab: str = "bab"
  babb: str = "babb"
  both: str = "both"

  def __str__(self):
    return self.value

  def factors(self):
    """factor names covered by this scheme"""
    if self == FactorScheme.both:
      return ['bab', 'babb']
    return [self.value]


class LegMode(Enum):
  """BABB legs: extreme cells only or full extreme beta rows"""
  # pylint: disable=invalid-name
  cell: str = "cell"
  union: str = "union"

  def __str__(self):
    return self.value


class CovType(Enum):
  """Standard error estimator for factor regressions"""
  # pylint: disable=invalid-name
  plain: str = "plain"
  hc0: str = "hc0"
  newey_west: str = "newey_west"

  def __str__(self):
    return self.value


class ReturnBasis(Enum):
  """Which factor return series enter the report"""
  # pylint: disable=invalid-name
  gross: str = "gross"
  net: str = "net"
  both: str = "both"

  def __str__(self):
    return self.value

  def bases(self):
    """return series names covered"""
    if self == ReturnBasis.both:
      return ['gross', 'net']
    return [self.value]
