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
"""Custom errors module"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class CustomError(Exception):
  """Custom exception class, carries optional module/date/asset context"""
  exit_code: int = 1

  def __init__(self,
               message: str,
               module: Optional[str] = None,
               date: Optional[Any] = None,
               asset: Optional[str] = None):
    self.message = message
    self.module = module
    self.date = date
    self.asset = asset
    super().__init__(self.message)

  def context(self) -> str:
    """render the context fields that are set"""
    parts = []
    if self.module:
      parts.append(f"module={self.module}")
    if self.date is not None:
      parts.append(f"date={str(self.date)[:10]}")
    if self.asset is not None:
      parts.append(f"asset={self.asset}")
    return ', '.join(parts)

  def __str__(self) -> str:
    ctx = self.context()
    if ctx:
      return f"{self.message} [{ctx}]"
    return self.message


class ConfigError(CustomError):
  """Invalid run or generator configuration"""
  exit_code = EXIT_CONFIG


class DataError(CustomError):
  """Input data could not be loaded or aligned"""
  exit_code = EXIT_DATA


class ParseError(DataError):
  """Malformed row in an input file"""

  def __init__(self, message: str, line: Optional[int] = None, **kwargs):
    self.line = line
    if line is not None:
      message = f"{message} (line {line})"
    super().__init__(message, **kwargs)


class SchemaError(DataError):
  """Header, ordering or duplicate key violation"""


class ValidationError(ParseError):
  """Value outside its admissible range"""


class AlignmentError(DataError):
  """Inputs share no common calendar or universe"""


class NumericError(CustomError):
  """Estimation could not produce a defined result"""
  exit_code = EXIT_NUMERIC


class InsufficientDataError(NumericError):
  """Too few observations for the requested window"""


class NonStationaryError(NumericError):
  """Spectral radius of rho * gamma is not below one"""

  def __init__(self, message: str, radius: float, **kwargs):
    self.radius = radius
    super().__init__(f"{message} (spectral radius {radius:.6f})", **kwargs)


class SingularFitError(NumericError):
  """Regressor matrix is rank deficient"""


class UndefinedBetaError(NumericError):
  """Beta undefined: zero variance, zero correlation or collinear regressors"""


class InsufficientBreadthError(NumericError):
  """Too few eligible assets in the cross-section"""


class EmptyLegError(NumericError):
  """A long or short leg has no constituents"""


class LeverageUndefinedError(NumericError):
  """Non positive leg beta, leverage undefined"""


class CollinearityError(NumericError):
  """Factor regressors are not of full column rank"""

  def __init__(self, message: str, columns=None, **kwargs):
    self.columns = list(columns or [])
    if self.columns:
      message = f"{message}: {', '.join(self.columns)}"
    super().__init__(message, **kwargs)


class SharpeUndefinedError(NumericError):
  """Return series has zero variance"""
