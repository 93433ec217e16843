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
"""Tercile and 3x3 portfolio sorts on beta signals"""

from dataclasses import dataclass, field
from typing import Iterable, List

import numpy as np
import pandas as pd

from badbeta.custom_errors import InsufficientBreadthError
from badbeta.utils.config_type import SortScheme
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import MIN_ASSETS_DOUBLE, MIN_ASSETS_TERCILE

LOGGER = setup_logger('sorts')

N_GROUPS = 3


@dataclass(frozen=True)
class SortAssignment:
  """Bucket label and within-bucket equal weight of every eligible asset.
  Double sort label = 3 * (beta tercile - 1) + bad beta tercile, so 1 is
  low/low and 9 is high/high."""
  date: pd.Timestamp
  scheme: SortScheme
  buckets: pd.Series
  weights: pd.Series
  empty_cells: List[int] = field(default_factory=list)
  degenerate: bool = False

  @property
  def labels(self) -> List[int]:
    """all labels of the scheme"""
    if self.scheme == SortScheme.tercile:
      return list(range(1, N_GROUPS + 1))
    return list(range(1, N_GROUPS * N_GROUPS + 1))

  def members(self, labels: Iterable[int]) -> List[str]:
    """assets in any of the given buckets, in asset order"""
    labels = list(labels)
    return list(self.buckets.index[self.buckets.isin(labels)])

  def sizes(self) -> pd.Series:
    """constituent count per label, zero for empty buckets"""
    return self.buckets.value_counts().reindex(self.labels,
                                               fill_value=0).sort_index()


def tercile_labels(signal: pd.Series) -> pd.Series:
  """1..3 by rank; ties go to the lower asset identifier first"""
  frame = pd.DataFrame({'value': signal.values, 'asset': signal.index})
  order = frame.sort_values(['value', 'asset'], kind='mergesort').index
  ranks = np.empty(len(signal), dtype=int)
  ranks[order] = np.arange(len(signal))
  labels = (N_GROUPS * ranks) // len(signal) + 1
  return pd.Series(labels, index=signal.index)


def _equal_weights(buckets: pd.Series) -> pd.Series:
  sizes = buckets.map(buckets.value_counts())
  return 1.0 / sizes.astype(float)


def tercile_sort(betas: pd.Series,
                 date=None,
                 min_assets: int = MIN_ASSETS_TERCILE) -> SortAssignment:
  """Univariate tercile sort of the defined cross-section"""
  betas = betas.dropna().sort_index()
  if len(betas) < min_assets:
    raise InsufficientBreadthError(
        f"{len(betas)} eligible assets, tercile sort needs {min_assets}",
        module='portfolio',
        date=date)
  degenerate = betas.nunique() == 1
  if degenerate:
    LOGGER.warning('Degenerate tercile sort on %s: all %u betas equal', date,
                   len(betas))
  buckets = tercile_labels(betas)
  return SortAssignment(date=pd.Timestamp(date) if date is not None else None,
                        scheme=SortScheme.tercile,
                        buckets=buckets,
                        weights=_equal_weights(buckets),
                        degenerate=degenerate)


def double_sort_3x3(betas: pd.Series,
                    bad_betas: pd.Series,
                    date=None,
                    min_assets: int = MIN_ASSETS_DOUBLE,
                    conditional: bool = False) -> SortAssignment:
  """! @brief 3x3 sort on beta and bad beta
    @param conditional sort bad betas within each beta tercile instead of
    over the full cross-section
  """
  both = pd.concat([betas.rename('beta'), bad_betas.rename('bad')],
                   axis=1).dropna().sort_index()
  if len(both) < min_assets:
    raise InsufficientBreadthError(
        f"{len(both)} assets with both signals, double sort needs {min_assets}",
        module='portfolio',
        date=date)
  rows = tercile_labels(both['beta'])
  if conditional:
    cols = pd.Series(0, index=both.index)
    for row in range(1, N_GROUPS + 1):
      inside = rows.index[rows == row]
      if len(inside):
        cols.loc[inside] = tercile_labels(both.loc[inside, 'bad'])
  else:
    cols = tercile_labels(both['bad'])
  buckets = N_GROUPS * (rows - 1) + cols
  present = set(buckets.unique())
  empty = [lab for lab in range(1, N_GROUPS * N_GROUPS + 1) if lab not in present]
  if empty:
    LOGGER.debug('Double sort on %s: empty cells %s', date, empty)
  return SortAssignment(date=pd.Timestamp(date) if date is not None else None,
                        scheme=SortScheme.double3x3,
                        buckets=buckets.astype(int),
                        weights=_equal_weights(buckets),
                        empty_cells=empty,
                        degenerate=both['beta'].nunique() == 1 or
                        both['bad'].nunique() == 1)
