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
"""Per asset-month effective half-spreads and the factor cost drag"""

from dataclasses import dataclass
from itertools import islice
from typing import (TYPE_CHECKING, Any, Dict, Iterator, List, Optional,
                    Tuple)

import numpy as np
import pandas as pd

from badbeta.custom_errors import ConfigError, NumericError
from badbeta.data.panels import AlignedDataset
from badbeta.tcost.spreads import (abdi_ranaldo_spread, corwin_schultz_spread,
                                   gibbs_converged, roll_gibbs_batch,
                                   vov_spread)
from badbeta.utils.logger import setup_logger
from badbeta.utils.metadata import (COST_COMPONENTS, COST_HEADER,
                                    COST_WINDOW_MONTHS, DATE_FORMAT,
                                    GIBBS_BLOCK, GIBBS_BURN, GIBBS_MIN_OBS,
                                    GIBBS_SWEEPS, MIN_COST_COMPONENTS, VOV_K)
from badbeta.utils.utility import (derive_seed, parallel_map, resolve_threads,
                                   split_packets)

if TYPE_CHECKING:
  from badbeta.portfolio.backtest import FactorSeries

LOGGER = setup_logger('cost_panel')


@dataclass(frozen=True)
class CostPanel:
  """half_spread = mean of the available full-spread components / 2"""
  calendar: pd.DatetimeIndex
  assets: List[str]
  half_spread: pd.DataFrame
  components: Dict[str, pd.DataFrame]
  mask: pd.DataFrame

  def masked(self) -> pd.DataFrame:
    """half spreads with undefined cells as NaN"""
    return self.half_spread.where(self.mask)

  @classmethod
  def zeros(cls, calendar: pd.DatetimeIndex, assets: List[str]) -> 'CostPanel':
    """cost-free panel"""
    zero = pd.DataFrame(0.0, index=calendar, columns=assets)
    return cls(calendar=calendar,
               assets=list(assets),
               half_spread=zero,
               components={name: zero.copy() for name in COST_COMPONENTS},
               mask=zero == 0.0)


@dataclass(frozen=True)
class CostSettings:
  """estimation settings shared by all workers"""
  window_months: int = COST_WINDOW_MONTHS
  refresh_months: int = 1
  sweeps: int = GIBBS_SWEEPS
  burn: int = GIBBS_BURN
  vov_k: float = VOV_K
  min_components: int = MIN_COST_COMPONENTS
  seed: int = 0


def combine_components(components: Dict[str, pd.DataFrame],
                       min_components: int = MIN_COST_COMPONENTS
                      ) -> Tuple[pd.DataFrame, pd.DataFrame]:
  """(half_spread, mask) from full-spread component panels"""
  stack = np.stack([components[name].values for name in COST_COMPONENTS])
  count = np.isfinite(stack).sum(axis=0)
  total = np.where(np.isfinite(stack), stack, 0.0).sum(axis=0)
  mean = total / np.maximum(count, 1)
  ref = components[COST_COMPONENTS[0]]
  mask = pd.DataFrame(count >= min_components,
                      index=ref.index,
                      columns=ref.columns)
  half = pd.DataFrame(np.where(mask.values, mean / 2.0, 0.0),
                      index=ref.index,
                      columns=ref.columns)
  return half, mask


def _gibbs_tasks(
    settings: CostSettings, assets: List[str], stamps: List[str],
    windows: List[Tuple[int, int]],
    close: np.ndarray) -> Iterator[Tuple[int, int, np.ndarray, int]]:
  """(month, column, log closes, seed) of every Gibbs refresh in a packet"""
  for j, asset in enumerate(assets):
    for i, (start, end) in enumerate(windows):
      if end < 0 or i % settings.refresh_months:
        continue
      c_w = close[start:end + 1, j]
      c_ok = c_w[np.isfinite(c_w) & (c_w > 0)]
      if len(c_ok) >= GIBBS_MIN_OBS:
        yield (i, j, np.log(c_ok),
               derive_seed(settings.seed, 'gibbs', asset, stamps[i]))


def _gibbs_component(settings: CostSettings, assets: List[str],
                     stamps: List[str], windows: List[Tuple[int, int]],
                     close: np.ndarray, width: int) -> Tuple[np.ndarray, int]:
  """full Gibbs spreads, re-sampled every refresh_months and carried
  forward; chains run GIBBS_BLOCK at a time"""
  n_months = len(windows)
  fresh = np.full((n_months, len(assets)), np.nan)
  tasks = _gibbs_tasks(settings, assets, stamps, windows, close)
  unconverged = 0
  while True:
    block = list(islice(tasks, GIBBS_BLOCK))
    if not block:
      break
    draws = roll_gibbs_batch([task[2] for task in block], settings.sweeps,
                             [np.random.default_rng(task[3]) for task in block],
                             width)
    for k, (i, j, _, _) in enumerate(block):
      if not gibbs_converged(draws[:, k, :], settings.burn):
        unconverged += 1
      fresh[i, j] = 2.0 * float(draws[settings.burn:, k, 0].mean())

  out = np.full((n_months, len(assets)), np.nan)
  last = np.full(len(assets), np.nan)
  for i, (_, end) in enumerate(windows):
    if end < 0:
      continue
    if i % settings.refresh_months == 0:
      last = fresh[i]
    out[i] = last
  return out, unconverged


def _cost_packet(args) -> Dict[str, Any]:
  """component spreads for a packet of assets"""
  settings, assets, stamps, windows, width, close, high, low, volume = args
  n_months = len(windows)
  out = {name: np.full((n_months, len(assets)), np.nan)
         for name in COST_COMPONENTS}
  out['gibbs'], unconverged = _gibbs_component(settings, assets, stamps,
                                               windows, close, width)
  with np.errstate(invalid='ignore', divide='ignore'):
    returns = close[1:] / close[:-1] - 1.0
  returns = np.vstack([np.full((1, close.shape[1]), np.nan), returns])
  for j in range(len(assets)):
    for i, (start, end) in enumerate(windows):
      if end < 0:
        continue
      span = slice(start, end + 1)
      c_w, h_w, l_w = close[span, j], high[span, j], low[span, j]
      for name, func, fargs in (
          ('cs', corwin_schultz_spread, (h_w, l_w)),
          ('chl', abdi_ranaldo_spread, (c_w, h_w, l_w)),
          ('vov', vov_spread,
           (volume[span, j], c_w, returns[span, j], settings.vov_k))):
        try:
          out[name][i, j] = func(*fargs)
        except NumericError:
          pass
  out['unconverged'] = unconverged
  return out


def build_cost_panel(dataset: AlignedDataset,
                     settings: Optional[CostSettings] = None,
                     threads: Optional[int] = 1) -> CostPanel:
  """! @brief Each estimator on a trailing window of daily data per month
    @param settings window, Gibbs chain length and refresh interval; the
    Gibbs estimate is re-sampled every refresh_months and carried between
  """
  settings = settings or CostSettings()
  if settings.refresh_months < 1 or settings.window_months < 1:
    raise ConfigError("cost windows must be positive", module="tcost")
  daily = dataset.daily
  calendar = dataset.calendar.monthly_dates
  ends = dataset.calendar.month_end_positions()
  windows = []
  for i, end in enumerate(ends):
    first = i - settings.window_months
    start = ends[first] + 1 if first >= 0 and ends[first] >= 0 else 0
    windows.append((int(start), int(end)))
  stamps = [d.strftime(DATE_FORMAT) for d in calendar]
  width = max([end - start + 1 for start, end in windows if end >= 0] or [3])

  mask = daily.mask.values
  close = np.where(mask, daily.close.values, np.nan)
  high = np.where(mask, daily.high.values, np.nan)
  low = np.where(mask, daily.low.values, np.nan)
  volume = np.where(mask, daily.volume.values, np.nan)
  assets = list(daily.assets)

  workers = resolve_threads(threads)
  pack_sz = max(1, int(np.ceil(len(assets) / workers)))
  packets = [(settings, [assets[c] for c in cols], stamps, windows, width,
              close[:, cols], high[:, cols], low[:, cols], volume[:, cols])
             for cols in split_packets(range(len(assets)), pack_sz)]
  results = parallel_map(_cost_packet, packets, workers)

  components = {
      name: pd.DataFrame(np.column_stack([res[name] for res in results]),
                         index=calendar,
                         columns=assets).reindex(columns=dataset.assets)
      for name in COST_COMPONENTS
  }
  half, cell_mask = combine_components(components, settings.min_components)
  unconverged = sum(res['unconverged'] for res in results)
  if unconverged:
    LOGGER.info('Gibbs: %u asset-months with posterior stdev above mean',
                unconverged)
  panel = CostPanel(calendar=calendar,
                    assets=list(dataset.assets),
                    half_spread=half,
                    components=components,
                    mask=cell_mask)
  LOGGER.info('Cost panel: %.1f%% cells defined, mean half-spread %.5f',
              100.0 * float(cell_mask.values.mean()),
              float(panel.masked().stack().mean()))
  return panel


def cost_drag(factor: 'FactorSeries',
              cost_panel: CostPanel,
              leverage_scaled: bool = True) -> Tuple[pd.Series, pd.Series]:
  """! @brief Cost of the rebalancing trades at each formation month
    @return (drag, net) on the factor calendar
  """
  spreads = cost_panel.masked()
  drag = pd.Series(np.nan, index=factor.calendar, name='cost_drag')
  fallbacks = 0
  for date, legs in factor.trades.items():
    formed = factor.formation.loc[date]
    row = spreads.loc[formed] if formed in spreads.index else pd.Series(
        dtype=float)
    median = row.median()
    if not np.isfinite(median):
      median = 0.0
      LOGGER.warning('No half-spreads on %s, trades charged at zero',
                     formed.strftime(DATE_FORMAT))
    total = 0.0
    for leg, sizes in legs.items():
      cell = row.reindex(sizes.index)
      missing = cell.isna() & (sizes > 0)
      fallbacks += int(missing.sum())
      leg_cost = float((sizes * cell.fillna(median)).sum())
      if leverage_scaled:
        leg_cost /= float(factor.leg_betas.loc[date, leg])
      total += leg_cost
    drag.loc[date] = total
  if fallbacks:
    LOGGER.info('%s: %u traded names charged the cross-sectional median',
                factor.name, fallbacks)
  net = (factor.gross - drag).rename('net')
  return drag, net


def bucket_half_spreads(factor: 'FactorSeries',
                        cost_panel: CostPanel) -> pd.DataFrame:
  """average half-spread of each bucket's constituents at formation"""
  spreads = cost_panel.masked()
  rows = {}
  for formed, assignment in factor.assignments.items():
    row = spreads.loc[formed]
    hs = row.reindex(assignment.buckets.index)
    rows[formed] = hs.groupby(assignment.buckets.values).mean()
  frame = pd.DataFrame(rows).T
  by_realized = pd.Series(factor.formation.index,
                          index=factor.formation.values)
  frame.index = by_realized.reindex(frame.index).values
  return frame.reindex(index=factor.calendar).sort_index(axis=1)


def write_cost_panel(panel: CostPanel, path: str) -> None:
  """CSV export `date,asset_id,half_spread,gibbs,cs,chl,vov`"""
  parts = [panel.masked().stack(dropna=False).rename('half_spread')]
  for name in COST_COMPONENTS:
    parts.append(panel.components[name].stack(dropna=False).rename(name))
  long = pd.concat(parts, axis=1)
  long = long[long.notna().any(axis=1)].reset_index()
  long.columns = COST_HEADER
  long.to_csv(path, index=False, date_format=DATE_FORMAT, na_rep='')
