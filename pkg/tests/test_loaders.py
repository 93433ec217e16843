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

import numpy as np
import pandas as pd
import pytest

sys.path.append("../badbeta")
sys.path.append("badbeta")

from badbeta.custom_errors import (EXIT_DATA, DataError, ParseError,
                                   SchemaError, ValidationError)
from badbeta.data.align import dataset_checksum, load_dataset
from badbeta.data.loaders import (load_aux_series, load_daily_panel,
                                  load_return_panel, load_state_series)
from badbeta.data.synthetic import write_dataset
from badbeta.utils.config_type import Frequency
from utils import make_out_dir, small_dataset


def write_text(name, text):
  path = os.path.join(make_out_dir('loaders'), name)
  with open(path, 'w', encoding='utf8') as fout:
    fout.write(text)
  return path


def test_load_monthly():
  path = write_text(
      'monthly.csv', 'date,asset_id,ret\n'
      '2000-01-31,B,0.01\n'
      '2000-01-31,A,-0.02\n'
      '2000-02-29,A,0.03\n'
      '2000-02-29,B,\n')
  panel = load_return_panel(path, Frequency.monthly)
  assert panel.assets == ['A', 'B']
  assert len(panel.dates) == 2
  assert not panel.mask.loc['2000-02-29', 'B']
  assert panel.values.loc['2000-01-31', 'A'] == pytest.approx(-0.02)
  assert np.isnan(panel.masked().loc['2000-02-29', 'B'])


def test_monthly_errors():
  bad_date = write_text('bad_date.csv', 'date,asset_id,ret\n'
                        '2000-01-31,A,0.01\n'
                        '2000-13-01,A,0.01\n')
  with pytest.raises(ParseError) as err:
    load_return_panel(bad_date, Frequency.monthly)
  assert err.value.line == 3
  assert err.value.exit_code == EXIT_DATA

  bad_header = write_text('bad_header.csv', 'date,asset,ret\n'
                          '2000-01-31,A,0.01\n')
  with pytest.raises(SchemaError):
    load_return_panel(bad_header, Frequency.monthly)

  duplicate = write_text('dup.csv', 'date,asset_id,ret\n'
                         '2000-01-31,A,0.01\n'
                         '2000-01-31,A,0.02\n')
  with pytest.raises(SchemaError):
    load_return_panel(duplicate, Frequency.monthly)

  unsorted = write_text('unsorted.csv', 'date,asset_id,ret\n'
                        '2000-02-29,A,0.01\n'
                        '2000-01-31,A,0.02\n')
  with pytest.raises(SchemaError):
    load_return_panel(unsorted, Frequency.monthly)

  ruin = write_text('ruin.csv', 'date,asset_id,ret\n'
                    '2000-01-31,A,-1.0\n')
  with pytest.raises(ValidationError):
    load_return_panel(ruin, Frequency.monthly)

  garbage = write_text('garbage.csv', 'date,asset_id,ret\n'
                       '2000-01-31,A,abc\n')
  with pytest.raises(ParseError):
    load_return_panel(garbage, Frequency.monthly)

  with pytest.raises(DataError):
    load_return_panel('/nonexistent/monthly.csv', Frequency.monthly)


def test_load_daily():
  path = write_text(
      'daily.csv', 'date,asset_id,close,high,low,volume\n'
      '2000-01-03,A,10.0,10.5,9.5,1000\n'
      '2000-01-04,A,10.2,10.4,10.0,800\n'
      '2000-02-01,A,10.1,10.3,9.9,900\n')
  panel = load_daily_panel(path)
  assert list(panel.calendar.monthly_dates) == [
      pd.Timestamp('2000-01-04'),
      pd.Timestamp('2000-02-01')
  ]
  assert panel.returns().loc['2000-01-04', 'A'] == pytest.approx(0.02)

  crossed = write_text(
      'crossed.csv', 'date,asset_id,close,high,low,volume\n'
      '2000-01-03,A,11.0,10.5,9.5,1000\n')
  with pytest.raises(ValidationError):
    load_daily_panel(crossed)

  negative = write_text(
      'negative.csv', 'date,asset_id,close,high,low,volume\n'
      '2000-01-03,A,10.0,10.5,9.5,-1\n')
  with pytest.raises(ValidationError):
    load_daily_panel(negative)


def test_load_states_and_aux():
  states = write_text(
      'states.csv', 'date,mkt_excess_log,yield_spread,cape,value_spread\n'
      '2000-01-31,0.01,0.5,3.1,1.4\n'
      '2000-02-29,-0.02,0.6,3.0,1.5\n')
  series = load_state_series(states)
  assert series.values.shape == (2, 4)

  missing = write_text(
      'states_missing.csv',
      'date,mkt_excess_log,yield_spread,cape,value_spread\n'
      '2000-01-31,0.01,,3.1,1.4\n')
  with pytest.raises(ValidationError):
    load_state_series(missing)

  aux = write_text(
      'aux.csv', 'date,rf,mkt,smb,hml,rmw,cma,umd\n'
      '2000-01-31,0.004,0.01,0.0,0.0,0.0,0.0,0.0\n')
  series = load_aux_series(aux)
  assert series.risk_free.iloc[0] == pytest.approx(0.004)


def test_synthetic_files_reload():
  dataset, truth = small_dataset(n_assets=12, n_months=30)
  out_dir = make_out_dir('reload')
  paths = write_dataset(dataset, truth, out_dir)
  for name in ('monthly', 'daily', 'states', 'aux', 'market_daily',
               'truth_assets', 'truth_news'):
    assert os.path.isfile(paths[name])

  inputs = {
      name: paths[name]
      for name in ('monthly', 'daily', 'states', 'aux', 'market_daily')
  }
  reloaded = load_dataset(inputs)
  assert reloaded.assets == dataset.assets
  assert reloaded.calendar.monthly_dates.equals(dataset.calendar.monthly_dates)
  assert np.allclose(reloaded.monthly.values.values,
                     dataset.monthly.values.values,
                     rtol=1e-12,
                     atol=1e-15)
  assert dataset_checksum(dataset) == dataset_checksum(dataset)
