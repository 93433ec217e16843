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
""" This file contains constants and default values shared across the badbeta
    package
"""

LOGGER_NAMESPACE = 'badbeta'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

BADBETA_CACHE_DIRNAME = '.cache'
BADBETA_VERSION = '1.0'
REPORT_NAME = 'report.json'

#calendar
DAYS_PER_YEAR = 252
MONTHS_PER_YEAR = 12
DEFAULT_DAYS_PER_MONTH = 21

#eligibility: share of a window that must be populated
MIN_WINDOW_FRACTION = 0.8

#var_news
DEFAULT_RHO = 0.95
MIN_VAR_OBS = 60
STATE_COLUMNS = ['mkt_excess_log', 'yield_spread', 'cape', 'value_spread']

#beta_lab
FP_VOL_YEARS = 1
FP_CORR_YEARS = 5
FP_MIN_DAYS_PER_YEAR = 120
OVERLAP_DAYS = 3
DIMSON_LAGS = 1
DIMSON_SHRINK_WEIGHT = 1.0
STANDARD_SHRINK_WEIGHT = 0.6
STANDARD_SHRINK_TARGET = 1.0
WELCH_DELTA = 3.0
CF_WINDOW_YEARS = 3
CF_MIN_MONTHS = 30
VASICEK_MIN_ASSETS = 30

#portfolio
MIN_ASSETS_TERCILE = 30
MIN_ASSETS_DOUBLE = 90
MIN_VALID_MONTHS = 24
TERCILE_LOW = 1
TERCILE_HIGH = 3
CELL_LOW = 1
CELL_HIGH = 9

#tcost
COST_WINDOW_MONTHS = 12
GIBBS_SWEEPS = 1000
GIBBS_BURN = 200
GIBBS_MIN_OBS = 60
#sweeps of random draws taken from a chain generator at a time
GIBBS_RNG_CHUNK = 100
#chains sampled together by the cost panel
GIBBS_BLOCK = 256
PAIR_MIN_OBS = 12
VOV_K = 8.0
MIN_COST_COMPONENTS = 2
COST_COMPONENTS = ['gibbs', 'cs', 'chl', 'vov']

#analytics
MIN_REGRESSION_OBS = 24
MIN_PERF_MONTHS = 12
NEWEY_WEST_LAGS = 6
FACTOR_COLUMNS = ['mkt', 'smb', 'hml', 'rmw', 'cma', 'umd']
FACTOR_MODELS = {
    'capm': ['mkt'],
    'ff3': ['mkt', 'smb', 'hml'],
    'carhart4': ['mkt', 'smb', 'hml', 'umd'],
    'ff5': ['mkt', 'smb', 'hml', 'rmw', 'cma'],
    'ff6': ['mkt', 'smb', 'hml', 'rmw', 'cma', 'umd'],
}
#(smaller, larger) regressor sets whose R2 must not decrease
NESTED_MODELS = [('capm', 'ff3'), ('ff3', 'carhart4'), ('ff3', 'ff5'),
                 ('ff5', 'ff6'), ('carhart4', 'ff6')]

#CSV schemas
MONTHLY_HEADER = ['date', 'asset_id', 'ret']
DAILY_HEADER = ['date', 'asset_id', 'close', 'high', 'low', 'volume']
STATE_HEADER = ['date'] + STATE_COLUMNS
AUX_HEADER = ['date', 'rf'] + FACTOR_COLUMNS
MARKET_DAILY_HEADER = ['date', 'mkt']
NEWS_HEADER = ['date', 'n_cf', 'n_dr', 'unexpected_mkt']
BETA_HEADER = ['date', 'asset_id', 'beta']
FACTOR_HEADER = [
    'date', 'gross', 'net', 'beta_low', 'beta_high', 'leverage',
    'turnover_low', 'turnover_high', 'cost_drag'
]
COST_HEADER = ['date', 'asset_id', 'half_spread'] + COST_COMPONENTS
DATE_FORMAT = '%Y-%m-%d'
