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
"""Hash-keyed on-disk cache of intermediate stage outputs"""

import json
import os
import pickle
from typing import Any, Dict, Optional

from badbeta.stages import Stage
from badbeta.utils.logger import setup_logger
from badbeta.utils.utility import text_hash

LOGGER = setup_logger('cache')

#bump when a cached object layout changes
CACHE_VERSION = 1


def cache_key(stage: Stage, payload: Dict[str, Any]) -> str:
  """sha256 over the stage name and a canonical JSON payload"""
  text = json.dumps({
      'stage': str(stage),
      'version': CACHE_VERSION,
      'payload': payload
  },
                    sort_keys=True,
                    default=str)
  return text_hash(text)


class StageCache():
  """One pickle per stage, holding the key it was computed under"""

  def __init__(self, cache_dir: Optional[str]) -> None:
    self.cache_dir = cache_dir
    if cache_dir:
      os.makedirs(cache_dir, exist_ok=True)

  def path(self, stage: Stage) -> str:
    """pickle file of a stage"""
    return os.path.join(self.cache_dir, f"{stage}.pkl")

  def load(self, stage: Stage, key: str) -> Optional[Any]:
    """cached value, or None on a miss or a stale entry"""
    if not self.cache_dir or not os.path.isfile(self.path(stage)):
      LOGGER.info('cache miss: %s', stage)
      return None
    try:
      with open(self.path(stage), 'rb') as fin:
        entry = pickle.load(fin)
    except (OSError, pickle.UnpicklingError, EOFError, AttributeError) as err:
      LOGGER.warning('unreadable cache for %s, recomputing: %s', stage, err)
      return None
    if entry.get('key') != key:
      LOGGER.warning('stale cache for %s (inputs or config changed), '
                     'recomputing', stage)
      return None
    LOGGER.info('cache hit: %s', stage)
    return entry['value']

  def store(self, stage: Stage, key: str, value: Any) -> None:
    """write through a temporary file"""
    if not self.cache_dir:
      return
    tmp = self.path(stage) + '.tmp'
    with open(tmp, 'wb') as fout:
      pickle.dump({'key': key, 'value': value}, fout)
    os.replace(tmp, self.path(stage))
