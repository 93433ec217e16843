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
"""Utility module for helper functions"""

import os
import hashlib
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from badbeta.utils.logger import setup_logger

LOGGER = setup_logger('utility')


def split_packets(elements: Iterable[Any], pack_sz: int = 1000) -> List[List]:
  """break elements into smaller packets"""
  pack_i = 0
  pack = []
  all_packs = []
  for elem in elements:
    pack.append(elem)
    pack_i += 1
    if pack_i == pack_sz:
      all_packs.append(pack)
      pack = []
      pack_i = 0
  if pack:
    all_packs.append(pack)

  return all_packs


def get_env_vars() -> Dict[str, Any]:
  """Utility function to get badbeta specific env_vars"""
  env_vars: Dict[str, Any] = {}
  if 'BADBETA_THREADS' in os.environ:
    env_vars['threads'] = int(os.environ['BADBETA_THREADS'])
  else:
    env_vars['threads'] = 0
  if 'BADBETA_LOGLEVEL' in os.environ:
    env_vars['log_level'] = os.environ['BADBETA_LOGLEVEL']
  else:
    env_vars['log_level'] = 'INFO'

  return env_vars


def resolve_threads(threads: Optional[int] = None) -> int:
  """Number of workers: explicit value, else BADBETA_THREADS, 0 means auto"""
  if threads is None:
    threads = get_env_vars()['threads']
  if threads <= 0:
    threads = os.cpu_count() or 1
  return max(1, threads)


def parallel_map(func: Callable, items: Sequence[Any],
                 threads: Optional[int] = 1) -> List[Any]:
  """Ordered map over items, in worker processes when threads > 1"""
  workers = resolve_threads(threads)
  if workers == 1 or len(items) <= 1:
    return [func(item) for item in items]

  workers = min(workers, len(items))
  LOGGER.debug('parallel_map over %u items with %u workers', len(items),
               workers)
  with ProcessPoolExecutor(max_workers=workers) as pool:
    return list(pool.map(func, items))


def derive_seed(root: int, *keys: Any) -> int:
  """Named-stream seed splitter: stable 63-bit seed from root and keys"""
  hasher = hashlib.sha256()
  hasher.update(str(int(root)).encode('utf8'))
  for key in keys:
    hasher.update(b'\x1f')
    hasher.update(str(key).encode('utf8'))
  return int.from_bytes(hasher.digest()[:8], 'little') >> 1


def file_hash(path: str, chunk_sz: int = 1 << 20) -> str:
  """sha256 of a file's content"""
  hasher = hashlib.sha256()
  with open(path, 'rb') as fin:
    while True:
      chunk = fin.read(chunk_sz)
      if not chunk:
        break
      hasher.update(chunk)
  return hasher.hexdigest()


def text_hash(text: str) -> str:
  """sha256 of a string"""
  return hashlib.sha256(text.encode('utf8')).hexdigest()
