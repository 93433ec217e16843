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
"""! @brief YAML parser for run configurations with nested or dotted keys """

import os
from typing import Any, Dict

import yaml

from badbeta.custom_errors import ConfigError
from badbeta.utils.logger import setup_logger

LOGGER = setup_logger('yaml_parser')

SEP = '.'


def parse_yaml(filename: str) -> Dict[str, Any]:
  """Load a YAML run configuration into a nested dict"""
  path = os.path.expanduser(filename)
  if not os.path.isfile(path):
    raise ConfigError(f"config file not found: {path}", module='cli')
  with open(path, encoding="utf8") as stream:
    try:
      yaml_dict = yaml.safe_load(stream)
    except yaml.YAMLError as exc:
      raise ConfigError(f"malformed YAML in {path}: {exc}",
                        module='cli') from exc
  if yaml_dict is None:
    return {}
  if not isinstance(yaml_dict, dict):
    raise ConfigError(f"{path} must hold a mapping at the top level",
                      module='cli')
  return unflatten_keys(yaml_dict)


def flatten_yaml(yaml_dict: Dict[str, Any],
                 prefix: str = '') -> Dict[str, Any]:
  """nested sections to dotted keys; lists are leaves"""
  flat: Dict[str, Any] = {}
  for key, val in yaml_dict.items():
    full = f"{prefix}{SEP}{key}" if prefix else str(key)
    if isinstance(val, dict) and val:
      leaves = flatten_yaml(val, full)
    else:
      leaves = {full: val}
    for leaf, leaf_val in leaves.items():
      if leaf in flat:
        raise ConfigError(f"duplicate configuration key {leaf}", module='cli')
      flat[leaf] = leaf_val
  return flat


def unflatten_keys(yaml_dict: Dict[str, Any]) -> Dict[str, Any]:
  """Dotted keys to nested sections; nested and dotted forms may be mixed.
  A key given twice is a ConfigError."""
  nested: Dict[str, Any] = {}
  for key, val in flatten_yaml(yaml_dict).items():
    parts = key.split(SEP)
    node = nested
    for part in parts[:-1]:
      child = node.setdefault(part, {})
      if not isinstance(child, dict):
        raise ConfigError(f"{key}: {part} is both a value and a section",
                          module='cli')
      node = child
    if isinstance(val, dict):
      #empty section
      node.setdefault(parts[-1], {})
      continue
    if isinstance(node.get(parts[-1]), dict):
      raise ConfigError(f"{key} is both a value and a section", module='cli')
    node[parts[-1]] = val
  return nested


def merge_yaml(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
  """override wins key by key, sections merged recursively"""
  out = dict(base)
  for key, val in override.items():
    if isinstance(val, dict) and isinstance(out.get(key), dict):
      out[key] = merge_yaml(out[key], val)
    else:
      out[key] = val
  return out


def dump_yaml(yaml_dict: Dict[str, Any], path: str) -> str:
  """write a config back out"""
  with open(path, 'w', encoding="utf8") as outfile:
    yaml.safe_dump(yaml_dict, outfile, default_flow_style=False,
                   sort_keys=True)
  return path
