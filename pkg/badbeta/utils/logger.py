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
"""Loggers of the badbeta package.
Every module logger lives under the `badbeta` namespace and writes to stderr;
BADBETA_LOGSTASH_STATUS=true also ships records to Logstash, tagged with the
emitting component."""
import logging
import os
from typing import Optional, Tuple

from logstash_async.handler import AsynchronousLogstashHandler
from logstash_async.handler import LogstashFormatter

from badbeta.utils.metadata import LOG_FORMAT, LOGGER_NAMESPACE


def get_logstash_config() -> Tuple[bool, str, int, Optional[str]]:
  """(enabled, host, port, spool database path) from the environment"""
  logstash_status = os.getenv('BADBETA_LOGSTASH_STATUS',
                              'false').lower() == 'true'
  logstash_host = os.getenv('BADBETA_LOGSTASH_HOST', 'localhost')
  logstash_port = int(os.getenv('BADBETA_LOGSTASH_PORT', "5000"))
  logstash_path = os.getenv('BADBETA_LOGSTASH_PATH', None)
  return logstash_status, logstash_host, logstash_port, logstash_path


def _has_handler(logger: logging.Logger, kind: type) -> bool:
  return any(isinstance(handler, kind) for handler in logger.handlers)


def add_logstash_handler(logger: logging.Logger, component: str, host: str,
                         port: int, path: Optional[str]) -> None:
  """ship INFO and above to Logstash with the component as an extra field"""
  if _has_handler(logger, AsynchronousLogstashHandler):
    return
  logstash_handler = AsynchronousLogstashHandler(host=host,
                                                 port=port,
                                                 database_path=path)
  logstash_handler.setFormatter(
      LogstashFormatter(extra={
          'application': LOGGER_NAMESPACE,
          'component': component
      }))
  logstash_handler.setLevel(logging.INFO)
  logger.addHandler(logstash_handler)
  logger.info("Logstash is enabled. Sending logs to %s:%d", host, port)


def setup_logger(component: str = LOGGER_NAMESPACE) -> logging.Logger:
  """logger `badbeta.<component>` at BADBETA_LOGLEVEL (default INFO)"""
  log_level: str = os.environ.get('BADBETA_LOGLEVEL', 'INFO').upper()
  name = component if component == LOGGER_NAMESPACE else \
      f"{LOGGER_NAMESPACE}.{component}"
  logger: logging.Logger = logging.getLogger(name)
  logger.propagate = False

  if not _has_handler(logger, logging.StreamHandler):
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(stream_handler)

  logstash_status, host, port, path = get_logstash_config()
  if logstash_status:
    add_logstash_handler(logger, component, host, port, path)

  logger.setLevel(log_level)
  return logger
