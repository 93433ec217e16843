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

from setuptools import setup, find_packages
import os

thelibFolder = os.path.dirname(os.path.realpath(__file__))
requirementPath = thelibFolder + '/requirements.txt'
readmePath = thelibFolder + '/README.md'
install_requires = []
readme = None

if os.path.isfile(readmePath):
  with open(readmePath) as f:
    readme = f.read()

if os.path.isfile(requirementPath):
  with open(requirementPath) as f:
    install_requires = f.read().splitlines()
setup(
    name='BadBeta',
    python_requires='>=3.9',
    version='1.0',
    description="Backtesting engine for the betting against beta and betting "\
                "against bad beta factors: news decomposition, beta estimators, "\
                "double sorts, transaction costs and factor regressions.",
    long_description=readme,
    license='MIT',
    install_requires=install_requires,

    packages=find_packages(exclude=['tests']),
    package_data={'badbeta': ['yaml_files/*.yaml']},
    entry_points={'console_scripts': ['badbeta = badbeta.go_babb:main']},
)
