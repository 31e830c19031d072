#!/usr/bin/env python

from setuptools import setup

# https://packaging.python.org/guides/single-sourcing-package-version/
# http://blog.ionelmc.ro/2014/05/25/python-packaging/

setup(setup_cfg=True)
