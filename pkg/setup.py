#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from setuptools import setup

setup(
	setup_requires=[],
	tests_require=["pytest"]
)
