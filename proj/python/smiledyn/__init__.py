"""Smile dynamics toolkit: segmentation, features, statistics, regression."""

from smiledyn._smiledyn import *  # noqa: F401,F403
from smiledyn._smiledyn import __doc__  # noqa: F401
