# Copyright 2026 The docslm-lite Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the docslm C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import NOT_ANSWERABLE, ValidationError  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
