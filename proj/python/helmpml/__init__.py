# Copyright (c) 2026 the helmpml authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the Helmholtz PML solver core."""
from ._helmpml import *  # noqa: F401,F403
from ._helmpml import __doc__ as _core_doc

__doc__ = _core_doc
