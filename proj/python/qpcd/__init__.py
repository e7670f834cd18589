"""Python bindings for the qpcd dephasing engine."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_sweep


def sweep(config_text, overrides=(), threads=1):
    """Run a sweep and return the parsed JSON document."""
    return json.loads(run_sweep(config_text, list(overrides), "json", threads))
