"""Central tolerance table.

The asymptotic results only fix orders of magnitude (``O(1/np)`` and the
like); the constants and Monte Carlo thresholds used to check them live
in ``tolerances.json``.  ``JRG_TOLERANCE_TABLE`` points at a replacement
file; keys it omits fall back to the shipped defaults.
"""

import json
import os
from importlib import resources

ENV_VAR = "JRG_TOLERANCE_TABLE"


def defaults():
    text = resources.files(__package__).joinpath("tolerances.json").read_text()
    return json.loads(text)


def load(path=None):
    table = defaults()
    path = path or os.environ.get(ENV_VAR)
    if path:
        with open(path) as fh:
            override = json.load(fh)
        unknown = set(override) - set(table)
        if unknown:
            raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
        table.update(override)
    return table
