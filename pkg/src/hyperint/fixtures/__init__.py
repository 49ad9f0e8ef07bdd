"""Bundled fixture data: the 3x6 example matrices, the homology pairing
oracle table for the degenerate 6-line arrangement, and expected Gram
entries used by the test suite and the CLI."""

from __future__ import annotations

import json
from importlib import resources


def load(name: str):
    """Load a bundled fixture JSON by file name."""
    ref = resources.files(__package__).joinpath(name)
    with ref.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def fixture_names():
    return sorted(
        entry.name
        for entry in resources.files(__package__).iterdir()
        if entry.name.endswith(".json")
    )
