"""Shipped JSON schemas for command output."""

import json
from importlib import resources

NAMES = ("envelope", "relation_report", "report", "probe")


def load_schema(name):
    if name not in NAMES:
        raise KeyError(name)
    return json.loads(resources.files("kleinian").joinpath("schemas/%s.json" % name)
                      .read_text())
