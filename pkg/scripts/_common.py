"""Shared helpers for the experiment scripts: dataclass configs from the command line."""

import argparse
import dataclasses
import json
from pathlib import Path


def parse_config(cls, description):
    """Build ``cls`` from defaults, an optional JSON file and ``--key value`` flags."""
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--config", help="JSON file with field overrides")
    for f in dataclasses.fields(cls):
        p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=str, default=None)
    ns = p.parse_args()
    values = {}
    if ns.config:
        values.update(json.loads(Path(ns.config).read_text()))
    defaults = cls()
    for f in dataclasses.fields(cls):
        raw = getattr(ns, f.name)
        if raw is not None:
            values[f.name] = json.loads(raw) if not isinstance(getattr(defaults, f.name), str) else raw
    return dataclasses.replace(defaults, **{k: tuple(v) if isinstance(v, list) else v for k, v in values.items()})


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=float) + "\n")
    print(f"wrote {path}")
