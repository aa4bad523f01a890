"""Load and save group constructions as JSON files.

A construction file is a JSON object whose "construction" key selects the
shape: "group" wraps a bare group, "amalgam" and "hnn" carry a subgroup,
factor or base groups, and the embeddings, including any recorded
transversals so normal forms round-trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .amalgam import Amalgam, amalgam_from_dict, amalgam_to_dict
from .groups import group_from_dict, group_to_dict
from .hnn import HNN, hnn_from_dict, hnn_to_dict


def construction_to_dict(obj):
    if isinstance(obj, Amalgam):
        return amalgam_to_dict(obj)
    if isinstance(obj, HNN):
        return hnn_to_dict(obj)
    return {"construction": "group", "group": group_to_dict(obj)}


def construction_from_dict(data):
    kind = data.get("construction")
    if kind == "amalgam":
        return amalgam_from_dict(data)
    if kind == "hnn":
        return hnn_from_dict(data)
    if kind == "group":
        return group_from_dict(data["group"])
    raise ValueError(f"unknown construction kind {kind!r}")


def load_construction(path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return construction_from_dict(data)


def save_construction(path, obj):
    data = construction_to_dict(obj)
    Path(path).write_text(
        json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
