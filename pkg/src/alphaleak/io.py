"""JSON input files and value formatting.

Schemas::

    distribution  {"pmf": [...], "labels": [...]}        labels optional
    channel       {"transition": [[...]], "input_pmf": [...]}
    joint         {"joint": [[...]]}

A channel without ``input_pmf`` gets the uniform prior; callers are told
through the ``defaulted`` flag so they can say so.
"""

from __future__ import annotations

import json
import math
from typing import NamedTuple, Optional

from .core import Channel, ProbVec, joint_to_prior_channel, uniform
from .exceptions import InputFormatError


class ChannelInput(NamedTuple):
    prior: ProbVec
    channel: Channel
    defaulted: bool


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: not valid JSON ({exc})") from None


def _field(doc, key, path):
    if not isinstance(doc, dict) or key not in doc:
        raise InputFormatError(f"{path}: missing field {key!r}")
    return doc[key]


def _numbers(raw, path, key):
    try:
        return [float(v) for v in raw]
    except (TypeError, ValueError):
        raise InputFormatError(f"{path}: {key!r} must be a list of numbers") from None


def dist_from_doc(doc, path="<input>") -> ProbVec:
    pmf = _numbers(_field(doc, "pmf", path), path, "pmf")
    labels = doc.get("labels")
    return ProbVec(pmf, labels)


def channel_from_doc(doc, path="<input>") -> ChannelInput:
    """Accepts either a channel or a joint document."""
    if isinstance(doc, dict) and "joint" in doc:
        rows = [_numbers(r, path, "joint") for r in doc["joint"]]
        prior, ch = joint_to_prior_channel(rows)
        return ChannelInput(prior, ch, False)
    raw = _field(doc, "transition", path)
    if not isinstance(raw, list):
        raise InputFormatError(f"{path}: 'transition' must be a list of rows")
    ch = Channel([_numbers(r, path, "transition") for r in raw])
    if doc.get("input_pmf") is None:
        return ChannelInput(uniform(ch.input_size), ch, True)
    prior = ProbVec(_numbers(doc["input_pmf"], path, "input_pmf"))
    return ChannelInput(prior, ch, False)


def load_dist(path) -> ProbVec:
    return dist_from_doc(read_json(path), path)


def load_channel(path) -> ChannelInput:
    return channel_from_doc(read_json(path), path)


def dist_to_doc(p: ProbVec) -> dict:
    doc = {"pmf": [float(m) for m in p.masses]}
    if p.labels is not None:
        doc["labels"] = list(p.labels)
    return doc


def channel_to_doc(ch: Channel, prior: Optional[ProbVec] = None) -> dict:
    doc = {"transition": [[float(v) for v in row] for row in ch.rows]}
    if prior is not None:
        doc["input_pmf"] = [float(m) for m in prior.masses]
    return doc


def format_number(v) -> str:
    """15 significant digits; infinities as ``inf`` / ``-inf``."""
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".15g")


def json_value(v):
    """JSON-safe scalar rounded to 15 significant digits; ``inf`` -> ``"inf"``."""
    if isinstance(v, bool) or not isinstance(v, float):
        return v
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(format(v, ".15g"))
