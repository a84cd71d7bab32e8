"""Rule-graph anomaly detection over JSON event logs."""

import json

from ._rulegraph import (
    Detector,
    IngestError,
    PatternError,
    ValidationError,
    canonical,
    generate,
    matches,
    merge_regex,
    perturb,
)
from . import _rulegraph


def train(lines, types=None, k=4, threshold=0.65, decay=0.8):
    """Learn a ruleset; returns it as a dict."""
    if isinstance(types, dict):
        types = json.dumps(types)
    return json.loads(_rulegraph.train(list(lines), types or "", k, threshold, decay))


def detect(ruleset, lines, workers=1):
    """Classify JSON Lines against a ruleset dict; yields result dicts."""
    det = Detector(json.dumps(ruleset))
    return [json.loads(r) for r in det.detect(list(lines), workers)]


def evaluate(results, labeled_lines):
    """Confusion counts and precision/recall/F1 as a dict."""
    return json.loads(_rulegraph.evaluate([json.dumps(r) for r in results], list(labeled_lines)))


__all__ = [
    "Detector",
    "IngestError",
    "PatternError",
    "ValidationError",
    "canonical",
    "detect",
    "evaluate",
    "generate",
    "matches",
    "merge_regex",
    "perturb",
    "train",
]
