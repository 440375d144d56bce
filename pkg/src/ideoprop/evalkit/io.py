"""Embedding CSV, truth JSON-lines and report JSON."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .metrics import assign_axes


class FormatError(ValueError):
    pass


def save_embedding(path, nodes, mu) -> None:
    """``node_id, kind, mu_0 .. mu_{T-1}, assigned_axis``; floats written round-trip exact."""
    mu = np.asarray(mu, dtype=np.float64)
    axes, _ = assign_axes(mu)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", "kind"] + [f"mu_{t}" for t in range(mu.shape[1])] + ["assigned_axis"])
        for (nid, kind), row, ax in zip(nodes, mu, axes):
            w.writerow([nid, kind] + [repr(float(v)) for v in row] + [int(ax)])


def load_embedding(path):
    """Returns ``(nodes, mu)`` with ``nodes`` as ``(node_id, kind)`` string pairs."""
    nodes, rows = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:2] != ["node_id", "kind"] or header[-1] != "assigned_axis":
            raise FormatError(f"{path}: line 1: not an embedding CSV header")
        t = len(header) - 3
        for lineno, rec in enumerate(reader, 2):
            if len(rec) != t + 3:
                raise FormatError(f"{path}: line {lineno}: expected {t + 3} fields, got {len(rec)}")
            try:
                rows.append([float(v) for v in rec[2:2 + t]])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from exc
            nodes.append((rec[0], rec[1]))
    return nodes, np.array(rows, dtype=np.float64).reshape(-1, t)


def save_truth(path, truth: dict) -> None:
    with open(path, "w") as fh:
        for a in sorted(truth):
            fh.write(json.dumps({"assertion_id": int(a), "label": int(truth[a])}) + "\n")


def load_truth(path) -> dict:
    truth = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                a, label = int(rec["assertion_id"]), int(rec["label"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}: line {lineno}: malformed truth record ({exc})") from exc
            if label not in (0, 1):
                raise FormatError(f"{path}: line {lineno}: label must be 0 or 1")
            truth[a] = label
    return truth


def save_report(path, report) -> None:
    Path(path).write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
