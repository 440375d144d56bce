"""End-to-end runs on planted graphs: anchors, one pipeline pass, the neutral-content sweep."""
from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass

import numpy as np

from ..baseline_nmf import incidence, nmf_classify, nmf_factorize
from ..bhin import ASSERTION, build_graph, prepare_inputs
from ..evalkit import anchor_mapping, assign_axes, evaluate
from ..infovgae import TrainConfig, train
from .graphs import SynthGraphConfig, gen_graph

SWEEP_SEEDS = (0, 1, 2, 3, 4)


def select_anchors(g, truth: dict, fraction: float = 0.05, exclude=()) -> list[tuple[int, int]]:
    """Least popular labelled assertions, split evenly between the two labels.

    Returns ``(node_index, axis)`` with axis equal to the label. Degree ties
    break on node index.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must lie in [0, 1)")
    exclude = set(exclude)
    idx = g.indices(ASSERTION)
    deg = g.degrees()
    n_total = int(round(fraction * len(idx)))
    out = []
    for label in (0, 1):
        quota = n_total // 2 + (n_total % 2 if label == 0 else 0)
        pool = [i for i in idx if g.nodes[i][0] not in exclude and truth.get(g.nodes[i][0]) == label]
        pool.sort(key=lambda i: (deg[i], i))
        out += [(i, label) for i in pool[:quota]]
    return sorted(out)


@dataclass
class RunResult:
    report: object
    mu: np.ndarray
    graph: object
    state: object = None


def run_infovgae(sg, cfg: TrainConfig, anchor_fraction: float = 0.0) -> RunResult:
    """Train on a generated graph and score the non-neutral, non-anchor assertions."""
    g = build_graph(sg.posts, sg.assertions)
    inputs = prepare_inputs(g)
    anchors = select_anchors(g, sg.truth, anchor_fraction, sg.neutral) if anchor_fraction > 0 else []
    state = train(inputs, cfg, anchors)
    idx = g.indices(ASSERTION)
    axes, _ = assign_axes(state.mu[idx])
    assignments = {g.nodes[i][0]: int(a) for i, a in zip(idx, axes)}
    anchored = {g.nodes[i][0]: k for i, k in anchors}
    mapping = anchor_mapping(anchored, sg.truth, cfg.T) if anchors else None
    report = evaluate(assignments, sg.truth, set(sg.neutral) | set(anchored), mapping, n_axes=cfg.T)
    return RunResult(report, state.mu, g, state)


def run_nmf(sg, k: int = 2, iters: int = 500, seed: int = 42) -> RunResult:
    g = build_graph(sg.posts, sg.assertions)
    B, _, cols = incidence(g)
    f = nmf_factorize(B, k, iters, seed)
    axes, _ = nmf_classify(f)
    assignments = {g.nodes[i][0]: int(a) for i, a in zip(cols, axes)}
    report = evaluate(assignments, sg.truth, sg.neutral, n_axes=k)
    return RunResult(report, f.H.T, g)


def neutral_sweep(base_cfg: SynthGraphConfig, fractions, train_cfg: TrainConfig | None = None,
                  seeds=SWEEP_SEEDS, progress=None) -> list[dict]:
    """Mean and spread of F1 over non-neutral assertions, per neutral fraction."""
    fractions = list(fractions)
    if fractions != sorted(fractions):
        raise ValueError("fractions must be sorted ascending")
    train_cfg = train_cfg or TrainConfig()
    rows = []
    for frac in fractions:
        f1s = []
        for s in seeds:
            gcfg = dataclasses.replace(base_cfg, neutral_fraction=frac, seed=s)
            res = run_infovgae(gen_graph(gcfg), dataclasses.replace(train_cfg, seed=s))
            f1s.append(res.report.f1)
            if progress is not None:
                progress(frac, s, res.report.f1)
        rows.append({"fraction": frac, "mean_f1": float(np.mean(f1s)), "std_f1": float(np.std(f1s)),
                     "n_seeds": len(f1s)})
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fraction", "mean_f1", "std_f1", "n_seeds"])
        for r in rows:
            w.writerow([repr(float(r["fraction"])), repr(r["mean_f1"]), repr(r["std_f1"]), r["n_seeds"]])
