"""Planted two-camp graphs, a near-duplicate image corpus and the neutral-content sweep."""
from .graphs import SynthGraph, SynthGraphConfig, expected_edges, gen_graph
from .images import (ImageSuite, TransformSpec, apply_chain, apply_transform, draw_base,
                     gen_image_suite)
from .sweep import (RunResult, neutral_sweep, run_infovgae, run_nmf, select_anchors,
                    write_sweep_csv)

__all__ = [
    "SynthGraph", "SynthGraphConfig", "expected_edges", "gen_graph", "ImageSuite",
    "TransformSpec", "apply_chain", "apply_transform", "draw_base", "gen_image_suite",
    "RunResult", "neutral_sweep", "run_infovgae", "run_nmf", "select_anchors", "write_sweep_csv",
]
