"""Axis assignment, metrics, report/embedding files and figures."""
from .io import (FormatError, load_embedding, load_truth, save_embedding, save_report,
                 save_truth)
from .metrics import (EvaluationError, MetricsReport, anchor_mapping, assign_axes, assign_axis,
                      candidate_mappings, evaluate, neutral_flag, on_axis, purity,
                      rectified_mean)
from .plots import plot_history, plot_sweep, scatter_svg, to_pixels, viewport

__all__ = [
    "EvaluationError", "FormatError", "MetricsReport", "anchor_mapping", "assign_axes",
    "assign_axis", "candidate_mappings", "evaluate", "load_embedding", "load_truth",
    "neutral_flag", "on_axis", "plot_history", "plot_sweep", "purity", "rectified_mean",
    "save_embedding", "save_report", "save_truth", "scatter_svg", "to_pixels", "viewport",
]
