"""Generation of the steered-BRIEF comparison pattern.

The committed table in ``_pattern_table`` was produced by
:func:`generate_pattern` and must never be edited by hand; a test checks that
the two agree.
"""
from __future__ import annotations

import numpy as np

from ..numkit import Rng

PATTERN_SEED = 0x5EED
PATCH_SIZE = 31
PATCH_RADIUS = 15
N_TESTS = 256


def generate_pattern(seed: int = PATTERN_SEED) -> np.ndarray:
    """256 point pairs ``(x1, y1, x2, y2)`` drawn from an isotropic Gaussian.

    Standard deviation is ``PATCH_SIZE / 5``; points are rounded to integers and
    redrawn until both ends lie inside the radius-15 disc and differ.
    """
    rng = Rng(seed)
    sigma = PATCH_SIZE / 5.0
    rows = []
    while len(rows) < N_TESTS:
        p = np.rint(rng.normal(4) * sigma).astype(int)
        if p[0] ** 2 + p[1] ** 2 > PATCH_RADIUS ** 2 or p[2] ** 2 + p[3] ** 2 > PATCH_RADIUS ** 2:
            continue
        if p[0] == p[2] and p[1] == p[3]:
            continue
        rows.append(p)
    return np.array(rows, dtype=np.int8)


def format_table(table: np.ndarray) -> str:
    lines = ['"""Generated by ideoprop.imgcore.pattern.generate_pattern(0x5EED). Do not edit."""', "",
             "PATTERN = ("]
    for row in table:
        lines.append("    (" + ", ".join(str(int(v)) for v in row) + "),")
    lines.append(")")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    print(format_table(generate_pattern()), end="")
