from __future__ import annotations

import numpy as np


def grad_check(loss_fn, params: list[np.ndarray], h: float = 1e-5, analytic=None) -> float:
    """Largest relative disagreement between analytic and central-difference gradients.

    ``loss_fn(params)`` must return ``(loss, grads)``. Pass ``analytic`` to
    check a gradient other than the one ``loss_fn`` reports (used to make sure
    the harness notices a wrong gradient).
    """
    if not 0 < h <= 1e-2:
        raise ValueError(f"h must lie in (0, 1e-2], got {h}")
    params = [np.array(p, dtype=np.float64) for p in params]
    loss0, grads = loss_fn(params)
    if not np.isfinite(loss0):
        raise FloatingPointError("loss is not finite at the base point")
    if analytic is not None:
        grads = analytic
    worst = 0.0
    for k, p in enumerate(params):
        for idx in np.ndindex(p.shape):
            orig = p[idx]
            p[idx] = orig + h
            fp = loss_fn(params)[0]
            p[idx] = orig - h
            fm = loss_fn(params)[0]
            p[idx] = orig
            if not (np.isfinite(fp) and np.isfinite(fm)):
                raise FloatingPointError(f"non-finite loss at parameter {k}, coordinate {idx}")
            fd = (fp - fm) / (2.0 * h)
            a = float(grads[k][idx])
            err = abs(a - fd) / (abs(a) + abs(fd) + 1e-12)
            worst = max(worst, err)
    return worst
