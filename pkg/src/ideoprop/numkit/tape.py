"""Reverse-mode automatic differentiation over dense float64 arrays.

Every operation appends a node to a :class:`Tape`. Nodes store the indices
of their parents and a closure mapping the output adjoint to one adjoint per
parent, so the backward pass is a single reverse sweep over the node list.

Plain ``numpy`` arrays can be mixed into any operation; they are treated as
constants and receive no gradient.
"""
from __future__ import annotations

import math

import numpy as np


class ShapeError(ValueError):
    pass


class Var:
    __slots__ = ("tape", "idx", "value")

    def __init__(self, tape: "Tape", idx: int, value: np.ndarray):
        self.tape = tape
        self.idx = idx
        self.value = value

    @property
    def shape(self):
        return self.value.shape

    @property
    def T(self) -> "Var":
        return transpose(self)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def __repr__(self):
        return f"Var(idx={self.idx}, shape={self.value.shape})"


class Tape:
    """Records primitive operations in topological (creation) order."""

    def __init__(self, check_finite: bool = True):
        self.parents: list[tuple[int, ...]] = []
        self.vjps: list = []
        self.check_finite = check_finite

    def __len__(self):
        return len(self.parents)

    def var(self, value) -> Var:
        value = np.array(value, dtype=np.float64)
        return self._push(value, (), None, "leaf")

    def _push(self, value: np.ndarray, parents: tuple[int, ...], vjp, op: str) -> Var:
        if self.check_finite and not np.all(np.isfinite(value)):
            raise FloatingPointError(f"non-finite output from {op}")
        self.parents.append(parents)
        self.vjps.append(vjp)
        return Var(self, len(self.parents) - 1, value)

    def gradient(self, out: Var, wrt: list[Var]) -> list[np.ndarray]:
        """Adjoints of the scalar ``out`` with respect to each entry of ``wrt``."""
        if out.value.size != 1:
            raise ShapeError(f"gradient needs a scalar output, got shape {out.value.shape}")
        adj: list = [None] * (out.idx + 1)
        adj[out.idx] = np.ones_like(out.value)
        for i in range(out.idx, -1, -1):
            g = adj[i]
            if g is None or not self.parents[i]:
                continue
            for p, gp in zip(self.parents[i], self.vjps[i](g)):
                if gp is None:
                    continue
                adj[p] = gp if adj[p] is None else adj[p] + gp
        grads = []
        for v in wrt:
            g = adj[v.idx] if v.idx < len(adj) else None
            grads.append(np.zeros_like(v.value) if g is None else g)
        return grads


def _tape_of(*xs) -> Tape:
    for x in xs:
        if isinstance(x, Var):
            return x.tape
    raise TypeError("at least one operand must be a Var")


def _val(x) -> np.ndarray:
    return x.value if isinstance(x, Var) else np.asarray(x, dtype=np.float64)


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, n in enumerate(shape):
        if n == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g


def _binary(a, b, value, ga, gb, op):
    tape = _tape_of(a, b)
    va, vb = _val(a), _val(b)
    items = []
    if isinstance(a, Var):
        items.append((a.idx, lambda g: _unbroadcast(ga(g), va.shape)))
    if isinstance(b, Var):
        items.append((b.idx, lambda g: _unbroadcast(gb(g), vb.shape)))
    parents = tuple(i for i, _ in items)
    fns = [f for _, f in items]
    return tape._push(value, parents, lambda g: [f(g) for f in fns], op)


def add(a, b) -> Var:
    return _binary(a, b, _val(a) + _val(b), lambda g: g, lambda g: g, "add")


def sub(a, b) -> Var:
    return _binary(a, b, _val(a) - _val(b), lambda g: g, lambda g: -g, "sub")


def mul(a, b) -> Var:
    va, vb = _val(a), _val(b)
    return _binary(a, b, va * vb, lambda g: g * vb, lambda g: g * va, "mul")


def matmul(a, b) -> Var:
    va, vb = _val(a), _val(b)
    if va.ndim != 2 or vb.ndim != 2 or va.shape[1] != vb.shape[0]:
        raise ShapeError(f"matmul shape mismatch: {va.shape} @ {vb.shape}")
    return _binary(a, b, va @ vb, lambda g: g @ vb.T, lambda g: va.T @ g, "matmul")


def _unary(x: Var, value, dfn, op) -> Var:
    return x.tape._push(value, (x.idx,), lambda g: [dfn(g)], op)


def transpose(x: Var) -> Var:
    return _unary(x, x.value.T, lambda g: g.T, "transpose")


def relu(x: Var) -> Var:
    mask = x.value > 0
    return _unary(x, np.where(mask, x.value, 0.0), lambda g: g * mask, "relu")


def clamp(x: Var, lo: float, hi: float) -> Var:
    inside = (x.value >= lo) & (x.value <= hi)
    return _unary(x, np.clip(x.value, lo, hi), lambda g: g * inside, "clamp")


def exp(x: Var) -> Var:
    y = np.exp(x.value)
    return _unary(x, y, lambda g: g * y, "exp")


def square(x: Var) -> Var:
    v = x.value
    return _unary(x, v * v, lambda g: 2.0 * g * v, "square")


def total(x: Var) -> Var:
    shape = x.value.shape
    return _unary(x, np.asarray(x.value.sum()), lambda g: np.full(shape, float(g)), "sum")


def mean(x: Var) -> Var:
    shape, n = x.value.shape, x.value.size
    return _unary(x, np.asarray(x.value.mean()), lambda g: np.full(shape, float(g) / n), "mean")


def sigmoid(x) -> np.ndarray:
    """Numerically stable logistic function on plain arrays."""
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0, e) / (1.0 + e)


def stable_bce(logit: float, target: float, weight: float = 1.0) -> float:
    """Weighted binary cross-entropy of a single logit, overflow-free."""
    if weight <= 0:
        raise ValueError(f"weight must be positive, got {weight}")
    x = float(logit)
    return weight * (max(x, 0.0) - x * target + math.log1p(math.exp(-abs(x))))


def bce_logits(x: Var, target: np.ndarray, weight=1.0) -> Var:
    """Elementwise ``stable_bce`` over a logit matrix (no reduction)."""
    v = x.value
    t = np.asarray(target, dtype=np.float64)
    w = np.asarray(weight, dtype=np.float64)
    e = np.exp(-np.abs(v))
    loss = w * (np.maximum(v, 0.0) - v * t + np.log1p(e))
    dloss = w * (np.where(v >= 0, 1.0, e) / (1.0 + e) - t)
    return _unary(x, loss, lambda g: g * dloss, "bce_logits")


def select_rows(x: Var, rows) -> Var:
    rows = np.asarray(rows, dtype=np.intp)
    shape = x.value.shape

    def back(g):
        out = np.zeros(shape)
        np.add.at(out, rows, g)
        return out

    return _unary(x, x.value[rows], back, "select_rows")
