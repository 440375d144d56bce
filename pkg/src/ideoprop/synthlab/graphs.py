from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..bhin import PostRecord
from ..neardup import VisualAssertion
from ..numkit import Rng


@dataclass(frozen=True)
class SynthGraphConfig:
    users_per_side: int = 100
    assertions_per_side: int = 200
    neutral_fraction: float = 0.0
    p_in: float = 0.05
    p_out: float = 0.001
    p_neutral: float | None = None  # defaults to the midpoint of p_in and p_out
    seed: int = 42

    def neutral_prob(self) -> float:
        return (self.p_in + self.p_out) / 2.0 if self.p_neutral is None else self.p_neutral

    def counts(self) -> tuple[int, int, int]:
        """Sided assertion counts and neutral count; the total stays ``2 * assertions_per_side``."""
        total = 2 * self.assertions_per_side
        n_neutral = int(round(self.neutral_fraction * total))
        n_sided = total - n_neutral
        return (n_sided + 1) // 2, n_sided // 2, n_neutral

    def validate(self) -> None:
        if self.users_per_side < 1 or self.assertions_per_side < 1:
            raise ValueError("users_per_side and assertions_per_side must be at least 1")
        if not 0.0 <= self.neutral_fraction < 1.0:
            raise ValueError(f"neutral_fraction must lie in [0, 1), got {self.neutral_fraction}")
        for name in ("p_in", "p_out"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0.0 <= self.neutral_prob() <= 1.0:
            raise ValueError(f"p_neutral must lie in [0, 1], got {self.p_neutral}")
        if self.p_in <= self.p_out:
            warnings.warn("p_in <= p_out: no planted camp structure", stacklevel=3)


@dataclass
class SynthGraph:
    posts: list
    assertions: list
    truth: dict          # assertion_id -> side label
    neutral: frozenset   # assertion ids generated as neutral (label drawn uniformly)
    edges: np.ndarray    # boolean users x assertions incidence


def gen_graph(cfg: SynthGraphConfig) -> SynthGraph:
    cfg.validate()
    rng = Rng(cfg.seed)
    n_a0, n_a1, n_neu = cfg.counts()
    n_users = 2 * cfg.users_per_side
    user_side = np.repeat([0, 1], cfg.users_per_side)
    a_side = np.concatenate([np.zeros(n_a0, int), np.ones(n_a1, int), np.full(n_neu, -1)])
    n_assert = len(a_side)

    prob = np.where(user_side[:, None] == a_side[None, :], cfg.p_in, cfg.p_out)
    prob[:, a_side < 0] = cfg.neutral_prob()
    incidence = rng.uniform((n_users, n_assert)) < prob
    neutral_labels = rng.integers(0, 2, n_neu)

    users = [f"u{i:05d}" for i in range(n_users)]
    assertions = [VisualAssertion(j, frozenset({f"img{j:06d}"})) for j in range(n_assert)]
    posts = [PostRecord(users[i], f"img{j:06d}") for i, j in zip(*np.nonzero(incidence))]
    truth = {}
    for j in range(n_assert):
        truth[j] = int(a_side[j]) if a_side[j] >= 0 else int(neutral_labels[j - n_a0 - n_a1])
    neutral = frozenset(range(n_a0 + n_a1, n_assert))
    return SynthGraph(posts, assertions, truth, neutral, incidence)


def expected_edges(cfg: SynthGraphConfig) -> tuple[float, float]:
    """Mean and variance of the total edge count (a sum of independent Bernoullis)."""
    n_a0, n_a1, n_neu = cfg.counts()
    u = cfg.users_per_side
    terms = [
        (u * (n_a0 + n_a1), cfg.p_in),
        (u * (n_a0 + n_a1), cfg.p_out),
        (2 * u * n_neu, cfg.neutral_prob()),
    ]
    mean = sum(n * p for n, p in terms)
    var = sum(n * p * (1 - p) for n, p in terms)
    return mean, var
