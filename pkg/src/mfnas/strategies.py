"""Search strategies behind a common suggest/observe interface.

Each strategy owns its rng (seeded at construction) and its internal state;
a full trajectory is a pure function of (seed, observation history). suggest
and observe alternate one-to-one per trial and must not be called
concurrently on one instance.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .space import (PAPER_SPACE, Genotype, SpaceSpec, encode, mutate_one_slot,
                    sample_uniform)


class SearchStrategy:
    """suggest() -> genotype; observe(genotype, m_value) feeds the result back."""

    def __init__(self, seed: int, space: SpaceSpec = PAPER_SPACE):
        self.space = space
        self.rng = np.random.default_rng(seed)
        self.history: list[tuple[Genotype, float]] = []

    def suggest(self) -> Genotype:
        raise NotImplementedError

    def observe(self, genotype: Genotype, m_value: float) -> None:
        self.history.append((tuple(genotype), float(m_value)))


class RandomSearch(SearchStrategy):
    """Multi-trial random baseline: iid uniform samples, observations ignored."""

    def suggest(self) -> Genotype:
        return sample_uniform(self.rng, self.space)


@dataclass
class _Member:
    genotype: Genotype
    m_value: float
    birth: int


class RegularizedEvolution(SearchStrategy):
    """Aging evolution: mutate a tournament winner, evict the oldest member.

    Warmup suggestions are uniform random until the population queue is full;
    afterwards each suggestion is a single-slot mutation of the best of
    `sample_size` members drawn without replacement (ties go to the earliest
    inserted).
    """

    def __init__(self, seed: int, space: SpaceSpec = PAPER_SPACE,
                 population_size: int = 10, sample_size: int = 3):
        super().__init__(seed, space)
        if sample_size > population_size:
            raise ValueError("sample_size cannot exceed population_size")
        self.population_size = population_size
        self.sample_size = sample_size
        self.population: deque[_Member] = deque()
        self._births = 0

    def suggest(self) -> Genotype:
        if len(self.population) < self.population_size:
            return sample_uniform(self.rng, self.space)
        idx = self.rng.choice(len(self.population), size=self.sample_size, replace=False)
        parent = min((self.population[int(i)] for i in idx),
                     key=lambda m: (-m.m_value, m.birth))
        return mutate_one_slot(parent.genotype, self.rng, self.space)

    def observe(self, genotype: Genotype, m_value: float) -> None:
        super().observe(genotype, m_value)
        self.population.append(_Member(tuple(genotype), float(m_value), self._births))
        self._births += 1
        while len(self.population) > self.population_size:
            self.population.popleft()


class TpeSearch(SearchStrategy):
    """Tree-structured Parzen estimator over independent categorical slots.

    After `n_startup` random trials, observations are split at the gamma
    quantile of m_value into good/bad sets; per-slot Laplace-smoothed
    categoricals l (good) and g (bad) are fit, `n_candidates` genotypes are
    drawn from l, and the candidate maximizing prod_i l_i/g_i is suggested.
    """

    def __init__(self, seed: int, space: SpaceSpec = PAPER_SPACE,
                 gamma: float = 0.25, n_startup: int = 10, n_candidates: int = 24):
        super().__init__(seed, space)
        if not 0.0 < gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        self.gamma = gamma
        self.n_startup = n_startup
        self.n_candidates = n_candidates
        # introspection for tests: last candidate pool and scores
        self.last_candidates: list[Genotype] | None = None
        self.last_scores: np.ndarray | None = None
        self.last_good_size: int | None = None

    def _densities(self) -> tuple[np.ndarray, np.ndarray, int]:
        n = len(self.history)
        n_good = math.ceil(self.gamma * n)
        ranked = sorted(range(n), key=lambda i: -self.history[i][1])  # stable: ties by trial
        good = set(ranked[:n_good])
        k = self.space.num_choices
        slots = self.space.num_slots
        good_counts = np.zeros((slots, k))
        bad_counts = np.zeros((slots, k))
        for i, (genotype, _) in enumerate(self.history):
            counts = good_counts if i in good else bad_counts
            for s, v in enumerate(genotype):
                counts[s, v] += 1
        l = (good_counts + 1) / (n_good + k)
        g = (bad_counts + 1) / ((n - n_good) + k)
        return l, g, n_good

    def suggest(self) -> Genotype:
        if len(self.history) < self.n_startup:
            self.last_candidates = None
            self.last_scores = None
            self.last_good_size = None
            return sample_uniform(self.rng, self.space)
        l, g, n_good = self._densities()
        log_ratio = np.log(l) - np.log(g)
        candidates = []
        for _ in range(self.n_candidates):
            slots = tuple(int(self.rng.choice(self.space.num_choices, p=l[s]))
                          for s in range(self.space.num_slots))
            candidates.append(slots)
        scores = np.array([sum(log_ratio[s, v] for s, v in enumerate(c)) for c in candidates])
        best = min(range(len(candidates)),
                   key=lambda i: (-scores[i], encode(candidates[i], self.space)))
        assert all(scores[best] >= s for s in scores)
        self.last_candidates = candidates
        self.last_scores = scores
        self.last_good_size = n_good
        return candidates[best]


class PolicyGradient(SearchStrategy):
    """Score-function policy gradient over independent per-slot categoricals.

    The policy is a logits matrix (slots x choices), zero-initialized so the
    first suggestion is uniform. Updates use reward minus an exponential
    moving-average baseline (initialized to the first reward).
    """

    def __init__(self, seed: int, space: SpaceSpec = PAPER_SPACE,
                 learning_rate: float = 1.0, baseline_decay: float = 0.9):
        super().__init__(seed, space)
        self.learning_rate = learning_rate
        self.baseline_decay = baseline_decay
        self.logits = np.zeros((space.num_slots, space.num_choices))
        self.baseline: float | None = None

    def probabilities(self) -> np.ndarray:
        z = self.logits - self.logits.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def suggest(self) -> Genotype:
        probs = self.probabilities()
        return tuple(int(self.rng.choice(self.space.num_choices, p=probs[s]))
                     for s in range(self.space.num_slots))

    def observe(self, genotype: Genotype, m_value: float) -> None:
        super().observe(genotype, m_value)
        reward = float(m_value)
        if self.baseline is None:
            self.baseline = reward
        advantage = reward - self.baseline
        self.apply_update(genotype, advantage)
        self.baseline = (self.baseline_decay * self.baseline
                         + (1.0 - self.baseline_decay) * reward)

    def apply_update(self, genotype: Genotype, advantage: float) -> None:
        """REINFORCE step: logits += lr * advantage * grad log pi(genotype)."""
        probs = self.probabilities()
        for s, v in enumerate(genotype):
            grad = -probs[s]
            grad[v] += 1.0
            self.logits[s] += self.learning_rate * advantage * grad


STRATEGIES = {
    "random": RandomSearch,
    "evolution": RegularizedEvolution,
    "tpe": TpeSearch,
    "policy_rl": PolicyGradient,
}


def make_strategy(name: str, seed: int, space: SpaceSpec = PAPER_SPACE,
                  **hyperparams) -> SearchStrategy:
    try:
        cls = STRATEGIES[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}") from None
    return cls(seed, space, **hyperparams)
