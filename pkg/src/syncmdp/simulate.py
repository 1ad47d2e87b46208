"""Distribution propagation, norm sequences, empirical synchronization checks.

Propagation is exact (dense matrix-vector products), no path sampling. The
norm of a step is its largest single-state probability; the strong check asks
for a suffix where every norm clears 1 - epsilon, the weak check for a suffix
where every window of the given length contains such a step. Verdicts from
finite traces are estimates and are labeled "empirical" wherever they surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .model import MarkovChain, Mdp
from .synthesize import Strategy

STRONG = "strong"
WEAK = "weak"


@dataclass(frozen=True)
class DistributionTrace:
    """Step-indexed probability rows: probs[k] is the distribution after k steps."""

    probs: np.ndarray

    @cached_property
    def norms(self) -> np.ndarray:
        return self.probs.max(axis=1)

    @property
    def steps(self) -> int:
        return self.probs.shape[0] - 1

    def support(self, step: int) -> int:
        mask = 0
        for i, p in enumerate(self.probs[step]):
            if p > 0.0:
                mask |= 1 << i
        return mask

    def mass_on(self, mask: int) -> np.ndarray:
        idx = [i for i in range(self.probs.shape[1]) if mask >> i & 1]
        return self.probs[:, idx].sum(axis=1)


@dataclass(frozen=True)
class SyncEstimate:
    objective: str
    epsilon: float
    window: int
    verdict: str  # "pass" | "fail"
    first_step: int | None
    violating_step: int | None
    label: str = field(default="empirical")


@lru_cache(maxsize=128)
def _action_matrices(mdp: Mdp) -> tuple[np.ndarray, ...]:
    n = mdp.n_states
    mats = []
    for a in range(mdp.n_actions):
        m = np.zeros((n, n))
        for s in range(n):
            m[s, :] = mdp.rows[s][a].probs
        mats.append(m)
    return tuple(mats)


def simulate(mdp: Mdp, strategy: Strategy, steps: int) -> DistributionTrace:
    """Exact outcome sequence of ``strategy``: steps+1 distribution rows."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    mats = _action_matrices(mdp)
    n = mdp.n_states
    letter_mats: dict = {}
    out = np.empty((steps + 1, n))
    x = np.array(mdp.initial.probs)
    out[0] = x
    for k in range(steps):
        letter = strategy.letter_at(k)
        m = letter_mats.get(letter)
        if m is None:
            if letter.mode == "blind":
                m = mats[letter.act(0)]
            else:
                m = np.vstack(
                    [mats[strategy.action_at(k, s)][s] for s in range(n)]
                )
            letter_mats[letter] = m
        x = x @ m
        out[k + 1] = x
    return DistributionTrace(out)


def power_iterate(mc: MarkovChain, steps: int) -> DistributionTrace:
    """Distribution rows of a Markov chain under repeated one-step updates."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    n = mc.n_states
    m = np.array([mc.rows[s].probs for s in range(n)])
    out = np.empty((steps + 1, n))
    x = np.array(mc.initial.probs)
    out[0] = x
    for k in range(steps):
        x = x @ m
        out[k + 1] = x
    return DistributionTrace(out)


def check_sync(
    trace: DistributionTrace, objective: str, epsilon: float, window: int
) -> SyncEstimate:
    """Empirical synchronization verdict on a finite trace."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if window < 1:
        raise ValueError("window must be >= 1")
    norms = trace.norms
    last = trace.steps
    good = norms >= 1.0 - epsilon

    if objective == STRONG:
        bad = np.flatnonzero(~good)
        n0 = int(bad[-1]) + 1 if bad.size else 0
        if n0 <= last - window:
            return SyncEstimate(objective, epsilon, window, "pass", n0, None)
        violating = int(bad[-1]) if bad.size else None
        return SyncEstimate(objective, epsilon, window, "fail", None, violating)

    if objective == WEAK:
        # A window start t is bad when [t, t+window-1] holds no good step.
        starts = last - window + 2
        if starts <= 0:
            return SyncEstimate(objective, epsilon, window, "fail", None, 0)
        bad_starts = [
            t for t in range(starts) if not good[t : t + window].any()
        ]
        n0 = bad_starts[-1] + 1 if bad_starts else 0
        if n0 <= last - window:
            return SyncEstimate(objective, epsilon, window, "pass", n0, None)
        return SyncEstimate(
            objective, epsilon, window, "fail", None, bad_starts[-1] if bad_starts else None
        )

    raise ValueError(f"unknown objective {objective!r}")


def default_epsilon(mdp: Mdp) -> float:
    """Certification threshold: half the collapse margin the minimum
    transition probability allows, capped at 0.01."""
    nu = mdp.min_prob
    return min(0.01, nu / (2.0 * (1.0 + nu)))


def default_horizon(mdp: Mdp, strategy: Strategy) -> int:
    """Simulation length giving the product chain generous time to converge."""
    return max(5000, 200 * (strategy.m + strategy.d) * mdp.n_states)
