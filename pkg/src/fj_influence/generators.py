"""Random instances for property tests: ring plus forward chords.

The directed ring 0 -> 1 -> ... -> n-1 -> 0 with extra chords u -> v (u < v
only) keeps the wrap edge on every cycle, so nodes 0 and n-1 always lie on
every cycle and the single-index-node requirement holds by construction.
"""

from __future__ import annotations

import numpy as np

from .graph import Network, normalize_rows
from .modifications import Classification, EdgeModification, Verdict, classify
from .errors import NotPermissible

BETA_CHOICES = tuple(round(0.1 * k, 1) for k in range(1, 10))


def random_network(
    n: int,
    rng: np.random.Generator,
    chords: int | None = None,
    self_loop_prob: float = 0.0,
    stubborn: tuple[int, int] | None = None,
) -> Network:
    if n < 3:
        raise ValueError("need n >= 3")
    w = np.zeros((n, n))
    for i in range(n):
        w[(i + 1) % n, i] = rng.uniform(0.25, 1.0)
    candidates = [(u, v) for u in range(n) for v in range(u + 2, n)]
    if chords is None:
        chords = int(rng.integers(1, max(2, n - 1)))
    if chords:
        for idx in rng.choice(len(candidates), size=min(chords, len(candidates)), replace=False):
            u, v = candidates[idx]
            w[v, u] = rng.uniform(0.25, 1.0)
    if self_loop_prob > 0.0:
        for i in range(n):
            if rng.uniform() < self_loop_prob:
                w[i, i] = rng.uniform(0.25, 1.0)
    w = normalize_rows(w)
    if stubborn is None:
        pair = rng.choice(n, size=2, replace=False)
        stubborn = (int(pair[0]), int(pair[1]))
    beta = np.zeros(n)
    for agent in stubborn:
        beta[agent] = rng.choice(BETA_CHOICES)
    return Network(n, w, beta)


def candidate_modifications(net: Network) -> list[EdgeModification]:
    """Structurally valid triples at the midpoint transfer weight."""
    out = []
    w = net.weights
    for b in range(net.n):
        for d in range(net.n):
            if d == b or w[b, d] <= 0.0:
                continue
            for a in range(net.n):
                if a in (b, d) or w[b, a] > 0.0:
                    continue
                out.append(EdgeModification(a, b, d, float(w[b, d]) / 2.0))
    return out


def sample_classified_pairs(
    want: Verdict,
    count: int,
    rng: np.random.Generator,
    n_range: tuple[int, int] = (4, 12),
    self_loop_prob: float = 0.25,
) -> list[tuple[Network, EdgeModification, Classification]]:
    """Rejection-sample (network, rewiring) pairs whose verdict matches."""
    found: list[tuple[Network, EdgeModification, Classification]] = []
    while len(found) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        net = random_network(n, rng, self_loop_prob=self_loop_prob)
        mods = candidate_modifications(net)
        rng.shuffle(mods)
        for mod in mods:
            try:
                cls = classify(net, mod)
            except NotPermissible:
                continue
            if cls.verdict is want:
                found.append((net, mod, cls))
                if len(found) >= count:
                    break
    return found
