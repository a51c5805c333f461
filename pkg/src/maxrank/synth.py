"""Seeded synthetic directed graphs used as small stand-ins for web crawls."""

from __future__ import annotations

import numpy as np

from .graph import Graph

GENERATORS = ("erdos_renyi", "preferential_attachment")


def erdos_renyi(n: int, p: float, seed: int = 0) -> np.ndarray:
    """Each ordered pair ``(i, j)``, ``i != j``, is an edge with probability ``p``."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise ValueError(f"bad Erdos-Renyi parameters n={n}, p={p}")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    return np.argwhere(mask).astype(np.int64)


def preferential_attachment(n: int, m: int = 3, seed: int = 0,
                            reciprocity: float = 0.0) -> np.ndarray:
    """Directed growth model: node ``t`` links to ``m`` earlier nodes.

    Targets are drawn without repetition with probability proportional to
    ``in_degree + 1``.  With probability ``reciprocity`` each new link is
    answered by a link back, which adds cycles.
    """
    if n < 1 or m < 1:
        raise ValueError(f"bad preferential-attachment parameters n={n}, m={m}")
    if not 0.0 <= reciprocity <= 1.0:
        raise ValueError("reciprocity must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pool: list[int] = [0]  # node i appears in_degree(i) + 1 times
    edges: list[tuple[int, int]] = []
    for t in range(1, n):
        want = min(m, t)
        chosen: set[int] = set()
        while len(chosen) < want:
            chosen.add(pool[int(rng.integers(len(pool)))])
        for s in sorted(chosen):
            edges.append((t, s))
            pool.append(s)
            if reciprocity and rng.random() < reciprocity:
                edges.append((s, t))
                pool.append(t)
        pool.append(t)
    return np.asarray(edges, dtype=np.int64).reshape(-1, 2)


def generate(name: str, n: int, param: float, seed: int = 0, **kw) -> Graph:
    if name == "erdos_renyi":
        edges = erdos_renyi(n, float(param), seed)
    elif name == "preferential_attachment":
        edges = preferential_attachment(n, int(param), seed, **kw)
    else:
        raise ValueError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")
    return Graph.from_edges(n, edges)
