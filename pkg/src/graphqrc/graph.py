"""Connected random regular graph sampling and adjacency utilities."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_ATTEMPTS = 10_000
_MAX_REPAIR_ROUNDS = 200


class InfeasibleDegreeError(ValueError):
    """No k-regular graph exists for the requested (n, k)."""


class RetryExhaustedError(RuntimeError):
    """Sampling failed to produce a connected simple graph within the bound."""


@dataclass(frozen=True)
class Graph:
    """A k-regular graph on vertices 0..n-1; edges stored as pairs (i, j), i < j."""

    n_vertices: int
    degree: int
    edges: frozenset[tuple[int, int]]


def _has_suitable_pair(edges: set, leftover: dict) -> bool:
    # The repair round can continue only if some pair of nodes with leftover
    # stubs is not already adjacent.
    nodes = sorted(leftover)
    for i, u in enumerate(nodes):
        for v in nodes[:i]:
            if (v, u) not in edges:
                return True
    return False


def _pairing_attempt(n: int, k: int, rng: np.random.Generator) -> set | None:
    """One pairing-model attempt: shuffle stubs, keep good pairs, repair the rest."""
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), k)
    rounds = 0
    while stubs.size:
        rounds += 1
        if rounds > _MAX_REPAIR_ROUNDS:
            return None
        rng.shuffle(stubs)
        leftover: dict[int, int] = defaultdict(int)
        for s1, s2 in zip(stubs[0::2], stubs[1::2]):
            a, b = (int(s1), int(s2)) if s1 <= s2 else (int(s2), int(s1))
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover[a] += 1
                leftover[b] += 1
        if not leftover:
            return edges
        if not _has_suitable_pair(edges, leftover):
            return None
        stubs = np.repeat(
            np.fromiter(leftover.keys(), dtype=int),
            np.fromiter(leftover.values(), dtype=int),
        )
    return edges


def sample_rrg(
    n: int,
    k: int,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Graph:
    """Sample a connected k-regular graph on n vertices.

    Edges are assigned by the pairing (configuration) model with stub
    repair; disconnected outcomes are rejected and resampled. Raises
    InfeasibleDegreeError when no k-regular graph exists and
    RetryExhaustedError when ``max_attempts`` attempts all fail.
    """
    if k < 1 or k >= n:
        raise InfeasibleDegreeError(f"need 1 <= k < n, got (n, k) = ({n}, {k})")
    if (n * k) % 2 != 0:
        raise InfeasibleDegreeError(f"n*k = {n * k} is odd, no {k}-regular graph on {n} vertices")
    for _ in range(max_attempts):
        edges = _pairing_attempt(n, k, rng)
        if edges is None:
            continue
        g = Graph(n_vertices=n, degree=k, edges=frozenset(edges))
        if is_connected(g):
            return g
    raise RetryExhaustedError(
        f"no connected {k}-regular graph on {n} vertices after {max_attempts} attempts"
    )


def adjacency(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n_vertices, g.n_vertices), dtype=int)
    for i, j in g.edges:
        a[i, j] = 1
        a[j, i] = 1
    return a


def is_connected(g: Graph) -> bool:
    """True iff breadth-first search from vertex 0 reaches every vertex."""
    if g.n_vertices <= 1:
        return True
    neighbors: dict[int, list[int]] = {v: [] for v in range(g.n_vertices)}
    for i, j in g.edges:
        neighbors[i].append(j)
        neighbors[j].append(i)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in neighbors[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n_vertices


def graph_to_json(g: Graph, seed: int | None = None) -> dict:
    """JSON-serializable record of a graph for reproducibility logs."""
    return {
        "n": g.n_vertices,
        "k": g.degree,
        "seed": seed,
        "edges": sorted([list(e) for e in g.edges]),
    }


def graph_from_json(record: dict) -> Graph:
    """Rebuild a Graph from its JSON record, validating the invariants."""
    n, k = int(record["n"]), int(record["k"])
    edges = set()
    for i, j in record["edges"]:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop on vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range")
        edges.add((min(i, j), max(i, j)))
    g = Graph(n_vertices=n, degree=k, edges=frozenset(edges))
    degrees = adjacency(g).sum(axis=1)
    if not np.all(degrees == k):
        raise ValueError(f"degree sequence {degrees.tolist()} is not constant {k}")
    if not is_connected(g):
        raise ValueError("graph is not connected")
    return g
