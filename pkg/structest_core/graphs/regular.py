"""
d-regular interaction graphs

Provides the immutable RegularGraph type, deterministic (circulant) and
randomized (pairing model) constructors, the cut size and quadratic-form
statistics, and the plain-text edge-list format.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, List, Optional, Set, Tuple, Union

import networkx as nx
import numpy as np

from shared.config import config
from structest_core.errors import ConfigurationError, GenerationError
from structest_core.rng import as_generator

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class RegularGraph:
    """Immutable simple d-regular graph on vertices 0..n-1"""

    n: int
    d: int
    adjacency: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.d < self.n:
            raise ConfigurationError(f"Need 0 <= d < n, got n={self.n}, d={self.d}")
        if (self.n * self.d) % 2:
            raise ConfigurationError(f"n*d must be even, got n={self.n}, d={self.d}")
        if len(self.adjacency) != self.n:
            raise ConfigurationError("Adjacency must list neighbors for every vertex")
        for v, nbrs in enumerate(self.adjacency):
            if len(nbrs) != self.d or len(set(nbrs)) != self.d:
                raise ConfigurationError(f"Vertex {v} has degree {len(set(nbrs))}, expected {self.d}")
            if v in nbrs:
                raise ConfigurationError(f"Self-loop at vertex {v}")
            if list(nbrs) != sorted(nbrs):
                raise ConfigurationError(f"Neighbors of vertex {v} are not sorted")
            for u in nbrs:
                if not 0 <= u < self.n or v not in self.adjacency[u]:
                    raise ConfigurationError(f"Adjacency is not symmetric at ({v}, {u})")
        if len(self.edges) != self.n * self.d // 2 or len(set(self.edges)) != len(self.edges):
            raise ConfigurationError("Edge list does not match the adjacency structure")
        for u, v in self.edges:
            if not u < v or v not in self.adjacency[u]:
                raise ConfigurationError(f"Edge ({u}, {v}) is not a sorted adjacency pair")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> 'RegularGraph':
        """
        Build a graph from an edge list, inferring d.

        Args:
            n: Vertex count
            edges: Vertex pairs in any orientation

        Returns:
            Validated RegularGraph

        Raises:
            ConfigurationError: If the edges do not form a simple regular graph
        """
        neighbors: List[Set[int]] = [set() for _ in range(n)]
        normalized = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ConfigurationError(f"Self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ConfigurationError(f"Edge ({u}, {v}) out of range for n={n}")
            if v in neighbors[u]:
                raise ConfigurationError(f"Repeated edge ({u}, {v})")
            neighbors[u].add(v)
            neighbors[v].add(u)
            normalized.append((min(u, v), max(u, v)))
        d = len(neighbors[0]) if n else 0
        adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbors)
        return cls(n=n, d=d, adjacency=adjacency, edges=tuple(sorted(normalized)))

    @cached_property
    def edge_array(self) -> Tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as two int64 arrays"""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0].copy(), arr[:, 1].copy()

    @cached_property
    def csr(self) -> Tuple[np.ndarray, np.ndarray]:
        """Compressed neighbor lists (indptr, indices) for the sweep kernels"""
        indptr = np.arange(0, self.n * self.d + 1, self.d, dtype=np.int64)
        indices = np.asarray([u for nbrs in self.adjacency for u in nbrs], dtype=np.int64)
        return indptr, indices

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix"""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        u, v = self.edge_array
        a[u, v] = 1
        a[v, u] = 1
        return a

    def to_networkx(self) -> nx.Graph:
        """Export as a networkx Graph"""
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def build_circulant(n: int, d: int) -> RegularGraph:
    """
    Circulant graph: vertex i adjacent to i±1, ..., i±d/2 (mod n).

    Args:
        n: Vertex count
        d: Even degree, 2 <= d < n

    Returns:
        RegularGraph

    Raises:
        ConfigurationError: For odd d or d >= n
    """
    if d < 2 or d % 2:
        raise ConfigurationError(f"Circulant construction needs an even degree >= 2, got d={d}")
    if d >= n:
        raise ConfigurationError(f"Circulant construction needs d < n, got n={n}, d={d}")
    edges = set()
    for i in range(n):
        for k in range(1, d // 2 + 1):
            j = (i + k) % n
            edges.add((min(i, j), max(i, j)))
    return RegularGraph.from_edges(n, edges)


def _pair_stubs(n: int, d: int, rng: np.random.Generator) -> Optional[Set[Edge]]:
    # Pair stubs at random; unusable pairs are returned to the pool and
    # re-paired until none remain or no valid pairing is left.
    edges: Set[Edge] = set()
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)

    while stubs.size:
        rng.shuffle(stubs)
        leftover = defaultdict(int)
        for s1, s2 in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1

        if leftover and not _has_free_pair(edges, leftover):
            return None

        stubs = np.asarray([v for v, count in leftover.items() for _ in range(count)], dtype=np.int64)
    return edges


def _has_free_pair(edges: Set[Edge], leftover) -> bool:
    vertices = sorted(leftover)
    for i, s1 in enumerate(vertices):
        for s2 in vertices[:i]:
            if (s2, s1) not in edges:
                return True
    return False


def build_random_regular(n: int, d: int, seed=None,
                         max_attempts: Optional[int] = None) -> RegularGraph:
    """
    Random simple d-regular graph from the pairing (configuration) model.

    Args:
        n: Vertex count
        d: Degree, 0 <= d < n with n*d even
        seed: Integer seed or numpy Generator
        max_attempts: Restart budget (default config.retry_factor * n * d)

    Returns:
        RegularGraph, deterministic for a fixed seed

    Raises:
        ConfigurationError: If n*d is odd or d >= n
        GenerationError: If every attempt produced a non-simple pairing
    """
    if (n * d) % 2:
        raise ConfigurationError(f"n*d must be even, got n={n}, d={d}")
    if not 0 <= d < n:
        raise ConfigurationError(f"Need 0 <= d < n, got n={n}, d={d}")

    rng = as_generator(seed)
    budget = max_attempts if max_attempts is not None else config.retry_factor * max(n * d, 1)

    # Dense degrees: pair the sparser complement instead
    complement = d > (n - 1) // 2
    target = n - 1 - d if complement else d

    for attempt in range(1, budget + 1):
        edges = _pair_stubs(n, target, rng)
        if edges is not None:
            if attempt > 1:
                logger.debug(f"Random {d}-regular graph on {n} vertices after {attempt} attempts")
            if complement:
                edges = {(u, v) for u in range(n) for v in range(u + 1, n)} - edges
            return RegularGraph.from_edges(n, edges)

    raise GenerationError(
        f"Could not generate a simple {d}-regular graph on {n} vertices in {budget} attempts; "
        "raise STRUCTEST_RETRY_FACTOR or max_attempts"
    )


def _subset_mask(n: int, subset) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    idx = np.fromiter((int(v) for v in subset), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"Subset has vertices outside 0..{n - 1}")
    mask[idx] = True
    return mask


def cut_size(g: RegularGraph, subset) -> int:
    """
    Number of edges with exactly one endpoint in the subset.

    Args:
        g: Graph
        subset: Iterable of vertices, or a boolean mask of length n

    Returns:
        Cut size d(S, S^c)

    Raises:
        ConfigurationError: For a boolean mask whose length is not n
    """
    if isinstance(subset, np.ndarray) and subset.dtype == bool:
        if subset.shape != (g.n,):
            raise ConfigurationError(f"Boolean mask must have shape ({g.n},), got {subset.shape}")
        mask = subset
    else:
        mask = _subset_mask(g.n, subset)
    u, v = g.edge_array
    return int(np.count_nonzero(mask[u] != mask[v]))


def quadratic_form(g: RegularGraph, x) -> int:
    """
    Half quadratic form x^T A x / 2 = nd/2 - 2 * cut(S(x)), S(x) = {i: x_i = +1}.

    Args:
        g: Graph
        x: SpinConfig or ±1 array of length n

    Returns:
        Integer value of the half quadratic form
    """
    spins = _spins(x)
    if spins.size != g.n:
        raise ValueError(f"Configuration has {spins.size} sites, graph has {g.n}")
    return g.n * g.d // 2 - 2 * cut_size(g, spins > 0)


def quadratic_form_direct(g: RegularGraph, x) -> int:
    """Sum of x_i x_j over edges, for cross-checking quadratic_form"""
    spins = _spins(x).astype(np.int64)
    if spins.size != g.n:
        raise ValueError(f"Configuration has {spins.size} sites, graph has {g.n}")
    u, v = g.edge_array
    return int(np.sum(spins[u] * spins[v]))


def _spins(x) -> np.ndarray:
    return np.asarray(getattr(x, 'spins', x))


# ============================================================================
# Edge-list serialization
# ============================================================================

def dumps_graph(g: RegularGraph) -> str:
    """Serialize as header 'n d' followed by one 'u v' line per edge"""
    lines = [f"{g.n} {g.d}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> RegularGraph:
    """
    Parse the edge-list format written by dumps_graph.

    Raises:
        ConfigurationError: On malformed input or a non-regular edge set
    """
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith('#')]
    if not rows or len(rows[0]) != 2:
        raise ConfigurationError("Graph file must start with a 'n d' header line")
    try:
        n, d = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as e:
        raise ConfigurationError(f"Malformed graph file: {e}")
    g = RegularGraph.from_edges(n, edges)
    if g.d != d:
        raise ConfigurationError(f"Header declares d={d} but edges give d={g.d}")
    return g


def write_graph(g: RegularGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_graph(g))


def read_graph(path: Union[str, Path]) -> RegularGraph:
    return loads_graph(Path(path).read_text())
