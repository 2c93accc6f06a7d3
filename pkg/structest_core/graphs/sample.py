"""
Mutable configurations: spin vectors and random-graph samples

SpinConfig holds a ±1 vector with its plus-count; GraphSample holds the
edge-indicator vector over the N = n(n-1)/2 vertex pairs (lexicographic
order) with its edge count and degree sequence. Both are single-owner
objects; the incremental updates keep the caches in step with the data.
"""

from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import numpy as np

from structest_core.errors import ConfigurationError


class SpinConfig:
    """±1 spin vector with cached plus-count"""

    def __init__(self, spins):
        arr = np.asarray(spins, dtype=np.int8).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("Spins must be a non-empty 1-d sequence")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("Spins must be ±1")
        self.spins = arr
        self.plus_count = int(np.count_nonzero(arr > 0))

    @classmethod
    def from_plus_sites(cls, n: int, plus_sites: Iterable[int]) -> 'SpinConfig':
        spins = -np.ones(n, dtype=np.int8)
        spins[np.fromiter((int(i) for i in plus_sites), dtype=np.int64)] = 1
        return cls(spins)

    @property
    def n(self) -> int:
        return int(self.spins.size)

    @property
    def magnetization(self) -> float:
        return (2 * self.plus_count - self.n) / self.n

    @property
    def magnetization_exact(self) -> Fraction:
        return Fraction(2 * self.plus_count - self.n, self.n)

    def plus_set(self) -> List[int]:
        return np.flatnonzero(self.spins > 0).tolist()

    def flip(self, i: int) -> None:
        self.spins[i] = -self.spins[i]
        self.plus_count += 1 if self.spins[i] > 0 else -1

    def check(self) -> bool:
        """Recompute the plus-count from the spins and compare with the cache"""
        return self.plus_count == int(np.count_nonzero(self.spins > 0))

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, SpinConfig) and np.array_equal(self.spins, other.spins)

    def __repr__(self):
        return f"SpinConfig(n={self.n}, m={self.magnetization:+.4f})"

    def dumps(self) -> str:
        """One-line form: '+' and '-' characters in site order"""
        return ''.join('+' if s > 0 else '-' for s in self.spins)

    @classmethod
    def loads(cls, line: str) -> 'SpinConfig':
        line = line.strip()
        if not line or set(line) - {'+', '-'}:
            raise ConfigurationError("Spin line must consist of '+' and '-' characters")
        return cls([1 if c == '+' else -1 for c in line])


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, u: int, v: int) -> int:
    """Lexicographic index of the pair {u, v}, u != v"""
    if u == v or not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"Invalid vertex pair ({u}, {v}) for n={n}")
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_arrays(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Endpoints of every pair in lexicographic order"""
    u, v = np.triu_indices(n, k=1)
    return u.astype(np.int64), v.astype(np.int64)


class GraphSample:
    """Simple graph on n vertices stored as edge indicators"""

    def __init__(self, n: int, edge_indicators=None):
        if n < 2:
            raise ValueError(f"A graph sample needs at least 2 vertices, got n={n}")
        N = pair_count(n)
        if edge_indicators is None:
            x = np.zeros(N, dtype=np.uint8)
        else:
            x = np.asarray(edge_indicators, dtype=np.uint8).copy()
            if x.shape != (N,) or np.any(x > 1):
                raise ValueError(f"Edge indicators must be a 0/1 vector of length {N}")
        self.n = n
        self.x = x
        u, v = pair_arrays(n)
        self.degrees = (np.bincount(u, weights=x, minlength=n)
                        + np.bincount(v, weights=x, minlength=n)).astype(np.int64)
        self.edge_count = int(x.sum())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'GraphSample':
        s = cls(n)
        for u, v in edges:
            if s.has_edge(u, v):
                raise ValueError(f"Repeated edge ({u}, {v})")
            s.toggle(u, v)
        return s

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> 'GraphSample':
        n = adj.shape[0]
        u, v = pair_arrays(n)
        return cls(n, adj[u, v])

    @property
    def N(self) -> int:
        return int(self.x.size)

    @property
    def edge_indicators(self) -> np.ndarray:
        return self.x

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.x[pair_index(self.n, u, v)])

    def edges(self) -> List[Tuple[int, int]]:
        u, v = pair_arrays(self.n)
        on = self.x.astype(bool)
        return list(zip(u[on].tolist(), v[on].tolist()))

    def toggle(self, u: int, v: int) -> int:
        """
        Toggle the pair {u, v}.

        Returns:
            Change in wedge count caused by the toggle
        """
        delta = wedge_delta(self, (u, v))
        e = pair_index(self.n, u, v)
        step = -1 if self.x[e] else 1
        self.x[e] = 1 - self.x[e]
        self.degrees[u] += step
        self.degrees[v] += step
        self.edge_count += step
        return delta

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        u, v = pair_arrays(self.n)
        a[u, v] = self.x
        a[v, u] = self.x
        return a

    def check(self) -> bool:
        """Verify cached edge count and degrees against the indicators"""
        fresh = GraphSample(self.n, self.x)
        return fresh.edge_count == self.edge_count and np.array_equal(fresh.degrees, self.degrees)

    def __eq__(self, other):
        return isinstance(other, GraphSample) and self.n == other.n and np.array_equal(self.x, other.x)

    def __repr__(self):
        return f"GraphSample(n={self.n}, E={self.edge_count})"

    def dumps(self) -> str:
        """Header 'n' followed by one 'u v' line per edge"""
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    def dumps_line(self) -> str:
        """One-line form 'n:bits' with the indicators in lexicographic pair order"""
        return f"{self.n}:" + ''.join('1' if b else '0' for b in self.x)

    @classmethod
    def loads(cls, text: str) -> 'GraphSample':
        """Parse the edge-list form, or the first line of a one-line-per-sample file"""
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows:
            raise ConfigurationError("Empty graph sample")
        if ':' in rows[0][0]:
            return cls.from_line(rows[0][0])
        if len(rows[0]) != 1:
            raise ConfigurationError("Graph sample must start with an 'n' header line")
        try:
            n = int(rows[0][0])
            edges = [(int(a), int(b)) for a, b in rows[1:]]
        except ValueError as e:
            raise ConfigurationError(f"Malformed graph sample: {e}")
        return cls.from_edges(n, edges)

    @classmethod
    def from_line(cls, line: str) -> 'GraphSample':
        head, _, bits = line.strip().partition(':')
        try:
            n = int(head)
        except ValueError:
            raise ConfigurationError(f"Malformed graph line header {head!r}")
        if n < 2 or len(bits) != pair_count(n) or set(bits) - {'0', '1'}:
            raise ConfigurationError(f"Indicator line does not describe a graph on {n} vertices")
        return cls(n, [int(b) for b in bits])


def wedge_count(s: GraphSample) -> int:
    """Number of wedges (2-paths): sum over vertices of C(deg, 2)"""
    deg = s.degrees
    return int(np.sum(deg * (deg - 1) // 2))


def wedge_count_by_pairs(s: GraphSample) -> int:
    """Wedge count by scanning all pairs of edges for a shared vertex"""
    edges = s.edges()
    total = 0
    for i, (a, b) in enumerate(edges):
        for c, e in edges[i + 1:]:
            if len({a, b} & {c, e}) == 1:
                total += 1
    return total


def wedge_delta(s: GraphSample, e: Tuple[int, int]) -> int:
    """
    Change in wedge count from toggling the pair e, in O(1).

    Adding {u, v} creates deg(u) + deg(v) wedges (degrees before insertion);
    removing it destroys deg(u) + deg(v) - 2 wedges.
    """
    u, v = e
    through = int(s.degrees[u] + s.degrees[v])
    if s.has_edge(u, v):
        return -(through - 2)
    return through


def read_spin_config(path: Union[str, Path], index: int = 0) -> SpinConfig:
    lines = [line for line in Path(path).read_text().splitlines() if line.strip()]
    if index >= len(lines):
        raise ConfigurationError(f"{path} holds {len(lines)} configurations, index {index} requested")
    return SpinConfig.loads(lines[index])


def read_graph_sample(path: Union[str, Path], index: int = 0) -> GraphSample:
    """Line `index` of a one-line-per-graph file, or a whole edge-list file"""
    lines = [line for line in Path(path).read_text().splitlines() if line.strip()]
    if not lines:
        raise ConfigurationError(f"{path} is empty")
    if ':' not in lines[0]:
        return GraphSample.loads("\n".join(lines))
    if index >= len(lines):
        raise ConfigurationError(f"{path} holds {len(lines)} graphs, index {index} requested")
    return GraphSample.from_line(lines[index])
