"""Simple connected graphs over 1-based vertex ids, used for cluster protocols."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Graph:
    """Undirected simple connected graph on vertices 1..n_vertices."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        normalized = []
        seen = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (1 <= a <= self.n_vertices and 1 <= b <= self.n_vertices):
                raise ValueError(f"edge ({a},{b}) out of range")
            edge = (min(a, b), max(a, b))
            if edge in seen:
                raise ValueError(f"duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)
        normalized.sort()
        object.__setattr__(self, "edges", tuple(normalized))
        if not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self) -> bool:
        if self.n_vertices == 1:
            return True
        adjacency = {v: set() for v in range(1, self.n_vertices + 1)}
        for a, b in self.edges:
            adjacency[a].add(b)
            adjacency[b].add(a)
        seen = {1}
        frontier = [1]
        while frontier:
            v = frontier.pop()
            for u in adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
        return len(seen) == self.n_vertices

    def neighbors(self, vertex: int) -> tuple[int, ...]:
        if not 1 <= vertex <= self.n_vertices:
            raise ValueError(f"vertex {vertex} out of range")
        out = [b if a == vertex else a for a, b in self.edges if vertex in (a, b)]
        return tuple(sorted(out))

    def degree(self, vertex: int) -> int:
        return len(self.neighbors(vertex))


def path_graph(n_vertices: int) -> Graph:
    """Path 1-2-...-n."""
    if n_vertices < 2:
        raise ValueError("a path needs at least two vertices")
    return Graph(n_vertices, tuple((i, i + 1) for i in range(1, n_vertices)))
