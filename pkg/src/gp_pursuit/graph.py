"""Generalised Petersen graphs GP(n, k).

Vertices are addressed by integer ids: outer vertex a_i has id i and inner
vertex b_i has id n + i.  The :class:`Vertex` named tuple is the readable
form used at API boundaries and in text I/O.
"""

from __future__ import annotations

import enum
import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import FamilyError, ParamError

EXCEPTIONS = frozenset({(28, 8), (35, 10), (35, 15)})


class Ring(enum.IntEnum):
    OUTER = 0
    INNER = 1


class Vertex(NamedTuple):
    ring: Ring
    index: int

    def id(self, n: int) -> int:
        return int(self.ring) * n + self.index % n

    @classmethod
    def from_id(cls, vid: int, n: int) -> "Vertex":
        if not 0 <= vid < 2 * n:
            raise ParamError(f"vertex id {vid} out of range for n={n}")
        return cls(Ring(vid // n), vid % n)

    def name(self) -> str:
        return f"{'ab'[self.ring]}{self.index}"


def a(i: int, n: int) -> int:
    """Id of outer vertex a_i."""
    return i % n


def b(i: int, n: int) -> int:
    """Id of inner vertex b_i."""
    return n + i % n


def vertex_name(vid: int, n: int) -> str:
    return ("a" if vid < n else "b") + str(vid % n)


_VERTEX_RE = re.compile(r"^\s*([abAB])\s*_?\s*(-?\d+)\s*$")


def parse_vertex(text: str, n: int) -> int:
    """Parse ``a<i>`` / ``b<i>`` into an id.  Indices must lie in [0, n)."""
    m = _VERTEX_RE.match(text)
    if not m:
        raise ParamError(f"cannot parse vertex {text!r}")
    idx = int(m.group(2))
    if not 0 <= idx < n:
        raise ParamError(f"vertex index {idx} out of range for n={n}")
    return idx if m.group(1).lower() == "a" else n + idx


def rotate(v: Vertex, t: int, n: int) -> Vertex:
    return Vertex(v.ring, (v.index + t) % n)


def reflect(v: Vertex, n: int) -> Vertex:
    return Vertex(v.ring, (-v.index) % n)


def rotate_id(vid: int, t: int, n: int) -> int:
    base = n if vid >= n else 0
    return base + (vid - base + t) % n


def reflect_id(vid: int, n: int) -> int:
    base = n if vid >= n else 0
    return base + (base - vid) % n


def check_params(n: int, k: int) -> None:
    if n < 5:
        raise ParamError(f"need n >= 5, got n={n}")
    if k < 1 or 2 * k >= n:
        raise ParamError(f"need 1 <= k < n/2, got n={n}, k={k}")


@dataclass(frozen=True, eq=False)
class GPGraph:
    """Immutable GP(n, k).

    ``adj[v]`` lists the three neighbours of ``v`` in a fixed order:
    (a_{i+1}, a_{i-1}, b_i) for outer vertices and (b_{i+k}, b_{i-k}, a_i)
    for inner ones.  ``closed[v]`` is ``v`` followed by ``adj[v]``.
    """

    n: int
    k: int
    adj: np.ndarray = field(repr=False)
    closed: np.ndarray = field(repr=False)
    _dist_rows: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return 2 * self.n

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.adj[v])

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.adj[u] == v).any())

    def edges(self) -> list[tuple[int, int]]:
        """All 3n edges as (min id, max id), sorted."""
        out = set()
        for u in range(self.order):
            for v in self.adj[u]:
                out.add((min(u, int(v)), max(u, int(v))))
        return sorted(out)

    def distances_from(self, src: int) -> np.ndarray:
        row = self._dist_rows.get(src)
        if row is None:
            row = _bfs(self.adj, src)
            row.setflags(write=False)
            # setdefault keeps the first published row if two readers race
            row = self._dist_rows.setdefault(src, row)
        return row

    def distance(self, u: int, v: int) -> int:
        return int(self.distances_from(u)[v])

    def distance_matrix(self) -> np.ndarray:
        return np.stack([self.distances_from(v) for v in range(self.order)])

    def name(self, vid: int) -> str:
        return vertex_name(vid, self.n)


def _bfs(adj: np.ndarray, src: int) -> np.ndarray:
    dist = np.full(len(adj), -1, dtype=np.int64)
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def make_graph(n: int, k: int) -> GPGraph:
    check_params(n, k)
    adj = np.empty((2 * n, 3), dtype=np.int64)
    for i in range(n):
        adj[i] = (a(i + 1, n), a(i - 1, n), b(i, n))
        adj[n + i] = (b(i + k, n), b(i - k, n), a(i, n))
    closed = np.concatenate([np.arange(2 * n, dtype=np.int64)[:, None], adj], axis=1)
    adj.setflags(write=False)
    closed.setflags(write=False)
    return GPGraph(n, k, adj, closed)


def girth(g: GPGraph) -> int:
    """Shortest cycle length, by BFS from every vertex."""
    best = 1 << 30
    for s in range(g.order):
        dist = {s: 0}
        parent = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in g.adj[u]:
                v = int(v)
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


class Girth7Tag(str, enum.Enum):
    SEVEN_K_OVER_I = "SevenKOverI"
    K_EQUALS_FOUR = "KEqualsFour"
    TWO_K_PLUS_THREE = "TwoKPlusThree"
    THREE_K_PLUS_MINUS_TWO = "ThreeKPlusMinusTwo"


def girth7_conditions(n: int, k: int) -> set[Girth7Tag]:
    """Arithmetic girth-7 conditions matched by (n, k).

    These are reported, never used to infer girth: GP(7,1) satisfies n = 7k
    but has girth 4.
    """
    check_params(n, k)
    tags = set()
    if any(i * n == 7 * k for i in (1, 2, 3)):
        tags.add(Girth7Tag.SEVEN_K_OVER_I)
    if k == 4:
        tags.add(Girth7Tag.K_EQUALS_FOUR)
    if n == 2 * k + 3:
        tags.add(Girth7Tag.TWO_K_PLUS_THREE)
    if n in (3 * k + 2, 3 * k - 2):
        tags.add(Girth7Tag.THREE_K_PLUS_MINUS_TWO)
    return tags


@dataclass(frozen=True)
class FamilyParams:
    n: int
    k: int
    divisor: int
    exception: bool


def family_membership(n: int, k: int) -> FamilyParams | None:
    check_params(n, k)
    for i in (1, 2, 3):
        if i * n == 7 * k:
            if n >= 42 or (n, k) in EXCEPTIONS:
                return FamilyParams(n, k, i, (n, k) in EXCEPTIONS)
            return None
    return None


def require_family(g: GPGraph) -> FamilyParams:
    fam = family_membership(g.n, g.k)
    if fam is None:
        raise FamilyError(f"GP({g.n},{g.k}) is not in the n = 7k/i family")
    return fam


@dataclass(frozen=True)
class NeighbourhoodTree:
    """Depth-4 unfolding of the graph around ``root``.

    ``layers[d]`` holds ``(vertex, parent_slot)`` pairs; slot numbers index
    into ``layers[d - 1]``.  ``coincidences`` lists ``(vertex, slot, slot)``
    for depth-4 slots that name the same vertex.
    """

    root: int
    layers: tuple[tuple[tuple[int, int], ...], ...]
    coincidences: tuple[tuple[int, int, int], ...]
    shallow_repeats: tuple[int, ...]
    closures: tuple[int, ...] = ()  # depth-4 slots naming a vertex of depth <= 3

    def coincident_vertices(self) -> set[int]:
        return {v for v, _, _ in self.coincidences}


def unfold(g: GPGraph, root: int, depth: int = 4) -> list[list[tuple[int, int]]]:
    """Non-backtracking walk tree of the given depth (no family check)."""
    layers = [[(root, -1)]]
    prev_of = [-1]
    for _ in range(depth):
        nxt, nxt_prev = [], []
        for slot, (v, _) in enumerate(layers[-1]):
            back = prev_of[slot]
            for w in g.adj[v]:
                w = int(w)
                if w != back:
                    nxt.append((w, slot))
                    nxt_prev.append(v)
        layers.append(nxt)
        prev_of = nxt_prev
    return layers


def neighbourhood_tree(g: GPGraph, root: int) -> NeighbourhoodTree:
    require_family(g)
    layers = unfold(g, root, 4)
    shallow = [v for layer in layers[:4] for v, _ in layer]
    seen: dict[int, int] = {}
    repeats = []
    for v in shallow:
        if v in seen:
            repeats.append(v)
        seen[v] = 1
    by_vertex: dict[int, list[int]] = {}
    closures = []
    for slot, (v, _) in enumerate(layers[4]):
        by_vertex.setdefault(v, []).append(slot)
        if v in seen:
            closures.append(v)
    coincidences = []
    for v, slots in sorted(by_vertex.items()):
        for i in range(len(slots)):
            for j in range(i + 1, len(slots)):
                coincidences.append((v, slots[i], slots[j]))
    return NeighbourhoodTree(
        root,
        tuple(tuple(layer) for layer in layers),
        tuple(coincidences),
        tuple(repeats),
        tuple(closures),
    )


def expected_coincidences(g: GPGraph, root: int) -> set[int]:
    """The four depth-4 vertices reached twice, by formula."""
    n, k = g.n, g.k
    i = root % n
    make = a if root < n else b
    return {make(i + s * k + t, n) for s in (-1, 1) for t in (-1, 1)}


def has_dotted_edge(g: GPGraph, j: int) -> bool:
    """Whether b_{j+3k} and b_{j-3k} are adjacent."""
    return g.adjacent(b(j + 3 * g.k, g.n), b(j - 3 * g.k, g.n))


class ExportFormat(str, enum.Enum):
    DOT = "dot"
    JSON = "json"
    ADJLIST = "adjlist"


def export_graph(g: GPGraph, fmt: ExportFormat | str) -> str:
    fmt = ExportFormat(fmt)
    edges = g.edges()
    if fmt is ExportFormat.JSON:
        return json.dumps({"n": g.n, "k": g.k, "edges": [list(e) for e in edges]})
    if fmt is ExportFormat.DOT:
        lines = [f"graph GP_{g.n}_{g.k} {{"]
        lines += [f"  {g.name(u)} -- {g.name(v)};" for u, v in edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines = []
    for v in range(g.order):
        nbrs = " ".join(g.name(int(w)) for w in sorted(g.adj[v]))
        lines.append(f"{g.name(v)}: {nbrs}")
    return "\n".join(lines) + "\n"
