"""Graphs, elimination forests and the reductions built on top of them.

Vertices are the integers ``1..n``.  An elimination forest is stored as a
parent array indexed by vertex (slot 0 unused), where parent 0 marks a root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    """Malformed graph or forest data."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    weights: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (1 <= u < v <= self.n):
                raise GraphError(f"edge ({u}, {v}) must satisfy 1 <= u < v <= n")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise GraphError("one weight per edge expected")
            if any(w < 1 for w in self.weights):
                raise GraphError("edge weights must be positive")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], weights=None) -> "Graph":
        """Build a graph, normalising each edge to ``(min, max)`` order."""
        norm = tuple((min(u, v), max(u, v)) for u, v in edges)
        return cls(n, norm, tuple(weights) if weights is not None else None)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def weight_list(self) -> list[int]:
        return list(self.weights) if self.weights is not None else [1] * self.m

    def with_weights(self, weights: Sequence[int]) -> "Graph":
        return Graph(self.n, self.edges, tuple(weights))

    def is_bipartite(self, left: Optional[set] = None) -> bool:
        """2-colourability test; with ``left`` given, also checks that every
        edge has exactly one endpoint in ``left``."""
        if left is not None:
            return all((u in left) != (v in left) for u, v in self.edges)
        adj = self.adjacency()
        colour = [-1] * (self.n + 1)
        for s in range(1, self.n + 1):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if colour[w] < 0:
                        colour[w] = 1 - colour[u]
                        stack.append(w)
                    elif colour[w] == colour[u]:
                        return False
        return True


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest given by ``parent[v]`` for ``v`` in ``1..n``.

    Construction only checks the array shape; use :func:`validate_forest`
    before handing the forest to the counter.
    """

    parent: tuple[int, ...]
    _children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _depth: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        par = self.parent
        if len(par) == 0 or par[0] != 0:
            raise GraphError("parent array must have an unused slot 0 holding 0")
        n = len(par) - 1
        for v in range(1, n + 1):
            if not 0 <= par[v] <= n:
                raise GraphError(f"parent of {v} out of range")
        children: list[list[int]] = [[] for _ in range(n + 1)]
        for v in range(1, n + 1):
            if par[v]:
                children[par[v]].append(v)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "_depth", tuple(_depths(par)))

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "EliminationForest":
        """Build from a 1-indexed list ``[parent(1), ..., parent(n)]``."""
        return cls((0, *parents))

    @property
    def n(self) -> int:
        return len(self.parent) - 1

    def is_acyclic(self) -> bool:
        return all(d > 0 for d in self._depth[1:])

    @property
    def roots(self) -> list[int]:
        return [v for v in range(1, self.n + 1) if self.parent[v] == 0]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def depth_of(self, v: int) -> int:
        """Number of vertices on the path from the root down to ``v``."""
        return self._depth[v]

    @property
    def depth(self) -> int:
        if not self.is_acyclic():
            raise GraphError("parent array contains a cycle")
        return max(self._depth[1:], default=0)

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if ``a`` is a strict ancestor of ``v``."""
        v = self.parent[v]
        while v:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self._children[u])
        return out

    def call_bound(self) -> int:
        """Sum over vertices of ``4**(depth(v) - 1)``: the number of distinct
        ``(v, J)`` arguments the counting recursion can produce."""
        return sum(4 ** (d - 1) for d in self._depth[1:])


def _depths(parent: Sequence[int]) -> list[int]:
    # depth 0 marks vertices on, or hanging below, a parent-pointer cycle
    n = len(parent) - 1
    depth = [-1] * (n + 1)
    depth[0] = 0
    for s in range(1, n + 1):
        path, v = [], s
        while depth[v] < 0 and len(path) <= n:
            path.append(v)
            v = parent[v]
        if depth[v] < 0:
            base = 0
            for u in path:
                depth[u] = 0
            continue
        base = depth[v]
        broken = v != 0 and base == 0
        for u in reversed(path):
            base = 0 if broken else base + 1
            depth[u] = base
    return depth


@dataclass(frozen=True)
class ForestCheck:
    ok: bool
    message: str = ""
    edge: Optional[tuple[int, int]] = None

    def __bool__(self):
        return self.ok


def validate_forest(g: Graph, f: EliminationForest) -> ForestCheck:
    """Check that ``f`` is an elimination forest of ``g``.

    Never raises; the returned verdict names the first problem found.
    """
    if f.n != g.n:
        return ForestCheck(False, f"forest has {f.n} vertices, graph has {g.n}")
    if not f.is_acyclic():
        return ForestCheck(False, "not a forest: parent pointers contain a cycle")
    for u, v in g.edges:
        if not (f.is_ancestor(u, v) or f.is_ancestor(v, u)):
            return ForestCheck(False, f"edge {{{u},{v}}} joins vertices in different branches", (u, v))
    # with every edge vertical, each component already sits in one tree; still
    # report a connected graph spread over several trees explicitly
    if g.n and len(components(g)) == 1 and len(f.roots) > 1:
        return ForestCheck(False, "connected graph but forest has several trees")
    return ForestCheck(True)


def ancestor_path(f: EliminationForest, v: int) -> list[int]:
    """Strict ancestors of ``v``, root first."""
    out = []
    v = f.parent[v]
    while v:
        out.append(v)
        v = f.parent[v]
    out.reverse()
    return out


def up_edges(g: Graph, f: EliminationForest, v: int) -> list[tuple[int, int]]:
    """Edges joining ``v`` to a strict ancestor, ancestors ordered root first."""
    nbrs = {u for e in g.edges if v in e for u in e if u != v}
    return [(min(a, v), max(a, v)) for a in ancestor_path(f, v) if a in nbrs]


def up_edge_index(g: Graph, f: EliminationForest) -> list[list[tuple[int, int]]]:
    """For every vertex, ``(ancestor, edge index)`` pairs of its up-edges,
    ancestors ordered root first.  Same order as :func:`up_edges`."""
    out: list[list[tuple[int, int]]] = [[] for _ in range(g.n + 1)]
    for i, (u, v) in enumerate(g.edges):
        low, high = (v, u) if f.is_ancestor(u, v) else (u, v)
        out[low].append((high, i))
    for lst in out:
        lst.sort(key=lambda p: f.depth_of(p[0]))
    return out


@dataclass(frozen=True)
class Subdivision:
    graph: Graph
    forest: EliminationForest
    origin: dict[int, int]  # new vertex -> index of the edge it subdivides

    @property
    def original_vertices(self) -> set[int]:
        return set(range(1, self.graph.n - len(self.origin) + 1))


def subdivide(g: Graph, f: EliminationForest) -> Subdivision:
    """Replace every edge ``{u, v}`` by a path ``u - p - v``.

    The new vertex ``p`` becomes a leaf child of the deeper endpoint, so the
    forest depth grows by at most one.  Subdivision vertices are numbered
    ``n+1..n+m`` in edge order and inherit the edge's weight on both halves.
    Edges ``2i`` and ``2i+1`` are the halves of original edge ``i``.
    """
    n, m = g.n, g.m
    parent = list(f.parent) + [0] * m
    edges = []
    weights = [] if g.weights is not None else None
    origin = {}
    for i, (u, v) in enumerate(g.edges):
        p = n + 1 + i
        if f.is_ancestor(u, v):
            parent[p] = v
        else:
            assert f.is_ancestor(v, u), f"edge {{{u},{v}}} is not vertical in the forest"
            parent[p] = u
        edges += [(u, p), (v, p)]
        if weights is not None:
            weights += [g.weights[i], g.weights[i]]
        origin[p] = i
    return Subdivision(Graph.from_edges(n + m, edges, weights), EliminationForest(tuple(parent)), origin)


def add_apex(g: Graph, f: EliminationForest) -> tuple[Graph, EliminationForest]:
    """Add vertex ``n+1`` adjacent to everything and make it the single root."""
    a = g.n + 1
    edges = list(g.edges) + [(v, a) for v in range(1, g.n + 1)]
    parent = [p if p else a for p in f.parent[1:]] + [0]
    return Graph.from_edges(a, edges), EliminationForest.from_parents(parent)


def components(g: Graph) -> list[tuple[Graph, list[int]]]:
    """Connected components as standalone graphs.

    Each map lists the original vertex for local vertex ``i`` at index ``i``
    (index 0 unused).  Components are ordered by their smallest vertex.
    """
    adj = g.adjacency()
    comp = [0] * (g.n + 1)
    groups: list[list[int]] = []
    for s in range(1, g.n + 1):
        if comp[s]:
            continue
        groups.append([])
        comp[s] = len(groups)
        stack = [s]
        while stack:
            u = stack.pop()
            groups[-1].append(u)
            for w in adj[u]:
                if not comp[w]:
                    comp[w] = comp[s]
                    stack.append(w)
    out = []
    ws = g.weight_list()
    for verts in groups:
        verts.sort()
        local = {v: i + 1 for i, v in enumerate(verts)}
        idx = [i for i, (u, v) in enumerate(g.edges) if local.get(u)]
        sub = Graph.from_edges(
            len(verts),
            [(local[g.edges[i][0]], local[g.edges[i][1]]) for i in idx],
            [ws[i] for i in idx] if g.weights is not None else None,
        )
        out.append((sub, [0] + verts))
    return out


def restrict_forest(f: EliminationForest, verts: Sequence[int]) -> EliminationForest:
    """Forest on ``verts`` (renumbered ``1..len``) keeping the ancestor order:
    each vertex's new parent is its nearest ancestor inside ``verts``."""
    local = {v: i + 1 for i, v in enumerate(verts)}
    parent = []
    for v in verts:
        a = f.parent[v]
        while a and a not in local:
            a = f.parent[a]
        parent.append(local[a] if a else 0)
    return EliminationForest.from_parents(parent)


def dfs_forest(g: Graph) -> EliminationForest:
    """DFS tree of every component, rooted at its lowest vertex.

    All non-tree edges of an undirected DFS are back edges, so the result is
    a valid elimination forest (usually far from optimal depth).
    """
    adj = [sorted(a) for a in g.adjacency()]
    parent = [0] * (g.n + 1)
    seen = [False] * (g.n + 1)
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, iter(adj[s]))]
        while stack:
            u, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    stack.append((w, iter(adj[w])))
                    break
            else:
                stack.pop()
    return EliminationForest(tuple(parent))


def separator_forest(g: Graph) -> EliminationForest:
    """Greedy centroid heuristic: repeatedly remove the vertex whose removal
    leaves the smallest largest component (ties to the lowest number) and
    recurse.  Gives depth ``ceil(log2(n+1))`` on paths and one more on cycles.
    """
    adj = [set(a) for a in g.adjacency()]
    parent = [0] * (g.n + 1)

    def comps(verts):
        left, out = set(verts), []
        while left:
            s = min(left)
            left.discard(s)
            group, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w in left:
                        left.discard(w)
                        group.append(w)
                        stack.append(w)
            out.append(group)
        return out

    work = [(c, 0) for c in comps(range(1, g.n + 1))]
    while work:
        verts, above = work.pop()
        best, best_size, best_parts = None, None, None
        for v in sorted(verts):
            parts = comps([u for u in verts if u != v])
            size = max((len(p) for p in parts), default=0)
            if best is None or size < best_size:
                best, best_size, best_parts = v, size, parts
        parent[best] = above
        work.extend((p, best) for p in best_parts)
    return EliminationForest(tuple(parent))


MAX_OPTIMAL_VERTICES = 20


def optimal_forest(g: Graph) -> EliminationForest:
    """Minimum-depth elimination forest by memoised search over connected
    vertex subsets: the depth of a connected set is one plus the best, over
    its vertices, of the deepest component left after removing that vertex.
    Exponential; limited to ``MAX_OPTIMAL_VERTICES`` vertices."""
    if g.n > MAX_OPTIMAL_VERTICES:
        raise GraphError(f"optimal forest search limited to n <= {MAX_OPTIMAL_VERTICES}")
    adj = [0] * (g.n + 1)
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    def comps(mask):
        out = []
        while mask:
            comp = frontier = mask & -mask
            while frontier:
                grow = 0
                while frontier:
                    low = frontier & -frontier
                    grow |= adj[low.bit_length() - 1]
                    frontier ^= low
                frontier = grow & mask & ~comp
                comp |= frontier
            out.append(comp)
            mask &= ~comp
        return out

    memo: dict[int, tuple[int, int]] = {}

    def best(mask):
        if mask not in memo:
            choice = None
            rest = mask
            while rest:
                low = rest & -rest
                rest ^= low
                parts = comps(mask ^ low)
                d = 1 + max((best(c)[0] for c in parts), default=0)
                if choice is None or d < choice[0]:
                    choice = (d, low.bit_length() - 1)
            memo[mask] = choice
        return memo[mask]

    parent = [0] * (g.n + 1)
    work = [(c, 0) for c in comps(sum(1 << v for v in range(1, g.n + 1)))]
    while work:
        mask, above = work.pop()
        v = best(mask)[1]
        parent[v] = above
        work.extend((c, v) for c in comps(mask & ~(1 << v)))
    return EliminationForest(tuple(parent))


# -- text formats ---------------------------------------------------------

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> Graph:
    """Parse ``p <n> <m>`` followed by ``e <u> <v> [<weight>]`` lines."""
    lines = list(_data_lines(text))
    if not lines or lines[0][1][0] != "p" or len(lines[0][1]) != 3:
        raise GraphError("graph file must start with 'p <n> <m>'")
    try:
        n, m = int(lines[0][1][1]), int(lines[0][1][2])
        edges, weights = [], []
        for lineno, tok in lines[1:]:
            if tok[0] != "e" or len(tok) not in (3, 4):
                raise GraphError(f"line {lineno}: expected 'e <u> <v> [<weight>]'")
            edges.append((int(tok[1]), int(tok[2])))
            weights.append(int(tok[3]) if len(tok) == 4 else None)
    except ValueError as exc:
        raise GraphError(f"non-integer field: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    if any(w is not None for w in weights):
        weights = [1 if w is None else w for w in weights]
    else:
        weights = None
    return Graph.from_edges(n, edges, weights)


def format_graph(g: Graph) -> str:
    out = [f"p {g.n} {g.m}"]
    for i, (u, v) in enumerate(g.edges):
        out.append(f"e {u} {v}" + (f" {g.weights[i]}" if g.weights is not None else ""))
    return "\n".join(out) + "\n"


def parse_forest(text: str) -> EliminationForest:
    """Parse ``t <n>`` followed by ``n`` lines, line ``v`` holding parent(v)."""
    lines = list(_data_lines(text))
    if not lines or lines[0][1][0] != "t" or len(lines[0][1]) != 2:
        raise GraphError("forest file must start with 't <n>'")
    try:
        n = int(lines[0][1][1])
        parents = [int(tok[0]) for _, tok in lines[1:] if len(tok) == 1]
    except ValueError as exc:
        raise GraphError(f"non-integer field: {exc}") from None
    if len(parents) != n or len(lines) - 1 != n:
        raise GraphError(f"expected {n} parent lines, found {len(lines) - 1}")
    return EliminationForest.from_parents(parents)


def format_forest(f: EliminationForest) -> str:
    return "\n".join([f"t {f.n}"] + [str(p) for p in f.parent[1:]]) + "\n"


# -- small graph families used by tests, the CLI and the benchmark --------

def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def disjoint_union(*gs: Graph) -> Graph:
    edges, off = [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges]
        off += g.n
    return Graph.from_edges(off, edges)


def petersen_graph() -> Graph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(i + 5, (i + 1) % 5 + 6) for i in range(1, 6)]
    return Graph.from_edges(10, outer + spokes + inner)
