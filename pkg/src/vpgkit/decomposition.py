"""Caterpillar branch decompositions built from grid representations, and width evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import PreconditionError, UnknownVertexError
from .graph import (
    DEFAULT_EDGE_BUDGET,
    Graph,
    bits,
    crossing_adjacency,
    cut_max_induced_matching,
    intersection_graph,
    max_bipartite_matching,
    popcount,
)
from .model import GridPath, GridPoint, GridRep, induced_subrepresentation


@dataclass(frozen=True)
class BranchDecomposition:
    """A subcubic tree whose leaves are mapped one-to-one onto graph vertices.

    ``order`` is set for caterpillars and lists the vertices along the spine.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    leaves: dict[int, str]
    order: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = self.node_count
        if n and len(self.edges) != n - 1:
            raise ValueError("a tree on k nodes needs k-1 edges")
        deg = [0] * n
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("tree contains a cycle")
            parent[ra] = rb
        if any(d > 3 for d in deg):
            raise ValueError("tree is not subcubic")
        leaf_nodes = {i for i in range(n) if deg[i] <= 1}
        if set(self.leaves) != leaf_nodes:
            raise ValueError("leaf map must cover exactly the leaves of the tree")
        if len(set(self.leaves.values())) != len(self.leaves):
            raise ValueError("leaf map is not injective")

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.leaves.values())

    def check(self, g: Graph) -> None:
        if self.vertex_set != set(g.vertices):
            raise ValueError("decomposition leaves do not match the graph's vertices")

    def adjacency(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return nbrs

    def rooted(self, root: int = 0) -> tuple[list[int], list[int]]:
        """Postorder node list and parent array (root's parent is -1)."""
        nbrs = self.adjacency()
        parent = [-1] * self.node_count
        order = []
        stack = [root]
        seen = {root}
        while stack:
            u = stack.pop()
            order.append(u)
            for v in nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    parent[v] = u
                    stack.append(v)
        order.reverse()
        return order, parent

    def cut_masks(self, g: Graph) -> list[tuple[tuple[int, int], int]]:
        """For every tree edge, the vertex mask of the side away from node 0."""
        if self.node_count == 0:
            return []
        post, parent = self.rooted(0)
        sub = [0] * self.node_count
        for u in post:
            if u in self.leaves:
                sub[u] |= 1 << g.idx(self.leaves[u])
            if parent[u] >= 0:
                sub[parent[u]] |= sub[u]
        return [((parent[u], u), sub[u]) for u in post if parent[u] >= 0]

    def export(self) -> str:
        lines = [f"leaf {node} {v}" for node, v in sorted(self.leaves.items())]
        lines += [f"edge {a} {b}" for a, b in self.edges]
        return "\n".join(lines) + "\n"


def caterpillar(order: Sequence[str]) -> BranchDecomposition:
    """Caterpillar with spine nodes ``0..n-1`` and pendant ``n-1+i`` on spine node ``i``."""
    n = len(order)
    if n == 0:
        return BranchDecomposition(0, (), {}, ())
    if n == 1:
        return BranchDecomposition(1, (), {0: order[0]}, tuple(order))
    edges = [(i, i + 1) for i in range(n - 1)]
    leaves = {0: order[0], n - 1: order[-1]}
    for i in range(1, n - 1):
        edges.append((i, n - 1 + i))
        leaves[n - 1 + i] = order[i]
    return BranchDecomposition(2 * n - 2, tuple(edges), leaves, tuple(order))


# ---------------------------------------------------------------------------
# construction from a representation

def endpoint_normalize(r: GridRep) -> GridRep:
    """Trim free path ends back to the first/last intersection point.

    A path meeting others in a single grid-point only gets trimmed when neither of
    its endpoints lies on another path; it keeps one free end.
    """
    occ = r.occupancy
    out = []
    for p in r.paths:
        tr = p.trace
        hits = [i for i, q in enumerate(tr) if len(occ[q]) > 1]
        if not hits:
            raise PreconditionError(f"path {p.id!r} meets no other path (isolated vertex)")
        first_free = len(occ[tr[0]]) == 1
        last_free = len(occ[tr[-1]]) == 1
        if len({tr[i] for i in hits}) == 1:
            if first_free and last_free:
                out.append(GridPath.from_trace(p.id, tr[hits[0]:]))
            else:
                out.append(p)
            continue
        lo = hits[0] if first_free else 0
        hi = hits[-1] if last_free else len(tr) - 1
        out.append(p if (lo, hi) == (0, len(tr) - 1) else GridPath.from_trace(p.id, tr[lo:hi + 1]))
    return r.with_paths(out)


def intersection_point_order(r: GridRep) -> list[GridPoint]:
    """Intersection points row by row from the top, left to right within a row."""
    return sorted(r.intersection_points, key=lambda q: (-q.y, q.x))


class PathOrderKey(NamedTuple):
    anchor_index: int
    direction_rank: int


# clockwise from the left grid-edge
_RANK = {(-1, 0): 0, (0, 1): 1, (1, 0): 2, (0, -1): 3}


def path_order_keys(r: GridRep) -> dict[str, PathOrderKey]:
    rank = {q: i for i, q in enumerate(intersection_point_order(r))}
    keys = {}
    for p in r.paths:
        cands = [rank[q] for q in (p.first, p.last) if q in rank]
        if not cands:
            raise PreconditionError(f"path {p.id!r} has no endpoint on another path")
        j = min(cands)
        tr = p.trace
        if rank.get(p.first) == j:
            a, b = tr[0], tr[1]
        else:
            a, b = tr[-1], tr[-2]
        keys[p.id] = PathOrderKey(j, _RANK[(b.x - a.x, b.y - a.y)])
    return keys


def build_caterpillar_decomposition(r: GridRep) -> BranchDecomposition:
    """Caterpillar whose leaves follow the equivalence-class order, ties by path id.

    ``r`` must already be endpoint-normalized.
    """
    keys = path_order_keys(r)
    return caterpillar(sorted(keys, key=lambda pid: (keys[pid], pid)))


def decompose(r: GridRep) -> BranchDecomposition:
    """Caterpillar for any representation: isolated paths go last, in id order."""
    g = intersection_graph(r)
    isolated = [v for v, a in zip(g.vertices, g.adj) if not a]
    core = [v for v, a in zip(g.vertices, g.adj) if a]
    order: list[str] = []
    if core:
        norm = endpoint_normalize(induced_subrepresentation(r, core))
        order = list(build_caterpillar_decomposition(norm).order or ())
    return caterpillar(order + isolated)


# ---------------------------------------------------------------------------
# width evaluation

@dataclass(frozen=True)
class CutValue:
    edge: tuple[int, int]
    side_size: int
    value: int


def _singleton_value(g: Graph, mask: int) -> int | None:
    if popcount(mask) == 1:
        return 1 if g.adj[mask.bit_length() - 1] else 0
    rest = g.all_mask & ~mask
    if popcount(rest) == 1:
        return 1 if g.adj[rest.bit_length() - 1] else 0
    return None


def _caterpillar_cuts(g: Graph, bd: BranchDecomposition) -> list[tuple[tuple[int, int], int]]:
    order = bd.order or ()
    n = len(order)
    out = []
    prefix = 0
    for i, v in enumerate(order[:-1]):
        prefix |= 1 << g.idx(v)
        out.append(((i, i + 1), prefix))
    for i in range(1, n - 1):
        out.append(((i, n - 1 + i), 1 << g.idx(order[i])))
    return out


def cut_values_mm(g: Graph, bd: BranchDecomposition) -> list[CutValue]:
    """Maximum matching size across every tree edge of ``bd``.

    Caterpillar spines are walked left to right, carrying the previous matching
    forward as the starting point for the next augmentation.
    """
    bd.check(g)
    cuts = _caterpillar_cuts(g, bd) if bd.order is not None else bd.cut_masks(g)
    out = []
    carried: dict[int, int] = {}
    for edge, mask in cuts:
        single = _singleton_value(g, mask)
        if single is not None:
            out.append(CutValue(edge, popcount(mask), single))
            continue
        left = crossing_adjacency(g, mask)
        start = {u: v for u, v in carried.items() if u in left and left[u] >> v & 1}
        matching = max_bipartite_matching(left, start)
        if bd.order is not None:
            carried = matching
        out.append(CutValue(edge, popcount(mask), len(matching)))
    return out


def cut_values_mim(g: Graph, bd: BranchDecomposition,
                   edge_budget: int | None = DEFAULT_EDGE_BUDGET) -> list[CutValue]:
    bd.check(g)
    cuts = _caterpillar_cuts(g, bd) if bd.order is not None else bd.cut_masks(g)
    out = []
    for edge, mask in cuts:
        single = _singleton_value(g, mask)
        value = single if single is not None else cut_max_induced_matching(g, mask, edge_budget)
        out.append(CutValue(edge, popcount(mask), value))
    return out


def decomposition_mm_width(g: Graph, bd: BranchDecomposition) -> int:
    return max((c.value for c in cut_values_mm(g, bd)), default=0)


def decomposition_mim_width(g: Graph, bd: BranchDecomposition,
                            edge_budget: int | None = DEFAULT_EDGE_BUDGET) -> int:
    return max((c.value for c in cut_values_mim(g, bd, edge_budget)), default=0)


def clique_augment(g: Graph, s: Iterable[str]) -> Graph:
    """Copy of ``g`` with the vertex set ``s`` turned into a clique."""
    mask = 0
    for v in s:
        if v not in g.index:
            raise UnknownVertexError(f"unknown vertex {v!r}")
        mask |= 1 << g.index[v]
    if popcount(mask) < 2:
        return g
    adj = list(g.adj)
    for i in bits(mask):
        adj[i] |= mask & ~(1 << i)
    return Graph(g.vertices, adj, g.origin)
