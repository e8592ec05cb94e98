"""Intersection graphs over bitset adjacency, plus cut matching primitives."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InstanceTooLarge, UnknownVertexError
from .model import GridPath, GridRep


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """Simple undirected graph with an ordered vertex list and bitset adjacency.

    Vertex ``vertices[i]`` owns bit ``1 << i`` in every mask this class hands out.
    """

    def __init__(self, vertices: Sequence[str], adj: Sequence[int],
                 origin: Mapping[str, GridPath] | None = None) -> None:
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.adj = list(adj)
        self.origin = origin
        for i, a in enumerate(self.adj):
            if a >> i & 1:
                raise ValueError(f"self-loop at {self.vertices[i]!r}")
            for j in bits(a):
                if not self.adj[j] >> i & 1:
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
        index = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(index)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            i, j = index[u], index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(vertices, adj)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def all_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, a in enumerate(self.adj) for j in bits(a >> (i + 1) << (i + 1))]

    def edge_ids(self) -> list[tuple[str, str]]:
        vs = self.vertices
        return [(vs[i], vs[j]) for i, j in self.edges()]

    def idx(self, v: str) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def mask_of(self, vs: Iterable[str]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.idx(v)
        return m

    def ids_of(self, mask: int) -> list[str]:
        return [self.vertices[i] for i in bits(mask)]

    def has_edge(self, u: str, v: str) -> bool:
        return bool(self.adj[self.idx(u)] >> self.idx(v) & 1)

    def neighbors(self, v: str) -> list[str]:
        return self.ids_of(self.adj[self.idx(v)])

    def degree(self, v: str) -> int:
        return popcount(self.adj[self.idx(v)])

    def degrees(self) -> list[int]:
        return [popcount(a) for a in self.adj]

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighborhood(self, mask: int) -> int:
        """Open neighborhood of a vertex set (may include members of the set)."""
        out = 0
        for i in bits(mask):
            out |= self.adj[i]
        return out

    def induced(self, keep: Iterable[str]) -> Graph:
        keep = set(keep)
        order = [v for v in self.vertices if v in keep]
        missing = keep - set(self.index)
        if missing:
            raise UnknownVertexError(f"unknown vertex {sorted(missing)[0]!r}")
        old = [self.index[v] for v in order]
        remap = {o: k for k, o in enumerate(old)}
        adj = []
        for o in old:
            a = 0
            for j in bits(self.adj[o]):
                k = remap.get(j)
                if k is not None:
                    a |= 1 << k
            adj.append(a)
        origin = None if self.origin is None else {v: self.origin[v] for v in order}
        return Graph(order, adj, origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def intersection_graph(r: GridRep) -> Graph:
    """One vertex per path; two vertices adjacent iff their paths share a grid-point."""
    n = len(r.paths)
    adj = [0] * n
    for owners in r.occupancy.values():
        if len(owners) > 1:
            m = 0
            for i in owners:
                m |= 1 << i
            for i in owners:
                adj[i] |= m & ~(1 << i)
    return Graph(r.ids, adj, dict(r.by_id))


def connected_components(g: Graph) -> list[list[str]]:
    """Components as id lists, each in vertex order, ordered by smallest member."""
    return [g.ids_of(m) for m in component_masks(g, g.all_mask)]


def component_masks(g: Graph, within: int) -> list[int]:
    out = []
    rest = within
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= g.adj[i]
            nxt &= within & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


def export_edge_list(g: Graph) -> str:
    es = g.edges()
    lines = [f"{g.n} {len(es)}"] + [f"{i} {j}" for i, j in es]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# cuts

@dataclass(frozen=True)
class Cut:
    side_a: frozenset[str]
    side_b: frozenset[str]

    @classmethod
    def of(cls, g: Graph, side_a: Iterable[str]) -> Cut:
        a = frozenset(side_a)
        unknown = a - set(g.index)
        if unknown:
            raise UnknownVertexError(f"unknown vertex {sorted(unknown)[0]!r}")
        return cls(a, frozenset(g.vertices) - a)

    def mask(self, g: Graph) -> int:
        if self.side_a | self.side_b != set(g.vertices) or self.side_a & self.side_b:
            raise ValueError("cut does not partition the vertex set")
        return g.mask_of(self.side_a)


def crossing_adjacency(g: Graph, a_mask: int) -> dict[int, int]:
    """For each side-A vertex with a crossing edge, its neighbors on side B."""
    b_mask = g.all_mask & ~a_mask
    out = {}
    for u in bits(a_mask):
        nb = g.adj[u] & b_mask
        if nb:
            out[u] = nb
    return out


def max_bipartite_matching(left_adj: Mapping[int, int],
                           initial: Mapping[int, int] | None = None) -> dict[int, int]:
    """Hopcroft-Karp on a bipartite graph given as left vertex -> right bitmask.

    ``initial`` is an optional valid matching (left -> right) to start from.
    Returns a maximum matching as a left -> right dict.
    """
    pair_l: dict[int, int] = {}
    pair_r: dict[int, int] = {}
    if initial:
        for u, v in initial.items():
            if u in left_adj and left_adj[u] >> v & 1 and v not in pair_r:
                pair_l[u] = v
                pair_r[v] = u
    left = sorted(left_adj)
    nbrs = {u: list(bits(left_adj[u])) for u in left}
    inf = len(left) + 1
    while True:
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for u in left:
            if u not in pair_l:
                dist[u] = 0
                queue.append(u)
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in nbrs[u]:
                w = pair_r.get(v)
                if w is None:
                    found = min(found, dist[u] + 1)
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == inf:
            break
        # layered DFS, iterative
        for root in left:
            if root in pair_l or dist.get(root) != 0:
                continue
            stack = [(root, iter(nbrs[root]))]
            path: list[tuple[int, int]] = []
            while stack:
                u, it = stack[-1]
                advanced = False
                for v in it:
                    w = pair_r.get(v)
                    if w is None:
                        if dist[u] + 1 == found:
                            path.append((u, v))
                            for pu, pv in path:
                                pair_l[pu] = pv
                                pair_r[pv] = pu
                            stack.clear()
                            advanced = True
                            break
                    elif dist.get(w) == dist[u] + 1:
                        path.append((u, v))
                        stack.append((w, iter(nbrs[w])))
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path:
                        path.pop()
    return pair_l


def cut_max_matching(g: Graph, cut: Cut | int) -> int:
    a_mask = cut if isinstance(cut, int) else cut.mask(g)
    return len(max_bipartite_matching(crossing_adjacency(g, a_mask)))


DEFAULT_EDGE_BUDGET = 64


def max_induced_matching_bipartite(left_adj: Mapping[int, int], right_adj: Mapping[int, int]) -> int:
    """Exact maximum induced matching of a bipartite graph.

    Branch and bound on a maximum-degree vertex: leave it unmatched, or match it to
    one of its neighbors and delete both closed neighborhoods. The upper bound is
    the maximum matching of what remains; connected components are solved apart
    and memoized on their (left, right) vertex masks.
    """
    memo: dict[tuple[int, int], int] = {}

    def solve(lm: int, rm: int) -> int:
        key = (lm, rm)
        hit = memo.get(key)
        if hit is not None:
            return hit
        # strip isolated vertices
        live_l = 0
        for u in bits(lm):
            if left_adj[u] & rm:
                live_l |= 1 << u
        live_r = 0
        for v in bits(rm):
            if right_adj[v] & live_l:
                live_r |= 1 << v
        if not live_l:
            memo[key] = 0
            return 0
        comps = _bipartite_components(left_adj, right_adj, live_l, live_r)
        if len(comps) > 1:
            total = sum(solve(cl, cr) for cl, cr in comps)
            memo[key] = total
            return total
        lm, rm = live_l, live_r
        # a graph with all degrees 1 is an induced matching already
        best_u, best_deg, on_left = -1, 0, True
        for u in bits(lm):
            d = popcount(left_adj[u] & rm)
            if d > best_deg:
                best_u, best_deg, on_left = u, d, True
        for v in bits(rm):
            d = popcount(right_adj[v] & lm)
            if d > best_deg:
                best_u, best_deg, on_left = v, d, False
        if best_deg == 1:
            memo[key] = popcount(lm)
            return popcount(lm)
        bound = len(max_bipartite_matching({u: left_adj[u] & rm for u in bits(lm)}))
        best = 0
        if on_left:
            u = best_u
            nu = left_adj[u] & rm
            for v in bits(nu):
                nv = right_adj[v] & lm
                val = 1 + solve(lm & ~nv, rm & ~nu)
                if val > best:
                    best = val
                    if best == bound:
                        break
            if best < bound:
                best = max(best, solve(lm & ~(1 << u), rm))
        else:
            v = best_u
            nv = right_adj[v] & lm
            for u in bits(nv):
                nu = left_adj[u] & rm
                val = 1 + solve(lm & ~nv, rm & ~nu)
                if val > best:
                    best = val
                    if best == bound:
                        break
            if best < bound:
                best = max(best, solve(lm, rm & ~(1 << v)))
        memo[key] = best
        return best

    lm = 0
    for u in left_adj:
        lm |= 1 << u
    rm = 0
    for v in right_adj:
        rm |= 1 << v
    return solve(lm, rm)


def _bipartite_components(left_adj, right_adj, lm: int, rm: int) -> list[tuple[int, int]]:
    out = []
    rest_l, rest_r = lm, rm
    while rest_l:
        seed = rest_l & -rest_l
        cl, cr = seed, 0
        fl, fr = seed, 0
        while fl or fr:
            nr = 0
            for u in bits(fl):
                nr |= left_adj[u]
            nr &= rest_r & ~cr
            nl = 0
            for v in bits(fr):
                nl |= right_adj[v]
            nl &= rest_l & ~cl
            cr |= nr
            cl |= nl
            fl, fr = nl, nr
        out.append((cl, cr))
        rest_l &= ~cl
        rest_r &= ~cr
    return out


def cut_max_induced_matching(g: Graph, cut: Cut | int, edge_budget: int | None = DEFAULT_EDGE_BUDGET) -> int:
    """Maximum induced matching of the bipartite graph of cut-crossing edges.

    Raises InstanceTooLarge if the number of crossing edges exceeds ``edge_budget``
    (``None`` disables the check).
    """
    a_mask = cut if isinstance(cut, int) else cut.mask(g)
    left = crossing_adjacency(g, a_mask)
    n_edges = sum(popcount(m) for m in left.values())
    if edge_budget is not None and n_edges > edge_budget:
        raise InstanceTooLarge(f"cut has {n_edges} crossing edges, budget is {edge_budget}")
    right: dict[int, int] = {}
    for u, nb in left.items():
        for v in bits(nb):
            right[v] = right.get(v, 0) | (1 << u)
    return max_induced_matching_bipartite(left, right)


# ---------------------------------------------------------------------------
# structure

@dataclass(frozen=True)
class StructuralFlags:
    is_triangle_free: bool
    is_subcubic: bool
    is_bipartite: bool
    is_planar: bool | None = None


def is_triangle_free(g: Graph) -> bool:
    return all(not (g.adj[i] & g.adj[j]) for i, j in g.edges())


def is_bipartite(g: Graph) -> bool:
    color: dict[int, int] = {}
    for s in range(g.n):
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in bits(g.adj[u]):
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def structural_checks(g: Graph, planarity: bool = False) -> StructuralFlags:
    planar = None
    if planarity:
        import networkx as nx

        nxg = nx.Graph()
        nxg.add_nodes_from(range(g.n))
        nxg.add_edges_from(g.edges())
        planar, _ = nx.check_planarity(nxg)
    return StructuralFlags(
        is_triangle_free=is_triangle_free(g),
        is_subcubic=g.max_degree <= 3,
        is_bipartite=is_bipartite(g),
        is_planar=planar,
    )
