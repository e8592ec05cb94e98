"""Exact Independent Set / Dominating Set.

Two independent routes: brute-force searches used as oracles, and a dynamic program
over a branch decomposition whose tables are indexed by neighbor classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .decomposition import BranchDecomposition
from .errors import ClassBudgetExceeded, InstanceTooLarge
from .graph import Cut, Graph, bits, popcount

DEFAULT_CLASS_BUDGET = 200_000
DEFAULT_BRUTE_FORCE_LIMIT = 60


class Kind(str, Enum):
    IS = "IS"
    DS = "DS"


@dataclass
class Solution:
    kind: Kind
    vertices: frozenset[str]
    verified: bool = False

    @property
    def value(self) -> int:
        return len(self.vertices)

    def to_text(self) -> str:
        lines = [f"{self.kind.value} {self.value}"] + sorted(self.vertices)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Solution:
        head, *rest = text.strip().splitlines()
        kind, value = head.split()
        sol = cls(Kind(kind), frozenset(line.strip() for line in rest if line.strip()))
        if sol.value != int(value):
            raise ValueError(f"solution header says {value} vertices, body lists {sol.value}")
        return sol


def _solution(g: Graph, kind: Kind, mask: int) -> Solution:
    return Solution(kind, frozenset(g.ids_of(mask)))


def is_independent(g: Graph, mask: int) -> bool:
    return all(not (g.adj[i] & mask) for i in bits(mask))


def is_dominating(g: Graph, mask: int) -> bool:
    covered = mask
    for i in bits(mask):
        covered |= g.adj[i]
    return covered == g.all_mask


def verify_solution(g: Graph, s: Solution) -> bool:
    mask = g.mask_of(s.vertices)
    ok = is_independent(g, mask) if s.kind is Kind.IS else is_dominating(g, mask)
    s.verified = ok
    return ok


# ---------------------------------------------------------------------------
# oracles

def _clique_cover_bound(g: Graph, cand: int) -> int:
    """Number of cliques in a greedy clique cover of ``cand``; bounds alpha from above."""
    count = 0
    rest = cand
    while rest:
        low = rest & -rest
        i = low.bit_length() - 1
        clique = low
        pool = g.adj[i] & rest
        while pool:
            lj = pool & -pool
            j = lj.bit_length() - 1
            clique |= lj
            pool &= g.adj[j]
        rest &= ~clique
        count += 1
    return count


def brute_force_is(g: Graph, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> Solution:
    """Maximum independent set by exhaustive include/exclude search in vertex order.

    Branches are cut with a greedy clique-cover bound. Among optimal sets the
    lexicographically smallest one (in vertex order) is returned.
    """
    if g.n > limit:
        raise InstanceTooLarge(f"brute-force IS refused: n={g.n} > {limit}")
    best = [0, -1]  # mask, size

    def rec(chosen: int, size: int, cand: int) -> None:
        if not cand:
            if size > best[1]:
                best[0], best[1] = chosen, size
            return
        if size + _clique_cover_bound(g, cand) <= best[1]:
            return
        low = cand & -cand
        i = low.bit_length() - 1
        rec(chosen | low, size + 1, cand & ~low & ~g.adj[i])
        rec(chosen, size, cand & ~low)

    rec(0, 0, g.all_mask)
    return _solution(g, Kind.IS, best[0])


def _gamma_branching(g: Graph) -> int:
    closed = [a | (1 << i) for i, a in enumerate(g.adj)]
    best = [g.n]

    def rec(dominated: int, size: int, banned: int) -> None:
        if dominated == g.all_mask:
            best[0] = min(best[0], size)
            return
        if size + 1 >= best[0]:
            return
        undominated = g.all_mask & ~dominated
        # pick the undominated vertex with the fewest admissible dominators
        pick, pick_opts = -1, -1
        for u in bits(undominated):
            opts = closed[u] & ~banned
            c = popcount(opts)
            if c == 0:
                return
            if pick < 0 or c < popcount(pick_opts):
                pick, pick_opts = u, opts
                if c == 1:
                    break
        maxgain = max(popcount(closed[w] & undominated) for w in bits(g.all_mask & ~banned))
        if size + -(-popcount(undominated) // maxgain) >= best[0]:
            return
        ban = banned
        for w in bits(pick_opts):
            rec(dominated | closed[w], size + 1, ban)
            ban |= 1 << w

    rec(0, 0, 0)
    return best[0]


def brute_force_ds(g: Graph, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> Solution:
    """Minimum dominating set, lexicographically smallest among the optimal ones.

    The optimum size comes from a branching search on the most constrained
    undominated vertex; a second include/exclude pass in vertex order then finds
    the first dominating set of that size.
    """
    if g.n > limit:
        raise InstanceTooLarge(f"brute-force DS refused: n={g.n} > {limit}")
    if g.n == 0:
        return Solution(Kind.DS, frozenset())
    gamma = _gamma_branching(g)
    closed = [a | (1 << i) for i, a in enumerate(g.adj)]
    # vertices whose closed neighborhood is fully decided once index i is decided
    closing = [0] * g.n
    for u in range(g.n):
        closing[closed[u].bit_length() - 1] |= 1 << u
    maxdeg = max(popcount(c) for c in closed)
    found = [None]

    def rec(i: int, chosen: int, size: int, dominated: int) -> bool:
        if closing[i - 1] & ~dominated if i else False:
            return False
        undominated = g.all_mask & ~dominated
        if not undominated:
            found[0] = chosen
            return True
        if i == g.n or size >= gamma:
            return False
        if size + -(-popcount(undominated) // maxdeg) > gamma:
            return False
        return (rec(i + 1, chosen | (1 << i), size + 1, dominated | closed[i])
                or rec(i + 1, chosen, size, dominated))

    rec(0, 0, 0, 0)
    assert found[0] is not None
    return _solution(g, Kind.DS, found[0])


# ---------------------------------------------------------------------------
# neighbor classes

@dataclass(frozen=True)
class NeighborClass:
    side: str
    representative: frozenset[str]
    signature: frozenset[str]


def neighbor_classes(g: Graph, side: int, other: int, budget: int = DEFAULT_CLASS_BUDGET) -> dict[int, int]:
    """Signature mask -> representative mask for every reachable ``N(X) & other``, ``X`` within ``side``.

    Breadth-first closure from the empty set, extending by one boundary vertex at
    a time; vertices of ``side`` without neighbors in ``other`` never change a
    signature and are skipped.
    """
    boundary = [(1 << v, g.adj[v] & other) for v in bits(side) if g.adj[v] & other]
    classes = {0: 0}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for sig, rep in frontier:
            for vbit, vsig in boundary:
                s = sig | vsig
                if s not in classes:
                    classes[s] = rep | vbit
                    nxt.append((s, rep | vbit))
        if len(classes) > budget:
            raise ClassBudgetExceeded(
                f"{len(classes)} neighbor classes on a side of {popcount(side)} vertices exceed the budget {budget}")
        frontier = nxt
    return classes


def enumerate_neighbor_classes(g: Graph, cut: Cut, side: str = "a",
                               budget: int = DEFAULT_CLASS_BUDGET) -> list[NeighborClass]:
    a = cut.mask(g)
    b = g.all_mask & ~a
    mine, other = (a, b) if side == "a" else (b, a)
    return [
        NeighborClass(side, frozenset(g.ids_of(rep)), frozenset(g.ids_of(sig)))
        for sig, rep in neighbor_classes(g, mine, other, budget).items()
    ]


# ---------------------------------------------------------------------------
# decomposition DP

@dataclass
class DPStats:
    max_table: int = 0
    max_classes: int = 0


def _leaf_sets(g: Graph, bd: BranchDecomposition):
    bd.check(g)
    post, parent = bd.rooted(0)
    children: dict[int, list[int]] = {u: [] for u in post}
    for u in post:
        if parent[u] >= 0:
            children[parent[u]].append(u)
    return post, children


def solve_is_bd(g: Graph, bd: BranchDecomposition, budget: int = DEFAULT_CLASS_BUDGET,
                stats: DPStats | None = None) -> Solution:
    """Maximum independent set by dynamic programming over ``bd``.

    For a subtree with vertex set ``A`` the table maps the signature
    ``N(X) & ~A`` of an independent ``X`` within ``A`` to the largest such ``X``.
    Two partial sets from disjoint subtrees conflict exactly when one's signature
    meets the other set, which depends on the classes only.
    """
    if g.n == 0:
        return Solution(Kind.IS, frozenset(), verified=True)
    full = g.all_mask
    post, children = _leaf_sets(g, bd)
    tables: dict[int, tuple[int, dict[int, tuple[int, int]]]] = {}
    for u in post:
        parts = []
        if u in bd.leaves:
            v = g.index[bd.leaves[u]]
            leaf: dict[int, tuple[int, int]] = {0: (0, 0)}
            leaf[g.adj[v]] = (1, 1 << v)
            parts.append((1 << v, leaf))
        parts.extend(tables.pop(c) for c in children[u])
        a_mask, table = parts[0]
        for b_mask, other in parts[1:]:
            a_mask |= b_mask
            outside = full & ~a_mask
            merged: dict[int, tuple[int, int]] = {}
            for s1, (k1, x1) in table.items():
                for s2, (k2, x2) in other.items():
                    if s1 & x2:
                        continue
                    s = (s1 | s2) & outside
                    k = k1 + k2
                    cur = merged.get(s)
                    if cur is None or k > cur[0]:
                        merged[s] = (k, x1 | x2)
            if len(merged) > budget:
                raise ClassBudgetExceeded(f"IS table with {len(merged)} classes exceeds the budget {budget}")
            table = merged
            if stats is not None:
                stats.max_table = max(stats.max_table, len(table))
        tables[u] = (a_mask, table)
    _, root = tables[post[-1]]
    size, x = max(root.values(), key=lambda e: e[0])
    return _solution(g, Kind.IS, x)


def solve_ds_bd(g: Graph, bd: BranchDecomposition, budget: int = DEFAULT_CLASS_BUDGET,
                stats: DPStats | None = None) -> Solution:
    """Minimum dominating set by dynamic programming over ``bd``.

    A table for vertex set ``A`` is keyed by ``(s, o)``: ``s = N(X) & ~A`` is the
    class of the chosen part ``X``, and ``o`` is the neighborhood inside ``A`` of
    some set outside ``A`` (the help ``A`` may still receive). The entry is a
    smallest ``X`` such that every vertex of ``A`` is in ``X``, adjacent to ``X``,
    or in ``o``. The budget bounds the number of classes of either kind per cut;
    the table itself may hold up to their product.
    """
    if g.n == 0:
        return Solution(Kind.DS, frozenset(), verified=True)
    full = g.all_mask
    post, children = _leaf_sets(g, bd)
    Table = dict[int, dict[int, tuple[int, int]]]  # s -> o -> (size, X)
    tables: dict[int, tuple[int, Table]] = {}
    for u in post:
        parts: list[tuple[int, Table]] = []
        if u in bd.leaves:
            v = g.index[bd.leaves[u]]
            vb = 1 << v
            leaf: Table = {}
            help_opts = [0, vb] if g.adj[v] else [0]
            if g.adj[v]:
                leaf[0] = {vb: (0, 0)}
            leaf.setdefault(g.adj[v], {})
            for o in help_opts:
                leaf[g.adj[v]][o] = (1, vb)
            parts.append((vb, leaf))
        parts.extend(tables.pop(c) for c in children[u])
        a_mask, table = parts[0]
        for b_mask, other in parts[1:]:
            a1, a2 = a_mask, b_mask
            a_mask = a1 | a2
            outside = full & ~a_mask
            helps = neighbor_classes(g, outside, a_mask, budget)
            merged: Table = {}
            count = 0
            for s1, row1 in table.items():
                for s2, row2 in other.items():
                    s = (s1 | s2) & outside
                    dst = merged.get(s)
                    for o in helps:
                        e1 = row1.get((s2 | o) & a1)
                        if e1 is None:
                            continue
                        e2 = row2.get((s1 | o) & a2)
                        if e2 is None:
                            continue
                        k = e1[0] + e2[0]
                        if dst is None:
                            dst = merged[s] = {}
                        cur = dst.get(o)
                        if cur is None:
                            count += 1
                        if cur is None or k < cur[0]:
                            dst[o] = (k, e1[1] | e2[1])
            if len(merged) > budget:
                raise ClassBudgetExceeded(f"DS table with {len(merged)} classes exceeds the budget {budget}")
            table = merged
            if stats is not None:
                stats.max_table = max(stats.max_table, count)
                stats.max_classes = max(stats.max_classes, len(helps), len(merged))
        tables[u] = (a_mask, table)
    _, root = tables[post[-1]]
    size, x = root[0][0]
    return _solution(g, Kind.DS, x)


def solve(g: Graph, bd: BranchDecomposition, kind: Kind | str, budget: int = DEFAULT_CLASS_BUDGET,
          stats: DPStats | None = None) -> Solution:
    kind = Kind(kind)
    fn = solve_is_bd if kind is Kind.IS else solve_ds_bd
    return fn(g, bd, budget, stats)


def brute_force(g: Graph, kind: Kind | str) -> Solution:
    return brute_force_is(g) if Kind(kind) is Kind.IS else brute_force_ds(g)


def union_solution(kind: Kind, parts: Iterable[Solution]) -> Solution:
    out: set[str] = set()
    for p in parts:
        out |= p.vertices
    return Solution(kind, frozenset(out))
