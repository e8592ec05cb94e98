"""Small builders shared by the test modules."""

from __future__ import annotations

import random
from itertools import combinations

from vpgkit.graph import Graph
from vpgkit.model import Flavor, GridPath, GridRep


def path(pid: str, *pts: tuple[int, int]) -> GridPath:
    return GridPath(pid, tuple(pts))


def rep(*paths: GridPath, flavor: str = "VPG", step: str = "1") -> GridRep:
    return GridRep.of(paths, step, Flavor(flavor))


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    vs = [f"v{i:02d}" for i in range(n)]
    return Graph.from_edges(vs, [(a, b) for a, b in combinations(vs, 2) if rng.random() < p])


def complete(n: int) -> Graph:
    vs = [f"v{i}" for i in range(n)]
    return Graph.from_edges(vs, combinations(vs, 2))


def cycle(n: int) -> Graph:
    vs = [f"v{i}" for i in range(n)]
    return Graph.from_edges(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def path_graph(n: int) -> Graph:
    vs = [f"v{i}" for i in range(n)]
    return Graph.from_edges(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])


def edgeless(n: int) -> Graph:
    return Graph.from_edges([f"v{i}" for i in range(n)], [])


def star(leaves: int) -> Graph:
    vs = ["c"] + [f"l{i}" for i in range(leaves)]
    return Graph.from_edges(vs, [("c", v) for v in vs[1:]])


def random_decomposition(vertices: list[str], seed: int):
    """Random subcubic tree grown by subdividing an edge and hanging a new leaf there."""
    from vpgkit.decomposition import BranchDecomposition, caterpillar

    rng = random.Random(seed)
    vs = list(vertices)
    rng.shuffle(vs)
    if len(vs) < 3:
        return caterpillar(vs)
    edges = [(0, 1)]
    leaves = {0: vs[0], 1: vs[1]}
    nodes = 2
    for v in vs[2:]:
        a, b = edges.pop(rng.randrange(len(edges)))
        mid, leaf = nodes, nodes + 1
        nodes += 2
        edges += [(a, mid), (mid, b), (mid, leaf)]
        leaves[leaf] = v
    return BranchDecomposition(nodes, tuple(edges), leaves)


def wide_instance(n: int, c: int, seed: int, backbone: int | None = None) -> GridRep:
    """Connected c-bounded instance spanning many columns.

    A chain of touching horizontal segments of length ``c`` on row 0 keeps it
    connected; the other paths are short verticals or horizontals near that row.
    """
    rng = random.Random(seed)
    b = backbone if backbone is not None else max(2, n // 2)
    paths = [path(f"h{i:02d}", (i * c, 0), ((i + 1) * c, 0)) for i in range(b)]
    width = b * c
    for j in range(n - b):
        pid = f"u{j:02d}"
        if rng.random() < 0.6:
            x = rng.randint(0, width)
            lo = rng.randint(-2, 0)
            hi = rng.randint(lo + 1, 2)
            paths.append(path(pid, (x, lo), (x, hi)))
        else:
            y = rng.choice([-2, -1, 1, 2])
            x = rng.randint(0, width - 1)
            ln = rng.randint(1, c)
            x2 = min(width, x + ln)
            if rng.random() < 0.5:
                paths.append(path(pid, (x, y), (x2, y)))
            else:
                paths.append(path(pid, (x, y), (x2, y), (x2, 0)))
    return rep(*paths)
