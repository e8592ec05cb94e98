"""Instance laboratory: B0-CPG normalization, splitting gadgets with exact optimum offsets,
the split-graph representation, and seeded random generators.
"""

from __future__ import annotations

import csv
import io
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GenerationExhausted, PreconditionError, UnknownVertexError
from .graph import Graph, intersection_graph, structural_checks
from .model import Flavor, GridPath, GridPoint, GridRep, horizontal_part, refine_grid, unit_edge
from .solvers import Kind

# ---------------------------------------------------------------------------
# contacts in B0-CPG representations


def _contacts(r: GridRep) -> dict[str, list[tuple[GridPoint, str]]]:
    """Per path, its contact points in trace order with the other path met there."""
    occ = r.occupancy
    ids = r.ids
    out: dict[str, list[tuple[GridPoint, str]]] = {}
    for i, p in enumerate(r.paths):
        out[p.id] = [(q, ids[j]) for q in p.trace for j in occ[q] if j != i]
    return out


def _interior_contacts(p: GridPath, contacts: list[tuple[GridPoint, str]]) -> list[GridPoint]:
    return [q for q, _ in contacts if q not in (p.first, p.last)]


def check_b0cpg(r: GridRep) -> Graph:
    """Intersection graph of ``r``; raises unless ``r`` is a contact-only B0-CPG with a subcubic triangle-free graph."""
    if r.flavor is not Flavor.CPG:
        raise PreconditionError("representation flavor must be CPG")
    for p in r.paths:
        if p.bends:
            raise PreconditionError(f"path {p.id!r} has {p.bends} bends; expected straight segments")
    for q, owners in r.occupancy.items():
        if len(owners) < 2:
            continue
        through = [r.paths[i].id for i in owners if q not in (r.paths[i].first, r.paths[i].last)]
        if len(through) > 1:
            raise PreconditionError(f"paths {through} cross at {tuple(q)} without touching")
    g = intersection_graph(r)
    flags = structural_checks(g)
    if not flags.is_subcubic:
        raise PreconditionError("intersection graph is not subcubic")
    if not flags.is_triangle_free:
        raise PreconditionError("intersection graph has a triangle")
    return g


# ---------------------------------------------------------------------------
# normalization

def column_bound(n: int) -> int:
    """Column budget for a normalized representation of ``n`` paths (compaction, then 3 refinements)."""
    return 8 * 3 * n + 1


def audit_normalized(r: GridRep, min_len: int) -> list[str]:
    """Names of the violated normalization properties, with a short reason each; empty if all hold."""
    g = intersection_graph(r)
    contacts = _contacts(r)
    ends = {p.id: {p.first, p.last} for p in r.paths}
    bad = []
    if r.paths and r.column_count > column_bound(len(r.paths)):
        bad.append(f"(a) {r.column_count} columns > {column_bound(len(r.paths))}")
    for p in r.paths:
        d = g.degree(p.id)
        strict = any(q not in ends[p.id] and q in ends[o] for q, o in contacts[p.id])
        if strict != (d == 3):
            bad.append(f"(b) path {p.id!r} of degree {d} {'does' if strict else 'does not'} "
                       f"strictly contain an endpoint")
        if p.is_horizontal and d == 2 and p.length < min_len:
            bad.append(f"(c) 2-vertex {p.id!r} has length {p.length} < {min_len}")
        if p.is_horizontal and d == 3:
            inner = _interior_contacts(p, contacts[p.id])
            lo, hi = sorted((p.first.x, p.last.x))
            if len(inner) != 1 or min(inner[0].x - lo, hi - inner[0].x) < min_len:
                bad.append(f"(d) 3-vertex {p.id!r} has an arm shorter than {min_len}")
        if d == 1 and p.length != 1:
            bad.append(f"(e) 1-vertex {p.id!r} has length {p.length}")
    return bad


def compact_columns(r: GridRep) -> GridRep:
    """Order-preserving relabeling of the used x-coordinates to consecutive columns.

    Straight segments meet according to the relative order of their coordinates
    only, so the intersection graph and the contact structure are preserved. At
    most two columns per path are used.
    """
    xs = sorted({q.x for p in r.paths for q in p.points})
    rank = {x: i for i, x in enumerate(xs)}
    return r.with_paths(GridPath(p.id, tuple(GridPoint(rank[q.x], q.y) for q in p.points)) for p in r.paths)


def _segment(pid: str, a: GridPoint, b: GridPoint) -> GridPath:
    return GridPath(pid, (a, b))


def _toward(a: GridPoint, b: GridPoint, step: int = 1) -> GridPoint:
    dx = (b.x > a.x) - (b.x < a.x)
    dy = (b.y > a.y) - (b.y < a.y)
    return GridPoint(a.x + step * dx, a.y + step * dy)


def _trim_to_contacts(r: GridRep, g: Graph) -> GridRep:
    contacts = _contacts(r)
    out = []
    for p in r.paths:
        pts = [q for q, _ in contacts[p.id]]
        d = g.degree(p.id)
        if d == 0:
            out.append(p)
        elif d == 1:
            f = pts[0]
            out.append(p if f in (p.first, p.last) else _segment(p.id, f, p.last))
        else:
            out.append(_segment(p.id, pts[0], pts[-1]))
    return r.with_paths(out)


def _shrink_low_degree(r: GridRep, g: Graph) -> GridRep:
    contacts = _contacts(r)
    out = []
    for p in r.paths:
        d = g.degree(p.id)
        if d == 1:
            f = contacts[p.id][0][0]
            other = p.last if f == p.first else p.first
            out.append(_segment(p.id, f, _toward(f, other)))
        elif d == 0:
            out.append(_segment(p.id, p.first, _toward(p.first, p.last)))
        else:
            out.append(p)
    return r.with_paths(out)


def normalize_b0cpg(r: GridRep, min_len: int = 5) -> GridRep:
    """Bring a subcubic triangle-free B0-CPG representation into the normalized form.

    Steps: column compaction, trimming every path to its first/last contact point,
    three grid refinements (lengths grow eightfold), then shrinking 1-vertex and
    isolated paths to length 1. The intersection graph is unchanged. An input that
    already passes :func:`audit_normalized` is only translated.
    """
    if min_len not in (4, 5):
        raise ValueError("min_len must be 4 or 5")
    g = check_b0cpg(r)
    if not audit_normalized(r, min_len):
        return r.normalized_origin()
    out = compact_columns(r)
    out = _trim_to_contacts(out, g)
    for _ in range(3):
        out = refine_grid(out)
    out = _shrink_low_degree(out, g).normalized_origin()
    if intersection_graph(out) != g:
        raise AssertionError("normalization changed the intersection graph")
    bad = audit_normalized(out, min_len)
    if bad:
        raise AssertionError("normalization left violations: " + "; ".join(bad))
    return out


# ---------------------------------------------------------------------------
# splitting gadgets

@dataclass(frozen=True)
class SplitReport:
    vertex: str
    kind: Kind
    q: int
    q_prime: int
    degree: int
    new_vertex_count: int
    predicted_delta: int

    def __post_init__(self) -> None:
        q, q2, d = self.q, self.q_prime, self.degree
        if self.kind is Kind.IS:
            count, delta = 2 * q + 2 * q2 + 4 * d - 3, q + q2 + 2 * (d - 1)
        else:
            count, delta = 3 * (q + q2 + d) - 2, q + q2 + d - 1
        if (self.new_vertex_count, self.predicted_delta) != (count, delta):
            raise AssertionError(f"split report for {self.vertex!r} breaks its arithmetic identities")


def _pieces(v: str, y: int, x0: int, lengths: Sequence[int], start: int = 1) -> list[GridPath]:
    out = []
    x = x0
    for k, ln in enumerate(lengths):
        out.append(_segment(f"{v}.{start + k}", GridPoint(x, y), GridPoint(x + ln, y)))
        x += ln
    return out


def _is_lengths(l: int, arm: bool) -> tuple[int, list[int]]:
    """Quotient and piece lengths replacing a stretch of length ``l`` (IS gadget)."""
    units = 3 if arm else 4
    q, rem = divmod(l - (units + 1), 2)
    return q, [1] * (2 * q + units) + [rem + 1]


def _ds_lengths(l: int, arm: bool) -> tuple[int, list[int]]:
    """Quotient and piece lengths replacing a stretch of length ``l`` (DS gadget)."""
    base = 3 if arm else 4
    q, rem = divmod(l - base, 3)
    return q, [1] * (3 * q + base - 2) + [1 + rem // 2, 1 + (rem + 1) // 2]


def _split(r: GridRep, v: str, kind: Kind) -> tuple[GridRep, SplitReport]:
    p = r.path(v)
    min_len = 5 if kind is Kind.IS else 4
    if not p.is_horizontal:
        raise PreconditionError(f"path {v!r} is not horizontal")
    g = intersection_graph(r)
    d = g.degree(v)
    if d not in (2, 3):
        raise PreconditionError(f"vertex {v!r} has degree {d}; splitting needs a 2- or 3-vertex")
    lengths_of = _is_lengths if kind is Kind.IS else _ds_lengths
    xl, xr = sorted((p.first.x, p.last.x))
    y = p.first.y
    inner = _interior_contacts(p, _contacts(r)[v])
    if d == 2:
        if inner:
            raise PreconditionError(f"2-vertex {v!r} has a contact point inside its path")
        if xr - xl < min_len:
            raise PreconditionError(f"path {v!r} has length {xr - xl} < {min_len}")
        q, lens = lengths_of(xr - xl, arm=False)
        q2 = 0
        new = _pieces(v, y, xl, lens)
    else:
        if len(inner) != 1:
            raise PreconditionError(f"3-vertex {v!r} needs exactly one interior contact point")
        px = inner[0].x
        l1, l3 = px - 1 - xl, xr - px - 1
        if min(l1, l3) < min_len - 1:
            raise PreconditionError(f"path {v!r} has an arm shorter than {min_len}")
        q, left = lengths_of(l1, arm=True)
        q2, right = lengths_of(l3, arm=True)
        new = _pieces(v, y, xl, left + [2] + right)
    clash = {pp.id for pp in new} & set(r.by_id)
    if clash:
        raise PreconditionError(f"new ids {sorted(clash)} already in use")
    report = SplitReport(v, kind, q, q2, d, len(new),
                         q + q2 + (2 * (d - 1) if kind is Kind.IS else d - 1))
    out = r.with_paths([pp for pp in r.paths if pp.id != v] + new)
    return out, report


def split_vertex_is(r: GridRep, v: str) -> tuple[GridRep, SplitReport]:
    """Replace the horizontal path of a 2- or 3-vertex by a chain of short paths (IS gadget).

    The independence number grows by exactly ``report.predicted_delta``.
    """
    return _split(r, v, Kind.IS)


def split_vertex_ds(r: GridRep, v: str) -> tuple[GridRep, SplitReport]:
    """As :func:`split_vertex_is`, with the domination gadget; gamma grows by ``predicted_delta``."""
    return _split(r, v, Kind.DS)


def splittable(r: GridRep) -> list[str]:
    """Ids of horizontal paths whose vertex has degree at least 2."""
    g = intersection_graph(r)
    return [p.id for p in r.paths if p.is_horizontal and g.degree(p.id) >= 2]


def reduce_full(r: GridRep, kind: Kind | str) -> tuple[GridRep, int, list[SplitReport]]:
    """Split every horizontal 2+-vertex; returns ``(representation, total_offset, reports)``."""
    kind = Kind(kind)
    fn = split_vertex_is if kind is Kind.IS else split_vertex_ds
    reports = []
    out = r
    for v in splittable(r):
        out, rep = fn(out, v)
        reports.append(rep)
    return out, sum(rep.predicted_delta for rep in reports), reports


def split_reports_csv(reports: Iterable[SplitReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex", "q", "q_prime", "d", "delta"])
    for rep in reports:
        w.writerow([rep.vertex, rep.q, rep.q_prime, rep.degree, rep.predicted_delta])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# split graphs

def gen_split_graph_rep(clique_ids: Sequence[str], independent_ids: Sequence[str],
                        edges: Iterable[tuple[str, str]]) -> GridRep:
    """Representation of a split graph on three columns.

    Independent vertices are short horizontal paths on rows three apart. Every
    clique path starts at a common top point and runs down the rightmost column,
    detouring left around the right end of each independent neighbor.
    """
    cs, ins = list(clique_ids), list(independent_ids)
    if len(set(cs)) != len(cs) or len(set(ins)) != len(ins) or set(cs) & set(ins):
        raise PreconditionError("clique and independent ids must be distinct")
    row = {v: -3 * j for j, v in enumerate(ins)}
    nbrs: dict[str, set[str]] = {c: set() for c in cs}
    for a, b in edges:
        if a in nbrs and b in row:
            nbrs[a].add(b)
        elif b in nbrs and a in row:
            nbrs[b].add(a)
        else:
            raise PreconditionError(f"edge {a!r}-{b!r} does not join the clique to the independent set")
    top = 1
    paths = [_segment(v, GridPoint(0, row[v]), GridPoint(1, row[v])) for v in ins]
    for c in cs:
        pts = [GridPoint(2, top)]
        for v in sorted(nbrs[c], key=lambda u: -row[u]):
            y = row[v]
            pts += [GridPoint(2, y), GridPoint(1, y), GridPoint(1, y - 1), GridPoint(2, y - 1)]
        if len(pts) == 1:
            pts.append(GridPoint(2, top - 1))
        paths.append(GridPath.from_trace(c, _expand(pts)))
    lo = min((q.y for p in paths for q in p.points), default=0)
    return GridRep.of(paths, 1, Flavor.VPG).translated(0, -lo)


def _expand(corners: Sequence[GridPoint]) -> list[GridPoint]:
    out = [corners[0]]
    for b in corners[1:]:
        while out[-1] != b:
            out.append(_toward(out[-1], b))
    return out


# ---------------------------------------------------------------------------
# random generators

def _ids(n: int, prefix: str = "p") -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def _random_walk(rng: random.Random, k: int, c: int, cols: int, rows: int) -> list[GridPoint] | None:
    bends = rng.randint(0, k)
    horizontal = rng.random() < 0.5
    x, y = rng.randrange(cols), rng.randrange(rows)
    lo = hi = x
    pts = [GridPoint(x, y)]
    for _ in range(bends + 1):
        if horizontal:
            opts = [dx for dx in range(-c, c + 1)
                    if dx and 0 <= x + dx < cols and max(hi, x + dx) - min(lo, x + dx) <= c]
            if not opts:
                return None
            x += rng.choice(opts)
            lo, hi = min(lo, x), max(hi, x)
        else:
            span = max(1, rows // 3)
            opts = [dy for dy in range(-span, span + 1) if dy and 0 <= y + dy < rows]
            if not opts:
                return None
            y += rng.choice(opts)
        pts.append(GridPoint(x, y))
        horizontal = not horizontal
    return pts


def gen_random_vpg(n: int, max_bends: int, max_horizontal: int, max_edge_load: int,
                   target_columns: int, seed: int, rows: int | None = None,
                   attempts: int = 200) -> GridRep:
    """Seeded random VPG representation obeying bend, horizontal-part and edge-load limits.

    Each path is a random walk with alternating orientations inside a
    ``target_columns`` by ``rows`` box. Self-intersecting walks and walks that would
    overload a grid-edge are redrawn; after ``attempts`` failures for one path the
    generator gives up.
    """
    if n < 0 or max_bends < 0 or max_horizontal < 1 or max_edge_load < 1 or target_columns < 2:
        raise ValueError("generator parameters out of range")
    rows = rows if rows is not None else max(4, n)
    rng = random.Random(seed)
    load: Counter = Counter()
    paths = []
    for pid in _ids(n):
        for _ in range(attempts):
            pts = _random_walk(rng, max_bends, max_horizontal, target_columns, rows)
            if pts is None:
                continue
            p = GridPath(pid, tuple(pts))
            if p.is_self_intersecting or any(load[e] >= max_edge_load for e in p.edge_set):
                continue
            load.update(p.edge_set)
            paths.append(p)
            break
        else:
            raise GenerationExhausted(f"could not place path {pid!r} after {attempts} attempts")
    return GridRep.of(paths, 1, Flavor.VPG)


def _segment_points(a: GridPoint, b: GridPoint) -> list[GridPoint]:
    return _expand([a, b])


def gen_b0cpg_subcubic(n: int, seed: int, max_len: int = 4, attempts: int = 500) -> GridRep:
    """Seeded random B0-CPG representation whose connected intersection graph is subcubic and triangle-free.

    Segments are added one at a time, each starting on an existing segment
    (perpendicular from an interior point, or continuing from an endpoint). A
    candidate is kept only if it touches existing segments at its endpoints or at
    their endpoints, never shares a grid-edge, and keeps the graph subcubic and
    triangle-free.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    ids = _ids(n, "s")
    first_len = rng.randint(1, max_len)
    segs = [(GridPoint(0, 0), GridPoint(first_len, 0) if rng.random() < 0.5 else GridPoint(0, first_len))]
    owner: dict[GridPoint, list[int]] = {}
    edges_used: set = set()

    def commit(i: int, a: GridPoint, b: GridPoint) -> None:
        pts = _segment_points(a, b)
        for q in pts:
            owner.setdefault(q, []).append(i)
        edges_used.update(unit_edge(u, w) for u, w in zip(pts, pts[1:]))

    commit(0, *segs[0])
    adj: list[set[int]] = [set()]
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for i in range(1, n):
        for _ in range(attempts):
            j = rng.randrange(i)
            a0, b0 = segs[j]
            start = rng.choice(_segment_points(a0, b0))
            dx, dy = rng.choice(dirs)
            ln = rng.randint(1, max_len)
            end = GridPoint(start.x + dx * ln, start.y + dy * ln)
            cand = _candidate_ok(segs, owner, edges_used, adj, start, end)
            if cand is not None:
                segs.append((start, end))
                adj.append(set(cand))
                for o in cand:
                    adj[o].add(i)
                commit(i, start, end)
                break
        else:
            raise GenerationExhausted(f"could not place segment {i} after {attempts} attempts")
    paths = [GridPath(pid, s) for pid, s in zip(ids, segs)]
    return GridRep.of(paths, 1, Flavor.CPG).normalized_origin()


def _candidate_ok(segs, owner, edges_used, adj, start: GridPoint, end: GridPoint) -> set[int] | None:
    pts = _segment_points(start, end)
    if any(unit_edge(u, w) in edges_used for u, w in zip(pts, pts[1:])):
        return None
    met: set[int] = set()
    for q in pts:
        others = owner.get(q, [])
        if not others:
            continue
        if len(others) > 1:
            return None
        o = others[0]
        if o in met:
            return None
        is_my_end = q in (start, end)
        is_their_end = q in segs[o]
        if not (is_my_end or is_their_end):
            return None
        met.add(o)
    if not met:
        return None
    if len(met) > 3 or any(len(adj[o]) >= 3 for o in met):
        return None
    ms = list(met)
    if any(b in adj[a] for x, a in enumerate(ms) for b in ms[x + 1:]):
        return None
    return met


def random_split_graph(n: int, seed: int, p: float = 0.5) -> tuple[list[str], list[str], list[tuple[str, str]]]:
    """Seeded random split graph as ``(clique_ids, independent_ids, edges)``."""
    rng = random.Random(seed)
    nc = rng.randint(0, n)
    cs = [f"c{i}" for i in range(nc)]
    ins = [f"i{i}" for i in range(n - nc)]
    edges = [(c, v) for c in cs for v in ins if rng.random() < p]
    return cs, ins, edges


def degree_of(r: GridRep, v: str) -> int:
    if v not in r.by_id:
        raise UnknownVertexError(f"unknown path id {v!r}")
    return intersection_graph(r).degree(v)


def horizontal_lengths(r: GridRep) -> dict[str, int]:
    return {p.id: horizontal_part(p).length for p in r.paths}
