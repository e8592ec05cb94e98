"""Grid-path representations with their canonical document format and validation.

Coordinates are integers in units of the representation's grid-step; ``x`` is the
column (growing rightward) and ``y`` the row (growing upward).
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import FormatError, UnknownVertexError


class GridPoint(NamedTuple):
    x: int
    y: int


GridEdge = tuple[GridPoint, GridPoint]


class Flavor(str, Enum):
    VPG = "VPG"
    CPG = "CPG"


def _direction(a: GridPoint, b: GridPoint) -> tuple[int, int]:
    dx, dy = b.x - a.x, b.y - a.y
    return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


def unit_edge(a: GridPoint, b: GridPoint) -> GridEdge:
    """Orient a unit grid-edge so the smaller point comes first."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class GridPath:
    """One vertex's path, stored as its endpoint/bend-point sequence."""

    id: str
    points: tuple[GridPoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(GridPoint(int(p[0]), int(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not isinstance(self.id, str) or not self.id:
            raise FormatError(f"path id must be a non-empty string, got {self.id!r}")
        if len(pts) < 2:
            raise FormatError(f"path {self.id!r}: single-point path")
        prev = None
        for a, b in zip(pts, pts[1:]):
            if (a.x == b.x) == (a.y == b.y):
                raise FormatError(f"path {self.id!r}: non-axis-parallel segment {a}-{b}")
            d = _direction(a, b)
            if prev is not None and (d == prev or d == (-prev[0], -prev[1])):
                raise FormatError(f"path {self.id!r}: point {a} is not a bend")
            prev = d

    @property
    def first(self) -> GridPoint:
        return self.points[0]

    @property
    def last(self) -> GridPoint:
        return self.points[-1]

    @property
    def bends(self) -> int:
        return len(self.points) - 2

    @property
    def segments(self) -> list[tuple[GridPoint, GridPoint]]:
        return list(zip(self.points, self.points[1:]))

    @property
    def length(self) -> int:
        return sum(abs(a.x - b.x) + abs(a.y - b.y) for a, b in self.segments)

    @property
    def is_horizontal(self) -> bool:
        return self.bends == 0 and self.first.y == self.last.y

    @property
    def is_vertical(self) -> bool:
        return self.bends == 0 and self.first.x == self.last.x

    @cached_property
    def trace(self) -> tuple[GridPoint, ...]:
        out = [self.points[0]]
        for a, b in self.segments:
            dx, dy = _direction(a, b)
            x, y = a
            while (x, y) != (b.x, b.y):
                x += dx
                y += dy
                out.append(GridPoint(x, y))
        return tuple(out)

    @cached_property
    def point_set(self) -> frozenset[GridPoint]:
        return frozenset(self.trace)

    @cached_property
    def edge_set(self) -> frozenset[GridEdge]:
        tr = self.trace
        return frozenset(unit_edge(a, b) for a, b in zip(tr, tr[1:]))

    @property
    def is_self_intersecting(self) -> bool:
        return len(self.point_set) != len(self.trace)

    def translated(self, dx: int = 0, dy: int = 0) -> GridPath:
        return GridPath(self.id, tuple(GridPoint(p.x + dx, p.y + dy) for p in self.points))

    def renamed(self, new_id: str) -> GridPath:
        return GridPath(new_id, self.points)

    @classmethod
    def from_trace(cls, pid: str, trace: Sequence[GridPoint]) -> GridPath:
        """Collapse a unit-step trace back into its endpoint/bend sequence."""
        pts = [GridPoint(*trace[0])]
        for i in range(1, len(trace) - 1):
            if _direction(trace[i - 1], trace[i]) != _direction(trace[i], trace[i + 1]):
                pts.append(GridPoint(*trace[i]))
        if len(trace) > 1:
            pts.append(GridPoint(*trace[-1]))
        return cls(pid, tuple(pts))


@dataclass(frozen=True)
class HorizontalPart:
    x_min: int
    x_max: int

    @property
    def length(self) -> int:
        return self.x_max - self.x_min


def path_points(p: GridPath) -> list[GridPoint]:
    """Every grid-point of ``p`` in traversal order, once per visit."""
    return list(p.trace)


def horizontal_part(p: GridPath) -> HorizontalPart:
    xs = [q.x for q in p.points]
    return HorizontalPart(min(xs), max(xs))


@dataclass(frozen=True)
class GridRep:
    """Grid paths keyed by id, drawn on a grid of the given step and flavor."""

    grid_step: Fraction
    flavor: Flavor
    paths: tuple[GridPath, ...]

    def __post_init__(self) -> None:
        step = Fraction(self.grid_step)
        if step <= 0:
            raise FormatError(f"grid_step must be positive, got {step}")
        object.__setattr__(self, "grid_step", step)
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        ordered = tuple(sorted(self.paths, key=lambda p: p.id))
        for a, b in zip(ordered, ordered[1:]):
            if a.id == b.id:
                raise FormatError(f"duplicate path id {a.id!r}")
        object.__setattr__(self, "paths", ordered)
        if self.flavor is Flavor.CPG:
            seen: dict[GridEdge, str] = {}
            for p in ordered:
                for e in p.edge_set:
                    if e in seen:
                        raise FormatError(
                            f"shared grid-edge under CPG flavor: {e[0]}-{e[1]} "
                            f"used by {seen[e]!r} and {p.id!r}"
                        )
                    seen[e] = p.id

    @classmethod
    def of(cls, paths: Iterable[GridPath], grid_step: Fraction | int | str = 1,
           flavor: Flavor | str = Flavor.VPG) -> GridRep:
        return cls(Fraction(grid_step), Flavor(flavor), tuple(paths))

    @cached_property
    def by_id(self) -> dict[str, GridPath]:
        return {p.id: p for p in self.paths}

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.paths]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self) -> Iterator[GridPath]:
        return iter(self.paths)

    def path(self, pid: str) -> GridPath:
        try:
            return self.by_id[pid]
        except KeyError:
            raise UnknownVertexError(f"unknown path id {pid!r}") from None

    @cached_property
    def occupancy(self) -> dict[GridPoint, tuple[int, ...]]:
        """Grid-point -> indices (in ``paths`` order) of the paths through it."""
        occ: dict[GridPoint, list[int]] = defaultdict(list)
        for i, p in enumerate(self.paths):
            for q in p.point_set:
                occ[q].append(i)
        return {q: tuple(v) for q, v in occ.items()}

    @cached_property
    def intersection_points(self) -> frozenset[GridPoint]:
        return frozenset(q for q, owners in self.occupancy.items() if len(owners) > 1)

    def x_range(self) -> tuple[int, int]:
        xs = [q.x for p in self.paths for q in p.points]
        return (min(xs), max(xs)) if xs else (0, -1)

    @property
    def column_count(self) -> int:
        lo, hi = self.x_range()
        return hi - lo + 1

    @property
    def max_horizontal(self) -> int:
        return max((horizontal_part(p).length for p in self.paths), default=0)

    def with_paths(self, paths: Iterable[GridPath]) -> GridRep:
        return GridRep(self.grid_step, self.flavor, tuple(paths))

    def translated(self, dx: int = 0, dy: int = 0) -> GridRep:
        return self.with_paths(p.translated(dx, dy) for p in self.paths)

    def normalized_origin(self) -> GridRep:
        """Translate so the smallest x-coordinate is 0."""
        lo, _ = self.x_range()
        return self.translated(-lo, 0) if self.paths and lo else self


# ---------------------------------------------------------------------------
# canonical document format

def serialize_representation(r: GridRep) -> str:
    lines = [
        "{",
        f'  "grid_step": {json.dumps(str(r.grid_step))},',
        f'  "flavor": {json.dumps(r.flavor.value)},',
    ]
    if not r.paths:
        lines.append('  "paths": []')
    else:
        lines.append('  "paths": [')
        for i, p in enumerate(r.paths):
            pts = ", ".join(f"[{q.x}, {q.y}]" for q in p.points)
            sep = "," if i < len(r.paths) - 1 else ""
            lines.append(f'    {{"id": {json.dumps(p.id)}, "points": [{pts}]}}{sep}')
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _int(v: object, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}: expected integer coordinate, got {v!r}")
    return v


def parse_representation(text: str) -> GridRep:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("malformed document: top level must be an object")
    unknown = set(doc) - {"grid_step", "flavor", "paths"}
    if unknown:
        raise FormatError(f"malformed document: unknown keys {sorted(unknown)}")
    try:
        step_raw = doc["grid_step"]
        flavor_raw = doc["flavor"]
        paths_raw = doc["paths"]
    except KeyError as exc:
        raise FormatError(f"malformed document: missing {exc.args[0]!r}") from None
    if not isinstance(step_raw, str):
        raise FormatError("malformed document: grid_step must be a rational string")
    try:
        step = Fraction(step_raw)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"malformed document: bad grid_step {step_raw!r}") from None
    if flavor_raw not in ("VPG", "CPG"):
        raise FormatError(f"malformed document: flavor must be VPG or CPG, got {flavor_raw!r}")
    if not isinstance(paths_raw, list):
        raise FormatError("malformed document: paths must be an array")
    paths = []
    for k, entry in enumerate(paths_raw):
        if not isinstance(entry, dict) or set(entry) != {"id", "points"}:
            raise FormatError(f"malformed document: path #{k} must have exactly id and points")
        pid, pts = entry["id"], entry["points"]
        if not isinstance(pid, str):
            raise FormatError(f"malformed document: path #{k} id must be a string")
        if not isinstance(pts, list):
            raise FormatError(f"malformed document: path {pid!r} points must be an array")
        coords = []
        for q in pts:
            if not isinstance(q, list) or len(q) != 2:
                raise FormatError(f"malformed document: path {pid!r} has a bad point {q!r}")
            coords.append(GridPoint(_int(q[0], pid), _int(q[1], pid)))
        paths.append(GridPath(pid, tuple(coords)))
    return GridRep(step, Flavor(flavor_raw), tuple(paths))


# ---------------------------------------------------------------------------
# intersections

@dataclass(frozen=True)
class IntersectionIndex:
    """First/last intersection points per ordered path pair and per path."""

    first_pair: Mapping[tuple[str, str], GridPoint]
    last_pair: Mapping[tuple[str, str], GridPoint]
    first: Mapping[str, GridPoint]
    last: Mapping[str, GridPoint]


def build_intersection_index(r: GridRep) -> IntersectionIndex:
    occ = r.occupancy
    ids = r.ids
    first_pair: dict[tuple[str, str], GridPoint] = {}
    last_pair: dict[tuple[str, str], GridPoint] = {}
    first: dict[str, GridPoint] = {}
    last: dict[str, GridPoint] = {}
    for i, p in enumerate(r.paths):
        for q in p.trace:
            owners = occ[q]
            if len(owners) < 2:
                continue
            first.setdefault(p.id, q)
            last[p.id] = q
            for j in owners:
                if j != i:
                    key = (p.id, ids[j])
                    first_pair.setdefault(key, q)
                    last_pair[key] = q
    return IntersectionIndex(first_pair, last_pair, first, last)


# ---------------------------------------------------------------------------
# transformations

def refine_grid(r: GridRep) -> GridRep:
    """Halve the grid-step; all integer coordinates double."""
    paths = (GridPath(p.id, tuple(GridPoint(2 * q.x, 2 * q.y) for q in p.points)) for p in r.paths)
    return GridRep(r.grid_step / 2, r.flavor, tuple(paths))


def induced_subrepresentation(r: GridRep, keep: Iterable[str]) -> GridRep:
    keep = set(keep)
    missing = keep - set(r.by_id)
    if missing:
        raise UnknownVertexError(f"unknown path id(s): {sorted(missing)}")
    return r.with_paths(p for p in r.paths if p.id in keep)


@dataclass(frozen=True)
class EdgeLoad:
    loads: Mapping[GridEdge, int]
    max_load: int


def grid_edge_load(r: GridRep) -> EdgeLoad:
    loads: Counter[GridEdge] = Counter()
    for p in r.paths:
        loads.update(p.edge_set)
    return EdgeLoad(dict(loads), max(loads.values(), default=0))


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Constraints:
    max_bends: int | None = None
    max_edge_load: int | None = None
    max_horizontal: int | None = None
    flavor: Flavor | None = None


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} {self.subject}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    notes: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations] + [f"note: {n}" for n in self.notes]


def validate(r: GridRep, constraints: Constraints = Constraints()) -> ValidationReport:
    """Check a representation against bend, edge-load, horizontal-part and flavor limits.

    Violations are collected in the report rather than raised; self-intersecting
    paths are recorded as notes only.
    """
    report = ValidationReport()
    for p in r.paths:
        if constraints.max_bends is not None and p.bends > constraints.max_bends:
            report.violations.append(Violation(
                "bends", p.id, f"path has {p.bends} bend{'s' if p.bends != 1 else ''} > {constraints.max_bends}"))
        if constraints.max_horizontal is not None:
            h = horizontal_part(p).length
            if h > constraints.max_horizontal:
                report.violations.append(Violation(
                    "horizontal", p.id, f"horizontal part {h} > {constraints.max_horizontal}"))
        if p.is_self_intersecting:
            report.notes.append(Violation("self-intersection", p.id, "path revisits a grid-point"))
    limit = constraints.max_edge_load
    if constraints.flavor is Flavor.CPG:
        limit = 1 if limit is None else min(limit, 1)
    if limit is not None:
        for e, load in sorted(grid_edge_load(r).loads.items()):
            if load > limit:
                a, b = e
                kind = "flavor" if constraints.flavor is Flavor.CPG and load > 1 else "load"
                report.violations.append(Violation(
                    kind, f"({a.x},{a.y})-({b.x},{b.y})", f"edge load {load} > {limit}"))
    return report
