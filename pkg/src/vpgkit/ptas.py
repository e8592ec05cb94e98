"""Baker-style shifting schemes for Independent Set and Dominating Set on grid representations."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable, Iterable

from .decomposition import clique_augment, decompose, decomposition_mm_width
from .errors import PreconditionError
from .graph import Graph, component_masks, connected_components, intersection_graph
from .model import GridRep, grid_edge_load, horizontal_part, induced_subrepresentation
from .solvers import DEFAULT_CLASS_BUDGET, Kind, Solution, solve_ds_bd, solve_is_bd


def parse_epsilon(value: Fraction | str | float | int) -> Fraction:
    eps = Fraction(value) if not isinstance(value, float) else Fraction(str(value))
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {eps}")
    return eps


def _measured_c(r: GridRep) -> int:
    return max(1, r.max_horizontal)


def _measured_t(r: GridRep) -> int:
    return max(1, grid_edge_load(r).max_load)


@dataclass(frozen=True)
class ShiftConfigIS:
    epsilon: Fraction
    c: int

    @property
    def k(self) -> int:
        return ceil(1 / self.epsilon)

    @property
    def period(self) -> int:
        return self.k * self.c


@dataclass(frozen=True)
class ShiftConfigDS:
    epsilon: Fraction
    c: int
    m: int
    s: int = 0

    @property
    def k(self) -> int:
        return ceil(self.c * (2 / self.epsilon - 1))

    @property
    def shifts(self) -> int:
        return self.k + self.c

    @property
    def exact(self) -> bool:
        """Few enough columns that the whole graph is solved in one piece."""
        return self.m <= self.k + 2 * self.c - 1

    @property
    def r(self) -> int:
        return ceil(Fraction(self.m - self.s - self.c, self.k + self.c))

    def at_shift(self, s: int) -> ShiftConfigDS:
        return ShiftConfigDS(self.epsilon, self.c, self.m, s)


def compute_x_sets(r: GridRep) -> dict[int, frozenset[str]]:
    """Nonempty ``X_i``: paths using some horizontal grid-edge between columns ``i`` and ``i+1``."""
    acc: dict[int, set[str]] = {}
    for p in r.paths:
        h = horizontal_part(p)
        for i in range(h.x_min, h.x_max):
            acc.setdefault(i, set()).add(p.id)
    return {i: frozenset(v) for i, v in sorted(acc.items())}


def compute_v_sets(r: GridRep) -> dict[int, frozenset[str]]:
    """Nonempty ``V_j``: paths meeting column ``j``."""
    acc: dict[int, set[str]] = {}
    for p in r.paths:
        h = horizontal_part(p)
        for j in range(h.x_min, h.x_max + 1):
            acc.setdefault(j, set()).add(p.id)
    return {j: frozenset(v) for j, v in sorted(acc.items())}


# ---------------------------------------------------------------------------
# shared plumbing

@dataclass(frozen=True)
class PartSolve:
    vertices: frozenset[str]
    solution: frozenset[str]
    width: int


@dataclass(frozen=True)
class ShiftDiagnostic:
    component: int
    shift: int
    parts: int
    max_width: int
    value: int


@dataclass
class PtasRun:
    kind: Kind
    solution: Solution
    width_budget: int
    diagnostics: list[ShiftDiagnostic] = field(default_factory=list)

    @property
    def max_width(self) -> int:
        return max((d.max_width for d in self.diagnostics), default=0)

    @property
    def within_budget(self) -> bool:
        return self.max_width <= self.width_budget

    def diagnostics_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component", "shift", "parts", "max_width", "value"])
        for d in self.diagnostics:
            w.writerow([d.component, d.shift, d.parts, d.max_width, d.value])
        return buf.getvalue()


def _solve_part(r: GridRep, vertices: frozenset[str], cliques: tuple[frozenset[str], ...],
                kind: Kind, budget: int) -> PartSolve:
    """Solve ``kind`` exactly on the induced graph, with ``cliques`` added as complete subgraphs.

    The reported width is the decomposition's mm-width on the induced graph plus
    one for each nontrivial clique, an upper bound on the mim-width actually used.
    """
    if not vertices:
        return PartSolve(vertices, frozenset(), 0)
    sub = induced_subrepresentation(r, vertices).normalized_origin()
    bd = decompose(sub)
    g = intersection_graph(sub)
    width = decomposition_mm_width(g, bd)
    for q in cliques:
        q = q & vertices
        if len(q) > 1:
            g = clique_augment(g, q)
            width += 1
    fn = solve_is_bd if kind is Kind.IS else solve_ds_bd
    return PartSolve(vertices, fn(g, bd, budget).vertices, width)


def _solve_all(r: GridRep, jobs: list[tuple[frozenset[str], tuple[frozenset[str], ...]]],
               kind: Kind, budget: int, workers: int) -> dict:
    unique = list(dict.fromkeys(jobs))
    if workers > 1 and len(unique) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_solve_part, *zip(*[(r, v, q, kind, budget) for v, q in unique])))
    else:
        results = [_solve_part(r, v, q, kind, budget) for v, q in unique]
    return dict(zip(unique, results))


def _components(r: GridRep) -> list[GridRep]:
    g = intersection_graph(r)
    return [induced_subrepresentation(r, comp).normalized_origin()
            for comp in sorted(connected_components(g), key=lambda c: min(c))]


# ---------------------------------------------------------------------------
# Independent Set

def vd_sets(x_sets: dict[int, frozenset[str]], cfg: ShiftConfigIS) -> list[frozenset[str]]:
    out: list[set[str]] = [set() for _ in range(cfg.period)]
    for i, xs in x_sets.items():
        out[i % cfg.period] |= xs
    return [frozenset(s) for s in out]


def _is_component(r: GridRep, cfg: ShiftConfigIS, budget: int, workers: int,
                  comp_index: int) -> tuple[frozenset[str], list[ShiftDiagnostic]]:
    g = intersection_graph(r)
    deleted = vd_sets(compute_x_sets(r), cfg)
    for v in g.vertices:
        hits = sum(v in d for d in deleted)
        if hits > cfg.c:
            raise AssertionError(f"vertex {v!r} lies in {hits} > c={cfg.c} deletion sets")
    plans = []
    for d, vd in enumerate(deleted):
        keep = g.all_mask & ~g.mask_of(vd)
        plans.append([frozenset(g.ids_of(m)) for m in component_masks(g, keep)])
    results = _solve_all(r, [(p, ()) for parts in plans for p in parts], Kind.IS, budget, workers)
    best: frozenset[str] | None = None
    diags = []
    for d, parts in enumerate(plans):
        solved = [results[(p, ())] for p in parts]
        union = frozenset().union(*(s.solution for s in solved))
        diags.append(ShiftDiagnostic(comp_index, d, len(parts), max((s.width for s in solved), default=0),
                                     len(union)))
        if best is None or len(union) > len(best):
            best = union
    return best or frozenset(), diags


def run_baker_is(r: GridRep, epsilon: Fraction | str, c: int | None = None,
                 budget: int = DEFAULT_CLASS_BUDGET, workers: int = 1) -> PtasRun:
    """Shifting scheme for Independent Set with guarantee ``|U| >= (1 - epsilon) * alpha``.

    Each connected component is handled separately. For every residue ``d`` modulo
    ``k*c`` the paths using a horizontal grid-edge at a column ``= d (mod k*c)`` are
    deleted, the remaining pieces are solved exactly, and the best union is kept.
    """
    eps = parse_epsilon(epsilon)
    c = _check_c(r, c)
    cfg = ShiftConfigIS(eps, c)
    t = _measured_t(r)
    chosen: set[str] = set()
    diags: list[ShiftDiagnostic] = []
    for ci, comp in enumerate(_components(r)):
        sol, dg = _is_component(comp, cfg, budget, workers, ci)
        chosen |= sol
        diags += dg
    return PtasRun(Kind.IS, Solution(Kind.IS, frozenset(chosen)), 3 * t * (cfg.period + 1), diags)


def baker_is(r: GridRep, epsilon: Fraction | str, c: int | None = None,
             budget: int = DEFAULT_CLASS_BUDGET, workers: int = 1) -> Solution:
    return run_baker_is(r, epsilon, c, budget, workers).solution


def _check_c(r: GridRep, c: int | None) -> int:
    measured = _measured_c(r)
    if c is None:
        return measured
    if c < 1:
        raise ValueError("c must be at least 1")
    if r.max_horizontal > c:
        raise PreconditionError(f"horizontal part {r.max_horizontal} > {c}")
    return c


# ---------------------------------------------------------------------------
# Dominating Set

@dataclass(frozen=True)
class Window:
    index: int
    vertices: frozenset[str]
    exterior_left: frozenset[str] | None
    exterior_right: frozenset[str] | None

    @property
    def exterior(self) -> frozenset[str]:
        return (self.exterior_left or frozenset()) | (self.exterior_right or frozenset())

    @property
    def interior(self) -> frozenset[str]:
        return self.vertices - self.exterior

    @property
    def is_boundary(self) -> bool:
        return self.exterior_left is None or self.exterior_right is None


def _union(sets: dict[int, frozenset[str]], lo: int, hi: int) -> frozenset[str]:
    out: set[str] = set()
    for j in range(lo, hi + 1):
        out |= sets.get(j, frozenset())
    return frozenset(out)


def build_windows(r: GridRep, cfg: ShiftConfigDS) -> list[Window]:
    """Windows ``V(0,s) .. V(r,s)`` with their exterior sets.

    The first window only has a right exterior and the last only a left one; they
    are stored on those sides.
    """
    if cfg.exact:
        raise PreconditionError(f"{cfg.m} columns do not exceed k+2c-1 = {cfg.k + 2 * cfg.c - 1}")
    xs, vs = compute_x_sets(r), compute_v_sets(r)
    k, c, s, m, rr = cfg.k, cfg.c, cfg.s, cfg.m, cfg.r
    step = k + c
    wins = [Window(0, _union(vs, 0, s + c - 1), None, xs.get(s + c - 1, frozenset()))]
    for i in range(1, rr):
        base = (i - 1) * step + s
        wins.append(Window(i, _union(vs, base, base + k + 2 * c - 1),
                           xs.get(base - 1, frozenset()), xs.get(i * step + s + c - 1, frozenset())))
    base = (rr - 1) * step + s
    wins.append(Window(rr, _union(vs, base, m - 1), xs.get(base - 1, frozenset()), None))
    return wins


def check_windows(r: GridRep, cfg: ShiftConfigDS, wins: list[Window]) -> None:
    """Raise ``AssertionError`` unless every vertex is interior somewhere and the overlaps are as predicted."""
    vs = compute_v_sets(r)
    covered: set[str] = set()
    for w in wins:
        covered |= w.interior
    missing = set(r.ids) - covered
    if missing:
        raise AssertionError(f"shift {cfg.s}: vertices {sorted(missing)} are interior to no window")
    for a in wins:
        for b in wins:
            if b.index > a.index + 1 and a.vertices & b.vertices:
                raise AssertionError(f"shift {cfg.s}: windows {a.index} and {b.index} intersect")
        if a.index + 1 < len(wins):
            lo = a.index * (cfg.k + cfg.c) + cfg.s
            expected = _union(vs, lo, lo + cfg.c - 1)
            if a.vertices & wins[a.index + 1].vertices != expected:
                raise AssertionError(f"shift {cfg.s}: overlap of windows {a.index}, {a.index + 1} is unexpected")


VARIANTS = ("I", "L", "R", "LR")


def variant_specs(w: Window) -> dict[str, tuple[frozenset[str], tuple[frozenset[str], ...]]]:
    """Vertex set and clique sets of each variant graph of ``w``."""
    left = w.exterior_left or frozenset()
    right = w.exterior_right or frozenset()
    specs = {"I": (w.interior, ())}
    if not w.is_boundary:
        specs["L"] = (w.interior | left, (left,))
        specs["R"] = (w.interior | right, (right,))
        specs["LR"] = (w.vertices, (left, right))
    else:
        specs["LR"] = (w.vertices, (w.exterior,))
    return specs


def window_variants(g: Graph, w: Window) -> dict[str, Graph]:
    out = {}
    for name, (vs, cliques) in variant_specs(w).items():
        h = g.induced(vs)
        for q in cliques:
            h = clique_augment(h, q & vs)
        out[name] = h
    return out


@dataclass(frozen=True)
class WindowChoice:
    shift: int
    window: Window
    variant: str
    solution: frozenset[str]


def _ds_component(r: GridRep, eps: Fraction, c: int, budget: int, workers: int, comp_index: int,
                  trace: Callable[[WindowChoice], None] | None) -> tuple[frozenset[str], list[ShiftDiagnostic]]:
    m = r.column_count
    base = ShiftConfigDS(eps, c, m)
    if base.exact:
        part = _solve_part(r, frozenset(r.ids), (), Kind.DS, budget)
        return part.solution, [ShiftDiagnostic(comp_index, 0, 1, part.width, len(part.solution))]
    per_shift = []
    jobs = []
    for s in range(base.shifts):
        cfg = base.at_shift(s)
        wins = build_windows(r, cfg)
        check_windows(r, cfg, wins)
        specs = [variant_specs(w) for w in wins]
        per_shift.append((cfg, wins, specs))
        jobs += [spec for sp in specs for spec in sp.values()]
    results = _solve_all(r, jobs, Kind.DS, budget, workers)
    best: frozenset[str] | None = None
    diags = []
    for cfg, wins, specs in per_shift:
        chosen: set[str] = set()
        width = 0
        for w, sp in zip(wins, specs):
            pick_name, pick = None, None
            for name in VARIANTS:
                if name in sp:
                    res = results[sp[name]]
                    width = max(width, res.width)
                    if pick is None or len(res.solution) < len(pick.solution):
                        pick_name, pick = name, res
            assert pick is not None and pick_name is not None
            if trace is not None:
                trace(WindowChoice(cfg.s, w, pick_name, pick.solution))
            chosen |= pick.solution
        diags.append(ShiftDiagnostic(comp_index, cfg.s, len(wins), width, len(chosen)))
        if best is None or len(chosen) < len(best):
            best = frozenset(chosen)
    return best or frozenset(), diags


def run_baker_ds(r: GridRep, epsilon: Fraction | str, c: int | None = None,
                 budget: int = DEFAULT_CLASS_BUDGET, workers: int = 1,
                 trace: Callable[[WindowChoice], None] | None = None) -> PtasRun:
    """Shifting scheme for Dominating Set with guarantee ``|S| <= (1 + epsilon) * gamma``.

    For every shift ``s`` the columns are covered by overlapping windows; each
    window keeps the smallest of its variant solutions, which together dominate
    the graph. The smallest union over all shifts is returned. ``trace`` receives
    every per-window choice.
    """
    eps = parse_epsilon(epsilon)
    c = _check_c(r, c)
    t = _measured_t(r)
    k = ShiftConfigDS(eps, c, 0).k
    chosen: set[str] = set()
    diags: list[ShiftDiagnostic] = []
    for ci, comp in enumerate(_components(r)):
        sol, dg = _ds_component(comp, eps, c, budget, workers, ci, trace)
        chosen |= sol
        diags += dg
    return PtasRun(Kind.DS, Solution(Kind.DS, frozenset(chosen)), 3 * t * (k + 4 * c + 1) + 2, diags)


def baker_ds(r: GridRep, epsilon: Fraction | str, c: int | None = None,
             budget: int = DEFAULT_CLASS_BUDGET, workers: int = 1) -> Solution:
    return run_baker_ds(r, epsilon, c, budget, workers).solution


def overlap_total(r: GridRep, epsilon: Fraction | str, q: Iterable[str], c: int | None = None) -> int:
    """Sum over shifts and consecutive windows of ``|Q & V(i,s) & V(i+1,s)|``."""
    eps = parse_epsilon(epsilon)
    c = _check_c(r, c)
    q = frozenset(q)
    base = ShiftConfigDS(eps, c, r.column_count)
    if base.exact:
        return 0
    total = 0
    for s in range(base.shifts):
        wins = build_windows(r, base.at_shift(s))
        total += sum(len(q & a.vertices & b.vertices) for a, b in zip(wins, wins[1:]))
    return total
