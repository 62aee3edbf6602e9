"""Bifurcation sweeps over a scalar parameter.

A sweep rebuilds the reduced polynomial h and finds all equilibria at each
grid value of one parameter (typically the longwave offset A, which acts
as an inverse greenhouse-gas proxy; also D, C or Q), assembles the
resulting points into continuation branches by nearest-neighbour matching
in the ice-line position, and refines every change in the interior root
count by bisection in the parameter.

Root-count events are classified by parity: a change of two is a fold
(saddle-node pair created or destroyed), a change of one is a boundary
collision (a root entering or leaving through eta = 0, eta = 1, or the
switching boundary of a discontinuous variant).  Windows where at least
two stable branches coexist are reported by ``bistability_window``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .model import ModelParams
from .reduced import (
    DEGENERATE,
    SLIDING_AT_RHO,
    STABLE,
    UNSTABLE,
    Equilibrium,
    build_h,
    find_equilibria,
)

__all__ = [
    "SweepSpec",
    "BifurcationBranch",
    "FoldPoint",
    "SweepResult",
    "run_sweep",
    "bistability_window",
]

SWEEPABLE = ("A", "D", "C", "Q")

#: Stabilities that participate in branch assembly (interior equilibria).
_BRANCH_STABILITIES = (STABLE, UNSTABLE, DEGENERATE, SLIDING_AT_RHO)


@dataclass(frozen=True)
class SweepSpec:
    """Grid description for a one-parameter sweep.

    ``fold_tol`` is the bisection tolerance (in parameter units) for
    locating root-count changes; ``match_radius`` the maximum ice-line jump
    allowed between consecutive points of one branch.
    """

    params: ModelParams
    parameter: str
    lo: float
    hi: float
    count: int
    fold_tol: float = 0.05
    match_radius: float = 0.05
    workers: int = 1

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ValueError(
                f"parameter must be one of {SWEEPABLE}, got {self.parameter!r}"
            )
        if not self.lo < self.hi:
            raise ValueError("require lo < hi")
        if self.count < 2:
            raise ValueError("count must be >= 2")
        if self.fold_tol <= 0:
            raise ValueError("fold_tol must be positive")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def params_at(self, value: float) -> ModelParams:
        return replace(self.params, **{self.parameter: float(value)})


@dataclass
class FoldPoint:
    """A refined root-count change along the sweep."""

    parameter: float
    eta: float
    kind: str  # "fold" or "boundary_collision"
    delta_roots: int


@dataclass
class BifurcationBranch:
    """One continuation branch: equilibria of a single stability."""

    branch_id: int
    stability: str
    parameter_values: list[float] = field(default_factory=list)
    etas: list[float] = field(default_factory=list)
    global_means: list[float] = field(default_factory=list)
    start_annotation: str = "domain_edge"
    end_annotation: str = "domain_edge"

    def append(self, value: float, eq: Equilibrium):
        self.parameter_values.append(float(value))
        self.etas.append(eq.eta)
        self.global_means.append(eq.global_mean)

    @property
    def parameter_range(self) -> tuple[float, float]:
        return self.parameter_values[0], self.parameter_values[-1]


@dataclass
class SweepResult:
    spec: SweepSpec
    grid: np.ndarray
    branches: list[BifurcationBranch]
    folds: list[FoldPoint]
    equilibria: list[list[Equilibrium]]

    def stable_branches(self) -> list[BifurcationBranch]:
        return [b for b in self.branches
                if b.stability in (STABLE, SLIDING_AT_RHO)]


def _interior(eqs: list[Equilibrium]) -> list[Equilibrium]:
    return [e for e in eqs if e.stability in _BRANCH_STABILITIES]


def _solve_grid(spec: SweepSpec) -> list[list[Equilibrium]]:
    grid = spec.grid()

    def solve(value: float) -> list[Equilibrium]:
        return find_equilibria(build_h(spec.params_at(value)))

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(solve, grid))
    return [solve(v) for v in grid]


def _assemble_branches(spec: SweepSpec, grid, columns) -> list[BifurcationBranch]:
    branches: list[BifurcationBranch] = []
    active: list[BifurcationBranch] = []
    next_id = 0

    for value, eqs in zip(grid, columns):
        points = _interior(eqs)
        taken = [False] * len(points)
        still_active: list[BifurcationBranch] = []
        for branch in active:
            best, best_dist = None, spec.match_radius
            for i, eq in enumerate(points):
                if taken[i] or eq.stability != branch.stability:
                    continue
                dist = abs(eq.eta - branch.etas[-1])
                if dist <= best_dist:
                    best, best_dist = i, dist
            if best is None:
                branch.end_annotation = "open"
                branches.append(branch)
            else:
                taken[best] = True
                branch.append(value, points[best])
                still_active.append(branch)
        for i, eq in enumerate(points):
            if not taken[i]:
                branch = BifurcationBranch(next_id, eq.stability,
                                           start_annotation="open")
                if value == grid[0]:
                    branch.start_annotation = "domain_edge"
                next_id += 1
                branch.append(value, eq)
                still_active.append(branch)
        active = still_active
    for branch in active:
        branch.end_annotation = "domain_edge"
        branches.append(branch)
    branches.sort(key=lambda b: b.branch_id)
    return branches


def _count_interior(spec: SweepSpec, value: float) -> int:
    return len(_interior(find_equilibria(build_h(spec.params_at(value)))))


def _refine_events(spec: SweepSpec, grid, columns) -> list[FoldPoint]:
    events: list[FoldPoint] = []
    counts = [len(_interior(eqs)) for eqs in columns]
    for i in range(len(grid) - 1):
        if counts[i] == counts[i + 1]:
            continue
        lo, hi = float(grid[i]), float(grid[i + 1])
        n_lo = counts[i]
        while hi - lo > spec.fold_tol:
            mid = 0.5 * (lo + hi)
            if _count_interior(spec, mid) == n_lo:
                lo = mid
            else:
                hi = mid
        p_star = 0.5 * (lo + hi)
        before = _interior(find_equilibria(build_h(spec.params_at(lo))))
        after = _interior(find_equilibria(build_h(spec.params_at(hi))))
        delta = len(after) - len(before)
        richer = after if delta > 0 else before
        poorer = before if delta > 0 else after
        # The roots involved in the event are those of the richer column
        # without a nearby partner in the poorer column.
        involved = [
            e.eta for e in richer
            if not any(abs(e.eta - o.eta) < spec.match_radius for o in poorer)
        ]
        eta_star = float(np.mean(involved)) if involved else float("nan")
        kind = "fold" if abs(delta) >= 2 else "boundary_collision"
        events.append(FoldPoint(p_star, eta_star, kind, delta))
    return events


def _annotate_with_events(result: SweepResult):
    """Attach the nearest refined event to each open branch end."""
    for branch in result.branches:
        for attr, endpoint in (("start_annotation", branch.parameter_values[0]),
                               ("end_annotation", branch.parameter_values[-1])):
            if getattr(branch, attr) != "open":
                continue
            best = None
            best_d = 2.0 * (result.grid[1] - result.grid[0])
            for ev in result.folds:
                d = abs(ev.parameter - endpoint)
                if d <= best_d:
                    best, best_d = ev, d
            setattr(branch, attr, best.kind if best else "unresolved")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Sweep the parameter grid and assemble branches and fold points.

    Grid points are independent (they may be solved by a worker pool); the
    result is deterministic and ordered by the grid regardless of
    scheduling.
    """
    grid = spec.grid()
    columns = _solve_grid(spec)
    branches = _assemble_branches(spec, grid, columns)
    folds = _refine_events(spec, grid, columns)
    result = SweepResult(spec, grid, branches, folds, columns)
    _annotate_with_events(result)
    return result


def bistability_window(result: SweepResult) -> list[tuple[float, float]]:
    """Parameter intervals where at least two stable states coexist.

    Counts interior stable equilibria (sliding states included) per grid
    point; runs with a count of two or more form windows, whose endpoints
    are sharpened to the nearest refined root-count event when one lies
    within a grid spacing.
    """
    grid = result.grid
    stable_counts = np.array([
        sum(1 for e in _interior(eqs)
            if e.stability in (STABLE, SLIDING_AT_RHO))
        for e_i, eqs in enumerate(result.equilibria)
    ])
    windows: list[tuple[float, float]] = []
    in_run = False
    start = 0.0
    spacing = grid[1] - grid[0]

    def sharpen(value: float) -> float:
        best, best_d = value, 1.5 * spacing
        for ev in result.folds:
            d = abs(ev.parameter - value)
            if d < best_d:
                best, best_d = ev.parameter, d
        return best

    for value, count in zip(grid, stable_counts):
        if count >= 2 and not in_run:
            in_run, start = True, value
        elif count < 2 and in_run:
            in_run = False
            windows.append((sharpen(start), sharpen(value)))
    if in_run:
        windows.append((sharpen(start), float(grid[-1])))
    return windows
