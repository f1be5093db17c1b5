"""
Weighted extremal functions of radial compact sets.

A radial function is psh iff its profile in s = log|z|^2 is convex and
nondecreasing, so

* V_{K,Q} is the largest convex nondecreasing minorant of Q̃ on the log-image
  of K whose terminal slope is at most 1/2, and
* U_{K,Q,Ω} (Ω = B(0, R)) is the largest convex nondecreasing minorant of
  Q̃ on the log-image of K together with the boundary anchor (log R^2, 0).

Both are lower convex hulls of a constraint grid followed by a slope cap and
a monotone pass. The solver then checks itself with the domination principle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, SolverError, StructuralError, UnsupportedWeight
from .monge_ampere import SupportReport, ma_cdf, support
from .radial_core import (
    LELONG_SLOPE, RadialProfile, RadialSet, RadialWeight, to_log, to_radius,
)

logger = logging.getLogger(__name__)

CONTACT_TOLERANCE = 1e-9
DOMINATION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """
    Resolution of the constraint grid.

    ``points`` uniform samples per continuum component, plus the weight's
    kinks; with a ``tolerance`` cells are bisected until the midpoint defect of
    linear interpolation of Q̃ is below it (``None`` keeps the grid fixed).
    Balls are cut at ``s_min``. Domination is checked on a sweep of
    [s_min, s_max] (default: margin past the log-image of K), which also
    extends report tables.
    """
    points: int = 1024
    s_min: float = -50.0
    s_max: float | None = None
    margin: float = 2.0
    tolerance: float | None = 1e-10
    max_points: int = 2_000_000

    def __post_init__(self):
        if self.points < 2:
            raise StructuralError('a grid needs at least 2 points per component')
        if self.tolerance is not None and not self.tolerance > 0:
            raise StructuralError('the refinement tolerance must be positive')
        if self.s_max is not None and not self.s_max > self.s_min:
            raise StructuralError('s_max must exceed s_min')


@dataclass(frozen=True)
class Problem:
    """Radial weighted extremal problem in C^n (global, or relative to B(0, R))."""
    dimension: int
    domain: RadialSet
    weight: RadialWeight
    mode: str = 'global'
    omega_radius: float | None = None

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise StructuralError('dimension must be a positive integer')
        if self.mode not in ('global', 'relative'):
            raise StructuralError(f'unknown mode {self.mode!r}')
        if self.mode == 'relative':
            if self.omega_radius is None:
                raise StructuralError('relative mode needs the radius of Ω')
            if not self.omega_radius > self.domain.max_radius:
                raise DomainError(
                    f'Ω = B(0, {self.omega_radius}) does not contain K '
                    f'(max radius {self.domain.max_radius})')

    @property
    def anchor(self):
        """Boundary anchor (log R^2, 0) of relative problems."""
        return (to_log(self.omega_radius), 0.0) if self.mode == 'relative' else None

    def as_dict(self):
        """Summary for reports."""
        return {
            'dimension': self.dimension,
            'set': self.domain.as_list(),
            'mode': 'global' if self.mode == 'global' else {'relative': self.omega_radius},
        }


@dataclass(frozen=True, eq=False)
class ConstraintGrid:
    """Points (s_i, Q̃(s_i)) of the log-image of K with their component index."""
    s: np.ndarray
    q: np.ndarray
    component: np.ndarray
    passes: int = 0

    @property
    def size(self):
        """Number of constraint points."""
        return int(self.s.size)


@dataclass(frozen=True, eq=False)
class Solution:
    """Extremal profile with its measure, support S_w and contact set S_w*."""
    profile: RadialProfile
    measure: object
    support: SupportReport
    contact: SupportReport
    grid: ConstraintGrid
    mode: str = 'global'
    diagnostics: dict = field(default_factory=dict)
    check_s: np.ndarray | None = None

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'mode': self.mode,
            'profile': self.profile.as_dict(),
            'class': self.profile.class_flags.as_dict(),
            'measure': self.measure.as_dict(),
            'support': self.support.as_dict(),
            'contact_set': self.contact.as_dict(),
            'diagnostics': dict(self.diagnostics),
        }


def _refine(weight, nodes, tol, budget):
    passes = 0
    while True:
        a, b = nodes[:-1], nodes[1:]
        mid = 0.5 * (a + b)
        defect = np.abs(weight.tilde(mid) - 0.5 * (weight.tilde(a) + weight.tilde(b)))
        bad = (defect > tol) & (b - a > 1e-13 * np.maximum(1.0, np.abs(b)))
        count = int(bad.sum())
        if count == 0:
            return nodes, passes
        if nodes.size + count > budget:
            logger.warning(
                'constraint grid: point budget reached, interpolation defect %.3g',
                float(defect.max()))
            return nodes, passes
        nodes = np.sort(np.concatenate((nodes, mid[bad])))
        passes += 1


def constraint_grid(problem, grid=None):
    """Sample Q̃ on the log-image of K; spheres contribute their single point."""
    grid = grid or GridSpec()
    weight = problem.weight
    weight.validate_on(problem.domain, grid.s_min)
    kinks = weight.kinks()
    pieces_s, pieces_c = [], []
    passes = 0
    budget = grid.max_points
    for index, (a, b) in enumerate(problem.domain.intervals):
        if b == 0.0:
            continue
        lo, hi = RadialSet(((a, b),)).log_image(grid.s_min)[0]
        if a == b:
            nodes = np.array([hi])
        else:
            inner = kinks[(kinks > lo) & (kinks < hi)]
            nodes = np.unique(np.concatenate((np.linspace(lo, hi, grid.points), inner)))
            if grid.tolerance is not None:
                nodes, used = _refine(weight, nodes, grid.tolerance, budget)
                passes = max(passes, used)
        budget -= nodes.size
        pieces_s.append(nodes)
        pieces_c.append(np.full(nodes.size, index))
    s = np.concatenate(pieces_s)
    q = np.asarray(weight.tilde(s), dtype=float)
    if not np.all(np.isfinite(q)):
        raise DomainError('the weight is not finite on the constraint grid')
    logger.debug('constraint grid: %d points, %d refinement passes', s.size, passes)
    return ConstraintGrid(s, q, np.concatenate(pieces_c), passes)


def lower_hull(xs, ys):
    """Indices of the lower convex hull of points sorted by x (collinear points dropped)."""
    hull = []
    for i in range(len(xs)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _envelope(cgrid, weight, anchor):
    xs, ys = cgrid.s, cgrid.q
    if anchor is not None:
        xs = np.append(xs, anchor[0])
        ys = np.append(ys, anchor[1])
    hull = lower_hull(xs, ys)
    if anchor is None:
        # terminal slope cap: the slope-1/2 ray leaves from the last vertex it can
        while len(hull) >= 2 and (
                (ys[hull[-1]] - ys[hull[-2]]) / (xs[hull[-1]] - xs[hull[-2]])
                > LELONG_SLOPE):
            hull.pop()
    # monotone pass: flat left of the leftmost minimum
    start = 0
    while start + 1 < len(hull) and ys[hull[start + 1]] <= ys[hull[start]]:
        start += 1
    hull = np.asarray(hull[start:])
    vs, vq = xs[hull], ys[hull]
    chords = np.diff(vq) / np.diff(vs)
    if anchor is None:
        right = LELONG_SLOPE
    else:
        right = float(chords[-1]) if chords.size else 0.0
    cin = np.concatenate(([0.0], chords))
    cout = np.concatenate((chords, [right]))
    # segments joining neighbouring grid points of one continuum piece follow Q̃
    on_grid = hull < cgrid.size
    comp = np.where(on_grid, cgrid.component[np.minimum(hull, cgrid.size - 1)], -1)
    curved = (np.diff(hull) == 1) & (comp[:-1] == comp[1:]) & on_grid[1:] & on_grid[:-1]
    curved_in = np.concatenate(([False], curved))
    curved_out = np.concatenate((curved, [False]))
    qm, qp = weight.slopes(vs)
    dm = np.where(curved_in, np.clip(qm, cin, cout), cin)
    dp = np.where(curved_out, np.clip(qp, cin, cout), cout)
    dp = np.maximum(dp, dm)
    dm[0] = 0.0
    dp[-1] = right
    # vertices without kink or curvature
    flat = np.zeros(hull.size, dtype=bool)
    flat[1:-1] = (np.abs(cout - cin)[1:-1] <= 1e-14) & (np.abs(dp - dm)[1:-1] <= 1e-14)
    keep = ~flat
    profile = RadialProfile(vs[keep], vq[keep], 0.0, right, dm[keep], dp[keep])
    return profile, int(hull.size)


def _contact_report(profile, cgrid, domain, tol):
    gap = np.asarray(profile.tilde(cgrid.s)) - cgrid.q
    touching = gap >= -tol
    atoms, intervals = [], []
    radii = to_radius(cgrid.s)
    i = 0
    size = cgrid.size
    while i < size:
        if not touching[i]:
            i += 1
            continue
        j = i
        while j + 1 < size and touching[j + 1] and cgrid.component[j + 1] == cgrid.component[i]:
            j += 1
        comp = int(cgrid.component[i])
        a, b = domain.intervals[comp]
        first_of_ball = a == 0.0 and b > 0.0 and (
            i == 0 or cgrid.component[i - 1] != comp)
        lo = 0.0 if first_of_ball else float(radii[i])
        if j > i or first_of_ball:
            intervals.append((lo, float(radii[j])))
        else:
            atoms.append(float(radii[i]))
        i = j + 1
    return SupportReport(atoms=tuple(atoms), density_intervals=tuple(intervals))


def contact_set(solution, problem, tol=CONTACT_TOLERANCE):
    """Radii of K where V >= Q - tol, grouped into spheres and closed intervals."""
    return _contact_report(solution.profile, solution.grid, problem.domain, tol)


@dataclass(frozen=True)
class DominationReport:
    """Outcome of :func:`verify_domination`."""
    support_ok: bool
    support_violation: float
    dominated: bool
    max_violation: float

    @property
    def consistent(self):
        """False when u <= v on the support but not everywhere."""
        return not self.support_ok or self.dominated

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'support_ok': self.support_ok,
            'support_violation': self.support_violation,
            'dominated': self.dominated,
            'max_violation': self.max_violation,
            'consistent': self.consistent,
        }


def _support_samples(report, per_interval=33):
    samples = [np.asarray(report.atoms, dtype=float)]
    for lo, hi in report.density_intervals:
        samples.append(np.linspace(max(lo, hi * 1e-12), hi, per_interval))
    radii = np.concatenate(samples) if samples else np.empty(0)
    return to_log(radii[radii > 0]) if radii.size else np.empty(0)


def verify_domination(candidate, reference, measure, grid_s, tol=DOMINATION_TOLERANCE,
                      support_report=None):
    """
    Domination principle as an executable check.

    If u <= v on the support of (dd^c v)^n then u <= v everywhere; this scans
    the support first, then the whole grid. Pass ``support_report`` to reuse
    the support of ``measure`` across many candidates.
    """
    if not candidate.class_flags.in_L:
        raise DomainError('the candidate is not in the Lelong class L')
    if not reference.class_flags.in_L_plus:
        raise DomainError('the reference is not in L+')
    report = support(measure) if support_report is None else support_report
    points = _support_samples(report)
    if report.origin_mass > 0:
        points = np.append(points, -np.inf)
    with np.errstate(invalid='ignore'):
        on_support = np.asarray(candidate.tilde(points)) - np.asarray(reference.tilde(points))
    on_support = np.nan_to_num(on_support, nan=0.0, neginf=-np.inf)
    worst_support = float(on_support.max()) if on_support.size else 0.0
    support_ok = worst_support <= tol
    grid_s = np.asarray(grid_s, dtype=float)
    diff = np.asarray(candidate.tilde(grid_s)) - np.asarray(reference.tilde(grid_s))
    worst = float(diff.max()) if diff.size else 0.0
    # past the grid both profiles are rays; L vs L+ slopes keep the gap from growing
    worst = max(worst, worst_support)
    return DominationReport(
        support_ok=support_ok,
        support_violation=worst_support,
        dominated=worst <= tol,
        max_violation=worst,
    )


def domination_grid(cgrid, grid):
    """Constraint points merged with a uniform sweep of [s_min, s_max]."""
    top = float(cgrid.s.max())
    top = top + grid.margin if grid.s_max is None else max(grid.s_max, top)
    return np.union1d(cgrid.s, np.linspace(min(grid.s_min, float(cgrid.s.min())), top,
                                           grid.points))


def _solve(problem, grid, anchor, atom_tolerance=None):
    grid = grid or GridSpec()
    cgrid = constraint_grid(problem, grid)
    if anchor is not None and np.any(cgrid.q > 1e-12):
        raise DomainError('relative problems need Q <= 0 on K')
    profile, vertices = _envelope(cgrid, problem.weight, anchor)
    n = problem.dimension
    measure = ma_cdf(profile, n)
    if anchor is not None:
        measure = measure.truncated(problem.omega_radius)
    supp = support(measure, atom_tolerance)
    contact = _contact_report(profile, cgrid, problem.domain, CONTACT_TOLERANCE)
    check_s = domination_grid(cgrid, grid)
    violation = float(np.max(np.asarray(profile.tilde(cgrid.s)) - cgrid.q))
    scale = max(1.0, float(np.max(np.abs(cgrid.q))))
    diagnostics = {
        'grid_points': cgrid.size,
        'refinement_passes': cgrid.passes,
        'hull_vertices': vertices,
        'profile_breakpoints': int(profile.breakpoints.size),
        'max_violation': violation,
        'total_mass': measure.total_mass,
    }
    if violation > CONTACT_TOLERANCE * scale:
        raise SolverError(f'envelope exceeds the weight by {violation:.3g}')
    if not supp.covered_by(contact, abs_slack=1e-12):
        raise SolverError('support is not inside the contact set')
    if anchor is None:
        check = verify_domination(profile, profile, measure, check_s, support_report=supp)
        if not check.dominated:
            raise SolverError('domination self-check failed')
        diagnostics['domination'] = check.as_dict()
    else:
        diagnostics['boundary_value'] = float(profile.tilde(anchor[0]))
    logger.debug(
        'solve %s: %d grid points, %d hull vertices, mass %.12g', problem.mode, cgrid.size,
        vertices, measure.total_mass)
    return Solution(profile, measure, supp, contact, cgrid, problem.mode, diagnostics, check_s)


def solve_global(problem, grid=None, atom_tolerance=None):
    """V_{K,Q}: sup of u in L with u <= Q on K."""
    if problem.mode != 'global':
        raise DomainError('solve_global needs a global problem')
    return _solve(problem, grid, None, atom_tolerance)


def solve_relative(problem, grid=None, atom_tolerance=None):
    """U_{K,Q,Ω}: sup of u psh on Ω = B(0, R), u < 0, u <= Q on K."""
    if problem.mode != 'relative':
        raise DomainError('solve_relative needs a relative problem')
    return _solve(problem, grid, problem.anchor, atom_tolerance)


def solve(problem, grid=None, atom_tolerance=None):
    """Dispatch on the problem mode; ``atom_tolerance`` defaults to 1e-9 (2π)^n."""
    if problem.mode == 'relative':
        return solve_relative(problem, grid, atom_tolerance)
    return solve_global(problem, grid, atom_tolerance)


@dataclass(frozen=True)
class AbsoluteContinuity:
    """Set-level verdicts m1 << m2 and m2 << m1."""
    m1_ll_m2: bool
    m2_ll_m1: bool
    reasons: tuple = ()

    def as_dict(self):
        """JSON-friendly representation."""
        return {'m1_ll_m2': self.m1_ll_m2, 'm2_ll_m1': self.m2_ll_m1,
                'reasons': list(self.reasons)}


def _charged_outside(first, second, rel_slack):
    reasons = []
    for r in first.atoms:
        if not any(abs(r - x) <= rel_slack * max(r, x) for x in second.atoms):
            reasons.append(f'atom at r={r:.12g} has no counterpart')
    density = SupportReport(density_intervals=second.density_intervals)
    for lo, hi in first.density_intervals:
        piece = SupportReport(density_intervals=((lo, hi),))
        if not piece.covered_by(density, rel_slack=rel_slack):
            reasons.append(f'density on [{lo:.12g}, {hi:.12g}] has no counterpart')
    if first.origin_mass > 0 and second.origin_mass == 0:
        reasons.append('mass at the origin has no counterpart')
    return reasons


def compare_abs_continuity(m1, m2, tol=None, rel_slack=1e-9):
    """
    Whether each radial measure is absolutely continuous w.r.t. the other.

    m1 << m2 fails as soon as m1 charges (above ``tol``) a sphere or a radius
    interval that m2 does not.
    """
    s1, s2 = support(m1, tol), support(m2, tol)
    first = _charged_outside(s1, s2, rel_slack)
    second = _charged_outside(s2, s1, rel_slack)
    return AbsoluteContinuity(
        not first, not second,
        tuple(f'm1: {r}' for r in first) + tuple(f'm2: {r}' for r in second),
    )


@dataclass(frozen=True)
class BoundaryReport:
    """Laplacian classification of Q and the support-on-∂K verdict."""
    classification: str
    applicable: bool
    support_on_boundary: bool | None
    boundary_radii: tuple
    support: SupportReport | None = None

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'classification': self.classification,
            'applicable': self.applicable,
            'support_on_boundary': self.support_on_boundary,
            'boundary_radii': list(self.boundary_radii),
            'support': None if self.support is None else self.support.as_dict(),
        }


def classify_weight(problem, samples=257, tol=1e-12):
    """Sign of the radial Laplacian of Q in the interior of K (kinks included)."""
    interiors = problem.domain.interior_intervals()
    if not interiors:
        raise DomainError('K has no interior')
    weight = problem.weight
    if weight.kind == 'table':
        raise UnsupportedWeight('tabulated weights have no Laplacian classification')
    values = []
    for a, b in interiors:
        lo = a if a > 0 else b * 1e-3
        radii = np.linspace(lo, b, samples + 2)[1:-1]
        values.append(np.atleast_1d(weight.laplacian(radii, problem.dimension)))
        kinks, jumps = weight.kink_jumps()
        kinks = np.asarray(kinks, dtype=float)
        if kinks.size:
            inside = (kinks > to_log(a) if a > 0 else np.ones(kinks.size, bool)) & (
                kinks < to_log(b))
            values.append(np.asarray(jumps, dtype=float)[inside])
    lap = np.concatenate(values)
    scale = max(1.0, float(np.max(np.abs(lap))) if lap.size else 1.0)
    pos = np.any(lap > tol * scale)
    neg = np.any(lap < -tol * scale)
    if pos and neg:
        return 'mixed'
    if neg:
        return 'superharmonic'
    if pos:
        return 'subharmonic'
    return 'harmonic'


def boundary_support_check(problem, solution=None, grid=None):
    """
    For superharmonic (or harmonic, i.e. maximal) Q the equilibrium measure
    lives on ∂K; other weights are reported as not applicable.
    """
    kind = classify_weight(problem)
    boundary = tuple(problem.domain.boundary_radii())
    if kind not in ('superharmonic', 'harmonic'):
        return BoundaryReport(kind, False, None, boundary)
    solution = solution or solve(problem, grid)
    supp = solution.support
    on_boundary = not supp.density_intervals and supp.origin_mass == 0 and all(
        any(abs(r - b) <= 1e-9 * b for b in boundary) for r in supp.atoms)
    if not on_boundary:
        logger.warning('support of a %s weight leaves the boundary: %s', kind, supp.as_dict())
    return BoundaryReport(kind, True, on_boundary, boundary, supp)


def random_competitors(solution, problem, count, rng, max_lines=4):
    """
    Profiles of the same admissible class lying below Q on the constraint grid.

    Each is the max of up to ``max_lines`` lines whose slopes lie in the class
    ([0, 1/2] globally) and whose intercepts sit below every constraint.
    """
    s, q = solution.grid.s, solution.grid.q
    anchor = problem.anchor
    if anchor is not None:
        s = np.append(s, anchor[0])
        q = np.append(q, anchor[1])
        top = 2.0 * max(1.0, float(solution.profile.right_slope))
    else:
        top = LELONG_SLOPE
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_lines + 1))
        slopes = rng.uniform(0.0, top, size=k)
        intercepts = np.array([np.min(q - a * s) for a in slopes])
        intercepts -= rng.exponential(0.1, size=k)
        out.append(RadialProfile.from_lines(slopes, intercepts))
    return out


@dataclass(frozen=True)
class ThresholdReport:
    """Largest A with V = A(r^2 - R^2) on the whole ball, and which condition it meets."""
    radius: float
    threshold: float
    linear_condition: float
    quadratic_condition: float
    matches: str

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'radius': self.radius,
            'threshold': self.threshold,
            '2AR': self.linear_condition,
            '2AR^2': self.quadratic_condition,
            'matches': self.matches,
        }


def quadratic_ball_problem(coefficient, radius, dimension):
    """Closed ball B(0, R) with Q = A(r^2 - R^2)."""
    weight = RadialWeight.power(coefficient, 2.0, -coefficient * radius ** 2)
    return Problem(dimension, RadialSet.ball(radius), weight)


def quadratic_ball_threshold(radius, dimension, tol=1e-9, points=4096):
    """Bisect the largest A for which the solution touches Q on all of B(0, R)."""
    grid = GridSpec(points=points, s_min=to_log(radius) - 8.0, tolerance=None)

    def touches(coefficient):
        problem = quadratic_ball_problem(coefficient, radius, dimension)
        sol = solve_global(problem, grid)
        full = (len(sol.contact.density_intervals) == 1 and not sol.contact.atoms
                and sol.contact.density_intervals[0][0] == 0.0
                and sol.contact.density_intervals[0][1] >= radius * (1 - 1e-12))
        _, slope = problem.weight.slopes(to_log(radius))
        return full and float(slope[0]) <= LELONG_SLOPE + 1e-12

    lo, hi = 0.0, 1.0 / radius + 1.0 / radius ** 2
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if touches(mid):
            lo = mid
        else:
            hi = mid
    linear = 2 * lo * radius
    quadratic = 2 * lo * radius ** 2
    matches = '2AR^2 <= 1' if abs(quadratic - 1) <= abs(linear - 1) else '2AR <= 1'
    logger.info('quadratic ball R=%g: threshold A=%.10g (%s)', radius, lo, matches)
    return ThresholdReport(radius, lo, linear, quadratic, matches)
