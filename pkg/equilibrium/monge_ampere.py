"""
Monge-Ampère measures of radial plurisubharmonic functions.

A radial measure is stored through its ball-mass CDF f(t) = μ(B(0, t)): a set
of atoms (sphere masses) plus continuous increment segments. For a profile ũ
the CDF is f(r) = 4^n n! ω_{2n} ũ'(log r^2)^n = (4π ũ')^n with ũ' the right
derivative, which gives total mass (2π)^n to every function of class L+.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, StructuralError

logger = logging.getLogger(__name__)


def unit_ball_volume(dimension):
    """ω_{2n}: volume of the unit ball of C^n = R^{2n}."""
    return math.pi ** dimension / math.factorial(dimension)


def mass_constant(dimension):
    """4^n n! ω_{2n}, which equals (4π)^n."""
    return 4.0 ** dimension * math.factorial(dimension) * unit_ball_volume(dimension)


def lelong_mass(dimension):
    """(2π)^n, the total Monge-Ampère mass of any function in L+."""
    return (2.0 * math.pi) ** dimension


def default_atom_tolerance(dimension, factor=1e-9):
    """Mass below which jumps count as float noise."""
    return factor * lelong_mass(dimension)


@dataclass(frozen=True)
class Atom:
    """Mass carried by the sphere |z| = radius (radius 0: the origin)."""
    radius: float
    mass: float


@dataclass(frozen=True, eq=False)
class PowerSegment:
    """CDF increment coefficient·(t - start)^exponent on [start, end]."""
    start: float
    end: float
    coefficient: float
    exponent: float

    def __post_init__(self):
        if not (0 <= self.start < self.end and np.isfinite(self.end)):
            raise StructuralError(f'bad power segment [{self.start}, {self.end}]')
        if self.coefficient < 0:
            raise StructuralError('negative mass in a power segment')
        if not self.exponent > 0:
            raise StructuralError('power segment exponents must be positive')

    def increment(self, t):
        """Mass of the segment inside B(0, t)."""
        x = np.clip(np.asarray(t, dtype=float), self.start, self.end)
        return self.coefficient * (x - self.start) ** self.exponent

    @property
    def total(self):
        """Mass of the whole segment."""
        return self.coefficient * (self.end - self.start) ** self.exponent

    def scaled(self, factor):
        """Same shape, mass multiplied by factor."""
        return PowerSegment(self.start, self.end, factor * self.coefficient, self.exponent)

    def truncated(self, radius):
        """Part inside the open ball of the given radius, or None."""
        if self.start >= radius:
            return None
        if self.end <= radius:
            return self
        return PowerSegment(self.start, radius, self.coefficient, self.exponent)

    def increasing_intervals(self, tol):
        """Where this segment's CDF increases."""
        return [(self.start, self.end)] if self.total > tol else []

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'kind': 'power', 'start': self.start, 'end': self.end,
            'coefficient': self.coefficient, 'exponent': self.exponent,
        }


@dataclass(frozen=True, eq=False)
class TableSegment:
    """CDF increments tabulated at radii, linear in between."""
    nodes: np.ndarray
    increments: np.ndarray

    def __post_init__(self):
        t = np.array(self.nodes, dtype=float)
        inc = np.array(self.increments, dtype=float)
        if t.ndim != 1 or t.size < 2 or t.shape != inc.shape:
            raise StructuralError('a table segment needs >= 2 matching nodes')
        if np.any(t < 0) or np.any(np.diff(t) <= 0) or not np.all(np.isfinite(t)):
            raise StructuralError('table nodes must be increasing radii')
        if not np.all(np.isfinite(inc)):
            raise StructuralError('table increments must be finite')
        inc = inc - inc[0]
        if np.any(np.diff(inc) < -1e-12 * max(1.0, abs(inc[-1]))):
            raise StructuralError('negative mass in a table segment')
        inc = np.maximum.accumulate(inc)
        t.setflags(write=False)
        inc.setflags(write=False)
        object.__setattr__(self, 'nodes', t)
        object.__setattr__(self, 'increments', inc)

    @property
    def start(self):
        """First node."""
        return float(self.nodes[0])

    @property
    def end(self):
        """Last node."""
        return float(self.nodes[-1])

    @property
    def total(self):
        """Mass of the whole segment."""
        return float(self.increments[-1])

    def increment(self, t):
        """Mass of the segment inside B(0, t)."""
        return np.interp(np.asarray(t, dtype=float), self.nodes, self.increments)

    def scaled(self, factor):
        """Same shape, mass multiplied by factor."""
        return TableSegment(self.nodes, factor * self.increments)

    def truncated(self, radius):
        """Part inside the open ball of the given radius, or None."""
        if self.start >= radius:
            return None
        if self.end <= radius:
            return self
        keep = self.nodes < radius
        nodes = np.concatenate((self.nodes[keep], [radius]))
        incs = np.concatenate((self.increments[keep], [self.increment(radius)]))
        return TableSegment(nodes, incs)

    def increasing_intervals(self, tol):
        """Maximal runs of cells with positive increase carrying more than tol."""
        steps = np.diff(self.increments)
        edges = np.diff(np.concatenate(([0], (steps > 0).astype(np.int8), [0])))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1)
        totals = np.concatenate(([0.0], np.cumsum(steps)))
        keep = totals[stops] - totals[starts] > tol
        return [(float(self.nodes[i]), float(self.nodes[j]))
                for i, j in zip(starts[keep], stops[keep])]

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'kind': 'table',
            'nodes': [float(x) for x in self.nodes],
            'increments': [float(x) for x in self.increments],
        }


@dataclass(frozen=True, eq=False)
class RadialMeasure:
    """Radially symmetric positive measure on C^n given by its ball-mass CDF."""
    dimension: int
    atoms: tuple = ()
    segments: tuple = ()

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise StructuralError('dimension must be a positive integer')
        merged = {}
        for atom in self.atoms:
            if atom.radius < 0 or not np.isfinite(atom.radius):
                raise StructuralError(f'bad atom radius {atom.radius}')
            if atom.mass < 0 or not np.isfinite(atom.mass):
                raise StructuralError(f'negative mass at radius {atom.radius}')
            merged[atom.radius] = merged.get(atom.radius, 0.0) + atom.mass
        atoms = tuple(Atom(r, m) for r, m in sorted(merged.items()) if m > 0)
        object.__setattr__(self, 'dimension', int(self.dimension))
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'segments', tuple(self.segments))
        radii = np.array([a.radius for a in atoms], dtype=float)
        masses = np.cumsum([a.mass for a in atoms]) if atoms else np.empty(0)
        object.__setattr__(self, '_radii', radii)
        object.__setattr__(self, '_cumulative', np.asarray(masses, dtype=float))

    def _atom_mass(self, t, side):
        x = np.asarray(t, dtype=float)
        if not self.atoms:
            return np.zeros_like(x)
        k = np.searchsorted(self._radii, x, side=side)
        cum = np.concatenate(([0.0], self._cumulative))
        return cum[k]

    def cdf(self, t):
        """f(t) = μ(B(0, t)) with the closed ball (right-continuous)."""
        x = np.asarray(t, dtype=float)
        out = self._atom_mass(x, 'right')
        for seg in self.segments:
            out = out + seg.increment(x)
        return out if np.ndim(out) else float(out)

    def left_limit(self, t):
        """f(t-) = μ of the open ball B(0, t)."""
        x = np.asarray(t, dtype=float)
        out = self._atom_mass(x, 'left')
        for seg in self.segments:
            out = out + seg.increment(x)
        return out if np.ndim(out) else float(out)

    @property
    def total_mass(self):
        """Atom masses plus segment masses."""
        atoms = float(self._cumulative[-1]) if self.atoms else 0.0
        return atoms + sum(seg.total for seg in self.segments)

    @property
    def origin_mass(self):
        """f(0+): mass concentrated at the origin."""
        return sum(a.mass for a in self.atoms if a.radius == 0.0)

    @property
    def is_zero(self):
        """True for the zero measure."""
        return not self.atoms and all(seg.total == 0 for seg in self.segments)

    def breakpoints(self):
        """Atom radii and segment ends/nodes, sorted."""
        points = [a.radius for a in self.atoms]
        for seg in self.segments:
            if isinstance(seg, TableSegment):
                points.extend(seg.nodes.tolist())
            else:
                points.extend([seg.start, seg.end])
        return np.unique(np.asarray(points, dtype=float))

    def scaled(self, factor):
        """factor·μ."""
        return RadialMeasure(
            self.dimension,
            tuple(Atom(a.radius, factor * a.mass) for a in self.atoms),
            tuple(seg.scaled(factor) for seg in self.segments),
        )

    def truncated(self, radius):
        """Restriction to the open ball B(0, radius)."""
        segments = []
        for seg in self.segments:
            part = seg.truncated(radius)
            if part is not None:
                segments.append(part)
        atoms = tuple(a for a in self.atoms if a.radius < radius)
        return RadialMeasure(self.dimension, atoms, tuple(segments))

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'dimension': self.dimension,
            'atoms': [[a.radius, a.mass] for a in self.atoms],
            'segments': [seg.as_dict() for seg in self.segments],
            'total_mass': self.total_mass,
        }


def zero_measure(dimension):
    """The zero measure on C^n."""
    return RadialMeasure(dimension)


@dataclass(frozen=True)
class SupportReport:
    """Support of a radial measure: sphere radii and radius intervals."""
    atoms: tuple = ()
    density_intervals: tuple = ()
    origin_mass: float = 0.0

    @property
    def is_empty(self):
        """No atoms, no density and no mass at the origin."""
        return not self.atoms and not self.density_intervals and self.origin_mass == 0.0

    def components(self, rel_slack=0.0, abs_slack=0.0):
        """Closed radius intervals (atoms as [r, r]) merged when closer than the slack."""
        pieces = [(r, r) for r in self.atoms] + [tuple(iv) for iv in self.density_intervals]
        if self.origin_mass > 0:
            pieces.append((0.0, 0.0))
        pieces.sort()
        merged = []
        for a, b in pieces:
            if merged and a <= merged[-1][1] * (1 + rel_slack) + abs_slack:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return merged

    def covered_by(self, other, rel_slack=0.0, abs_slack=0.0):
        """Set inclusion self ⊆ other at the given radius resolution."""
        targets = other.components(rel_slack, abs_slack)
        for a, b in self.components():
            if not any(
                a >= lo * (1 - rel_slack) - abs_slack and b <= hi * (1 + rel_slack) + abs_slack
                for lo, hi in targets
            ):
                return False
        return True

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'atoms': list(self.atoms),
            'density_intervals': [list(iv) for iv in self.density_intervals],
            'origin_mass': self.origin_mass,
        }


def _merge_intervals(intervals):
    merged = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1] * (1 + 1e-12):
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def ma_cdf(profile, dimension):
    """
    Monge-Ampère measure (dd^c u)^n of u = ũ(log|z|^2) as a ball-mass CDF.

    Slope jumps at breakpoints become sphere atoms of mass
    (4π)^n[(ũ'+)^n - (ũ'-)^n]; a segment whose tangent data rises from
    ũ'(s_i+) to ũ'(s_{i+1}-) carries a density, tabulated linearly in t.
    """
    flags = profile.class_flags
    if not flags.is_psh_radial:
        raise DomainError('the profile is not convex and nondecreasing')
    n = int(dimension)
    const = mass_constant(n)

    def cdf_of(slope):
        return const * np.maximum(slope, 0.0) ** n

    radii = profile.node_radii
    below = cdf_of(profile.left_derivatives)
    above = cdf_of(profile.right_derivatives)
    atoms = []
    if profile.left_slope > 0:
        atoms.append(Atom(0.0, float(cdf_of(profile.left_slope))))
    jumps = above - below
    for r, mass in zip(radii, jumps):
        if mass > 0:
            atoms.append(Atom(float(r), float(mass)))
    cells = np.maximum(below[1:] - above[:-1], 0.0)
    segments = []
    i = 0
    while i < cells.size:
        if cells[i] <= 0:
            i += 1
            continue
        j = i
        while j + 1 < cells.size and cells[j + 1] > 0:
            j += 1
        nodes = radii[i:j + 2]
        incs = np.concatenate(([0.0], np.cumsum(cells[i:j + 1])))
        segments.append(TableSegment(nodes, incs))
        i = j + 1
    logger.debug('ma_cdf: %d atoms, %d density runs', len(atoms), len(segments))
    return RadialMeasure(n, tuple(atoms), tuple(segments))


def support(measure, tol=None):
    """Where the CDF increases: atoms above tol, density runs above tol, f(0+)."""
    if tol is None:
        tol = default_atom_tolerance(measure.dimension)
    atoms = tuple(a.radius for a in measure.atoms if a.radius > 0 and a.mass > tol)
    intervals = []
    for seg in measure.segments:
        intervals.extend(seg.increasing_intervals(tol))
    origin = measure.origin_mass
    return SupportReport(
        atoms=atoms,
        density_intervals=tuple(_merge_intervals(intervals)),
        origin_mass=origin if origin > tol else 0.0,
    )


def total_mass(measure):
    """Closed-form total mass: atoms plus segment increments."""
    return measure.total_mass
