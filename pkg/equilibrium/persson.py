"""
Inverse map: radial measure -> radial plurisubharmonic function.

For a radial measure with ball-mass CDF f(t) = μ(B(0, t)) and no mass at the
origin the function

    u(z) = u0 + ∫_0^{|z|} (2/t) (f(t) / (4π)^n)^{1/n} dt

is plurisubharmonic, bounded below, and (dd^c u)^n = μ. In s = log|z|^2 this
reads ũ'(s) = f(e^{s/2})^{1/n} / (4π).
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .exceptions import DomainError
from .monge_ampere import Atom, PowerSegment, RadialMeasure, TableSegment, lelong_mass
from .radial_core import RadialProfile

logger = logging.getLogger(__name__)

# midpoint defect of the linear-in-t CDF interpolation
INTERPOLATION_TOLERANCE = 1e-9
QUADRATURE_TOLERANCE = 1e-10
MAX_NODES = 10 ** 6
# derivative below which a vanishing-at-0 CDF counts as flat
ORIGIN_SLOPE = 1e-12

_GL16 = special.roots_legendre(16)
_GL8 = special.roots_legendre(8)


@dataclass(frozen=True)
class Admissibility:
    """Verdict of :func:`admissible`; truthy when admissible."""
    admissible: bool
    diagnostic: str = ''

    def __bool__(self):
        return self.admissible


def admissible(measure, dimension):
    """
    Finiteness of ∫_0 f(t)^{1/n} / t dt near the origin.

    Every segment kind vanishes like a power of t at its start, so the only
    divergent piece is an atom at the origin (f(0+) > 0).
    """
    if measure.dimension != dimension:
        return Admissibility(False, f'measure lives in C^{measure.dimension}, not C^{dimension}')
    origin = measure.origin_mass
    if origin > 0:
        return Admissibility(
            False, f'atom at the origin of mass {origin:.6g}: ∫ f^(1/n)/t dt diverges at 0')
    return Admissibility(True, 'f(0+) = 0')


def _slope_of(f_values, dimension):
    return np.maximum(f_values, 0.0) ** (1.0 / dimension) / (4.0 * math.pi)


def _initial_nodes(measure):
    points = measure.breakpoints()
    positive = points[points > 0]
    if positive.size == 0:
        return positive
    if points[0] > 0:
        return positive
    # a segment starts at the origin: walk geometrically towards it
    head = []
    t = float(positive[0])
    for _ in range(1100):
        t *= 0.5
        head.append(t)
        if _slope_of(measure.cdf(t), measure.dimension) <= ORIGIN_SLOPE:
            break
    else:
        logger.warning('reconstruct: CDF does not flatten near the origin')
    return np.unique(np.concatenate((head, positive)))


def _refine(measure, nodes, tol, max_nodes):
    n = measure.dimension
    while True:
        a, b = nodes[:-1], nodes[1:]
        mid = 0.5 * (a + b)
        cdf_a = np.asarray(measure.cdf(a))
        cdf_b = np.asarray(measure.left_limit(b))
        defect = np.abs(np.asarray(measure.cdf(mid)) - 0.5 * (cdf_a + cdf_b))
        # chord error of the convex ũ over the cell: Δũ' · Δs / 4
        bend = (_slope_of(cdf_b, n) - _slope_of(cdf_a, n)) * np.log(b / a) / 2
        wide = b - a > 8 * np.finfo(float).eps * b
        in_t = (defect > tol) & wide
        in_s = (bend > tol) & wide & ~in_t
        count = int(in_t.sum() + in_s.sum())
        if count == 0:
            return nodes
        if nodes.size + count > max_nodes:
            logger.warning(
                'reconstruct: node cap %d reached, interpolation defect %.3g', max_nodes,
                float(max(defect.max(), bend.max())))
            return nodes
        nodes = np.sort(np.concatenate((nodes, mid[in_t], np.sqrt(a[in_s] * b[in_s]))))


def _origin_power_integrals(measure, a, b, fa, fb):
    """Cells where f is a single power term anchored at 0: exact integrals."""
    n = measure.dimension
    done = np.zeros(a.size, dtype=bool)
    values = np.zeros(a.size)
    for seg in measure.segments:
        if not isinstance(seg, PowerSegment) or seg.start != 0.0:
            continue
        inside = (b <= seg.end) & ~done
        alone = (np.abs(fa - seg.increment(a)) <= 1e-15 * np.maximum(fb, 1.0)) & (
            np.abs(fb - seg.increment(b)) <= 1e-15 * np.maximum(fb, 1.0))
        use = inside & alone
        q = seg.exponent / n
        scale = seg.coefficient ** (1.0 / n) / (4.0 * math.pi)
        values[use] = 2.0 * scale / q * (b[use] ** q - a[use] ** q)
        done |= use
    return done, values


def _cell_integrals(measure, nodes, lower, upper):
    """ũ(s_{i+1}) - ũ(s_i); ``lower``/``upper`` bound each cell by convexity."""
    n = measure.dimension
    a, b = nodes[:-1], nodes[1:]
    fa = np.asarray(measure.cdf(a))
    fb = np.asarray(measure.left_limit(b))
    out = np.zeros(a.size)
    flat = fa == fb
    out[flat] = lower[flat]
    exact, values = _origin_power_integrals(measure, a, b, fa, fb)
    exact &= ~flat
    out[exact] = values[exact]
    rest = np.flatnonzero(~flat & ~exact)
    if rest.size:
        def integrand(t):
            return 2.0 * _slope_of(np.asarray(measure.cdf(t)), n) / t

        lo, hi = a[rest], b[rest]
        half = 0.5 * (hi - lo)
        centre = 0.5 * (hi + lo)
        estimates = []
        for x, w in (_GL16, _GL8):
            t = centre[:, None] + half[:, None] * x[None, :]
            vals = integrand(t.ravel()).reshape(t.shape)
            estimates.append(half * (vals @ w))
        fine, coarse = estimates
        out[rest] = fine
        # accuracy relative to the largest increment the cell can carry
        unsure = np.abs(fine - coarse) > QUADRATURE_TOLERANCE * upper[rest]
        for k in rest[unsure]:
            out[k], _ = integrate.quad(
                lambda t: float(integrand(t)), a[k], b[k],
                epsabs=QUADRATURE_TOLERANCE * upper[k], epsrel=QUADRATURE_TOLERANCE, limit=200)
        logger.debug(
            'reconstruct: %d cells, %d closed form, %d Gauss-Legendre, %d adaptive',
            a.size, int(flat.sum() + exact.sum()), int(rest.size - unsure.sum()),
            int(unsure.sum()))
    return np.clip(out, lower, upper)


def reconstruct(measure, dimension, u0=0.0, tol=INTERPOLATION_TOLERANCE, max_nodes=MAX_NODES):
    """
    The bounded-below radial psh function with (dd^c u)^n = μ and u(0) = u0.

    Nodes sit at atoms and segment ends, then cells are bisected until f is
    linear in t to within ``tol``; the returned profile carries exact tangent
    data ũ'(s±) and the exact radius at every node. Each cell increment is
    held inside ũ'(s_i+)Δs <= Δũ <= ũ'(s_{i+1}-)Δs.
    """
    verdict = admissible(measure, dimension)
    if not verdict:
        raise DomainError(f'inadmissible measure: {verdict.diagnostic}')
    n = measure.dimension
    if measure.is_zero:
        return RadialProfile.constant(u0)
    nodes = _refine(measure, _initial_nodes(measure), tol, max_nodes)
    s = 2.0 * np.log(nodes)
    below = _slope_of(np.asarray(measure.left_limit(nodes)), n)
    above = _slope_of(np.asarray(measure.cdf(nodes)), n)
    head = 0.0
    first = float(nodes[0])
    if measure.left_limit(first) > 0:
        head, _ = integrate.quad(
            lambda t: 2.0 * float(_slope_of(measure.cdf(t), n)) / t, 0.0, first,
            epsabs=QUADRATURE_TOLERANCE, epsrel=QUADRATURE_TOLERANCE, limit=200)
    ds = np.diff(s)
    cells = np.empty(0)
    if nodes.size > 1:
        cells = _cell_integrals(measure, nodes, above[:-1] * ds, below[1:] * ds)
    values = np.cumsum(np.concatenate(([u0 + head], cells)))
    below[0] = 0.0
    right = float(_slope_of(measure.total_mass, n))
    above[-1] = right
    logger.debug('reconstruct: %d nodes, right slope %.12g', nodes.size, right)
    return RadialProfile(s, values, 0.0, right, below, above, radii=nodes)


def sphere_measure(radius, dimension, mass=None):
    """Uniform measure on the sphere |z| = radius; default mass (2π)^n."""
    if not radius > 0:
        raise DomainError('a sphere measure needs a positive radius')
    mass = lelong_mass(dimension) if mass is None else mass
    return RadialMeasure(dimension, (Atom(float(radius), float(mass)),))


def shell_measure(inner, outer, dimension, exponent=None, mass=None):
    """
    Density on inner <= |z| <= outer with f(t) = M((t - inner)/(outer - inner))^p.

    M defaults to (2π)^n and p to n; inner = 0 gives a ball.
    """
    if not 0 <= inner < outer:
        raise DomainError(f'need 0 <= inner < outer, got [{inner}, {outer}]')
    p = float(dimension if exponent is None else exponent)
    total = lelong_mass(dimension) if mass is None else mass
    segment = PowerSegment(float(inner), float(outer), total / (outer - inner) ** p, p)
    return RadialMeasure(dimension, (), (segment,))


def mixture(components, weights):
    """Σ w_i μ_i with positive weights summing to at most 1."""
    components = list(components)
    weights = [float(w) for w in weights]
    if not components or len(components) != len(weights):
        raise DomainError('need one positive weight per component')
    if any(not w > 0 for w in weights):
        raise DomainError('mixture weights must be positive')
    if sum(weights) > 1.0 + 1e-12:
        raise DomainError(f'mixture weights sum to {sum(weights)!r} > 1')
    dims = {m.dimension for m in components}
    if len(dims) != 1:
        raise DomainError(f'components live in different dimensions {sorted(dims)}')
    atoms = []
    segments = []
    for measure, weight in zip(components, weights):
        scaled = measure.scaled(weight)
        atoms.extend(scaled.atoms)
        segments.extend(scaled.segments)
    return RadialMeasure(dims.pop(), tuple(atoms), tuple(segments))


def truncated_union(components, depth=20, fold_tail=False):
    """
    First ``depth`` terms of Σ μ_i / 2^i, with the missing mass.

    Returns ``(measure, deficit)``. With ``fold_tail`` the weight 2^{-k} of the
    dropped tail goes to the last kept component, so the deficit is 0.
    """
    kept = list(itertools.islice(components, depth))
    if not kept:
        raise DomainError('a union needs at least one component')
    k = len(kept)
    weights = [2.0 ** -i for i in range(1, k + 1)]
    tail = 2.0 ** -k
    if fold_tail:
        weights[-1] += tail
    measure = mixture(kept, weights)
    deficit = 0.0 if fold_tail else tail * lelong_mass(measure.dimension)
    logger.debug('truncated_union: %d terms, deficit %.3g', k, deficit)
    return measure, deficit


def table_measure(dimension, nodes, cdf_values):
    """Measure whose CDF is linear in t between tabulated (t, f) nodes, zero before."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(cdf_values, dtype=float)
    atoms = ()
    if values.size and values[0] > 0:
        atoms = (Atom(float(nodes[0]), float(values[0])),)
    return RadialMeasure(dimension, atoms, (TableSegment(nodes, values),))
