"""
Gluing of plurisubharmonic functions across a sphere.

A function equal to u inside |z| <= R and to v outside, continuous across the
sphere, is plurisubharmonic when both pieces are and the outward normal
derivatives satisfy du/dn <= dv/dn on the interface. This module checks that
criterion for radial pieces, builds the n = 1 harmonic reflection
h(1/z̄) + log|z|, and samples the sub-mean-value inequality on complex lines.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import GlueRejected, StructuralError

logger = logging.getLogger(__name__)

CONTINUITY_TOLERANCE = 1e-10
DERIVATIVE_TOLERANCE = 1e-12
SUBMEAN_TOLERANCE = 1e-9
CIRCLE_NODES = 512
BOUNDARY_SAMPLES = 10_000


def _norm(z):
    return np.sqrt(np.sum(np.abs(z) ** 2, axis=-1))


@dataclass(frozen=True, eq=False)
class GluedFunction:
    """inner on the closed ball |z| <= radius, outer outside; points are (..., n) complex."""
    inner: Callable
    outer: Callable
    radius: float
    dimension: int
    label: str = ''

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.dimension:
            raise StructuralError(f'points must have {self.dimension} complex coordinates')
        r = _norm(z)
        out = np.empty(r.shape)
        inside = r <= self.radius
        with np.errstate(divide='ignore', invalid='ignore'):
            if np.any(inside):
                out[inside] = self.inner(z[inside])
            if np.any(~inside):
                out[~inside] = self.outer(z[~inside])
        return out

    def interface_gap(self, samples=256, seed=0):
        """Largest |inner - outer| over random points of the interface sphere."""
        rng = np.random.default_rng(seed)
        raw = rng.standard_normal((samples, self.dimension)) + 1j * rng.standard_normal(
            (samples, self.dimension))
        points = self.radius * raw / _norm(raw)[:, None]
        return float(np.max(np.abs(self.inner(points) - self.outer(points))))


def radial_glue(inner, outer, radius, dimension, label=''):
    """Glue two radial closed forms (anything with ``value(r)``) at |z| = radius."""
    return GluedFunction(
        inner=lambda z: np.asarray(inner.value(_norm(z)), dtype=float),
        outer=lambda z: np.asarray(outer.value(_norm(z)), dtype=float),
        radius=float(radius),
        dimension=int(dimension),
        label=label,
    )


@dataclass(frozen=True)
class GlueCheck:
    """Continuity and normal-derivative verdicts at a radial interface."""
    continuous: bool
    derivative_ok: bool | None
    margin: float | None
    jump: float

    @property
    def accepted(self):
        """Both conditions hold."""
        return self.continuous and bool(self.derivative_ok)

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'continuous': self.continuous,
            'derivative_ok': self.derivative_ok,
            'margin': self.margin,
            'jump': self.jump,
        }


def radial_glue_check(inner, outer, radius):
    """
    du/dr(R-) <= dv/dr(R+) for radial pieces continuous at R.

    ``inner`` and ``outer`` are profiles or weights; a discontinuous pair gets
    no derivative verdict.
    """
    jump = abs(float(inner.value(radius)) - float(outer.value(radius)))
    if jump > CONTINUITY_TOLERANCE:
        logger.info('glue at R=%g is discontinuous (jump %.3g)', radius, jump)
        return GlueCheck(False, None, None, jump)
    du = float(inner.radial_derivative(radius, side='left'))
    dv = float(outer.radial_derivative(radius, side='right'))
    margin = dv - du
    return GlueCheck(True, du <= dv + DERIVATIVE_TOLERANCE, margin, jump)


@dataclass(frozen=True)
class HarmonicPolynomial:
    """h(ρe^{iθ}) = a0 + Σ_k ρ^k (a_k cos kθ + b_k sin kθ), harmonic on C."""
    a0: float = 0.0
    cos: tuple = ()
    sin: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'cos', tuple(float(a) for a in self.cos))
        object.__setattr__(self, 'sin', tuple(float(b) for b in self.sin))

    @property
    def degree(self):
        """Highest frequency present."""
        return max(len(self.cos), len(self.sin))

    def _coefficients(self):
        k = self.degree
        a = np.zeros(k)
        b = np.zeros(k)
        a[:len(self.cos)] = self.cos
        b[:len(self.sin)] = self.sin
        return a, b

    def __call__(self, w):
        """Value at complex points w: a0 + Σ Re((a_k - i b_k) w^k)."""
        w = np.asarray(w, dtype=complex)
        a, b = self._coefficients()
        out = np.full(w.shape, self.a0, dtype=float)
        power = np.ones_like(w)
        for ak, bk in zip(a, b):
            power = power * w
            out += np.real((ak - 1j * bk) * power)
        return out

    def normal_derivative(self, theta):
        """∂h/∂n on the unit circle: Σ k (a_k cos kθ + b_k sin kθ)."""
        theta = np.asarray(theta, dtype=float)
        a, b = self._coefficients()
        out = np.zeros(theta.shape)
        for k, (ak, bk) in enumerate(zip(a, b), start=1):
            out += k * (ak * np.cos(k * theta) + bk * np.sin(k * theta))
        return out

    def as_dict(self):
        """JSON-friendly representation."""
        return {'a0': self.a0, 'cos': list(self.cos), 'sin': list(self.sin)}


def disc_reflection_glue(h, samples=BOUNDARY_SAMPLES, bound=0.5):
    """
    g = h on the closed unit disc and h(1/z̄) + log|z| outside.

    Requires sup |∂h/∂n| <= 1/2 on the unit circle, checked on ``samples``
    equally spaced angles; otherwise raises :class:`GlueRejected` with the
    worst angle.
    """
    theta = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    normal = h.normal_derivative(theta)
    worst = int(np.argmax(np.abs(normal)))
    if abs(normal[worst]) > bound + DERIVATIVE_TOLERANCE:
        raise GlueRejected(
            f'|dh/dn| = {abs(normal[worst]):.6g} exceeds {bound} at theta = {theta[worst]:.6g}',
            worst_theta=float(theta[worst]), worst_value=float(normal[worst]),
        )

    def inner(z):
        return h(z[..., 0])

    def outer(z):
        w = z[..., 0]
        return h(1.0 / np.conj(w)) + np.log(np.abs(w))

    return GluedFunction(inner, outer, 1.0, 1, label='disc reflection')


@dataclass(frozen=True)
class SubmeanReport:
    """Violations of g(c) <= mean of g over circles through c on complex lines."""
    samples: int
    violations: int
    worst_excess: float
    worst_center: tuple = ()
    worst_radius: float = 0.0

    def as_dict(self):
        """JSON-friendly representation."""
        return {
            'samples': self.samples,
            'violations': self.violations,
            'worst_excess': self.worst_excess,
            'worst_center': [[float(c.real), float(c.imag)] for c in self.worst_center],
            'worst_radius': self.worst_radius,
        }


def _unit_vectors(rng, count, dimension):
    raw = rng.standard_normal((count, dimension)) + 1j * rng.standard_normal((count, dimension))
    return raw / _norm(raw)[:, None]


def _submean_batch(g, count, radius_range, seed_seq, nodes, tol):
    rng = np.random.default_rng(seed_seq)
    n = g.dimension
    shell = rng.random(count) < 0.9
    radii = g.radius * rng.uniform(0.95, 1.05, size=count)
    centers = _unit_vectors(rng, count, n) * radii[:, None]
    box = rng.uniform(-2 * g.radius, 2 * g.radius, size=(count, 2 * n))
    centers = np.where(shell[:, None], centers, box[:, :n] + 1j * box[:, n:])
    directions = _unit_vectors(rng, count, n)
    rho = rng.uniform(radius_range[0], radius_range[1], size=count)
    phase = np.exp(2j * math.pi * np.arange(nodes) / nodes)
    ring = (rho[:, None] * phase[None, :])[:, :, None]
    circles = centers[:, None, :] + ring * directions[:, None, :]
    # periodic trapezoid rule = plain mean of equally spaced nodes
    values = g(circles)
    means = values.mean(axis=1)
    excess = g(centers) - means
    # a kink on the circle costs the trapezoid rule at most spread·Δθ^2
    spread = values.max(axis=1) - values.min(axis=1)
    bad = excess > tol + spread * (2 * math.pi / nodes) ** 2
    worst = int(np.argmax(excess))
    return int(bad.sum()), float(excess[worst]), tuple(centers[worst]), float(rho[worst])


def submean_check(g, samples, radius_range=None, seed=0, batch_size=1024, workers=None,
                  nodes=CIRCLE_NODES, tol=SUBMEAN_TOLERANCE):
    """
    Monte Carlo sub-mean-value test on random complex circles near the interface.

    Centres come 90% from the shell R(1 ± 0.05) and 10% from the box
    [-2R, 2R]^{2n}. Batches draw from ``SeedSequence(seed).spawn`` so the
    report depends only on the seed, with or without ``workers``.
    """
    if samples < 1:
        raise StructuralError('submean_check needs at least one sample')
    if radius_range is None:
        radius_range = (0.01 * g.radius, 0.25 * g.radius)
    sizes = [batch_size] * (samples // batch_size)
    if samples % batch_size:
        sizes.append(samples % batch_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(args):
        size, seq = args
        return _submean_batch(g, size, radius_range, seq, nodes, tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, zip(sizes, seeds)))
    else:
        results = [run(item) for item in zip(sizes, seeds)]
    violations = sum(r[0] for r in results)
    best = max(results, key=lambda r: r[1])
    report = SubmeanReport(samples, violations, best[1], best[2], best[3])
    if violations:
        logger.info(
            'submean_check: %d/%d violations, worst excess %.3g', violations, samples, best[1])
    return report
