"""
Radial plurisubharmonic profiles, radial sets and radial weights.

A radial function u(z) = ũ(log|z|^2) is plurisubharmonic exactly when ũ is
convex and nondecreasing, so every object here lives in the coordinate
s = log|z|^2. Profiles are piecewise linear in s; they may carry one-sided
derivative (tangent) data at their breakpoints so that a densely sampled
smooth function keeps its exact slope at the nodes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .exceptions import DomainError, InadmissibleProblem, StructuralError, UnsupportedWeight

logger = logging.getLogger(__name__)

# slopes are O(1) in s-units
SLOPE_TOLERANCE = 1e-10
# u <= log+|z| + C  <=>  ũ(s) <= s/2 + C
LELONG_SLOPE = 0.5


def to_log(radius):
    """Map a radius (or array of radii) to s = log r^2; r = 0 maps to -inf."""
    r = np.asarray(radius, dtype=float)
    if np.any(r < 0) or np.any(np.isnan(r)):
        raise DomainError('radii must be nonnegative')
    with np.errstate(divide='ignore'):
        s = 2.0 * np.log(r)
    return s if s.ndim else float(s)


def to_radius(s):
    """Inverse of :func:`to_log`."""
    r = np.exp(0.5 * np.asarray(s, dtype=float))
    return r if r.ndim else float(r)


def _frozen(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise StructuralError(f'{name} must be one-dimensional')
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ClassFlags:
    """Membership flags returned by :func:`check_class`."""
    is_psh_radial: bool
    in_L: bool  # pylint: disable=invalid-name
    in_L_plus: bool  # pylint: disable=invalid-name
    bounded_below: bool

    def as_dict(self):
        """Plain dict for reports."""
        return {
            'is_psh_radial': self.is_psh_radial,
            'in_L': self.in_L,
            'in_L_plus': self.in_L_plus,
            'bounded_below': self.bounded_below,
        }


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Convex-candidate profile ũ in s = log|z|^2.

    ``breakpoints``/``values`` are the nodes (s_i, ũ(s_i)); ``left_slope`` and
    ``right_slope`` extend the profile linearly beyond the first and last node.
    ``left_derivatives``/``right_derivatives`` are ũ'(s_i-) and ũ'(s_i+); when
    omitted they are the chord slopes of the adjacent segments. ``radii``
    optionally pins the exact radius of every node, so that e^{s/2} rounding
    cannot move an atom off the radius it came from.
    """
    breakpoints: np.ndarray
    values: np.ndarray
    left_slope: float = 0.0
    right_slope: float = LELONG_SLOPE
    left_derivatives: np.ndarray | None = None
    right_derivatives: np.ndarray | None = None
    radii: np.ndarray | None = None

    def __post_init__(self):
        s = _frozen(self.breakpoints, 'breakpoints')
        v = _frozen(self.values, 'values')
        if s.size == 0:
            raise StructuralError('a profile needs at least one breakpoint')
        if s.size != v.size:
            raise StructuralError('breakpoints and values differ in length')
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v))):
            raise StructuralError('breakpoints and values must be finite')
        if np.any(np.diff(s) <= 0):
            raise StructuralError('breakpoints must be strictly increasing')
        left = float(self.left_slope)
        right = float(self.right_slope)
        if not (np.isfinite(left) and np.isfinite(right)):
            raise StructuralError('end slopes must be finite')
        chords = np.diff(v) / np.diff(s)
        if self.left_derivatives is None:
            dm = np.concatenate(([left], chords))
        else:
            dm = np.array(self.left_derivatives, dtype=float)
        if self.right_derivatives is None:
            dp = np.concatenate((chords, [right]))
        else:
            dp = np.array(self.right_derivatives, dtype=float)
        if dm.shape != s.shape or dp.shape != s.shape:
            raise StructuralError('derivative data must match the breakpoints')
        if abs(dm[0] - left) > SLOPE_TOLERANCE or abs(dp[-1] - right) > SLOPE_TOLERANCE:
            raise StructuralError('outer derivative data must equal the end slopes')
        dm[0] = left
        dp[-1] = right
        if self.radii is not None:
            r = _frozen(self.radii, 'radii')
            if r.shape != s.shape or np.any(r <= 0):
                raise StructuralError('radii must be positive and match the breakpoints')
            drift = np.abs(2.0 * np.log(r) - s)
            if np.any(drift > 1e-12 * np.maximum(1.0, np.abs(s))):
                raise StructuralError('radii disagree with the breakpoints')
            object.__setattr__(self, 'radii', r)
        object.__setattr__(self, 'breakpoints', s)
        object.__setattr__(self, 'values', v)
        object.__setattr__(self, 'left_slope', left)
        object.__setattr__(self, 'right_slope', right)
        object.__setattr__(self, 'left_derivatives', _frozen(dm, 'left_derivatives'))
        object.__setattr__(self, 'right_derivatives', _frozen(dp, 'right_derivatives'))

    @classmethod
    def constant(cls, value, at=0.0):
        """The constant profile."""
        return cls([at], [value], 0.0, 0.0)

    @classmethod
    def from_lines(cls, slopes, intercepts):
        """Upper envelope max_j (a_j s + b_j) of finitely many lines."""
        a = np.asarray(slopes, dtype=float)
        b = np.asarray(intercepts, dtype=float)
        if a.size == 0 or a.shape != b.shape:
            raise StructuralError('need matching, nonempty slopes and intercepts')
        order = np.lexsort((b, a))
        hull = []
        for j in order:
            aj, bj = a[j], b[j]
            if hull and hull[-1][0] == aj:
                hull.pop()
            while len(hull) >= 2:
                (a1, b1), (a2, b2) = hull[-2], hull[-1]
                # line 2 is hidden when line 3 overtakes line 1 no later than line 2 does
                if (bj - b1) * (a2 - a1) >= (b2 - b1) * (aj - a1):
                    hull.pop()
                else:
                    break
            hull.append((aj, bj))
        if len(hull) == 1:
            return cls([0.0], [hull[0][1]], hull[0][0], hull[0][0])
        xs = []
        ys = []
        for (a1, b1), (a2, b2) in zip(hull, hull[1:]):
            x = (b1 - b2) / (a2 - a1)
            xs.append(x)
            ys.append(a1 * x + b1)
        return cls(xs, ys, hull[0][0], hull[-1][0])

    @property
    def chords(self):
        """Slopes of the segments between consecutive breakpoints."""
        return np.diff(self.values) / np.diff(self.breakpoints)

    @property
    def node_radii(self):
        """Radius of every breakpoint, exact when ``radii`` was given."""
        if self.radii is not None:
            return self.radii
        return np.atleast_1d(to_radius(self.breakpoints))

    @cached_property
    def class_flags(self):
        """:func:`check_class` at the default tolerance, computed once."""
        return check_class(self)

    def _interleave(self, dm, dp, chords):
        tail = np.append(chords, np.nan)
        inner = np.column_stack((dm, dp, tail)).ravel()[:-1]
        return np.concatenate(([self.left_slope], inner, [self.right_slope]))

    def slope_sequence(self):
        """left, d0-, d0+, chord1, d1-, d1+, ..., right: nondecreasing iff convex."""
        return self._interleave(self.left_derivatives, self.right_derivatives, self.chords)

    def slope_slack(self):
        """Rounding allowance per entry of :meth:`slope_sequence`; nonzero on chords only."""
        v = np.abs(self.values)
        eps = np.finfo(float).eps
        chords = 8 * eps * ((v[:-1] + v[1:]) / np.diff(self.breakpoints) + np.abs(self.chords))
        zeros = np.zeros(self.breakpoints.size)
        slack = self._interleave(zeros, zeros, chords)
        slack[[0, -1]] = 0.0
        return slack

    def tilde(self, s):
        """Evaluate ũ at s (vectorized, s = -inf allowed)."""
        x = np.asarray(s, dtype=float)
        bp, vals = self.breakpoints, self.values
        out = np.interp(x, bp, vals)
        with np.errstate(invalid='ignore'):
            left = x < bp[0]
            right = x > bp[-1]
            if self.left_slope == 0.0:
                out = np.where(left, vals[0], out)
            else:
                out = np.where(left, vals[0] + self.left_slope * (x - bp[0]), out)
            out = np.where(right, vals[-1] + self.right_slope * (x - bp[-1]), out)
        return out if out.ndim else float(out)

    def value(self, radius):
        """u at |z| = radius."""
        return self.tilde(to_log(radius))

    def slopes_at(self, s):
        """One-sided derivatives (ũ'(s-), ũ'(s+)) using the tangent data at nodes."""
        x = np.atleast_1d(np.asarray(s, dtype=float))
        bp = self.breakpoints
        # left ray, chords, right ray; idx counts the nodes <= x
        segments = np.concatenate(([self.left_slope], self.chords, [self.right_slope]))
        idx = np.searchsorted(bp, x, side='right')
        inside = segments[idx]
        left = inside.copy()
        right = inside.copy()
        hit = np.isin(x, bp)
        if np.any(hit):
            k = np.searchsorted(bp, x[hit])
            left[hit] = self.left_derivatives[k]
            right[hit] = self.right_derivatives[k]
        if np.ndim(s) == 0:
            return float(left[0]), float(right[0])
        return left, right

    def radial_derivative(self, radius, side='right'):
        """du/dr at |z| = radius from the left or the right."""
        r = np.asarray(radius, dtype=float)
        left, right = self.slopes_at(to_log(r))
        slope = right if side == 'right' else left
        return 2.0 * np.asarray(slope) / r if r.ndim else 2.0 * slope / float(r)

    def scaled(self, factor):
        """λ·ũ with tangent data scaled alike."""
        return RadialProfile(
            self.breakpoints, factor * self.values,
            factor * self.left_slope, factor * self.right_slope,
            factor * self.left_derivatives, factor * self.right_derivatives,
            self.radii,
        )

    def shifted(self, constant):
        """ũ + c."""
        return RadialProfile(
            self.breakpoints, self.values + constant,
            self.left_slope, self.right_slope,
            self.left_derivatives, self.right_derivatives,
            self.radii,
        )

    def as_dict(self):
        """JSON-friendly representation (floats kept at full precision)."""
        body = {
            'breakpoints': [[float(s), float(v)] for s, v in zip(self.breakpoints, self.values)],
            'left_slope': self.left_slope,
            'right_slope': self.right_slope,
            'left_derivatives': [float(d) for d in self.left_derivatives],
            'right_derivatives': [float(d) for d in self.right_derivatives],
        }
        if self.radii is not None:
            body['radii'] = [float(r) for r in self.radii]
        return body


def eval_profile(profile, radius):
    """Evaluate a profile at |z| = radius; r = 0 gives -inf unless left_slope = 0."""
    r = np.asarray(radius, dtype=float)
    if np.any(r < 0):
        raise DomainError('eval_profile needs r >= 0')
    return profile.value(radius)


def check_class(profile, tol=SLOPE_TOLERANCE):
    """Plurisubharmonicity and Lelong-class membership of a radial profile."""
    seq = profile.slope_sequence()
    slack = profile.slope_slack()
    is_psh = bool(np.all(np.diff(seq) >= -(tol + slack[:-1] + slack[1:])) and seq[0] >= -tol)
    in_l = is_psh and profile.right_slope <= LELONG_SLOPE + tol
    in_l_plus = in_l and abs(profile.right_slope - LELONG_SLOPE) <= tol
    return ClassFlags(
        is_psh_radial=is_psh,
        in_L=in_l,
        in_L_plus=in_l_plus,
        bounded_below=abs(profile.left_slope) <= tol,
    )


def scale_profile(profile, factor):
    """Multiply a profile (values and slopes) by factor > 0."""
    if not factor > 0:
        raise DomainError(f'scale factor must be positive, got {factor}')
    return profile.scaled(float(factor))


@dataclass(frozen=True)
class RadialSet:
    """Finite union of closed radius intervals [a, b] (a == b is a sphere)."""
    intervals: tuple

    def __post_init__(self):
        try:
            items = tuple((float(a), float(b)) for a, b in self.intervals)
        except (TypeError, ValueError) as exc:
            raise StructuralError('intervals must be pairs of numbers') from exc
        if not items:
            raise DomainError('the set is empty')
        for a, b in items:
            if not (np.isfinite(a) and np.isfinite(b)) or a < 0 or b < a:
                raise StructuralError(f'bad interval [{a}, {b}]')
        for (_, b1), (a2, _) in zip(items, items[1:]):
            if not b1 < a2:
                raise StructuralError('intervals must be sorted and disjoint')
        if all(b == 0 for _, b in items):
            # a radial set is non-pluripolar iff it contains a sphere of positive radius
            raise DomainError('the set is pluripolar (no sphere of positive radius)')
        object.__setattr__(self, 'intervals', items)

    @classmethod
    def ball(cls, radius):
        """Closed ball of the given radius."""
        return cls(((0.0, radius),))

    @classmethod
    def sphere(cls, radius):
        """Sphere |z| = radius."""
        return cls(((radius, radius),))

    @classmethod
    def shell(cls, inner, outer):
        """Closed shell inner <= |z| <= outer."""
        return cls(((inner, outer),))

    @property
    def includes_origin(self):
        """True when the first component is a closed ball."""
        return self.intervals[0][0] == 0.0

    @property
    def max_radius(self):
        """Largest radius in the set."""
        return self.intervals[-1][1]

    def boundary_radii(self):
        """Radii of the spheres bounding the set (the origin is interior to a ball)."""
        radii = set()
        for a, b in self.intervals:
            if a > 0:
                radii.add(a)
            radii.add(b)
        return sorted(radii)

    def interior_intervals(self):
        """Components with nonempty interior."""
        return [(a, b) for a, b in self.intervals if b > a]

    def contains(self, radius, slack=0.0):
        """Membership of a radius, with an absolute slack."""
        return any(a - slack <= radius <= b + slack for a, b in self.intervals)

    def log_image(self, s_min):
        """Components in s, balls truncated at s_min; the bare origin is dropped."""
        parts = []
        for a, b in self.intervals:
            if b == 0.0:
                continue
            hi = to_log(b)
            if a == b:
                parts.append((hi, hi))
            elif a == 0.0:
                parts.append((min(s_min, hi - 1.0), hi))
            else:
                parts.append((to_log(a), hi))
        return parts

    def as_list(self):
        """[[a, b], ...] for reports."""
        return [[a, b] for a, b in self.intervals]


# kind -> parameter names, used by the file format
WEIGHT_KINDS = {
    'constant': ('value',),
    'scaled_log': ('alpha', 'offset'),
    'power': ('coefficient', 'exponent', 'offset'),
    'table': ('s', 'values'),
    'scaled_profile': ('scale', 'profile'),
    'sum': ('terms',),
}

CLOSED_FORMS = ('constant', 'scaled_log', 'power', 'sum', 'scaled_profile')


@dataclass(frozen=True, eq=False)
class RadialWeight:
    """
    Weight Q = -log w as a function of s = log|z|^2.

    Use the classmethod constructors; ``kind`` is one of :data:`WEIGHT_KINDS`.
    """
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    profile: RadialProfile | None = None
    table_s: np.ndarray | None = None
    table_values: np.ndarray | None = None
    terms: tuple = ()
    domain: RadialSet | None = None

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise StructuralError(f'unknown weight kind {self.kind!r}')
        if self.kind == 'table':
            s = _frozen(self.table_s, 'table s')
            q = _frozen(self.table_values, 'table values')
            if s.size < 2 or s.size != q.size or np.any(np.diff(s) <= 0):
                raise StructuralError('a table needs >= 2 strictly increasing samples')
            if not np.all(np.isfinite(q)) or not np.all(np.isfinite(s)):
                raise StructuralError('table samples must be finite')
            object.__setattr__(self, 'table_s', s)
            object.__setattr__(self, 'table_values', q)
        if self.kind == 'scaled_profile' and self.profile is None:
            raise StructuralError('scaled_profile needs a profile')

    @classmethod
    def constant(cls, value, domain=None):
        """Q = c."""
        return cls('constant', {'value': float(value)}, domain=domain)

    @classmethod
    def scaled_log(cls, alpha, offset=0.0, domain=None):
        """Q = α log r + c."""
        return cls('scaled_log', {'alpha': float(alpha), 'offset': float(offset)}, domain=domain)

    @classmethod
    def power(cls, coefficient, exponent, offset=0.0, domain=None):
        """Q = A r^β + c."""
        return cls(
            'power',
            {'coefficient': float(coefficient), 'exponent': float(exponent),
             'offset': float(offset)},
            domain=domain,
        )

    @classmethod
    def table(cls, s, values, domain=None):
        """Samples (s, Q̃) with linear interpolation, held constant beyond the ends."""
        return cls('table', table_s=s, table_values=values, domain=domain)

    @classmethod
    def scaled_profile(cls, scale, profile, domain=None):
        """Q = λ·u for a radial profile u."""
        return cls('scaled_profile', {'scale': float(scale)}, profile=profile, domain=domain)

    @classmethod
    def sum(cls, *terms, domain=None):
        """Sum of other weights."""
        if not terms:
            raise StructuralError('a sum needs at least one term')
        return cls('sum', terms=tuple(terms), domain=domain)

    def with_domain(self, domain):
        """Same weight restricted to a radial set."""
        return RadialWeight(
            self.kind, self.params, self.profile, self.table_s, self.table_values,
            self.terms, domain,
        )

    def tilde(self, s):
        """Q̃(s) = Q(e^{s/2})."""
        x = np.asarray(s, dtype=float)
        p = self.params
        with np.errstate(over='ignore', invalid='ignore'):
            if self.kind == 'constant':
                out = np.full_like(x, p['value'])
            elif self.kind == 'scaled_log':
                out = p['alpha'] * 0.5 * x + p['offset']
            elif self.kind == 'power':
                beta = p['exponent']
                grow = np.ones_like(x) if beta == 0 else np.exp(0.5 * beta * x)
                out = p['coefficient'] * grow + p['offset']
            elif self.kind == 'table':
                out = np.interp(x, self.table_s, self.table_values)
            elif self.kind == 'scaled_profile':
                out = p['scale'] * np.asarray(self.profile.tilde(x))
            else:
                out = sum(np.asarray(term.tilde(x)) for term in self.terms)
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def value(self, radius):
        """Q at |z| = radius."""
        return self.tilde(to_log(radius))

    def slopes(self, s):
        """One-sided s-derivatives (Q̃'(s-), Q̃'(s+)) as arrays."""
        x = np.atleast_1d(np.asarray(s, dtype=float))
        p = self.params
        if self.kind == 'constant':
            d = np.zeros_like(x)
            return d, d
        if self.kind == 'scaled_log':
            d = np.full_like(x, 0.5 * p['alpha'])
            return d, d
        if self.kind == 'power':
            beta = p['exponent']
            with np.errstate(over='ignore'):
                d = 0.5 * p['coefficient'] * beta * np.exp(0.5 * beta * x)
            return d, d
        if self.kind == 'table':
            # piecewise linear: slopes are chords, held at zero beyond the ends
            ts, tq = self.table_s, self.table_values
            chords = np.concatenate(([0.0], np.diff(tq) / np.diff(ts), [0.0]))
            right = chords[np.searchsorted(ts, x, side='right')]
            left = chords[np.searchsorted(ts, x, side='left')]
            return left, right
        if self.kind == 'scaled_profile':
            left, right = self.profile.slopes_at(x)
            return p['scale'] * np.asarray(left), p['scale'] * np.asarray(right)
        left = np.zeros_like(x)
        right = np.zeros_like(x)
        for term in self.terms:
            tl, tr = term.slopes(x)
            left = left + tl
            right = right + tr
        return left, right

    def radial_derivative(self, radius, side='right'):
        """dQ/dr at |z| = radius from the left or the right."""
        r = np.asarray(radius, dtype=float)
        left, right = self.slopes(to_log(r))
        slope = right if side == 'right' else left
        out = 2.0 * slope / np.atleast_1d(r)
        return out if r.ndim else float(out[0])

    def kinks(self):
        """s-positions where Q̃ may fail to be differentiable."""
        if self.kind == 'scaled_profile':
            return np.array(self.profile.breakpoints)
        if self.kind == 'table':
            return np.array(self.table_s)
        if self.kind == 'sum':
            found = [term.kinks() for term in self.terms]
            return np.unique(np.concatenate(found)) if found else np.empty(0)
        return np.empty(0)

    def laplacian(self, radius, dimension):
        """Radial Laplacian Q'' + (2n-1)Q'/r in R^{2n}, away from kinks."""
        r = np.asarray(radius, dtype=float)
        n = dimension
        p = self.params
        if self.kind == 'constant':
            out = np.zeros_like(r)
        elif self.kind == 'scaled_log':
            out = p['alpha'] * (2 * n - 2) / r ** 2
        elif self.kind == 'power':
            a, beta = p['coefficient'], p['exponent']
            out = a * beta * (beta + 2 * n - 2) * r ** (beta - 2)
        elif self.kind == 'scaled_profile':
            # ũ'' vanishes between breakpoints of a piecewise-linear profile
            _, slope = self.profile.slopes_at(to_log(r))
            out = p['scale'] * (4 * n - 4) * np.asarray(slope) / r ** 2
        elif self.kind == 'sum':
            out = sum(np.asarray(term.laplacian(r, n)) for term in self.terms)
        else:
            raise UnsupportedWeight('tabulated weights have no Laplacian classification')
        return out

    def kink_jumps(self):
        """(s, jump of Q̃') at the kinks of piecewise-linear parts."""
        if self.kind == 'scaled_profile':
            prof = self.profile
            return prof.breakpoints, self.params['scale'] * (
                prof.right_derivatives - prof.left_derivatives)
        if self.kind == 'sum':
            points = self.kinks()
            left, right = self.slopes(points)
            return points, right - left
        if self.kind == 'table':
            raise UnsupportedWeight('tabulated weights have no Laplacian classification')
        return np.empty(0), np.empty(0)

    def validate_on(self, domain, s_min):
        """Raise InadmissibleProblem unless Q is finite on the whole set."""
        samples = []
        for lo, hi in domain.log_image(s_min):
            samples.append(np.linspace(lo, hi, 65) if hi > lo else np.array([lo]))
        grid = np.concatenate(samples)
        vals = np.asarray(self.tilde(grid))
        if not np.all(np.isfinite(vals)):
            raise InadmissibleProblem('the weight is not finite on the set')
        if domain.includes_origin:
            origin = self.tilde(-np.inf)
            if not np.isfinite(origin):
                raise InadmissibleProblem('the weight is unbounded below at the origin')
        return True
