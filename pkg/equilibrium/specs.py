"""
JSON documents read and written by the management commands.

Every document carries a ``schema`` field; inputs are validated strictly
(unknown keys are rejected) and problems are collected into one
:class:`django.core.exceptions.ValidationError`.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError

from . import __version__
from .exceptions import DomainError, StructuralError
from .extremal import GridSpec, Problem
from .glue import HarmonicPolynomial
from .monge_ampere import Atom, PowerSegment, RadialMeasure, TableSegment
from .radial_core import WEIGHT_KINDS, RadialProfile, RadialSet, RadialWeight

logger = logging.getLogger(__name__)

SCHEMA_PREFIX = 'radial-equilibrium'
PROBLEM_SCHEMA = f'{SCHEMA_PREFIX}/problem/1'
MEASURE_SCHEMA = f'{SCHEMA_PREFIX}/measure/1'
PROFILE_SCHEMA = f'{SCHEMA_PREFIX}/profile/1'
GLUE_SCHEMA = f'{SCHEMA_PREFIX}/glue/1'
REPORT_SCHEMA = f'{SCHEMA_PREFIX}/report/1'

PROBLEM_KEYS = {'schema', 'label', 'dimension', 'set', 'weight', 'mode', 'grid', 'output'}
GRID_KEYS = {'s_min', 's_max', 'points', 'tolerance', 'margin'}
OUTPUT_KEYS = {'report', 'csv'}
PROFILE_KEYS = {'breakpoints', 'left_slope', 'right_slope', 'left_derivatives',
                'right_derivatives', 'radii'}
MEASURE_KEYS = {'schema', 'label', 'dimension', 'atoms', 'segments', 'u0'}
GLUE_KEYS = {'schema', 'label', 'kind', 'dimension', 'radius', 'inner', 'outer', 'h',
             'samples', 'radius_range', 'seed'}


class _Errors(list):
    """Problem collector; raises once at the end."""

    def check(self, condition, message):
        if not condition:
            self.append(message)
        return condition

    def raise_if_any(self):
        if self:
            raise ValidationError(list(self))


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and np.isfinite(value)


def _number(data, key, errors, where, default=None, positive=False):
    value = data.get(key, default)
    if value is None:
        errors.append(f'{where}: missing number {key!r}')
        return None
    if not _is_number(value):
        errors.append(f'{where}: {key!r} must be a finite number')
        return None
    if positive and not value > 0:
        errors.append(f'{where}: {key!r} must be positive')
        return None
    return float(value)


def _unknown(data, allowed, errors, where):
    if not isinstance(data, dict):
        errors.append(f'{where}: expected an object')
        return False
    extra = sorted(set(data) - set(allowed))
    if extra:
        errors.append(f'{where}: unknown keys {extra}')
    return True


def load_document(path, schema):
    """Read a JSON document; a missing file raises FileNotFoundError."""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f'{path.name}: not valid JSON ({exc.msg} at line {exc.lineno})') from exc
    if not isinstance(doc, dict) or doc.get('schema') != schema:
        raise ValidationError(f'{path.name}: expected schema {schema!r}')
    return doc


def document_hash(path):
    """sha256 of the input file, for provenance."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def parse_profile(data, errors=None, where='profile'):
    """RadialProfile from its JSON body."""
    own = errors is None
    errors = _Errors() if own else errors
    profile = None
    if _unknown(data, PROFILE_KEYS, errors, where):
        points = data.get('breakpoints')
        if errors.check(isinstance(points, list) and points, f'{where}: breakpoints must be a '
                                                               'nonempty list'):
            ok = all(isinstance(p, list) and len(p) == 2 and all(map(_is_number, p))
                     for p in points)
            if errors.check(ok, f'{where}: breakpoints must be [s, value] pairs'):
                try:
                    profile = RadialProfile(
                        [p[0] for p in points], [p[1] for p in points],
                        float(data.get('left_slope', 0.0)),
                        float(data.get('right_slope', 0.5)),
                        data.get('left_derivatives'), data.get('right_derivatives'),
                        data.get('radii'),
                    )
                except (StructuralError, TypeError, ValueError) as exc:
                    errors.append(f'{where}: {exc}')
    if own:
        errors.raise_if_any()
    return profile


def parse_weight(data, errors=None, where='weight'):
    """RadialWeight from ``{"kind": ..., <params>}``."""
    own = errors is None
    errors = _Errors() if own else errors
    weight = None
    if isinstance(data, dict) and data.get('kind') in WEIGHT_KINDS:
        kind = data['kind']
        if _unknown(data, {'kind', *WEIGHT_KINDS[kind]}, errors, where):
            weight = _build_weight(kind, data, errors, where)
    else:
        errors.append(f'{where}: kind must be one of {sorted(WEIGHT_KINDS)}')
    if own:
        errors.raise_if_any()
    return weight


def _build_weight(kind, data, errors, where):
    try:
        if kind == 'constant':
            value = _number(data, 'value', errors, where)
            return None if value is None else RadialWeight.constant(value)
        if kind == 'scaled_log':
            alpha = _number(data, 'alpha', errors, where)
            offset = _number(data, 'offset', errors, where, default=0.0)
            return None if None in (alpha, offset) else RadialWeight.scaled_log(alpha, offset)
        if kind == 'power':
            a = _number(data, 'coefficient', errors, where)
            beta = _number(data, 'exponent', errors, where)
            c = _number(data, 'offset', errors, where, default=0.0)
            return None if None in (a, beta, c) else RadialWeight.power(a, beta, c)
        if kind == 'table':
            s, values = data.get('s'), data.get('values')
            if not (isinstance(s, list) and isinstance(values, list)
                    and all(map(_is_number, s + values))):
                errors.append(f'{where}: table s/values must be lists of numbers')
                return None
            return RadialWeight.table(s, values)
        if kind == 'scaled_profile':
            scale = _number(data, 'scale', errors, where, positive=True)
            profile = parse_profile(data.get('profile'), errors, f'{where}.profile')
            return None if None in (scale, profile) else RadialWeight.scaled_profile(
                scale, profile)
        terms = data.get('terms')
        if not (isinstance(terms, list) and terms):
            errors.append(f'{where}: a sum needs a nonempty list of terms')
            return None
        parsed = [parse_weight(t, errors, f'{where}.terms[{i}]') for i, t in enumerate(terms)]
        return None if None in parsed else RadialWeight.sum(*parsed)
    except StructuralError as exc:
        errors.append(f'{where}: {exc}')
        return None


def weight_to_dict(weight):
    """Inverse of :func:`parse_weight`."""
    if weight.kind == 'table':
        return {'kind': 'table', 's': weight.table_s.tolist(),
                'values': weight.table_values.tolist()}
    if weight.kind == 'scaled_profile':
        return {'kind': 'scaled_profile', 'scale': weight.params['scale'],
                'profile': weight.profile.as_dict()}
    if weight.kind == 'sum':
        return {'kind': 'sum', 'terms': [weight_to_dict(t) for t in weight.terms]}
    return {'kind': weight.kind, **weight.params}


def parse_set(data, errors, where='set'):
    """RadialSet from ``[[a, b], ...]``; radii > 0 except a leading 0 for balls."""
    if not (isinstance(data, list) and data):
        errors.append(f'{where}: must be a nonempty list of [a, b] intervals')
        return None
    ok = all(isinstance(iv, list) and len(iv) == 2 and all(map(_is_number, iv)) for iv in data)
    if not errors.check(ok, f'{where}: intervals must be [a, b] number pairs'):
        return None
    for i, (a, b) in enumerate(data):
        errors.check(b > 0, f'{where}[{i}]: radii must be positive')
        errors.check(a > 0 or (i == 0 and a == 0), f'{where}[{i}]: only a leading ball may '
                                                   'start at 0')
    try:
        return RadialSet(tuple((a, b) for a, b in data))
    except (StructuralError, DomainError) as exc:
        errors.append(f'{where}: {exc}')
        return None


def parse_grid(data, errors, defaults=None):
    """GridSpec from the optional ``grid`` object on top of ``defaults``."""
    base = dict(defaults or {})
    if data is None:
        return GridSpec(**base)
    if not _unknown(data, GRID_KEYS, errors, 'grid'):
        return None
    for key in ('s_min', 's_max', 'margin'):
        if data.get(key) is not None:
            base[key] = _number(data, key, errors, 'grid')
    if data.get('points') is not None:
        points = data['points']
        if errors.check(isinstance(points, int) and points >= 2, 'grid: points must be an '
                                                                 'integer >= 2'):
            base['points'] = points
    if 'tolerance' in data:
        tol = data['tolerance']
        if tol is None or errors.check(_is_number(tol) and tol > 0,
                                       'grid: tolerance must be positive or null'):
            base['tolerance'] = tol
    try:
        return GridSpec(**base)
    except (StructuralError, TypeError) as exc:
        errors.append(f'grid: {exc}')
        return None


def parse_problem(doc, grid_defaults=None):
    """(Problem, GridSpec, output dict, label) from a problem document."""
    errors = _Errors()
    _unknown(doc, PROBLEM_KEYS, errors, 'problem')
    n = doc.get('dimension')
    errors.check(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
                 'dimension must be a positive integer')
    domain = parse_set(doc.get('set'), errors)
    weight = parse_weight(doc.get('weight'), errors)
    mode = doc.get('mode', 'global')
    omega = None
    if isinstance(mode, dict):
        if errors.check(set(mode) == {'relative'} and _is_number(mode['relative']),
                        'mode: expected "global" or {"relative": R}'):
            omega = float(mode['relative'])
            mode = 'relative'
    else:
        errors.check(mode == 'global', 'mode: expected "global" or {"relative": R}')
    grid = parse_grid(doc.get('grid'), errors, grid_defaults)
    output = doc.get('output') or {}
    _unknown(output, OUTPUT_KEYS, errors, 'output')
    errors.raise_if_any()
    try:
        problem = Problem(n, domain, weight, mode, omega)
    except StructuralError as exc:
        raise ValidationError(str(exc)) from exc
    return problem, grid, output, doc.get('label', '')


def problem_document(problem, grid=None, label=''):
    """Problem document for a problem object (inverse of :func:`parse_problem`)."""
    doc = {
        'schema': PROBLEM_SCHEMA,
        'dimension': problem.dimension,
        'set': problem.domain.as_list(),
        'weight': weight_to_dict(problem.weight),
        'mode': 'global' if problem.mode == 'global' else {'relative': problem.omega_radius},
    }
    if label:
        doc['label'] = label
    if grid is not None:
        doc['grid'] = {'s_min': grid.s_min, 's_max': grid.s_max, 'points': grid.points,
                       'tolerance': grid.tolerance, 'margin': grid.margin}
    return doc


def parse_measure(doc):
    """(RadialMeasure, u0) from a measure document."""
    errors = _Errors()
    _unknown(doc, MEASURE_KEYS, errors, 'measure')
    n = doc.get('dimension')
    errors.check(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
                 'dimension must be a positive integer')
    atoms = []
    for i, pair in enumerate(doc.get('atoms', [])):
        if errors.check(isinstance(pair, list) and len(pair) == 2 and all(map(_is_number, pair)),
                        f'atoms[{i}]: expected [radius, mass]'):
            atoms.append(Atom(float(pair[0]), float(pair[1])))
    segments = []
    for i, seg in enumerate(doc.get('segments', [])):
        where = f'segments[{i}]'
        try:
            if isinstance(seg, dict) and seg.get('kind') == 'power':
                _unknown(seg, {'kind', 'start', 'end', 'coefficient', 'exponent'}, errors, where)
                segments.append(PowerSegment(
                    float(seg['start']), float(seg['end']), float(seg['coefficient']),
                    float(seg['exponent'])))
            elif isinstance(seg, dict) and seg.get('kind') == 'table':
                _unknown(seg, {'kind', 'nodes', 'increments'}, errors, where)
                segments.append(TableSegment(seg['nodes'], seg['increments']))
            else:
                errors.append(f'{where}: kind must be "power" or "table"')
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f'{where}: {exc}')
    u0 = doc.get('u0', 0.0)
    errors.check(_is_number(u0), 'u0 must be a finite number')
    errors.raise_if_any()
    try:
        return RadialMeasure(n, tuple(atoms), tuple(segments)), float(u0)
    except StructuralError as exc:
        raise ValidationError(str(exc)) from exc


def measure_document(measure, u0=0.0, label=''):
    """Measure document (inverse of :func:`parse_measure`)."""
    body = measure.as_dict()
    body.pop('total_mass')
    doc = {'schema': MEASURE_SCHEMA, **body, 'u0': u0}
    if label:
        doc['label'] = label
    return doc


def parse_profile_document(doc):
    """(RadialProfile, dimension) from a profile document."""
    errors = _Errors()
    _unknown(doc, {'schema', 'label', 'dimension', 'profile'}, errors, 'document')
    n = doc.get('dimension')
    errors.check(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
                 'dimension must be a positive integer')
    profile = parse_profile(doc.get('profile'), errors)
    errors.raise_if_any()
    return profile, n


def parse_glue(doc):
    """Glue document: ``kind`` "radial" (inner/outer weights) or "disc" (harmonic h)."""
    errors = _Errors()
    _unknown(doc, GLUE_KEYS, errors, 'glue')
    kind = doc.get('kind')
    out = {'kind': kind, 'samples': doc.get('samples'), 'seed': doc.get('seed'),
           'radius_range': doc.get('radius_range')}
    if kind == 'radial':
        n = doc.get('dimension')
        errors.check(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
                     'dimension must be a positive integer')
        out['dimension'] = n
        out['radius'] = _number(doc, 'radius', errors, 'glue', positive=True)
        out['inner'] = parse_weight(doc.get('inner'), errors, 'inner')
        out['outer'] = parse_weight(doc.get('outer'), errors, 'outer')
    elif kind == 'disc':
        h = doc.get('h')
        if _unknown(h, {'a0', 'cos', 'sin'}, errors, 'h'):
            coeffs = list(h.get('cos', [])) + list(h.get('sin', []))
            if errors.check(_is_number(h.get('a0', 0.0)) and all(map(_is_number, coeffs)),
                            'h: coefficients must be numbers'):
                out['h'] = HarmonicPolynomial(h.get('a0', 0.0), h.get('cos', ()),
                                              h.get('sin', ()))
    else:
        errors.append('glue: kind must be "radial" or "disc"')
    rr = out['radius_range']
    if rr is not None:
        errors.check(isinstance(rr, list) and len(rr) == 2 and all(map(_is_number, rr))
                     and 0 < rr[0] < rr[1], 'radius_range must be [rho_min, rho_max]')
    errors.raise_if_any()
    return out


def build_report(kind, body, spec_sha256=None, seed=None):
    """Report envelope with provenance (no timestamps: reruns are byte-identical)."""
    return {
        'schema': REPORT_SCHEMA,
        'kind': kind,
        'provenance': {'spec_sha256': spec_sha256, 'version': __version__, 'seed': seed},
        **body,
    }


def dumps(report):
    """Canonical JSON text of a report."""
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


def write_report(path, report):
    """Write a report, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding='utf-8')
    logger.info('wrote %s', path)
    return path


def write_csv(path, header, *columns):
    """Columns as CSV with 1e-15-precision decimals."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow(['%.15e' % float(x) for x in row])
    return path


def profile_table(profile, measure, radii):
    """(r, V(r), f(r)) columns for plotting."""
    radii = np.asarray(radii, dtype=float)
    return radii, np.asarray(profile.value(radii)), np.asarray(measure.cdf(radii))


def plot_radii(profile, measure, margin=2.0, points=1001):
    """Radii spanning the profile's breakpoints and the measure, in log spacing."""
    s = profile.breakpoints
    lo, hi = float(s[0]) - margin, float(s[-1]) + margin
    bp = measure.breakpoints()
    if bp.size and bp[-1] > 0:
        hi = max(hi, 2.0 * float(np.log(bp[-1])) + margin)
    return np.exp(0.5 * np.linspace(lo, hi, points))
