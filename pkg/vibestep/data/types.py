# -*- coding: utf-8 -*-
"""Core domain types: traces, footstep events, feature vectors, grouped
features and dataset manifests.

All records are immutable after construction. Arrays are copied on the
way in and flagged read-only, so instances can be shared freely between
threads.
"""
# License: BSD 2 clause

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from ..exceptions import (DataError, DimensionMismatchError, EmptyDataError,
                          NonFiniteSampleError)
from ..utils import check_parameter

BY_LOCATION = 'by-location'
BY_PERSON = 'by-person'
GROUPING_MODES = (BY_LOCATION, BY_PERSON)

WALK = 'walk'
FOOTSTEP = 'footstep'
BALL_DROP = 'ball_drop'
SESSION_KINDS = (WALK, FOOTSTEP, BALL_DROP)

LABEL_FIELDS = ('person_id', 'location_id', 'structure_id', 'sensor_id',
                'session_id')


def _frozen_array(values, ndim=1):
    array = np.array(values, dtype=np.float64)
    if array.ndim != ndim:
        raise DataError('expected a {}-D array, got shape {}'.format(
            ndim, array.shape))
    array.setflags(write=False)
    return array


def _optional_str(value):
    return None if value is None or value == '' else str(value)


@dataclass(frozen=True, eq=False)
class VibrationTrace:
    """One sensor channel.

    Parameters
    ----------
    samples : array-like
        Sensor output in arbitrary linear amplitude units.
    sample_rate_hz : float
        Sampling frequency, strictly positive.
    sensor_id : str
        Identifier of the channel.
    sensor_position_m : float, optional
        Position of the sensor along the walkway axis. Default: ``0.``.
    """

    samples: np.ndarray
    sample_rate_hz: float
    sensor_id: str
    sensor_position_m: float = 0.

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        if samples.size == 0:
            raise EmptyDataError('trace {} has no samples'.format(
                self.sensor_id))
        bad = np.flatnonzero(~np.isfinite(samples))
        if bad.size:
            raise NonFiniteSampleError(
                'sample {} of trace {} is not finite'.format(
                    int(bad[0]), self.sensor_id), row=int(bad[0]))
        check_parameter(self.sample_rate_hz, low=0,
                        param_name='sample_rate_hz')
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate_hz', float(self.sample_rate_hz))
        object.__setattr__(self, 'sensor_id', str(self.sensor_id))
        object.__setattr__(self, 'sensor_position_m',
                           float(self.sensor_position_m))

    @property
    def n_samples(self):
        return self.samples.shape[0]

    @property
    def duration_s(self):
        return self.n_samples / self.sample_rate_hz

    def times(self):
        """Sample times in seconds, starting at zero."""
        return np.arange(self.n_samples) / self.sample_rate_hz


@dataclass(frozen=True)
class FootstepEvent:
    """A footstep (or any impulse) located in a trace.

    Detected events only carry indices; simulated ground-truth events
    also carry who stepped where and when.

    Parameters
    ----------
    trace_ref : str
        Identifier of the trace or session the indices refer to.
    start_index, peak_index, end_index : int
        Sample indices with ``start_index < peak_index < end_index``.
    person_id : str, optional
        Ground-truth person, ``None`` for ball drops or unknown.
    location_m : float, optional
        Ground-truth excitation location along the beam.
    onset_s : float, optional
        Ground-truth force onset time.
    kind : str, optional
        ``'footstep'`` or ``'ball_drop'``.
    """

    trace_ref: str
    start_index: int
    peak_index: int
    end_index: int
    person_id: Optional[str] = None
    location_m: Optional[float] = None
    onset_s: Optional[float] = None
    kind: Optional[str] = None

    def __post_init__(self):
        for name in ('start_index', 'peak_index', 'end_index'):
            object.__setattr__(self, name, int(getattr(self, name)))
        if not (0 <= self.start_index < self.peak_index < self.end_index):
            raise DataError('event indices must satisfy 0 <= start < peak < '
                            'end, got ({}, {}, {})'.format(
                                self.start_index, self.peak_index,
                                self.end_index))
        object.__setattr__(self, 'trace_ref', str(self.trace_ref))
        object.__setattr__(self, 'person_id', _optional_str(self.person_id))

    def check_fits(self, n_samples):
        """Raise if the event extends beyond a trace of ``n_samples``."""
        if self.end_index > n_samples:
            raise DataError('event ends at {} beyond trace length {}'.format(
                self.end_index, n_samples))


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Frequency-band amplitudes of one footstep.

    Parameters
    ----------
    values : array-like
        The ``d`` band amplitudes, nonnegative and finite.
    band_edges_hz : array-like
        ``d + 1`` strictly ascending band edges.
    person_id, location_id, structure_id : str, optional
        Labels, ``None`` when unknown.
    sensor_id, session_id : str, optional
        Provenance metadata.
    time_s : float, optional
        Peak time of the footstep within its session.
    """

    values: np.ndarray
    band_edges_hz: np.ndarray
    person_id: Optional[str] = None
    location_id: Optional[str] = None
    structure_id: Optional[str] = None
    sensor_id: Optional[str] = None
    session_id: Optional[str] = None
    time_s: Optional[float] = None

    def __post_init__(self):
        values = _frozen_array(self.values)
        edges = _frozen_array(self.band_edges_hz)
        if values.shape[0] < 2:
            raise DimensionMismatchError(
                'feature dimension must be >= 2, got {}'.format(
                    values.shape[0]))
        if edges.shape[0] != values.shape[0] + 1:
            raise DimensionMismatchError(
                '{} values need {} band edges, got {}'.format(
                    values.shape[0], values.shape[0] + 1, edges.shape[0]))
        if not np.all(np.isfinite(values)):
            raise NonFiniteSampleError('feature values must be finite')
        if np.any(values < 0):
            raise DataError('feature values are amplitudes and must be >= 0')
        if not np.all(np.diff(edges) > 0):
            raise DataError('band edges must be strictly ascending')
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'band_edges_hz', edges)
        for name in LABEL_FIELDS:
            object.__setattr__(self, name, _optional_str(getattr(self, name)))
        if self.time_s is not None:
            object.__setattr__(self, 'time_s', float(self.time_s))

    @property
    def dim(self):
        return self.values.shape[0]

    @property
    def band_centers_hz(self):
        """Arithmetic midpoints of the bands."""
        return 0.5 * (self.band_edges_hz[:-1] + self.band_edges_hz[1:])

    def labels(self):
        return {name: getattr(self, name) for name in LABEL_FIELDS}

    def with_values(self, values):
        """Copy with new band values, labels unchanged."""
        return replace(self, values=values)


class GroupedFeatures:
    """Feature rows partitioned by excitation location or by person.

    Each group holds the stacked values of its feature vectors as an
    ``N_k x d`` read-only array. Groups may hold transformed features,
    which are no longer amplitudes, so only shapes are validated here.

    Parameters
    ----------
    groups : iterable of (key, array-like)
        Group key and its ``N_k x d`` rows.
    grouping_mode : str
        ``'by-location'`` or ``'by-person'``.
    """

    def __init__(self, groups, grouping_mode):
        if grouping_mode not in GROUPING_MODES:
            raise ValueError('grouping_mode must be one of {}, got {!r}'
                             .format(GROUPING_MODES, grouping_mode))
        self.grouping_mode = grouping_mode
        keys, arrays = [], []
        for key, rows in groups:
            rows = np.array(rows, dtype=np.float64)
            if rows.ndim == 1:
                rows = rows[np.newaxis, :]
            if rows.ndim != 2 or rows.shape[0] == 0:
                raise EmptyDataError('group {!r} is empty'.format(key))
            rows.setflags(write=False)
            keys.append(str(key))
            arrays.append(rows)
        if not arrays:
            raise EmptyDataError('no groups given')
        dims = {rows.shape[1] for rows in arrays}
        if len(dims) != 1:
            raise DimensionMismatchError(
                'groups have different dimensions: {}'.format(sorted(dims)))
        if len(set(keys)) != len(keys):
            raise DataError('group keys must be unique')
        self.keys = tuple(keys)
        self.arrays = tuple(arrays)

    @classmethod
    def from_features(cls, features, grouping_mode):
        """Group :class:`FeatureVector` objects by their label.

        Groups are ordered by key so that the result does not depend on
        the input order of the groups.
        """
        if grouping_mode not in GROUPING_MODES:
            raise ValueError('grouping_mode must be one of {}, got {!r}'
                             .format(GROUPING_MODES, grouping_mode))
        attr = 'location_id' if grouping_mode == BY_LOCATION else 'person_id'
        buckets = {}
        for feature in features:
            key = getattr(feature, attr)
            if key is None:
                raise DataError('grouping {} requested but a feature of '
                                'session {} has no {}'.format(
                                    grouping_mode, feature.session_id, attr))
            buckets.setdefault(key, []).append(feature.values)
        if not buckets:
            raise EmptyDataError('no features to group')
        return cls([(key, np.vstack(buckets[key]))
                    for key in sorted(buckets)], grouping_mode)

    @classmethod
    def from_arrays(cls, X, labels, grouping_mode):
        """Group the rows of ``X`` by ``labels`` (sorted by key)."""
        X = np.asarray(X, dtype=np.float64)
        labels = np.asarray([str(label) for label in labels])
        if X.ndim != 2 or X.shape[0] != labels.shape[0]:
            raise DimensionMismatchError('X must be 2-D with one label per '
                                         'row')
        return cls([(key, X[labels == key]) for key in sorted(set(labels))],
                   grouping_mode)

    @property
    def n_groups(self):
        return len(self.arrays)

    @property
    def counts(self):
        return np.array([rows.shape[0] for rows in self.arrays])

    @property
    def dim(self):
        return self.arrays[0].shape[1]

    @property
    def n_samples(self):
        return int(self.counts.sum())

    def stacked(self):
        """Return all rows and their group keys."""
        X = np.vstack(self.arrays)
        labels = np.repeat(np.array(self.keys), self.counts)
        return X, labels

    def map(self, fn):
        """Apply ``fn`` to every group array and regroup the results."""
        return GroupedFeatures([(key, fn(rows)) for key, rows in self],
                               self.grouping_mode)

    def __iter__(self):
        return iter(zip(self.keys, self.arrays))

    def __len__(self):
        return self.n_groups

    def __repr__(self):
        return 'GroupedFeatures(mode={}, K={}, d={}, N={})'.format(
            self.grouping_mode, self.n_groups, self.dim, self.n_samples)


@dataclass(frozen=True)
class StructureInfo:
    structure_id: str
    material: str


@dataclass(frozen=True)
class TraceRef:
    """Where one channel of a session lives on disk."""

    path: str
    sensor_id: str
    sensor_position_m: float
    sample_rate_hz: float


@dataclass(frozen=True)
class Session:
    """One recording session: a walk, a fixed-location footstep or a
    ball drop, captured by one or more sensors."""

    session_id: str
    kind: str
    structure_id: str
    traces: Tuple[TraceRef, ...]
    person_id: Optional[str] = None
    location_id: Optional[str] = None
    location_m: Optional[float] = None
    timestamp: float = 0.
    events_path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SESSION_KINDS:
            raise DataError('session {} has unknown kind {!r}'.format(
                self.session_id, self.kind))
        if not self.traces:
            raise DataError('session {} has no traces'.format(
                self.session_id))
        object.__setattr__(self, 'traces', tuple(self.traces))
        object.__setattr__(self, 'person_id', _optional_str(self.person_id))
        object.__setattr__(self, 'location_id',
                           _optional_str(self.location_id))


@dataclass(frozen=True)
class DatasetManifest:
    """Index of a dataset: structures, sessions and feature settings.

    Paths in sessions are relative to the manifest's directory.
    """

    structures: Tuple[StructureInfo, ...]
    sessions: Tuple[Session, ...]
    feature_spec: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'structures', tuple(self.structures))
        object.__setattr__(self, 'sessions', tuple(self.sessions))
        structure_ids = [s.structure_id for s in self.structures]
        if len(set(structure_ids)) != len(structure_ids):
            raise DataError('structure ids must be unique')
        session_ids = [s.session_id for s in self.sessions]
        if len(set(session_ids)) != len(session_ids):
            raise DataError('session ids must be unique')
        known = set(structure_ids)
        for session in self.sessions:
            if session.structure_id not in known:
                raise DataError('session {} refers to unknown structure {}'
                                .format(session.session_id,
                                        session.structure_id))
            sensor_ids = [ref.sensor_id for ref in session.traces]
            if len(set(sensor_ids)) != len(sensor_ids):
                raise DataError('session {} lists a sensor twice'.format(
                    session.session_id))

    def to_dict(self):
        return {
            'structures': [{'structure_id': s.structure_id,
                            'material': s.material}
                           for s in self.structures],
            'sessions': [{
                'session_id': s.session_id,
                'kind': s.kind,
                'structure_id': s.structure_id,
                'person_id': s.person_id,
                'location_id': s.location_id,
                'location_m': s.location_m,
                'timestamp': s.timestamp,
                'events_path': s.events_path,
                'traces': [{'path': ref.path,
                            'sensor_id': ref.sensor_id,
                            'sensor_position_m': ref.sensor_position_m,
                            'sample_rate_hz': ref.sample_rate_hz}
                           for ref in s.traces],
            } for s in self.sessions],
            'feature_spec': dict(self.feature_spec),
        }

    @classmethod
    def from_dict(cls, payload):
        try:
            structures = [StructureInfo(str(s['structure_id']),
                                        str(s['material']))
                          for s in payload['structures']]
            sessions = []
            for s in payload['sessions']:
                traces = [TraceRef(str(ref['path']), str(ref['sensor_id']),
                                   float(ref['sensor_position_m']),
                                   float(ref['sample_rate_hz']))
                          for ref in s['traces']]
                location_m = s.get('location_m')
                sessions.append(Session(
                    session_id=str(s['session_id']),
                    kind=s['kind'],
                    structure_id=str(s['structure_id']),
                    traces=tuple(traces),
                    person_id=s.get('person_id'),
                    location_id=s.get('location_id'),
                    location_m=None if location_m is None
                    else float(location_m),
                    timestamp=float(s.get('timestamp', 0.)),
                    events_path=s.get('events_path')))
        except (KeyError, TypeError) as e:
            raise DataError('malformed manifest: {!r}'.format(e))
        return cls(tuple(structures), tuple(sessions),
                   dict(payload.get('feature_spec') or {}))


@dataclass(frozen=True, eq=False)
class Dataset:
    """A manifest together with its loaded traces and ground truth.

    Parameters
    ----------
    manifest : DatasetManifest
        The index.
    traces : dict
        ``{(session_id, sensor_id): VibrationTrace}``.
    events : dict, optional
        ``{session_id: [FootstepEvent, ...]}`` ground truth, if recorded.
    """

    manifest: DatasetManifest
    traces: dict
    events: dict = field(default_factory=dict)

    @property
    def n_traces(self):
        return len(self.traces)

    def sessions(self, kind=None, structure_id=None):
        """Sessions filtered by kind and structure, ordered by timestamp
        and then by session id."""
        selected = [s for s in self.manifest.sessions
                    if (kind is None or s.kind == kind) and
                    (structure_id is None or s.structure_id == structure_id)]
        return sorted(selected, key=lambda s: (s.timestamp, s.session_id))

    def session_traces(self, session):
        """Traces of a session, in manifest sensor order."""
        return [self.traces[(session.session_id, ref.sensor_id)]
                for ref in session.traces]

    def person_ids(self, structure_id=None):
        return sorted({s.person_id for s in self.sessions(
            structure_id=structure_id) if s.person_id is not None})
