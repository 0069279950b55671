# -*- coding: utf-8 -*-
"""Reading and writing traces, events, features, manifests and JSON
reports.

Traces and features are CSV files written with 17 significant digits and
read back with round-trip float parsing, so ``load(save(x)) == x`` holds
bit-exactly for finite values.
"""
# License: BSD 2 clause

import json
import re
from pathlib import Path

import numpy as np
import pandas as pd

from .types import (Dataset, DatasetManifest, FeatureVector, FootstepEvent,
                    LABEL_FIELDS, VibrationTrace)
from ..exceptions import (DataError, DimensionMismatchError,
                          MalformedFileError, MissingFileError,
                          NonFiniteSampleError)

FLOAT_FORMAT = '%.17g'
TRACE_COLUMNS = ['time_s', 'amplitude']
EVENT_COLUMNS = ['trace_ref', 'start_index', 'peak_index', 'end_index',
                 'person_id', 'location_m', 'onset_s', 'kind']
FEATURE_LABEL_COLUMNS = list(LABEL_FIELDS) + ['time_s']

_BAND_COLUMN = re.compile(r'^band\[(.+),(.+)\)$')


def band_column_names(band_edges_hz):
    """Column names ``band[lo,hi)`` with exactly round-tripping edges."""
    edges = [float(e) for e in band_edges_hz]
    return ['band[{!r},{!r})'.format(lo, hi)
            for lo, hi in zip(edges[:-1], edges[1:])]


def _require_file(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFileError('file not found: {}'.format(path), path=path)
    return path


def _read_csv(path, **kwargs):
    path = _require_file(path)
    try:
        return pd.read_csv(path, skip_blank_lines=False, **kwargs)
    except pd.errors.EmptyDataError:
        raise MalformedFileError('{} is empty'.format(path), path=path)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise MalformedFileError('cannot parse {}: {}'.format(path, e),
                                 path=path)


def _numeric_column(frame, name, path):
    """Return column ``name`` as finite float64, reporting the first bad
    row (1-based, header is row 1)."""
    column = frame[name]
    parsed = pd.to_numeric(column, errors='coerce')
    malformed = np.flatnonzero(parsed.isna().to_numpy() &
                               column.notna().to_numpy())
    if malformed.size:
        row = int(malformed[0]) + 2
        raise MalformedFileError('{}: row {} column {} is not a number: {!r}'
                                 .format(path, row, name,
                                         column.iloc[malformed[0]]),
                                 path=path, row=row)
    values = parsed.to_numpy(dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0]) + 2
        raise NonFiniteSampleError('{}: row {} column {} is not finite'
                                   .format(path, row, name),
                                   path=path, row=row)
    return values


def save_trace(trace, path):
    """Write a trace as a two-column ``time_s, amplitude`` CSV."""
    frame = pd.DataFrame({'time_s': trace.times(),
                          'amplitude': trace.samples})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def load_trace(path, sample_rate_hz, sensor_id, sensor_position_m=0.):
    """Read a trace CSV written by :func:`save_trace`.

    Parameters
    ----------
    path : str or Path
        CSV file with a ``time_s, amplitude`` header.
    sample_rate_hz : float
        Sampling rate recorded in the manifest.
    sensor_id : str
        Channel identifier.
    sensor_position_m : float, optional
        Channel position along the walkway.

    Returns
    -------
    trace : VibrationTrace
    """
    frame = _read_csv(path, float_precision='round_trip')
    if list(frame.columns) != TRACE_COLUMNS:
        raise MalformedFileError('{}: expected header {}, got {}'.format(
            path, TRACE_COLUMNS, list(frame.columns)), path=path, row=1)
    if frame.shape[0] == 0:
        raise MalformedFileError('{} has no samples'.format(path),
                                 path=path)
    _numeric_column(frame, 'time_s', path)
    samples = _numeric_column(frame, 'amplitude', path)
    return VibrationTrace(samples, sample_rate_hz, sensor_id,
                          sensor_position_m)


def save_events(events, path):
    """Write footstep events (detected or ground truth) to CSV."""
    frame = pd.DataFrame([[getattr(e, c) for c in EVENT_COLUMNS]
                          for e in events], columns=EVENT_COLUMNS)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='')


def load_events(path):
    """Read events written by :func:`save_events`."""
    frame = _read_csv(path, dtype=str, keep_default_na=False)
    if list(frame.columns) != EVENT_COLUMNS:
        raise MalformedFileError('{}: unexpected event header'.format(path),
                                 path=path, row=1)
    events = []
    for i, record in enumerate(frame.itertuples(index=False)):
        try:
            events.append(FootstepEvent(
                trace_ref=record.trace_ref,
                start_index=int(record.start_index),
                peak_index=int(record.peak_index),
                end_index=int(record.end_index),
                person_id=record.person_id or None,
                location_m=float(record.location_m)
                if record.location_m else None,
                onset_s=float(record.onset_s) if record.onset_s else None,
                kind=record.kind or None))
        except ValueError as e:
            raise MalformedFileError('{}: row {}: {}'.format(path, i + 2, e),
                                     path=path, row=i + 2)
    return events


def save_features(features, path, band_edges_hz=None):
    """Write feature vectors as CSV: band columns, then label columns.

    Parameters
    ----------
    features : list of FeatureVector
        Vectors sharing dimension and band edges.
    path : str or Path
        Output file.
    band_edges_hz : array-like, optional
        Band edges to use for the header of an empty list. Ignored when
        ``features`` is not empty.
    """
    features = list(features)
    if features:
        edges = features[0].band_edges_hz
        for feature in features[1:]:
            if feature.dim != features[0].dim:
                raise DimensionMismatchError(
                    'cannot save features of dimensions {} and {} together'
                    .format(features[0].dim, feature.dim))
            if not np.array_equal(feature.band_edges_hz, edges):
                raise DimensionMismatchError(
                    'features with different band edges cannot share a file')
    else:
        edges = [] if band_edges_hz is None else band_edges_hz
    band_columns = band_column_names(edges) if len(edges) else []

    values = pd.DataFrame(np.array([f.values for f in features],
                                   dtype=np.float64).reshape(
                                       len(features), len(band_columns)),
                          columns=band_columns)
    labels = pd.DataFrame([[getattr(f, c) for c in FEATURE_LABEL_COLUMNS]
                           for f in features],
                          columns=FEATURE_LABEL_COLUMNS)
    frame = pd.concat([values, labels], axis=1)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='')


def load_features(path):
    """Read feature vectors written by :func:`save_features`."""
    path = Path(path)
    frame = _read_csv(path, dtype=str, keep_default_na=False)
    columns = list(frame.columns)
    band_columns = [c for c in columns if _BAND_COLUMN.match(c)]
    if columns != band_columns + FEATURE_LABEL_COLUMNS:
        raise MalformedFileError('{}: unexpected feature header'.format(path),
                                 path=path, row=1)
    edges = []
    for column in band_columns:
        lo, hi = (float(v) for v in _BAND_COLUMN.match(column).groups())
        if not edges:
            edges.append(lo)
        elif lo != edges[-1]:
            raise MalformedFileError('{}: bands are not contiguous'.format(
                path), path=path, row=1)
        edges.append(hi)

    features = []
    for i, record in enumerate(frame.itertuples(index=False)):
        row = i + 2
        record = dict(zip(columns, record))
        try:
            values = np.array([float(record[c]) for c in band_columns])
            time_s = float(record['time_s']) if record['time_s'] else None
        except ValueError:
            raise MalformedFileError('{}: row {} holds a non-numeric value'
                                     .format(path, row), path=path, row=row)
        if not np.all(np.isfinite(values)):
            raise NonFiniteSampleError('{}: row {} is not finite'.format(
                path, row), path=path, row=row)
        try:
            features.append(FeatureVector(
                values, edges, time_s=time_s,
                **{c: record[c] or None for c in LABEL_FIELDS}))
        except DataError as e:
            raise type(e)('{}: row {}: {}'.format(path, row, e), path=path,
                          row=row)
    return features


def to_jsonable(obj):
    """Convert numpy containers and scalars into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def save_json(obj, path):
    """Write ``obj`` as indented JSON with sorted keys.

    Output is byte-stable for equal inputs; floats use the shortest
    round-tripping representation.
    """
    with open(path, 'w') as f:
        json.dump(to_jsonable(obj), f, indent=2, sort_keys=True,
                  allow_nan=False)
        f.write('\n')


def load_json(path):
    path = _require_file(path)
    try:
        with open(path) as f:
            return json.load(f)
    except ValueError as e:
        raise MalformedFileError('{} is not valid JSON: {}'.format(path, e),
                                 path=path)


def save_manifest(manifest, path):
    save_json(manifest.to_dict(), path)


def load_manifest(path):
    payload = load_json(path)
    if not isinstance(payload, dict):
        raise MalformedFileError('{}: manifest must be a JSON object'.format(
            path), path=path)
    try:
        return DatasetManifest.from_dict(payload)
    except DataError as e:
        raise type(e)('{}: {}'.format(path, e), path=path)


def load_dataset(manifest_path):
    """Load a manifest and every trace (and ground-truth event file) it
    references.

    Parameters
    ----------
    manifest_path : str or Path
        The JSON manifest. Paths inside it are relative to its directory.

    Returns
    -------
    dataset : Dataset
        Manifest, validated traces keyed by ``(session_id, sensor_id)``
        and ground-truth events keyed by ``session_id``.

    Raises
    ------
    MissingFileError
        A referenced file does not exist; the message names the path.
    MalformedFileError
        A trace or the manifest cannot be parsed.
    NonFiniteSampleError
        A trace contains NaN or infinite values; ``row`` locates it.
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    root = manifest_path.parent

    for session in manifest.sessions:
        for ref in session.traces:
            _require_file(root / ref.path)
        if session.events_path is not None:
            _require_file(root / session.events_path)

    traces, events = {}, {}
    for session in manifest.sessions:
        for ref in session.traces:
            traces[(session.session_id, ref.sensor_id)] = load_trace(
                root / ref.path, ref.sample_rate_hz, ref.sensor_id,
                ref.sensor_position_m)
        if session.events_path is not None:
            events[session.session_id] = load_events(
                root / session.events_path)
    return Dataset(manifest, traces, events)
