# -*- coding: utf-8 -*-
"""Band-amplitude features of detected footsteps."""
# License: BSD 2 clause

import numpy as np
from joblib import Parallel, delayed
from scipy.fft import rfft, rfftfreq
from scipy.signal.windows import hann

from .detection import detect_footsteps
from ..data import BY_PERSON, FeatureVector, GroupedFeatures
from ..exceptions import EmptyDataError
from ..utils import get_n_jobs


def segment_around(samples, peak_index, n_window):
    """``n_window`` samples centred on ``peak_index``, zero padded where
    the window leaves the trace."""
    start = peak_index - n_window // 2
    segment = np.zeros(n_window)
    lo, hi = max(start, 0), min(start + n_window, samples.shape[0])
    if hi > lo:
        segment[lo - start:hi - start] = samples[lo:hi]
    return segment


def one_sided_power(segment, sample_rate_hz):
    """Frequencies and one-sided power of ``segment``.

    The powers sum to ``sum(segment ** 2)``.
    """
    n = segment.shape[0]
    power = np.abs(rfft(segment)) ** 2 / n
    if n % 2 == 0:
        power[1:-1] *= 2.
    else:
        power[1:] *= 2.
    return rfftfreq(n, 1. / sample_rate_hz), power


def band_amplitudes(freqs, power, band_edges_hz):
    """Square root of the power falling in every band.

    Bands are half-open ``[lo, hi)`` except the last, which includes its
    upper edge.
    """
    edges = np.asarray(band_edges_hz)
    n_bands = edges.shape[0] - 1
    band = np.searchsorted(edges, freqs, side='right') - 1
    band[freqs == edges[-1]] = n_bands - 1
    inside = (band >= 0) & (band < n_bands)
    energy = np.bincount(band[inside], weights=power[inside],
                         minlength=n_bands)
    return np.sqrt(energy)


def extract_features(trace, event, spec, **labels):
    """Feature vector of one footstep.

    Parameters
    ----------
    trace : VibrationTrace
        The signal.
    event : FootstepEvent
        The footstep; only its peak index is used.
    spec : FeatureSpec
        Window, bands and post-processing flags.
    **labels
        ``person_id``, ``location_id``, ``structure_id`` and
        ``session_id`` of the result. The sensor id and peak time are
        taken from the trace and event.

    Returns
    -------
    feature : FeatureVector
        ``values[i]`` is the root of the windowed power in band ``i``.
    """
    fs = trace.sample_rate_hz
    edges = spec.resolve_edges(fs)
    n_window = spec.window_samples(fs)
    segment = segment_around(trace.samples, event.peak_index, n_window)
    freqs, power = one_sided_power(segment * hann(n_window, sym=False), fs)
    values = band_amplitudes(freqs, power, edges)

    if spec.log_amplitude:
        values = np.log1p(values / spec.log_floor)
    if spec.normalize:
        norm = np.linalg.norm(values)
        if norm > 0:
            values = values / norm

    labels.setdefault('sensor_id', trace.sensor_id)
    labels.setdefault('time_s', event.peak_index / fs)
    return FeatureVector(values, edges, **labels)


def _session_features(dataset, session, spec, sensor_ids):
    out = []
    labels = dict(person_id=session.person_id,
                  location_id=session.location_id,
                  structure_id=session.structure_id,
                  session_id=session.session_id)
    for ref in session.traces:
        if sensor_ids is not None and ref.sensor_id not in sensor_ids:
            continue
        trace = dataset.traces[(session.session_id, ref.sensor_id)]
        for event in detect_footsteps(trace, spec):
            out.append(extract_features(trace, event, spec, **labels))
    return out


def extract_feature_list(dataset, spec, kind=None, structure_id=None,
                         sensor_ids=None, n_jobs=None):
    """One feature vector per detected footstep and sensor.

    Sessions are processed in timestamp order; within a session features
    are ordered by sensor (manifest order) and then by peak time.

    Parameters
    ----------
    dataset : Dataset
        Loaded dataset.
    spec : FeatureSpec
        Extraction settings.
    kind : str, optional
        Restrict to ``'walk'``, ``'footstep'`` or ``'ball_drop'`` sessions.
    structure_id : str, optional
        Restrict to one structure.
    sensor_ids : list of str, optional
        Restrict to these channels.
    n_jobs : int, optional
        Worker threads, capped by ``VIBESTEP_THREADS``.

    Returns
    -------
    features : list of FeatureVector
    """
    sessions = dataset.sessions(kind=kind, structure_id=structure_id)
    sensor_ids = None if sensor_ids is None else set(sensor_ids)
    chunks = Parallel(n_jobs=get_n_jobs(n_jobs), prefer='threads')(
        delayed(_session_features)(dataset, session, spec, sensor_ids)
        for session in sessions)
    return [feature for chunk in chunks for feature in chunk]


def extract_dataset(dataset, spec, grouping_mode=BY_PERSON, kind=None,
                    structure_id=None, sensor_ids=None, n_jobs=None):
    """Detect, extract and group the footsteps of a dataset.

    See :func:`extract_feature_list` for the selection parameters.

    Returns
    -------
    grouped : GroupedFeatures
        Features grouped ``'by-person'`` or ``'by-location'``.

    Raises
    ------
    EmptyDataError
        If no footstep is detected.
    DataError
        If the grouping label is missing on some session.
    """
    features = extract_feature_list(dataset, spec, kind=kind,
                                    structure_id=structure_id,
                                    sensor_ids=sensor_ids, n_jobs=n_jobs)
    if not features:
        raise EmptyDataError('no events detected')
    return GroupedFeatures.from_features(features, grouping_mode)
