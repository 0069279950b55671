# -*- coding: utf-8 -*-
"""Footstep detection on a single vibration trace."""
# License: BSD 2 clause

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from ..data import FootstepEvent

MAD_TO_SIGMA = 1.4826


def noise_floor(samples):
    """Robust noise scale: the median absolute deviation, scaled to the
    standard deviation of Gaussian noise."""
    samples = np.asarray(samples, dtype=np.float64)
    return MAD_TO_SIGMA * np.median(np.abs(samples - np.median(samples)))


def envelope(samples, size):
    """Moving RMS over ``size`` samples."""
    energy = uniform_filter1d(np.asarray(samples, dtype=np.float64) ** 2,
                              size=max(int(size), 1), mode='constant')
    return np.sqrt(np.maximum(energy, 0.))


def detect_footsteps(trace, spec):
    """Locate impulsive events in ``trace``.

    A footstep is a local maximum of the moving-RMS envelope that exceeds
    both ``detection_threshold_sigma`` times the noise floor and
    ``min_relative_height`` times the envelope maximum. Of two maxima
    closer than ``refractory_s`` only the higher survives.

    Parameters
    ----------
    trace : VibrationTrace
        The signal.
    spec : FeatureSpec
        Detection settings.

    Returns
    -------
    events : list of FootstepEvent
        Ordered by peak index, each spanning ``window_s`` around its peak
        (clipped to the trace). Empty for a silent trace.
    """
    fs = trace.sample_rate_hz
    env = envelope(trace.samples, round(spec.envelope_s * fs))
    top = env.max()
    if top <= 0:
        return []
    height = max(spec.detection_threshold_sigma * noise_floor(trace.samples),
                 spec.min_relative_height * top)
    distance = max(int(np.ceil(spec.refractory_s * fs)), 1)
    peaks, _ = find_peaks(env, height=height, distance=distance)

    half = spec.window_samples(fs) // 2
    n = trace.n_samples
    return [FootstepEvent(trace.sensor_id, max(0, p - half), p,
                          min(n, p + half + 1))
            for p in peaks.tolist()]
