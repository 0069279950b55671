# -*- coding: utf-8 -*-
"""Frequency-dependent attenuation and band-wise transfer between
excitation locations.

Over a travel distance ``l`` a wave component of angular frequency
``omega`` keeps the fraction ``exp(-alpha * l * omega / 2)`` of its
amplitude. On band amplitudes this is a diagonal linear map.
"""
# License: BSD 2 clause

from dataclasses import dataclass

import numpy as np

from .gait import DEFAULT_SAMPLE_RATE_HZ, ball_drop_sequence
from ..exceptions import ConfigError, EmptyDataError
from ..feature import FeatureSpec, detect_footsteps, extract_features
from ..utils import check_parameter

# per metre per rad/s
ALPHA_PRESETS = {'wood': 2e-4, 'concrete': 1e-4}


@dataclass(frozen=True)
class AttenuationModel:
    """Exponential amplitude decay with distance and frequency.

    Parameters
    ----------
    alpha : float, optional
        Attenuation coefficient, nonnegative. Default: ``0`` (lossless).
    """

    alpha: float = 0.

    def __post_init__(self):
        check_parameter(self.alpha, low=0, param_name='alpha',
                        include_left=True)

    @classmethod
    def preset(cls, material):
        if material not in ALPHA_PRESETS:
            raise ConfigError('unknown material {!r}, expected one of {}'
                              .format(material, sorted(ALPHA_PRESETS)))
        return cls(ALPHA_PRESETS[material])

    def factors(self, distance_m, omega):
        """Amplitude factors ``exp(-alpha * distance * omega / 2)``."""
        return np.exp(-0.5 * self.alpha * np.asarray(distance_m) *
                      np.asarray(omega))


def apply_attenuation(features, model, distance_l_m):
    """Attenuate every band of a feature vector.

    Band ``i`` is scaled by ``exp(-alpha * l * omega_i / 2)`` where
    ``omega_i`` is the arithmetic band centre in rad/s.

    Parameters
    ----------
    features : FeatureVector
        Input amplitudes.
    model : AttenuationModel
        Provides ``alpha``.
    distance_l_m : float
        Travel distance, nonnegative. ``0`` returns the input values
        unchanged.

    Returns
    -------
    attenuated : FeatureVector
        Same labels, scaled values.
    """
    check_parameter(distance_l_m, low=0, param_name='distance_l_m',
                    include_left=True)
    omega = 2. * np.pi * features.band_centers_hz
    return features.with_values(features.values *
                                model.factors(distance_l_m, omega))


def band_transfer_ratio(beam, location_a_m, location_b_m, sensor_m,
                        repeats=5, spec=None, seed=0, attenuation=None,
                        sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ, jitter=0.001):
    """Band-wise amplitude ratio between ball drops at two locations.

    If propagation acts as a diagonal linear map on band amplitudes, the
    ratio of the features of drop ``r`` at ``a`` over drop ``r`` at ``b``
    is the same vector for every repeat.

    Parameters
    ----------
    beam : BeamModel
        The structure.
    location_a_m, location_b_m : float
        The two drop locations.
    sensor_m : float
        Position of the observing sensor.
    repeats : int, optional
        Drops per location. Default: ``5``.
    spec : FeatureSpec, optional
        Feature settings, default :class:`FeatureSpec`.
    seed : int, optional
        Seed of the drop amplitude jitter.
    attenuation : AttenuationModel, optional
        Propagation decay.
    sample_rate_hz : float, optional
        Sampling rate.
    jitter : float, optional
        Relative ball-drop amplitude jitter.

    Returns
    -------
    ratio : numpy.ndarray
        Mean ratio per band (NaN where location ``b`` has no energy).
    cv : numpy.ndarray
        Coefficient of variation of the ratio across repeats per band.
    """
    spec = FeatureSpec() if spec is None else spec
    recordings = ball_drop_sequence(
        beam, [location_a_m, location_b_m], repeats, sensors=[sensor_m],
        seed=seed, sample_rate_hz=sample_rate_hz, jitter=jitter,
        attenuation=attenuation)

    values = []
    for recording in recordings:
        trace = recording.traces[0]
        events = detect_footsteps(trace, spec)
        if not events:
            raise EmptyDataError('no events detected in a ball drop at '
                                 '{} m'.format(recording.location_m))
        values.append(extract_features(trace, events[0], spec).values)
    values = np.array(values)
    a, b = values[:repeats], values[repeats:]

    ratios = np.full(a.shape, np.nan)
    np.divide(a, b, out=ratios, where=b > 0)
    mean = ratios.mean(axis=0)
    cv = np.full(mean.shape, np.nan)
    np.divide(ratios.std(axis=0), np.abs(mean), out=cv, where=mean != 0)
    return mean, cv
