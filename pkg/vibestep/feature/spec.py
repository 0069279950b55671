# -*- coding: utf-8 -*-
"""Settings of footstep detection and band-amplitude extraction."""
# License: BSD 2 clause

from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ConfigError
from ..utils import check_parameter

DEFAULT_N_BANDS = 16
DEFAULT_LOW_HZ = 5.
NYQUIST_FRACTION = 0.8


def default_band_edges(sample_rate_hz, n_bands=DEFAULT_N_BANDS,
                       low_hz=DEFAULT_LOW_HZ):
    """``n_bands`` log-spaced bands from ``low_hz`` to 0.8 x Nyquist."""
    check_parameter(n_bands, low=2, param_name='n_bands', include_left=True)
    high = NYQUIST_FRACTION * 0.5 * sample_rate_hz
    if high <= low_hz:
        raise ConfigError('sample rate {} Hz is too low for bands starting '
                          'at {} Hz'.format(sample_rate_hz, low_hz))
    return tuple(float(e) for e in np.geomspace(low_hz, high, n_bands + 1))


@dataclass(frozen=True)
class FeatureSpec:
    """How footsteps are found and turned into feature vectors.

    Parameters
    ----------
    window_s : float, optional
        Analysis window centred on each detected peak. Default: ``0.5``.
    band_edges_hz : tuple of float, optional
        ``d + 1`` ascending band edges. ``None`` resolves to
        :func:`default_band_edges` of the trace's sampling rate.
    detection_threshold_sigma : float, optional
        Peaks must exceed this multiple of the noise floor. Default: ``3``.
    refractory_s : float, optional
        Minimum time between two detected peaks. Default: ``0.25``.
    envelope_s : float, optional
        Length of the moving RMS used as detection envelope.
        Default: ``0.02``.
    min_relative_height : float, optional
        Peaks must also exceed this fraction of the largest envelope
        value, which keeps the detector quiet on noise-free traces.
        Default: ``0.02``.
    normalize : bool, optional
        Scale every feature vector to unit L2 norm. Default: ``False``.
    log_amplitude : bool, optional
        Replace amplitudes ``v`` by ``log1p(v / log_floor)``.
        Default: ``False``.
    log_floor : float, optional
        Amplitude unit of the log features. Default: ``1e-6``.
    """

    window_s: float = 0.5
    band_edges_hz: Optional[Tuple[float, ...]] = None
    detection_threshold_sigma: float = 3.
    refractory_s: float = 0.25
    envelope_s: float = 0.02
    min_relative_height: float = 0.02
    normalize: bool = False
    log_amplitude: bool = False
    log_floor: float = 1e-6

    def __post_init__(self):
        try:
            check_parameter(self.window_s, low=0, param_name='window_s')
            check_parameter(self.detection_threshold_sigma, low=0,
                            param_name='detection_threshold_sigma')
            check_parameter(self.refractory_s, low=0,
                            param_name='refractory_s')
            check_parameter(self.envelope_s, low=0, param_name='envelope_s')
            check_parameter(self.min_relative_height, low=0, high=1,
                            param_name='min_relative_height',
                            include_left=True)
            check_parameter(self.log_floor, low=0, param_name='log_floor')
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))
        if self.band_edges_hz is not None:
            edges = tuple(float(e) for e in self.band_edges_hz)
            if len(edges) < 3:
                raise ConfigError('at least 2 bands (3 edges) are required, '
                                  'got {} edges'.format(len(edges)))
            if not np.all(np.isfinite(edges)) or edges[0] < 0 or \
                    not np.all(np.diff(edges) > 0):
                raise ConfigError('band edges must be finite, nonnegative '
                                  'and strictly ascending')
            object.__setattr__(self, 'band_edges_hz', edges)

    @property
    def n_bands(self):
        if self.band_edges_hz is None:
            return DEFAULT_N_BANDS
        return len(self.band_edges_hz) - 1

    def resolve_edges(self, sample_rate_hz):
        """Band edges for a given sampling rate.

        Raises
        ------
        ConfigError
            If an edge exceeds the Nyquist frequency.
        """
        if self.band_edges_hz is None:
            return np.array(default_band_edges(sample_rate_hz))
        nyquist = 0.5 * sample_rate_hz
        if self.band_edges_hz[-1] > nyquist:
            raise ConfigError('band edge {} Hz exceeds the Nyquist frequency '
                              '{} Hz'.format(self.band_edges_hz[-1], nyquist))
        return np.array(self.band_edges_hz)

    def window_samples(self, sample_rate_hz):
        return max(int(round(self.window_s * sample_rate_hz)), 2)

    def to_dict(self):
        payload = asdict(self)
        if self.band_edges_hz is not None:
            payload['band_edges_hz'] = list(self.band_edges_hz)
        return payload

    @classmethod
    def from_dict(cls, payload):
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError('unknown feature settings: {}'.format(
                ', '.join(sorted(unknown))))
        return cls(**payload)
