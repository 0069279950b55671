# -*- coding: utf-8 -*-
"""Forced vibration of a damped, simply supported Euler-Bernoulli beam
by modal superposition.

The beam obeys

    rho * A * w_tt + rho * A * eta * w_t + E * I * w_xxxx = P(t) delta(x - x_f)

and its deflection is expanded on the mode shapes ``sin(n pi x / L)``.
Every modal coordinate is a damped harmonic oscillator

    q_n'' + eta * q_n' + omega_n**2 * q_n = 2 / (rho A L) * sin(n pi x_f / L) P(t)

with ``omega_n = (n pi / L)**2 * sqrt(E I / (rho A))``. The oscillators are
advanced with their exact impulse-invariant recurrence via
:func:`scipy.signal.lfilter`, one filter per mode for all sensors at once.
"""
# License: BSD 2 clause

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import lfilter
from scipy.special import sindg

from ..data import VibrationTrace
from ..exceptions import ConfigError
from ..utils import check_parameter

FOOTSTEP = 'footstep'
BALL_DROP = 'ball_drop'
OUTPUTS = ('velocity', 'displacement')

# E (Pa), I (m^4), rho (kg/m^3), A (m^2), eta (1/s), L (m)
BEAM_PRESETS = {
    'wood': dict(E=11e9, I=4.5e-4, rho=500., A=0.06, eta=50., L=8.),
    'concrete': dict(E=30e9, I=1.072e-3, rho=2400., A=0.105, eta=40., L=8.),
}


@dataclass(frozen=True)
class BeamModel:
    """Material, geometry and damping of a simply supported beam.

    Parameters
    ----------
    E : float
        Young's modulus in Pa.
    I : float
        Second moment of area in m^4.
    rho : float
        Density in kg/m^3.
    A : float
        Cross-section area in m^2.
    eta : float
        Damping coefficient in 1/s. ``0`` gives an undamped beam.
    L : float
        Span in m.
    n_modes : int, optional
        Number of modes in the superposition. Default: ``30``.
    """

    E: float
    I: float
    rho: float
    A: float
    eta: float
    L: float
    n_modes: int = 30

    def __post_init__(self):
        for name in ('E', 'I', 'rho', 'A', 'L'):
            check_parameter(getattr(self, name), low=0, param_name=name)
        check_parameter(self.eta, low=0, param_name='eta', include_left=True)
        if isinstance(self.n_modes, bool) or \
                not isinstance(self.n_modes, (int, np.integer)):
            raise TypeError('n_modes must be an integer, got {!r}'.format(
                self.n_modes))
        check_parameter(self.n_modes, low=1, param_name='n_modes',
                        include_left=True)

    @classmethod
    def preset(cls, material, n_modes=30):
        """Parameter set of a ``'wood'`` or ``'concrete'`` floor beam."""
        if material not in BEAM_PRESETS:
            raise ConfigError('unknown material {!r}, expected one of {}'
                              .format(material, sorted(BEAM_PRESETS)))
        return cls(n_modes=n_modes, **BEAM_PRESETS[material])

    def with_modes(self, n_modes):
        return replace(self, n_modes=n_modes)

    @property
    def mode_numbers(self):
        return np.arange(1, self.n_modes + 1)

    def natural_frequencies(self):
        """Undamped natural angular frequencies ``omega_n`` in rad/s."""
        n = self.mode_numbers
        return (n * np.pi / self.L) ** 2 * np.sqrt(self.E * self.I /
                                                   (self.rho * self.A))

    def mode_shapes(self, x):
        """``sin(n pi x / L)`` for every mode.

        Evaluated in degrees so that nodes, e.g. even modes at midspan,
        are exactly zero.

        Parameters
        ----------
        x : float or array-like
            Positions along the beam.

        Returns
        -------
        shapes : numpy.ndarray
            Shape ``(n_modes,)`` for a scalar, ``(len(x), n_modes)``
            otherwise.
        """
        x = np.asarray(x, dtype=np.float64)
        return sindg(180. * np.multiply.outer(x, self.mode_numbers) / self.L)

    def check_position(self, x, name='position'):
        if not (0. < float(x) < self.L):
            raise ConfigError('{} {} m lies outside the beam (0, {})'.format(
                name, x, self.L))


@dataclass(frozen=True)
class Pulse:
    """Raised-cosine force pulse with an optional second lobe.

    The first lobe is a Hann window of length ``duration_s`` and unit
    peak. A footstep adds a push-off lobe of the same length, scaled by
    ``toe_ratio`` and delayed by ``toe_delay_frac * duration_s``.

    Parameters
    ----------
    duration_s : float
        Length of one lobe.
    toe_ratio : float, optional
        Relative height of the second lobe, ``0`` for a single lobe.
    toe_delay_frac : float, optional
        Delay of the second lobe in units of ``duration_s``.
    """

    duration_s: float
    toe_ratio: float = 0.
    toe_delay_frac: float = 0.5

    def __post_init__(self):
        check_parameter(self.duration_s, low=0, param_name='duration_s')
        check_parameter(self.toe_ratio, low=0, param_name='toe_ratio',
                        include_left=True)
        check_parameter(self.toe_delay_frac, low=0,
                        param_name='toe_delay_frac', include_left=True)

    @property
    def support_s(self):
        """Time after onset at which the pulse is over."""
        if self.toe_ratio == 0:
            return self.duration_s
        return self.duration_s * (1. + self.toe_delay_frac)

    def shape(self, t):
        """Pulse value at times ``t`` relative to onset, zero outside."""
        t = np.asarray(t, dtype=np.float64)
        out = _hann_lobe(t, self.duration_s)
        if self.toe_ratio > 0:
            delay = self.toe_delay_frac * self.duration_s
            out = out + self.toe_ratio * _hann_lobe(t - delay,
                                                    self.duration_s)
        return out


def _hann_lobe(t, duration):
    inside = (t >= 0) & (t <= duration)
    return np.where(inside, 0.5 * (1. - np.cos(2. * np.pi * t / duration)),
                    0.)


@dataclass(frozen=True)
class ForceEvent:
    """One stationary impulsive load.

    Parameters
    ----------
    kind : str
        ``'footstep'`` or ``'ball_drop'``.
    location_m : float
        Load position along the beam, checked against the beam span
        when simulated.
    amplitude_N : float
        Peak force.
    pulse : Pulse
        Time shape of the load.
    onset_s : float, optional
        Start of the load. Default: ``0``.
    """

    kind: str
    location_m: float
    amplitude_N: float
    pulse: Pulse = field(default_factory=lambda: Pulse(0.06))
    onset_s: float = 0.

    def __post_init__(self):
        if self.kind not in (FOOTSTEP, BALL_DROP):
            raise ConfigError('unknown force kind {!r}'.format(self.kind))
        check_parameter(self.location_m, low=0, param_name='location_m')
        check_parameter(self.amplitude_N, low=0, param_name='amplitude_N')
        check_parameter(self.onset_s, low=0, param_name='onset_s',
                        include_left=True)

    def waveform(self, n_samples, sample_rate_hz):
        """Sampled force, exactly zero before the onset."""
        t = np.arange(n_samples) / sample_rate_hz - self.onset_s
        return self.amplitude_N * self.pulse.shape(t)

    def scaled(self, factor):
        return replace(self, amplitude_N=self.amplitude_N * factor)


def modal_filters(omega, eta, sample_rate_hz, output='velocity'):
    """Impulse-invariant recurrences of the modal oscillators.

    Parameters
    ----------
    omega : numpy.ndarray
        Natural angular frequencies.
    eta : float
        Damping coefficient.
    sample_rate_hz : float
        Sampling rate.
    output : str, optional
        ``'velocity'`` or ``'displacement'`` of the modal coordinate.

    Returns
    -------
    b, a : numpy.ndarray
        Filter coefficients of shape ``(n_modes, 2)`` and
        ``(n_modes, 3)`` for :func:`scipy.signal.lfilter`.
    """
    if output not in OUTPUTS:
        raise ConfigError('output must be one of {}, got {!r}'.format(
            OUTPUTS, output))
    dt = 1. / sample_rate_hz
    omega = np.asarray(omega, dtype=np.float64)
    root = np.sqrt((0.25 * eta ** 2 - omega ** 2).astype(np.complex128))
    p1, p2 = -0.5 * eta + root, -0.5 * eta - root
    z1, z2 = np.exp(p1 * dt), np.exp(p2 * dt)

    b = np.empty((omega.shape[0], 2))
    a = np.empty((omega.shape[0], 3))
    a[:, 0] = 1.
    a[:, 1] = -(z1 + z2).real
    a[:, 2] = (z1 * z2).real

    critical = np.abs(p1 - p2) <= 1e-9 * np.maximum(omega, 1.)
    gap = np.where(critical, 1., p1 - p2)
    if output == 'displacement':
        b[:, 0] = 0.
        b[:, 1] = np.where(critical, dt ** 2 * z1,
                           dt * (z1 - z2) / gap).real
    else:
        b[:, 0] = dt
        b[:, 1] = np.where(critical, dt * z1 * (p1 * dt - 1.),
                           dt * (p2 * z1 - p1 * z2) / gap).real
    return b, a


def simulate_response(beam, forces, sensor_positions, sample_rate_hz,
                      duration_s, attenuation=None, output='velocity',
                      snr_db=None, seed=None):
    """Response of every sensor to a set of loads.

    Modes whose natural frequency reaches the Nyquist frequency cannot be
    represented at ``sample_rate_hz`` and are left out of the sum.

    Parameters
    ----------
    beam : BeamModel
        The structure.
    forces : list of ForceEvent
        Loads, superposed linearly.
    sensor_positions : list of float
        Sensor positions in (0, L).
    sample_rate_hz : float
        Sampling rate.
    duration_s : float
        Length of the simulated traces.
    attenuation : AttenuationModel, optional
        Frequency-dependent decay ``exp(-alpha |x_s - x_f| omega_n / 2)``
        of every mode between load and sensor. ``None`` disables it.
    output : str, optional
        ``'velocity'`` (geophone-like, default) or ``'displacement'``.
    snr_db : float, optional
        Adds white Gaussian noise at this signal-to-noise ratio.
    seed : int, optional
        Seed of the noise generator.

    Returns
    -------
    traces : list of VibrationTrace
        One trace per sensor, ids ``s0, s1, ...``.
    """
    check_parameter(sample_rate_hz, low=0, param_name='sample_rate_hz')
    check_parameter(duration_s, low=0, param_name='duration_s')
    sensor_positions = [float(x) for x in sensor_positions]
    if not sensor_positions:
        raise ConfigError('at least one sensor is required')
    for x in sensor_positions:
        beam.check_position(x, 'sensor')
    for force in forces:
        beam.check_position(force.location_m, 'force location')

    n_samples = int(round(duration_s * sample_rate_hz))
    omega = beam.natural_frequencies()
    keep = omega < np.pi * sample_rate_hz
    if not np.any(keep):
        raise ConfigError('no beam mode lies below the Nyquist frequency '
                          'of {} Hz'.format(sample_rate_hz / 2.))
    omega = omega[keep]

    sensor_x = np.asarray(sensor_positions)
    sensor_shapes = beam.mode_shapes(sensor_x)[:, keep]
    out = np.zeros((sensor_x.shape[0], n_samples))
    if forces:
        load_x = np.array([f.location_m for f in forces])
        loads = np.vstack([f.waveform(n_samples, sample_rate_hz)
                           for f in forces])
        # coupling[n, s, e]: modal force of load e felt at sensor s
        coupling = 2. / (beam.rho * beam.A * beam.L) * \
            beam.mode_shapes(load_x)[:, keep].T[:, np.newaxis, :]
        coupling = np.broadcast_to(
            coupling, (omega.shape[0], sensor_x.shape[0], load_x.shape[0]))
        if attenuation is not None and attenuation.alpha > 0:
            distance = np.abs(sensor_x[:, np.newaxis] - load_x[np.newaxis])
            coupling = coupling * attenuation.factors(
                distance[np.newaxis], omega[:, np.newaxis, np.newaxis])
        b, a = modal_filters(omega, beam.eta, sample_rate_hz, output)
        for n in range(omega.shape[0]):
            modal_force = coupling[n] @ loads
            out += sensor_shapes[:, n:n + 1] * lfilter(b[n], a[n],
                                                       modal_force, axis=-1)

    if snr_db is not None:
        rng = np.random.default_rng(seed)
        power = np.mean(out ** 2, axis=1, keepdims=True)
        scale = np.sqrt(power / 10. ** (snr_db / 10.))
        out = out + scale * rng.standard_normal(out.shape)

    return [VibrationTrace(out[i], sample_rate_hz, 's{}'.format(i),
                           sensor_positions[i])
            for i in range(out.shape[0])]


def modal_response(beam, force, sensor_position_m, sample_rate_hz,
                   duration_s, attenuation=None, output='velocity'):
    """Noise-free response of one sensor to one load.

    See :func:`simulate_response` for the parameters.

    Returns
    -------
    trace : VibrationTrace
        The sensor output, zero before ``force.onset_s``.
    """
    return simulate_response(beam, [force], [sensor_position_m],
                             sample_rate_hz, duration_s,
                             attenuation=attenuation, output=output)[0]
