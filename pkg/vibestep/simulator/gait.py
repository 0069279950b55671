# -*- coding: utf-8 -*-
"""Synthetic walkers, walks, fixed-location footsteps and ball drops."""
# License: BSD 2 clause

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from .beam import BALL_DROP, FOOTSTEP, ForceEvent, Pulse, simulate_response
from ..data import FootstepEvent, VibrationTrace
from ..exceptions import ConfigError
from ..utils import check_parameter, get_n_jobs

DEFAULT_SAMPLE_RATE_HZ = 2000.
DEFAULT_SENSORS_M = (1., 3., 5., 7.)


@dataclass(frozen=True)
class PersonGaitModel:
    """Walking signature of one synthetic person.

    Each step lands ``step_length_m`` after the previous one, every
    ``1 / cadence_hz`` seconds, with a force pulse of the person's shape.
    Gaussian jitter perturbs each step independently.

    Parameters
    ----------
    person_id : str
        Ground-truth identity.
    step_length_m : float, optional
        Distance between consecutive steps. Default: ``0.7``.
    cadence_hz : float, optional
        Steps per second. Default: ``1.8``.
    base_amplitude_N : float, optional
        Peak heel-strike force. Default: ``700``.
    pulse : Pulse, optional
        Nominal footstep pulse. Default: 60 ms heel lobe with a push-off
        lobe of relative height 0.3.
    amplitude_jitter : float, optional
        Relative standard deviation of the peak force. Default: ``0.05``.
    timing_jitter_s : float, optional
        Standard deviation of the step onset. Default: ``0.01``.
    location_jitter_m : float, optional
        Standard deviation of the step location. Default: ``0.02``.
    duration_jitter : float, optional
        Relative standard deviation of the pulse length. Default: ``0.02``.
    start_m : float, optional
        Nominal location of the first step. Default: ``0.6``.
    """

    person_id: str
    step_length_m: float = 0.7
    cadence_hz: float = 1.8
    base_amplitude_N: float = 700.
    pulse: Pulse = field(default_factory=lambda: Pulse(0.06, 0.3, 0.5))
    amplitude_jitter: float = 0.05
    timing_jitter_s: float = 0.01
    location_jitter_m: float = 0.02
    duration_jitter: float = 0.02
    start_m: float = 0.6

    def __post_init__(self):
        object.__setattr__(self, 'person_id', str(self.person_id))
        for name in ('step_length_m', 'cadence_hz', 'base_amplitude_N'):
            check_parameter(getattr(self, name), low=0, param_name=name)
        for name in ('amplitude_jitter', 'timing_jitter_s',
                     'location_jitter_m', 'duration_jitter', 'start_m'):
            check_parameter(getattr(self, name), low=0, param_name=name,
                            include_left=True)

    @classmethod
    def population(cls, n_persons, seed=0, **kwargs):
        """A deterministic population with spread-out pulse signatures.

        Pulse lengths are evenly spaced over 40-80 ms and push-off ratios
        are interleaved over [0.2, 0.6) so that neighbours in one
        parameter differ in the other. Step length and cadence receive a
        small seeded perturbation.

        Parameters
        ----------
        n_persons : int
            Population size, ids ``p01, p02, ...``.
        seed : int, optional
            Seed of the step length and cadence perturbation.
        **kwargs
            Overrides applied to every person (e.g. jitter scales).
        """
        check_parameter(n_persons, low=1, param_name='n_persons',
                        include_left=True)
        rng = np.random.default_rng(seed)
        durations = np.linspace(0.04, 0.08, n_persons) if n_persons > 1 \
            else np.array([0.06])
        persons = []
        for k in range(n_persons):
            toe_ratio = 0.2 + 0.4 * ((k * 7) % n_persons) / n_persons
            params = dict(step_length_m=0.7 + 0.05 * rng.uniform(-1, 1),
                          cadence_hz=1.8 + 0.1 * rng.uniform(-1, 1),
                          pulse=Pulse(float(durations[k]), toe_ratio, 0.5))
            params.update(kwargs)
            persons.append(cls('p{:02d}'.format(k + 1), **params))
        return persons

    def jittered_pulse(self, z):
        duration = self.pulse.duration_s * max(
            1. + self.duration_jitter * z, 0.25)
        return replace(self.pulse, duration_s=duration)

    def jittered_amplitude(self, z):
        return self.base_amplitude_N * max(1. + self.amplitude_jitter * z,
                                           0.1)


@dataclass(frozen=True, eq=False)
class Recording:
    """Simulated multi-sensor recording with its ground truth.

    Attributes
    ----------
    traces : tuple of VibrationTrace
        One trace per sensor.
    events : tuple of FootstepEvent
        Ground-truth loads in onset order.
    kind : str
        ``'walk'``, ``'footstep'`` or ``'ball_drop'``.
    person_id : str or None
        Walker, ``None`` for ball drops.
    location_m : float or None
        Excitation location of fixed-location recordings.
    """

    traces: Tuple[VibrationTrace, ...]
    events: Tuple[FootstepEvent, ...]
    kind: str
    person_id: Optional[str] = None
    location_m: Optional[float] = None


def _ground_truth(forces, sample_rate_hz, n_samples, trace_ref, person_id):
    events = []
    for force in forces:
        start = int(np.ceil(force.onset_s * sample_rate_hz))
        span = max(int(round(force.pulse.support_s * sample_rate_hz)), 2)
        peak = start + max(int(round(0.5 * force.pulse.duration_s *
                                     sample_rate_hz)), 1)
        end = min(start + span + 1, n_samples)
        events.append(FootstepEvent(trace_ref, start, min(peak, end - 1),
                                    end, person_id=person_id,
                                    location_m=force.location_m,
                                    onset_s=force.onset_s, kind=force.kind))
    return tuple(events)


def walk_forces(beam, gait, rng, n_steps=None, lead_s=0.5, margin_m=0.6):
    """Footstep loads of one walk across the beam.

    Steps are placed from ``gait.start_m`` onwards while the nominal
    location stays below ``L - margin_m``; ``n_steps`` truncates the walk
    further. Jittered locations are clipped into the beam.
    """
    n_fit = int(np.floor((beam.L - margin_m - gait.start_m) /
                         gait.step_length_m + 1e-9)) + 1
    if gait.start_m <= 0 or n_fit < 1:
        raise ConfigError('gait of {} places every step off the beam'.format(
            gait.person_id))
    if n_steps is not None:
        check_parameter(n_steps, low=1, param_name='n_steps',
                        include_left=True)
        if n_steps > n_fit:
            raise ConfigError('only {} steps of {} fit on the beam, {} '
                              'requested'.format(n_fit, gait.person_id,
                                                 n_steps))
        n_fit = n_steps

    z = rng.standard_normal((n_fit, 4))
    eps = 1e-3 * beam.L
    forces = []
    for k in range(n_fit):
        location = gait.start_m + k * gait.step_length_m + \
            gait.location_jitter_m * z[k, 0]
        onset = lead_s + k / gait.cadence_hz + gait.timing_jitter_s * z[k, 1]
        forces.append(ForceEvent(
            FOOTSTEP, float(np.clip(location, eps, beam.L - eps)),
            gait.jittered_amplitude(z[k, 2]), gait.jittered_pulse(z[k, 3]),
            max(onset, 0.)))
    return forces


def simulate_walk(beam, gait, sensors=DEFAULT_SENSORS_M, seed=0,
                  sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ, n_steps=None,
                  attenuation=None, output='velocity', snr_db=None,
                  lead_s=0.5, tail_s=0.8, trace_ref='walk'):
    """Simulate one person walking across the beam.

    Parameters
    ----------
    beam : BeamModel
        The structure.
    gait : PersonGaitModel
        The walker.
    sensors : list of float, optional
        Sensor positions. Default: 1, 3, 5 and 7 m.
    seed : int, optional
        Seed of the gait jitter and of the noise.
    sample_rate_hz : float, optional
        Default: ``2000``.
    n_steps : int, optional
        Number of steps, default all that fit on the beam.
    attenuation : AttenuationModel, optional
        Propagation decay between load and sensor.
    output : str, optional
        ``'velocity'`` or ``'displacement'``.
    snr_db : float, optional
        Additive white noise level, ``None`` for noise-free traces.
    lead_s, tail_s : float, optional
        Silence before the first step and after the last one.
    trace_ref : str, optional
        Reference written into the ground-truth events.

    Returns
    -------
    recording : Recording
        The traces and one ground-truth event per step.
    """
    rng = np.random.default_rng(seed)
    forces = walk_forces(beam, gait, rng, n_steps=n_steps, lead_s=lead_s)
    duration_s = max(f.onset_s + f.pulse.support_s for f in forces) + tail_s
    traces = simulate_response(beam, forces, sensors, sample_rate_hz,
                               duration_s, attenuation=attenuation,
                               output=output, snr_db=snr_db,
                               seed=rng.integers(2 ** 31))
    events = _ground_truth(forces, sample_rate_hz, traces[0].n_samples,
                           trace_ref, gait.person_id)
    return Recording(tuple(traces), events, 'walk', gait.person_id)


def _single_load(beam, force, nominal_m, sensors, sample_rate_hz,
                 duration_s, attenuation, output, snr_db, noise_seed, kind,
                 person_id, trace_ref):
    traces = simulate_response(beam, [force], sensors, sample_rate_hz,
                               duration_s, attenuation=attenuation,
                               output=output, snr_db=snr_db, seed=noise_seed)
    events = _ground_truth([force], sample_rate_hz, traces[0].n_samples,
                           trace_ref, person_id)
    return Recording(tuple(traces), events, kind, person_id, nominal_m)


def _fixed_location_runs(beam, forces, nominal_m, sensors, sample_rate_hz,
                         duration_s, attenuation, output, snr_db,
                         noise_seeds, kind, person_id, n_jobs):
    return Parallel(n_jobs=get_n_jobs(n_jobs), prefer='threads')(
        delayed(_single_load)(beam, force, x, sensors, sample_rate_hz,
                              duration_s, attenuation, output, snr_db,
                              int(noise_seed), kind, person_id,
                              '{}{:03d}'.format(kind, i))
        for i, (force, x, noise_seed) in enumerate(
            zip(forces, nominal_m, noise_seeds)))


def ball_drop_sequence(beam, locations, repeats, sensors=DEFAULT_SENSORS_M,
                       seed=0, sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ,
                       amplitude_N=50., duration_s=0.005, jitter=0.001,
                       attenuation=None, output='velocity', snr_db=None,
                       onset_s=0.25, record_s=1., n_jobs=None):
    """Repeated ball drops at fixed locations.

    Every drop uses the same pulse; only its peak force varies, uniformly
    within ``+/- jitter`` (relative). Each drop is its own recording.

    Parameters
    ----------
    beam : BeamModel
        The structure.
    locations : list of float
        Drop locations in (0, L).
    repeats : int
        Drops per location.
    sensors : list of float, optional
        Sensor positions.
    seed : int, optional
        Seed of the amplitude jitter and the noise.
    amplitude_N : float, optional
        Nominal peak force. Default: ``50``.
    duration_s : float, optional
        Pulse length. Default: 5 ms.
    jitter : float, optional
        Relative amplitude jitter in [0, 0.001]. Default: ``0.001``.
    onset_s, record_s : float, optional
        Drop time and length of each recording.
    n_jobs : int, optional
        Worker threads, capped by ``VIBESTEP_THREADS``.

    Returns
    -------
    recordings : list of Recording
        ``len(locations) * repeats`` recordings, location-major.
    """
    locations = [float(x) for x in locations]
    if not locations:
        raise ConfigError('ball_drop_sequence needs at least one location')
    check_parameter(repeats, low=1, param_name='repeats', include_left=True)
    check_parameter(jitter, low=0, high=0.001, param_name='jitter',
                    include_left=True, include_right=True)
    for x in locations:
        beam.check_position(x, 'drop location')

    rng = np.random.default_rng(seed)
    n = len(locations) * repeats
    scales = 1. + jitter * rng.uniform(-1., 1., size=n)
    noise_seeds = rng.integers(2 ** 31, size=n)
    pulse = Pulse(duration_s)
    forces = [ForceEvent(BALL_DROP, x, amplitude_N * scales[i * repeats + r],
                         pulse, onset_s)
              for i, x in enumerate(locations) for r in range(repeats)]
    nominal = [x for x in locations for _ in range(repeats)]
    return _fixed_location_runs(beam, forces, nominal, sensors,
                                sample_rate_hz, record_s, attenuation,
                                output, snr_db, noise_seeds, BALL_DROP, None,
                                n_jobs)


def footstep_sequence(beam, gait, locations, repeats,
                      sensors=DEFAULT_SENSORS_M, seed=0,
                      sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ,
                      attenuation=None, output='velocity', snr_db=None,
                      onset_s=0.25, record_s=1., n_jobs=None):
    """Single footsteps of one person repeated at fixed locations.

    The footstep counterpart of :func:`ball_drop_sequence`: the person's
    gait jitter (force, pulse length, placement) varies every step.

    Returns
    -------
    recordings : list of Recording
        ``len(locations) * repeats`` recordings, location-major.
    """
    locations = [float(x) for x in locations]
    if not locations:
        raise ConfigError('footstep_sequence needs at least one location')
    check_parameter(repeats, low=1, param_name='repeats', include_left=True)
    for x in locations:
        beam.check_position(x, 'footstep location')

    rng = np.random.default_rng(seed)
    n = len(locations) * repeats
    z = rng.standard_normal((n, 3))
    noise_seeds = rng.integers(2 ** 31, size=n)
    eps = 1e-3 * beam.L
    forces = []
    for i, x in enumerate(locations):
        for r in range(repeats):
            k = i * repeats + r
            location = np.clip(x + gait.location_jitter_m * z[k, 0], eps,
                               beam.L - eps)
            forces.append(ForceEvent(FOOTSTEP, float(location),
                                     gait.jittered_amplitude(z[k, 1]),
                                     gait.jittered_pulse(z[k, 2]), onset_s))
    nominal = [x for x in locations for _ in range(repeats)]
    return _fixed_location_runs(beam, forces, nominal, sensors,
                                sample_rate_hz, record_s, attenuation,
                                output, snr_db, noise_seeds, FOOTSTEP,
                                gait.person_id, n_jobs)


def grid_locations(beam, n_locations=9):
    """Evenly spaced excitation grid strictly inside the span."""
    check_parameter(n_locations, low=1, param_name='n_locations',
                    include_left=True)
    return list(np.linspace(0, beam.L, n_locations + 2)[1:-1])
