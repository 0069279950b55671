# -*- coding: utf-8 -*-
import unittest

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_equal
from numpy.testing import assert_raises
from scipy.signal.windows import hann

from vibestep.data import (BALL_DROP, BY_LOCATION, BY_PERSON, WALK, Dataset,
                           DatasetManifest, FootstepEvent, Session,
                           StructureInfo, TraceRef, VibrationTrace)
from vibestep.exceptions import ConfigError, DataError, EmptyDataError
from vibestep.feature import (FeatureSpec, band_amplitudes,
                              default_band_edges, detect_footsteps,
                              extract_dataset, extract_feature_list,
                              extract_features, noise_floor,
                              one_sided_power)
from vibestep.simulator import (BeamModel, PersonGaitModel,
                                ball_drop_sequence, grid_locations,
                                simulate_walk)


def make_dataset(recordings, kind, structure_id='wood'):
    sessions, traces = [], {}
    for i, recording in enumerate(recordings):
        session_id = '{}-{}'.format(kind, i)
        refs = []
        for trace in recording.traces:
            refs.append(TraceRef('unused.csv', trace.sensor_id,
                                 trace.sensor_position_m,
                                 trace.sample_rate_hz))
            traces[(session_id, trace.sensor_id)] = trace
        location_id = None
        if recording.location_m is not None:
            location_id = 'x{:.3f}'.format(recording.location_m)
        sessions.append(Session(session_id, kind, structure_id, tuple(refs),
                                person_id=recording.person_id,
                                location_id=location_id,
                                location_m=recording.location_m,
                                timestamp=float(i)))
    manifest = DatasetManifest((StructureInfo(structure_id, 'wood'),),
                               tuple(sessions))
    return Dataset(manifest, traces)


class TestFeatureSpec(unittest.TestCase):

    def test_default_band_edges(self):
        edges = default_band_edges(2000.)
        assert_equal(len(edges), 17)
        assert_allclose(edges[0], 5.)
        assert_allclose(edges[-1], 800.)
        assert_allclose(np.diff(np.log(edges)), np.log(160.) / 16)
        with assert_raises(ConfigError):
            default_band_edges(10.)

    def test_validation(self):
        with assert_raises(ConfigError):
            FeatureSpec(window_s=0.)
        with assert_raises(ConfigError):
            FeatureSpec(refractory_s=-1.)
        with assert_raises(ConfigError):
            FeatureSpec(band_edges_hz=(5., 10.))
        with assert_raises(ConfigError):
            FeatureSpec(band_edges_hz=(5., 20., 10.))
        with assert_raises(ConfigError):
            FeatureSpec(band_edges_hz=(5., 100., 1500.)).resolve_edges(2000.)

    def test_serialization(self):
        spec = FeatureSpec(band_edges_hz=(5., 50., 500.), log_amplitude=True)
        assert_equal(FeatureSpec.from_dict(spec.to_dict()), spec)
        with assert_raises(ConfigError):
            FeatureSpec.from_dict({'window': 1.})


class TestDetection(unittest.TestCase):

    def setUp(self):
        self.spec = FeatureSpec()
        self.fs = 2000.

    def test_silence(self):
        trace = VibrationTrace(np.zeros(4000), self.fs, 's0')
        assert_equal(detect_footsteps(trace, self.spec), [])

    def test_refractory(self):
        samples = np.zeros(4000)
        samples[1000] = 1.
        samples[1200] = 0.8
        samples[3000] = 0.9
        events = detect_footsteps(VibrationTrace(samples, self.fs, 's0'),
                                  self.spec)
        assert_equal(len(events), 2)
        assert (abs(events[0].peak_index - 1000) < 40)
        assert (abs(events[1].peak_index - 3000) < 40)
        gaps = np.diff([e.peak_index for e in events])
        assert (np.all(gaps >= self.spec.refractory_s * self.fs))

    def test_walk(self):
        beam = BeamModel.preset('wood')
        recording = simulate_walk(beam, PersonGaitModel('p01'), seed=2,
                                  n_steps=3)
        truth = np.array([e.peak_index for e in recording.events])
        for trace in recording.traces:
            events = detect_footsteps(trace, self.spec)
            assert_equal(len(events), 3)
            peaks = np.array([e.peak_index for e in events])
            assert (np.all(np.diff(peaks) > 0))
            assert (np.all(np.abs(peaks - truth) / self.fs <=
                           self.spec.window_s / 2))
            floor = noise_floor(trace.samples)
            for event in events:
                assert (np.abs(trace.samples[event.start_index:
                                             event.end_index]).max() >
                        self.spec.detection_threshold_sigma * floor)

    def test_noise_floor(self):
        rng = np.random.default_rng(0)
        assert_allclose(noise_floor(rng.standard_normal(100000)), 1.,
                        rtol=0.02)


class TestExtraction(unittest.TestCase):

    def setUp(self):
        self.fs = 2000.
        self.rng = np.random.default_rng(11)
        self.spec = FeatureSpec()

    def test_parseval(self):
        segment = self.rng.standard_normal(1000)
        freqs, power = one_sided_power(segment, self.fs)
        assert_allclose(power.sum(), np.sum(segment ** 2), rtol=1e-12)
        freqs, power = one_sided_power(segment[:999], self.fs)
        assert_allclose(power.sum(), np.sum(segment[:999] ** 2),
                        rtol=1e-12)

    def test_band_energy(self):
        spec = FeatureSpec(band_edges_hz=(0., 100., 300., 1000.))
        samples = self.rng.standard_normal(3000)
        trace = VibrationTrace(samples, self.fs, 's0')
        event = FootstepEvent('s0', 1000, 1500, 2000)
        feature = extract_features(trace, event, spec)
        window = hann(1000, sym=False) * samples[1000:2000]
        assert_allclose(np.sum(feature.values ** 2), np.sum(window ** 2),
                        rtol=1e-9)

    def test_band_amplitudes_edges(self):
        freqs = np.array([0., 10., 20., 30.])
        power = np.array([1., 4., 9., 16.])
        assert_allclose(band_amplitudes(freqs, power, [10., 20., 30.]),
                        [2., 5.])

    def test_sinusoid(self):
        edges = default_band_edges(self.fs)
        center = np.sqrt(edges[10] * edges[11])
        t = np.arange(4000) / self.fs
        trace = VibrationTrace(np.sin(2 * np.pi * center * t), self.fs, 's0')
        feature = extract_features(trace, FootstepEvent('s0', 1500, 2000,
                                                        2500), self.spec)
        assert_equal(np.argmax(feature.values), 10)

    def test_homogeneity_and_shift(self):
        samples = self.rng.standard_normal(3000)
        event = FootstepEvent('s0', 1000, 1500, 2000)
        base = extract_features(VibrationTrace(samples, self.fs, 's0'),
                                event, self.spec)
        scaled = extract_features(VibrationTrace(3.5 * samples, self.fs,
                                                 's0'), event, self.spec)
        assert_allclose(scaled.values, 3.5 * base.values, rtol=1e-12)

        shifted = extract_features(
            VibrationTrace(np.concatenate([np.zeros(123), samples]),
                           self.fs, 's0'),
            FootstepEvent('s0', 1123, 1623, 2123), self.spec)
        assert_allclose(shifted.values, base.values, rtol=1e-12)

    def test_edge_padding(self):
        samples = self.rng.standard_normal(600)
        trace = VibrationTrace(samples, self.fs, 's0')
        feature = extract_features(trace, FootstepEvent('s0', 0, 20, 520),
                                   self.spec)
        assert (np.all(np.isfinite(feature.values)))
        assert (np.all(feature.values >= 0))

    def test_flags(self):
        samples = self.rng.standard_normal(3000)
        trace = VibrationTrace(samples, self.fs, 's0')
        event = FootstepEvent('s0', 1000, 1500, 2000)
        normalized = extract_features(trace, event,
                                      FeatureSpec(normalize=True))
        assert_allclose(np.linalg.norm(normalized.values), 1.)
        raw = extract_features(trace, event, self.spec)
        logged = extract_features(trace, event,
                                  FeatureSpec(log_amplitude=True))
        assert_allclose(logged.values, np.log1p(raw.values / 1e-6))

    def test_labels(self):
        trace = VibrationTrace(self.rng.standard_normal(3000), self.fs, 's2')
        feature = extract_features(trace, FootstepEvent('s2', 1000, 1500,
                                                        2000),
                                   self.spec, person_id='p01',
                                   session_id='w0')
        assert_equal(feature.sensor_id, 's2')
        assert_equal(feature.person_id, 'p01')
        assert_allclose(feature.time_s, 0.75)

    def test_nyquist(self):
        trace = VibrationTrace(np.ones(3000), 1000., 's0')
        with assert_raises(ConfigError):
            extract_features(trace, FootstepEvent('s0', 1000, 1500, 2000),
                             FeatureSpec(band_edges_hz=(5., 100., 800.)))


class TestExtractDataset(unittest.TestCase):

    def setUp(self):
        self.beam = BeamModel.preset('wood')
        self.spec = FeatureSpec()

    def test_ball_drop_grid(self):
        recordings = ball_drop_sequence(self.beam,
                                        grid_locations(self.beam, 9), 2,
                                        sensors=[3.], seed=0)
        dataset = make_dataset(recordings, BALL_DROP)
        grouped = extract_dataset(dataset, self.spec, BY_LOCATION)
        assert_equal(grouped.n_groups, 9)
        assert_equal(grouped.counts, [2] * 9)
        assert_equal(grouped.dim, 16)

    def test_two_person_walks(self):
        recordings = [simulate_walk(self.beam, PersonGaitModel(pid),
                                    sensors=[2., 6.], seed=i, n_steps=3)
                      for i, pid in enumerate(['p01', 'p02', 'p02'])]
        dataset = make_dataset(recordings, WALK)
        grouped = extract_dataset(dataset, self.spec, BY_PERSON)
        assert_equal(grouped.keys, ('p01', 'p02'))
        assert_equal(grouped.counts, [6, 12])

        features = extract_feature_list(dataset, self.spec,
                                        sensor_ids=['s1'], n_jobs=2)
        assert_equal(len(features), 9)
        assert_equal({f.sensor_id for f in features}, {'s1'})
        assert_equal([f.session_id for f in features][:3], ['walk-0'] * 3)

        # walks carry no excitation location
        with assert_raises(DataError):
            extract_dataset(dataset, self.spec, BY_LOCATION)

    def test_no_events(self):
        manifest = DatasetManifest(
            (StructureInfo('wood', 'wood'),),
            (Session('w0', WALK, 'wood',
                     (TraceRef('unused.csv', 's0', 1., 2000.),),
                     person_id='p01'),))
        dataset = Dataset(manifest, {('w0', 's0'): VibrationTrace(
            np.zeros(2000), 2000., 's0')})
        with assert_raises(EmptyDataError) as context:
            extract_dataset(dataset, self.spec)
        assert ('no events detected' in str(context.exception))


if __name__ == '__main__':
    unittest.main()
