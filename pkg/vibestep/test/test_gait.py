# -*- coding: utf-8 -*-
import unittest

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_equal
from numpy.testing import assert_raises

from vibestep.data import FeatureVector
from vibestep.exceptions import ConfigError
from vibestep.simulator import (AttenuationModel, BeamModel, PersonGaitModel,
                                apply_attenuation, ball_drop_sequence,
                                band_transfer_ratio, footstep_sequence,
                                grid_locations, simulate_walk)


class TestGait(unittest.TestCase):

    def setUp(self):
        self.beam = BeamModel.preset('wood')
        self.gait = PersonGaitModel('p01')

    def test_population(self):
        persons = PersonGaitModel.population(10, seed=3)
        assert_equal([p.person_id for p in persons][:3],
                     ['p01', 'p02', 'p03'])
        assert_equal(len({p.pulse for p in persons}), 10)
        again = PersonGaitModel.population(10, seed=3)
        assert_equal(persons, again)
        quiet = PersonGaitModel.population(2, amplitude_jitter=0.)
        assert_equal(quiet[1].amplitude_jitter, 0.)

    def test_walk_determinism(self):
        a = simulate_walk(self.beam, self.gait, seed=5)
        b = simulate_walk(self.beam, self.gait, seed=5)
        c = simulate_walk(self.beam, self.gait, seed=6)
        for x, y in zip(a.traces, b.traces):
            assert_equal(x.samples, y.samples)
        assert (not np.array_equal(a.traces[0].samples,
                                   c.traces[0].samples))

    def test_walk_ground_truth(self):
        recording = simulate_walk(self.beam, self.gait, seed=1)
        assert_equal(recording.kind, 'walk')
        assert_equal(len(recording.traces), 4)
        assert_equal([t.sensor_position_m for t in recording.traces],
                     [1., 3., 5., 7.])
        # 0.6 m start, 0.7 m steps, 0.6 m margin on an 8 m beam
        assert_equal(len(recording.events), 10)
        locations = np.array([e.location_m for e in recording.events])
        assert_allclose(np.diff(locations), 0.7, atol=0.15)
        onsets = np.array([e.onset_s for e in recording.events])
        assert (np.all(np.diff(onsets) > 0))
        for event in recording.events:
            assert_equal(event.person_id, 'p01')
            event.check_fits(recording.traces[0].n_samples)

        short = simulate_walk(self.beam, self.gait, seed=1, n_steps=3)
        assert_equal(len(short.events), 3)
        with assert_raises(ConfigError):
            simulate_walk(self.beam, self.gait, n_steps=50)

    def test_ball_drop_sequence(self):
        locations = grid_locations(self.beam, 3)
        assert_allclose(locations, [2., 4., 6.])
        recordings = ball_drop_sequence(self.beam, locations, 2,
                                        sensors=[1., 5.], seed=0)
        assert_equal(len(recordings), 6)
        assert_equal([r.location_m for r in recordings],
                     [2., 2., 4., 4., 6., 6.])
        for recording in recordings:
            assert_equal(recording.kind, 'ball_drop')
            assert (recording.person_id is None)
            assert_equal(len(recording.events), 1)
            assert_equal(recording.events[0].kind, 'ball_drop')

        # same pulse, amplitudes within 0.1 percent
        a, b = recordings[0].traces[0], recordings[1].traces[0]
        ratio = np.abs(a.samples).max() / np.abs(b.samples).max()
        assert (abs(ratio - 1.) <= 0.0021)

        with assert_raises(ValueError):
            ball_drop_sequence(self.beam, locations, 2, jitter=0.01)
        with assert_raises(ConfigError):
            ball_drop_sequence(self.beam, [9.], 2)
        with assert_raises(ConfigError):
            ball_drop_sequence(self.beam, [], 2)

    def test_footstep_sequence(self):
        recordings = footstep_sequence(self.beam, self.gait, [2., 6.], 3,
                                       sensors=[3.], seed=0, n_jobs=2)
        assert_equal(len(recordings), 6)
        assert_equal(recordings[3].location_m, 6.)
        assert_equal(recordings[0].person_id, 'p01')
        again = footstep_sequence(self.beam, self.gait, [2., 6.], 3,
                                  sensors=[3.], seed=0)
        for x, y in zip(recordings, again):
            assert_equal(x.traces[0].samples, y.traces[0].samples)


class TestTransfer(unittest.TestCase):

    def test_apply_attenuation(self):
        feature = FeatureVector([1., 2., 4.], [10., 20., 40., 80.],
                                person_id='p01')
        model = AttenuationModel(1e-3)
        assert_allclose(apply_attenuation(feature, model, 0.).values,
                        feature.values)
        out = apply_attenuation(feature, model, 2.)
        omega = 2. * np.pi * np.array([15., 30., 60.])
        assert_allclose(out.values,
                        feature.values * np.exp(-1e-3 * omega))
        assert_equal(out.person_id, 'p01')
        # higher bands decay faster
        assert (np.all(np.diff(out.values / feature.values) < 0))
        with assert_raises(ValueError):
            apply_attenuation(feature, model, -1.)
        with assert_raises(ValueError):
            AttenuationModel(-1.)

    def test_presets(self):
        assert (AttenuationModel.preset('wood').alpha >
                AttenuationModel.preset('concrete').alpha)
        with assert_raises(ConfigError):
            AttenuationModel.preset('glass')

    def test_band_transfer_ratio(self):
        for material in ('wood', 'concrete'):
            beam = BeamModel.preset(material)
            ratio, cv = band_transfer_ratio(
                beam, 2., 5., 3., repeats=5, seed=0,
                attenuation=AttenuationModel.preset(material))
            finite = np.isfinite(cv)
            assert (finite.sum() > 0)
            assert (np.all(cv[finite] < 0.05))
            assert (np.all(ratio[np.isfinite(ratio)] > 0))


if __name__ == '__main__':
    unittest.main()
