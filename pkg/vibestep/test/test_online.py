# -*- coding: utf-8 -*-
import unittest
from contextlib import redirect_stdout
from io import StringIO

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_equal
from numpy.testing import assert_raises

from vibestep.exceptions import (ConfigError, DataError,
                                 DimensionMismatchError, EmptyDataError)
from vibestep.identifier import (DPMM, NEW, PER_TRACE_MAJORITY, DpmmConfig,
                                 IdentityDecision, OnlineIdentifier,
                                 OnlineRunReport, identify_stream,
                                 majority_vote)
from vibestep.identifier.stream import build_report, stream_units


def decisions(*clusters):
    return [IdentityDecision(c, (0, 1, NEW), np.zeros(3), 0)
            for c in clusters]


def persons(rng, n, d=4, gap=30.):
    """Footsteps of three persons whose means lie on one line."""
    X, label = [], []
    for k in range(3):
        center = np.zeros(d)
        center[0] = gap * k
        X.append(rng.standard_normal((n, d)) + center)
        label += ['p{}'.format(k + 1)] * n
    return np.vstack(X), np.array(label)


class TestStream(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(21)

    def test_majority_vote(self):
        assert_equal(majority_vote(decisions(1, 0, 1)), 1)
        assert_equal(majority_vote(decisions(1, 0)), 0)
        assert_equal(majority_vote(decisions(NEW, NEW, 0)), NEW)
        assert_equal(majority_vote(decisions(NEW, 1)), 1)
        assert_equal(majority_vote(decisions(NEW)), NEW)

    def test_stream_units(self):
        assert_equal(stream_units(3, None, 'per-footstep'),
                     [(0, 1), (1, 2), (2, 3)])
        assert_equal(stream_units(4, ['a', 'a', 'b', 'a'],
                                  PER_TRACE_MAJORITY),
                     [(0, 2), (2, 3), (3, 4)])
        with assert_raises(ConfigError):
            stream_units(2, None, PER_TRACE_MAJORITY)
        with assert_raises(ConfigError):
            stream_units(2, None, 'per-walk')
        with assert_raises(DimensionMismatchError):
            stream_units(2, ['a'], PER_TRACE_MAJORITY)

    def test_single_person(self):
        X = self.rng.standard_normal((40, 3))
        model = DPMM()
        model.seed(X[:10])
        report = identify_stream(model, X[10:], ['p1'] * 30, known=['p1'])
        assert_equal(report.accuracy, 1.)
        assert_equal(report.n_clusters, 1)
        assert_equal(report.newcomer_log, [])
        assert_equal(report.n_samples, 30)

    def test_identify_stream(self):
        X, label = persons(self.rng, 12, d=2)
        model = DPMM()
        model.seed(X[:12])
        report = identify_stream(model, X, label, known=['p1'])
        assert_equal(report.accuracy, 1.)
        assert_equal(report.n_clusters, 3)
        assert_equal(report.mapping, {0: 'p1', 1: 'p2', 2: 'p3'})
        assert_equal([e['index'] for e in report.newcomer_log], [12, 24])
        assert_equal((report.newcomer_precision, report.newcomer_recall),
                     (1., 1.))
        assert_allclose(report.adjusted_rand, 1.)

        again = OnlineRunReport.from_dict(report.to_dict())
        assert_equal(again.mapping, report.mapping)
        assert_equal(again.predictions, report.predictions)
        assert_equal(again.cluster_counts, report.cluster_counts)

    def test_per_trace_majority(self):
        X, label = persons(self.rng, 12, d=2)
        walks = np.repeat(np.arange(12), 3)
        model = DPMM(DpmmConfig(assignment_mode=PER_TRACE_MAJORITY))
        model.seed(X[:12])
        report = identify_stream(model, X, label, groups=walks,
                                 known=['p1'])
        assert_equal(report.accuracy, 1.)
        # every walk carries a single identity
        predictions = np.array(report.predictions)
        for walk in range(12):
            assert_equal(len(set(predictions[walks == walk])), 1)
        assert_equal(len(report.newcomer_log), 2)

    def test_errors(self):
        model = DPMM()
        with assert_raises(EmptyDataError):
            identify_stream(model, np.empty((0, 2)), [])
        with assert_raises(DimensionMismatchError):
            identify_stream(model, np.zeros((3, 2)), ['a'])

    def test_verbose(self):
        X = self.rng.standard_normal((6, 2))
        model = DPMM()
        model.seed(X[:3])
        out = StringIO()
        with redirect_stdout(out):
            identify_stream(model, X[3:], ['p1'] * 3, verbose=2)
        assert ('Stream 00002/00003' in out.getvalue())
        assert ('Accuracy' in out.getvalue())

    def test_build_report(self):
        report = build_report(['a', 'a', 'b'], [0, 0, 0], [True, False,
                                                           False])
        assert_allclose(report.accuracy, 2. / 3.)
        assert_equal(report.cluster_counts, {0: 3})
        assert_equal((report.newcomer_precision, report.newcomer_recall),
                     (1., 0.5))


class TestOnlineIdentifier(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(4)
        self.X, self.label = persons(self.rng, 15)

    def test_run(self):
        identifier = OnlineIdentifier()
        report = identifier.run(self.X[10:], self.label[10:],
                                seed_X=self.X[:10], known=['p1'])
        assert_equal(report.accuracy, 1.)
        assert_equal(report.n_clusters, 3)
        # one refit per confirmed newcomer
        assert_equal(identifier.n_refits_, 2)
        assert_equal(report.n_refits, 2)
        assert_equal(identifier.transform_.dim_out, 2)
        assert_equal(identifier.model_.dim, 2)
        assert_equal(identifier.model_.n_samples, self.X.shape[0])
        assert ('OnlineIdentifier' in repr(identifier))

    def test_without_transform(self):
        identifier = OnlineIdentifier(transform=False)
        report = identifier.run(self.X[10:], self.label[10:],
                                seed_X=self.X[:10], known=['p1'])
        assert_equal(identifier.n_refits_, 0)
        assert (identifier.transform_ is None)
        assert_equal(identifier.model_.dim, 4)
        assert_equal(report.n_samples, 35)

    def test_replay_matches_log(self):
        identifier = OnlineIdentifier()
        identifier.run(self.X[10:], self.label[10:], seed_X=self.X[:10])
        model = identifier.model_
        X = np.array([x for x, _ in model.assignments_])
        log = [cid for _, cid in model.assignments_]
        again = DPMM.replay(X, log, model.config)
        for cid in model.cluster_ids:
            assert_equal(again.sufficient_statistics(cid)[1],
                         model.sufficient_statistics(cid)[1])

    def test_unseeded(self):
        identifier = OnlineIdentifier()
        cluster_ids, newcomer = identifier.partial_fit(self.X[:1])
        assert_equal(cluster_ids, [0])
        assert_equal(newcomer, [True])
        with assert_raises(DimensionMismatchError):
            identifier.partial_fit(np.zeros((1, 3)))

    def test_errors(self):
        with assert_raises(ValueError):
            OnlineIdentifier(confirm_min_count=0)
        with assert_raises(EmptyDataError):
            OnlineIdentifier().seed(np.empty((0, 4)))
        with assert_raises(EmptyDataError):
            OnlineIdentifier().run(np.empty((0, 4)), [])
        with assert_raises(DimensionMismatchError):
            OnlineIdentifier().run(self.X, self.label[:3])

    def test_failed_unit_leaves_state_unchanged(self):
        identifier = OnlineIdentifier(transform=False)
        identifier.seed(self.X[:10])
        identifier.partial_fit(self.X[10:12])
        counts = identifier.model_.counts()
        unit = np.vstack([self.X[12], np.full(4, np.nan)])
        with assert_raises(DataError):
            identifier.partial_fit(unit)
        assert_equal(identifier.model_.counts(), counts)
        assert_equal(identifier.model_.n_samples, 12)
        assert_equal(len(identifier._raw), 12)
        # the stream carries on from the restored state
        identifier.partial_fit(self.X[12:13])
        assert_equal(identifier.model_.n_samples, len(identifier._raw))

    def test_verbose(self):
        out = StringIO()
        with redirect_stdout(out):
            OnlineIdentifier(verbose=1).run(self.X[10:], self.label[10:],
                                            seed_X=self.X[:10])
        assert ('NEW' in out.getvalue())


if __name__ == '__main__':
    unittest.main()
