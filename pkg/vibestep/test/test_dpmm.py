# -*- coding: utf-8 -*-
import unittest

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_equal
from numpy.testing import assert_raises
from scipy import integrate, stats
from scipy.special import logsumexp

from vibestep.exceptions import (ConfigError, DataError,
                                 DimensionMismatchError, StaleDecisionError)
from vibestep.identifier import (DPMM, NEW, DpmmConfig, crp_log_weights,
                                 niw_posterior, predictive_distribution,
                                 student_t_params)


def blobs(rng, centers, n, scale=1.):
    return [scale * rng.standard_normal((n, len(c))) + np.asarray(c)
            for c in centers]


class TestFunctional(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.m0 = np.zeros(2)
        self.Psi0 = np.array([[2., 0.3], [0.3, 1.]])

    def test_niw_posterior(self):
        X = self.rng.standard_normal((7, 2)) + [1., -2.]
        m_n, kappa_n, nu_n, Psi_n = niw_posterior(
            self.m0, 2., 5., self.Psi0, 7, X.sum(axis=0), X.T @ X)
        xbar = X.mean(axis=0)
        scatter = (X - xbar).T @ (X - xbar)
        assert_allclose(m_n, (2. * self.m0 + 7 * xbar) / 9.)
        assert_equal((kappa_n, nu_n), (9., 12.))
        assert_allclose(Psi_n, self.Psi0 + scatter +
                        14. / 9. * np.outer(xbar - self.m0, xbar - self.m0),
                        rtol=1e-12)
        assert_equal(Psi_n, Psi_n.T)

        prior = niw_posterior(self.m0, 2., 5., self.Psi0, 0, np.zeros(2),
                              np.zeros((2, 2)))
        assert (prior[0] is self.m0)
        assert_equal(prior[1:3], (2., 5.))

    def test_student_t_params(self):
        loc, shape, df = student_t_params(np.array([1.]), 3., 4.,
                                          np.array([[2.]]))
        assert_equal(df, 4.)
        assert_allclose(shape, [[2. * 4. / (3. * 4.)]])
        dist = predictive_distribution(np.array([1.]), 3., 4.,
                                       np.array([[2.]]), 0, np.zeros(1),
                                       np.zeros((1, 1)))
        for x in (-3., 0.5, 4.):
            assert_allclose(dist.logpdf(np.array([x])),
                            stats.t.logpdf(x, df, loc=1.,
                                           scale=np.sqrt(shape[0, 0])),
                            rtol=1e-10)

    def test_predictive_integrates_to_one(self):
        X = self.rng.standard_normal((5, 1))
        for n in (0, 1, 5):
            dist = predictive_distribution(np.zeros(1), 1., 3.,
                                           np.array([[1.5]]), n,
                                           X[:n].sum(axis=0),
                                           X[:n].T @ X[:n])
            total, _ = integrate.quad(
                lambda t: float(np.exp(dist.logpdf(np.array([t])))),
                -np.inf, np.inf)
            assert_allclose(total, 1., atol=1e-6)

    def test_predictive_falls_off_from_mean(self):
        X = self.rng.standard_normal((10, 1)) + 5.
        dist = predictive_distribution(np.zeros(1), 0.01, 3.,
                                       np.array([[1.]]), 10,
                                       X.sum(axis=0), X.T @ X)
        loc = student_t_params(*niw_posterior(
            np.zeros(1), 0.01, 3., np.array([[1.]]), 10, X.sum(axis=0),
            X.T @ X))[0][0]
        offsets = np.linspace(0., 20., 41)
        right = [float(dist.logpdf(np.array([loc + t]))) for t in offsets]
        left = [float(dist.logpdf(np.array([loc - t]))) for t in offsets]
        assert (np.all(np.diff(right) < 0))
        assert (np.all(np.diff(left) < 0))
        assert_allclose(left, right, rtol=1e-10)

    def test_crp_log_weights(self):
        weights = crp_log_weights([3, 1], 0.5)
        assert_allclose(weights, np.log([3., 1., 0.5]))
        assert_allclose(np.exp(weights - logsumexp(weights)),
                        [3. / 4.5, 1. / 4.5, 0.5 / 4.5])
        assert_allclose(crp_log_weights([], 2.), [np.log(2.)])


class TestDpmmConfig(unittest.TestCase):

    def test_validation(self):
        with assert_raises(ConfigError):
            DpmmConfig(alpha=0.)
        with assert_raises(ConfigError):
            DpmmConfig(kappa0=-1.)
        with assert_raises(ConfigError):
            DpmmConfig(assignment_mode='per-walk')
        with assert_raises(ConfigError):
            DpmmConfig(Psi0=[[1., 2.], [2., 1.]])
        with assert_raises(ConfigError):
            DpmmConfig(Psi0=[[1., 0.5], [0., 1.]])
        with assert_raises(ConfigError):
            DpmmConfig(m0=[0., 0., 0.], Psi0=np.eye(2))
        with assert_raises(ConfigError):
            DpmmConfig(Psi0=np.eye(3), nu0=2.)
        with assert_raises(ConfigError):
            DpmmConfig.from_dict({'beta': 1.})

    def test_resolve(self):
        X = np.array([[0., 0.], [2., 0.], [0., 2.]])
        config = DpmmConfig().resolve(X)
        assert (config.is_resolved)
        assert_allclose(config.m0, [2. / 3., 2. / 3.])
        # squared distances 4, 4, 8; the median is not split per dimension
        assert_allclose(config.Psi0, 4. * np.eye(2))
        assert_equal(config.nu0, 4.)
        assert_equal(config.kappa0, 0.01)

        blind = DpmmConfig().resolve(dim=3)
        assert_equal(blind.m0, np.zeros(3))
        assert_equal(blind.Psi0, np.eye(3))
        with assert_raises(ConfigError):
            DpmmConfig().resolve()
        with assert_raises(DimensionMismatchError):
            DpmmConfig(m0=[0., 0.]).resolve(dim=3)

        again = DpmmConfig.from_dict(config.to_dict())
        assert_equal(again.Psi0, config.Psi0)
        assert_equal(again.m0, config.m0)


class TestDPMM(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(8)
        self.groups = blobs(self.rng, [[0., 0.], [30., 0.], [0., 30.]], 15)

    def test_seed(self):
        model = DPMM()
        cluster_id = model.seed(self.groups[0])
        assert_equal(cluster_id, 0)
        assert_equal(model.n_clusters, 1)
        assert_equal(model.counts(), {0: 15})
        assert_equal(model.version_, 15)
        assert (model.config.is_resolved)
        n, s, ss = model.sufficient_statistics(0)
        assert_allclose(s, self.groups[0].sum(axis=0))
        assert_allclose(ss, self.groups[0].T @ self.groups[0])
        with assert_raises(DataError):
            model.sufficient_statistics(5)
        with assert_raises(DataError):
            DPMM().seed(np.empty((0, 2)))

    def test_predict_is_read_only(self):
        model = DPMM()
        model.seed(self.groups[0])
        before = model.sufficient_statistics(0)
        decision = model.predict(self.groups[1][0])
        assert_equal(model.version_, 15)
        assert_equal(model.sufficient_statistics(0)[1], before[1])
        assert_equal(decision.candidates, (0, NEW))
        assert_equal(decision.model_version, 15)
        assert_allclose(decision.posterior.sum(), 1., atol=1e-10)

    def test_posterior_normalized(self):
        model = DPMM(DpmmConfig(alpha=2.))
        model.seed(self.groups[0])
        for x in np.vstack(self.groups[1:]):
            model.update(x, model.predict(x))
        for x in self.rng.standard_normal((20, 2)) * 20.:
            decision = model.predict(x)
            assert_allclose(np.exp(decision.log_posterior).sum(), 1.,
                            atol=1e-10)
            assert_equal(len(decision.candidates), model.n_clusters + 1)

    def test_well_separated_stream(self):
        model = DPMM()
        model.seed(self.groups[0])
        truth, pred = [], []
        for k, group in enumerate(self.groups):
            for x in group:
                decision = model.predict(x)
                model.update(x, decision)
                truth.append(k)
                pred.append(model.assignments_[-1][1])
        assert_equal(model.n_clusters, 3)
        assert_equal(pred, truth)

    def test_newcomer_probability_grows_with_alpha(self):
        x = self.groups[0].mean(axis=0) + [4., 0.]
        p_new = []
        for alpha in (1e-3, 1., 1e3):
            model = DPMM(DpmmConfig(alpha=alpha))
            model.seed(self.groups[0])
            p_new.append(model.predict(x).posterior_of(NEW))
        assert (p_new[0] < p_new[1] < p_new[2])

    def test_collinear_newcomers_stay_apart(self):
        # both newcomers lie on the far side of the seed along one axis
        groups = blobs(self.rng, [[0., 0.], [30., 0.], [60., 0.]], 15)
        model = DPMM()
        model.seed(groups[0])
        pred = []
        for group in groups[1:]:
            for x in group:
                model.update(x, model.predict(x))
                pred.append(model.assignments_[-1][1])
        assert_equal(model.n_clusters, 3)
        assert_equal(pred, [1] * 15 + [2] * 15)

    def test_newcomer_then_known(self):
        model = DPMM()
        model.seed(self.groups[0])
        decision = model.predict(self.groups[1][0])
        assert (decision.is_newcomer)
        model.update(self.groups[1][0], decision)
        assert_equal(model.cluster_ids, (0, 1))
        decision = model.predict(self.groups[0].mean(axis=0))
        assert_equal(decision.assigned_cluster, 0)
        assert (decision.posterior_of(0) > decision.posterior_of(1))
        assert (decision.posterior_of(0) > decision.posterior_of(NEW))

    def test_stale_decision(self):
        model = DPMM()
        model.seed(self.groups[0])
        decision = model.predict(self.groups[0][0])
        model.update(self.groups[0][1], model.predict(self.groups[0][1]))
        with assert_raises(StaleDecisionError):
            model.update(self.groups[0][0], decision)

    def test_invalid_input(self):
        model = DPMM()
        model.seed(self.groups[0])
        with assert_raises(DimensionMismatchError):
            model.predict(np.zeros(3))
        with assert_raises(DimensionMismatchError):
            model.predict(np.zeros((2, 2)))
        with assert_raises(DataError):
            model.predict(np.array([np.nan, 0.]))
        with assert_raises(DataError):
            model.assign(np.zeros(2), 7)

    def test_unseeded(self):
        model = DPMM()
        x = self.groups[0][0]
        decision = model.predict(x)
        assert_equal(decision.assigned_cluster, NEW)
        assert_equal(decision.candidates, (NEW,))
        model.update(x, decision)
        assert_equal(model.config.Psi0, np.eye(2))
        assert_allclose(model.posterior_predictive(x),
                        model.posterior_predictive(x, NEW))

    def test_replay(self):
        model = DPMM()
        model.seed(self.groups[0][:4])
        for x in np.vstack(self.groups):
            model.update(x, model.predict(x))
        X = np.array([x for x, _ in model.assignments_])
        log = [cid for _, cid in model.assignments_]

        again = DPMM.replay(X, log, model.config)
        for cid in model.cluster_ids:
            n, s, ss = model.sufficient_statistics(cid)
            n2, s2, ss2 = again.sufficient_statistics(cid)
            assert_equal(n2, n)
            assert_equal(s2, s)
            assert_equal(ss2, ss)
        point = self.rng.standard_normal(2)
        assert_equal(again.predict(point).log_posterior,
                     model.predict(point).log_posterior)

        # an unresolved prior is rebuilt from the first cluster
        rebuilt = DPMM.replay(X, log)
        assert (rebuilt.config.is_resolved)
        assert_equal(rebuilt.counts(), model.counts())

        with assert_raises(DataError):
            DPMM.replay(X[:2], [1, 0])
        with assert_raises(DimensionMismatchError):
            DPMM.replay(X[:2], [0])

    def test_checkpoint(self):
        model = DPMM()
        model.seed(self.groups[0][:4])
        for x in self.groups[1]:
            model.update(x, model.predict(x))
        payload = model.to_dict()
        restored = DPMM.from_dict(payload)
        assert_equal(restored.counts(), model.counts())
        assert_equal(restored.version_, model.version_)
        assert ('DPMM' in repr(restored))

        payload['clusters'][0]['n'] += 1
        with assert_raises(DataError):
            DPMM.from_dict(payload)
        with assert_raises(DataError):
            DPMM.from_dict({'config': {}})

        empty = DPMM.from_dict(DPMM(DpmmConfig(alpha=2.)).to_dict())
        assert_equal(empty.n_clusters, 0)
        assert_equal(empty.config.alpha, 2.)


if __name__ == '__main__':
    unittest.main()
