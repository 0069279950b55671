# -*- coding: utf-8 -*-
"""Dirichlet-process Gaussian mixture for open-set identification.

Every identity is a cluster with a Normal-Inverse-Wishart posterior.
A footstep ``x`` is scored against cluster ``c`` with
``n_c * t_c(x)`` and against a newcomer with ``alpha * t_0(x)``, where
``t`` are the Student-t posterior (prior) predictives, and is assigned
greedily to the best score.
"""
# License: BSD 2 clause

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from .functional import crp_log_weights, log_normalize, \
    predictive_distribution
from ..exceptions import (ConfigError, DataError, DimensionMismatchError,
                          StaleDecisionError)
from ..utils import check_parameter, repr_estimator

NEW = 'new'
PER_FOOTSTEP = 'per-footstep'
PER_TRACE_MAJORITY = 'per-trace-majority'
ASSIGNMENT_MODES = (PER_FOOTSTEP, PER_TRACE_MAJORITY)


def _as_array(value, ndim):
    if value is None:
        return None
    array = np.array(value, dtype=np.float64)
    if array.ndim != ndim:
        raise ConfigError('expected a {}-D array, got shape {}'.format(
            ndim, array.shape))
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DpmmConfig:
    """Concentration, base measure and assignment mode.

    Hyperparameters left as ``None`` are derived from seed data by
    :meth:`resolve`.

    Parameters
    ----------
    alpha : float, optional
        Concentration parameter. Default: ``1``.
    m0 : array-like, optional
        Prior mean. Default: mean of the seed data, else zero.
    kappa0 : float, optional
        Prior mean strength. Default: ``0.01``.
    nu0 : float, optional
        Prior degrees of freedom, ``> p - 1``. Default: ``p + 2``.
    Psi0 : array-like, optional
        Prior scatter, SPD. Default: identity times the median pairwise
        squared distance of the seed data.
    assignment_mode : str, optional
        ``'per-footstep'`` (default) or ``'per-trace-majority'``.
    """

    alpha: float = 1.
    m0: Optional[np.ndarray] = None
    kappa0: float = 0.01
    nu0: Optional[float] = None
    Psi0: Optional[np.ndarray] = None
    assignment_mode: str = PER_FOOTSTEP

    def __post_init__(self):
        try:
            check_parameter(self.alpha, low=0, param_name='alpha')
            check_parameter(self.kappa0, low=0, param_name='kappa0')
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))
        if self.assignment_mode not in ASSIGNMENT_MODES:
            raise ConfigError('assignment_mode must be one of {}, got {!r}'
                              .format(ASSIGNMENT_MODES, self.assignment_mode))
        m0 = _as_array(self.m0, 1)
        Psi0 = _as_array(self.Psi0, 2)
        object.__setattr__(self, 'm0', m0)
        object.__setattr__(self, 'Psi0', Psi0)
        dims = {a.shape[0] for a in (m0, Psi0) if a is not None}
        if Psi0 is not None and Psi0.shape[0] != Psi0.shape[1]:
            raise ConfigError('Psi0 must be square')
        if len(dims) > 1:
            raise ConfigError('m0 and Psi0 dimensions differ')
        if Psi0 is not None:
            if not np.allclose(Psi0, Psi0.T):
                raise ConfigError('Psi0 must be symmetric')
            try:
                np.linalg.cholesky(Psi0)
            except np.linalg.LinAlgError:
                raise ConfigError('Psi0 must be positive definite')
        if self.nu0 is not None:
            object.__setattr__(self, 'nu0', float(self.nu0))
            if dims and self.nu0 <= dims.pop() - 1:
                raise ConfigError('nu0 must exceed p - 1')

    @property
    def dim(self):
        for array in (self.m0, self.Psi0):
            if array is not None:
                return array.shape[0]
        return None

    @property
    def is_resolved(self):
        return self.m0 is not None and self.Psi0 is not None and \
            self.nu0 is not None

    def resolve(self, X=None, dim=None):
        """Fill unset hyperparameters.

        Parameters
        ----------
        X : array-like, optional
            Seed data, ``N x p``.
        dim : int, optional
            Feature dimension when no seed data is given.

        Returns
        -------
        config : DpmmConfig
            A copy with ``m0``, ``nu0`` and ``Psi0`` set.
        """
        if X is not None:
            X = np.atleast_2d(np.asarray(X, dtype=np.float64))
            dim = X.shape[1]
        elif dim is None:
            dim = self.dim
        if dim is None:
            raise ConfigError('cannot resolve the prior without data or a '
                              'dimension')
        if self.dim is not None and self.dim != dim:
            raise DimensionMismatchError('prior has dimension {}, data {}'
                                         .format(self.dim, dim))
        m0 = self.m0
        if m0 is None:
            m0 = X.mean(axis=0) if X is not None and X.shape[0] else \
                np.zeros(dim)
        Psi0 = self.Psi0
        if Psi0 is None:
            scale = 1.
            if X is not None and X.shape[0] >= 2:
                median = np.median(pdist(X, 'sqeuclidean'))
                if np.isfinite(median) and median > 0:
                    scale = median
            Psi0 = scale * np.eye(dim)
        nu0 = dim + 2. if self.nu0 is None else self.nu0
        return replace(self, m0=m0, Psi0=Psi0, nu0=nu0)

    def to_dict(self):
        return {
            'alpha': self.alpha,
            'm0': None if self.m0 is None else self.m0.tolist(),
            'kappa0': self.kappa0,
            'nu0': self.nu0,
            'Psi0': None if self.Psi0 is None else self.Psi0.tolist(),
            'assignment_mode': self.assignment_mode,
        }

    @classmethod
    def from_dict(cls, payload):
        known = {'alpha', 'm0', 'kappa0', 'nu0', 'Psi0', 'assignment_mode'}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError('unknown DPMM settings: {}'.format(
                ', '.join(sorted(unknown))))
        return cls(**payload)


@dataclass(frozen=True, eq=False)
class IdentityDecision:
    """Outcome of :meth:`DPMM.predict`.

    Attributes
    ----------
    assigned_cluster : int or str
        Winning cluster id, or ``'new'``.
    candidates : tuple
        Existing cluster ids in ascending order, then ``'new'``.
    log_posterior : numpy.ndarray
        Normalised log posterior over ``candidates``.
    model_version : int
        Version of the model the decision was computed on.
    """

    assigned_cluster: object
    candidates: Tuple
    log_posterior: np.ndarray
    model_version: int

    @property
    def is_newcomer(self):
        return self.assigned_cluster == NEW

    @property
    def posterior(self):
        return np.exp(self.log_posterior)

    def posterior_of(self, cluster_id):
        return float(np.exp(self.log_posterior[
            self.candidates.index(cluster_id)]))


class _Cluster(object):
    """Sufficient statistics of one identity."""

    def __init__(self, cluster_id, dim):
        self.cluster_id = cluster_id
        self.n = 0
        self.s = np.zeros(dim)
        self.ss = np.zeros((dim, dim))

    def add(self, x):
        self.n += 1
        self.s = self.s + x
        self.ss = self.ss + np.outer(x, x)


class DPMM(object):
    """Sequential MAP Dirichlet-process mixture.

    Parameters
    ----------
    config : DpmmConfig, optional
        Prior and assignment settings. Unresolved hyperparameters are
        derived by :meth:`seed` from the seed data, or from the first
        assigned footstep's dimension. Default: ``DpmmConfig()``.
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Larger value for printing out
        more log information. Default: ``0``.

    Attributes
    ----------
    version_ : int
        Incremented on every assignment. Decisions carry the version
        they were computed on.
    assignments_ : list of tuple
        Log of ``(x, cluster_id)`` in assignment order.
    """

    def __init__(self, config=None, verbose=0):
        self.config = DpmmConfig() if config is None else config
        self.verbose = verbose
        self._clusters = {}
        self._predictive = {}
        self._prior = None
        self.assignments_ = []
        self.version_ = 0
        self.next_id_ = 0

    @property
    def dim(self):
        return self.config.dim

    @property
    def n_clusters(self):
        return len(self._clusters)

    @property
    def n_samples(self):
        return len(self.assignments_)

    @property
    def cluster_ids(self):
        return tuple(sorted(self._clusters))

    def counts(self):
        """``{cluster_id: n_c}``."""
        return {cid: self._clusters[cid].n for cid in self.cluster_ids}

    def sufficient_statistics(self, cluster_id):
        """``(n, sum, outer-product sum)`` of a cluster."""
        cluster = self._cluster(cluster_id)
        return cluster.n, cluster.s.copy(), cluster.ss.copy()

    def _cluster(self, cluster_id):
        if cluster_id not in self._clusters:
            raise DataError('unknown cluster {!r}'.format(cluster_id))
        return self._clusters[cluster_id]

    def _resolved_config(self, dim):
        if self.config.is_resolved:
            return self.config
        return self.config.resolve(dim=dim)

    def _check_x(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise DimensionMismatchError('expected one feature vector, got '
                                         'shape {}'.format(x.shape))
        if not np.all(np.isfinite(x)):
            raise DataError('feature vector contains non-finite values')
        if self.dim is not None and x.shape[0] != self.dim:
            raise DimensionMismatchError('model has dimension {}, got {}'
                                         .format(self.dim, x.shape[0]))
        return x

    def _prior_predictive(self, config):
        if config is self.config and self._prior is not None:
            return self._prior
        prior = predictive_distribution(
            config.m0, config.kappa0, config.nu0, config.Psi0, 0,
            np.zeros(config.dim), np.zeros((config.dim, config.dim)))
        if config is self.config:
            self._prior = prior
        return prior

    def _cluster_predictive(self, cluster):
        key = (cluster.cluster_id, cluster.n)
        if key not in self._predictive:
            c = self.config
            self._predictive = {k: v for k, v in self._predictive.items()
                                if k[0] != cluster.cluster_id}
            self._predictive[key] = predictive_distribution(
                c.m0, c.kappa0, c.nu0, c.Psi0, cluster.n, cluster.s,
                cluster.ss)
        return self._predictive[key]

    def seed(self, X):
        """Enroll one known identity from labeled data.

        Resolves unset prior hyperparameters from ``X`` and assigns all
        rows to one new cluster.

        Parameters
        ----------
        X : array-like
            ``N x p`` footsteps of the seed person.

        Returns
        -------
        cluster_id : int
            The seed cluster.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[0] == 0:
            raise DataError('seed data is empty')
        if not self.config.is_resolved:
            if self.n_samples:
                raise ConfigError('cannot resolve the prior of a model that '
                                  'already holds data')
            self.config = self.config.resolve(X)
            self._prior = None
        cluster_id = self.assign(X[0], NEW)
        for x in X[1:]:
            self.assign(x, cluster_id)
        return cluster_id

    def posterior_predictive(self, x, cluster_id=None):
        """Log predictive density of ``x``.

        Parameters
        ----------
        x : array-like
            Feature vector.
        cluster_id : int, optional
            Cluster to condition on, ``None`` for the prior predictive.

        Returns
        -------
        log_density : float
        """
        x = self._check_x(x)
        if cluster_id is None or cluster_id == NEW:
            return float(self._prior_predictive(
                self._resolved_config(x.shape[0])).logpdf(x))
        return float(self._cluster_predictive(
            self._cluster(cluster_id)).logpdf(x))

    def predict(self, x):
        """Score ``x`` against every identity and a newcomer.

        The model is not modified.

        Parameters
        ----------
        x : array-like
            Feature vector of dimension ``p``.

        Returns
        -------
        decision : IdentityDecision
            Argmax of the posterior; ties go to the lowest cluster id and
            existing clusters win ties against a newcomer.
        """
        x = self._check_x(x)
        config = self._resolved_config(x.shape[0])
        ids = self.cluster_ids
        log_weights = crp_log_weights([self._clusters[c].n for c in ids],
                                      config.alpha)
        log_lik = [self._cluster_predictive(self._clusters[c]).logpdf(x)
                   for c in ids]
        log_lik.append(self._prior_predictive(config).logpdf(x))
        log_post = log_normalize(log_weights + np.asarray(log_lik,
                                                          dtype=np.float64))
        candidates = ids + (NEW,)
        return IdentityDecision(candidates[int(np.argmax(log_post))],
                                candidates, log_post, self.version_)

    def assign(self, x, cluster_id):
        """Add ``x`` to a cluster without scoring it.

        Parameters
        ----------
        x : array-like
            Feature vector.
        cluster_id : int or str
            Existing cluster id, or ``'new'`` to open a cluster.

        Returns
        -------
        cluster_id : int
            The cluster that received ``x``.
        """
        x = self._check_x(x)
        if not self.config.is_resolved:
            self.config = self.config.resolve(dim=x.shape[0])
            self._prior = None
        if cluster_id == NEW:
            cluster_id = self.next_id_
            self._clusters[cluster_id] = _Cluster(cluster_id, x.shape[0])
            self.next_id_ += 1
        cluster = self._cluster(cluster_id)
        cluster.add(x)
        self.assignments_.append((x.copy(), cluster_id))
        self.version_ += 1
        return cluster_id

    def update(self, x, decision):
        """Apply a decision computed by :meth:`predict` on this state.

        Raises
        ------
        StaleDecisionError
            If the model changed since the decision was made.
        """
        if decision.model_version != self.version_:
            raise StaleDecisionError(
                'decision computed on model version {}, model is at {}'
                .format(decision.model_version, self.version_))
        self.assign(x, decision.assigned_cluster)
        return self

    @classmethod
    def replay(cls, X, assignments, config=None, verbose=0):
        """Rebuild a model from an assignment log.

        Parameters
        ----------
        X : array-like
            ``N x p`` footsteps in log order.
        assignments : sequence of int
            Cluster id of every row; ids are opened in ascending order.
        config : DpmmConfig, optional
            Prior. Unset hyperparameters are resolved from the rows of
            the first cluster in the log.

        Returns
        -------
        model : DPMM
            Identical statistics to the model that produced the log.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        assignments = list(assignments)
        if X.shape[0] != len(assignments):
            raise DimensionMismatchError('{} rows but {} assignments'.format(
                X.shape[0], len(assignments)))
        config = DpmmConfig() if config is None else config
        if not config.is_resolved and assignments:
            first = np.array([a == assignments[0] for a in assignments])
            config = config.resolve(X[first])
        model = cls(config, verbose=verbose)
        for x, cluster_id in zip(X, assignments):
            if cluster_id in model._clusters:
                model.assign(x, cluster_id)
            elif cluster_id == model.next_id_:
                model.assign(x, NEW)
            else:
                raise DataError('assignment log opens cluster {} before {}'
                                .format(cluster_id, model.next_id_))
        return model

    def to_dict(self):
        """Checkpoint: prior, cluster statistics and the assignment log."""
        return {
            'config': self.config.to_dict(),
            'version': self.version_,
            'clusters': [{'cluster_id': cid,
                          'n': self._clusters[cid].n,
                          'sum': self._clusters[cid].s.tolist(),
                          'outer_sum': self._clusters[cid].ss.tolist()}
                         for cid in self.cluster_ids],
            'log': [{'x': x.tolist(), 'cluster_id': cid}
                    for x, cid in self.assignments_],
        }

    @classmethod
    def from_dict(cls, payload, verbose=0):
        """Restore a checkpoint by replaying its log and checking the
        stored statistics."""
        try:
            config = DpmmConfig.from_dict(payload['config'])
            log = payload['log']
            X = np.array([entry['x'] for entry in log], dtype=np.float64)
            assignments = [int(entry['cluster_id']) for entry in log]
        except (KeyError, TypeError, ValueError) as e:
            raise DataError('malformed DPMM checkpoint: {!r}'.format(e))
        if log:
            model = cls.replay(X, assignments, config, verbose=verbose)
        else:
            model = cls(config, verbose=verbose)
        for entry in payload.get('clusters', []):
            n, s, ss = model.sufficient_statistics(int(entry['cluster_id']))
            if n != entry['n'] or \
                    not np.array_equal(s, np.array(entry['sum'])) or \
                    not np.array_equal(ss, np.array(entry['outer_sum'])):
                raise DataError('checkpoint statistics of cluster {} do not '
                                'match its log'.format(entry['cluster_id']))
        return model

    def __repr__(self):
        return repr_estimator(self)
