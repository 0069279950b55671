# -*- coding: utf-8 -*-
"""Online identification with the Fisher transform in the loop."""
# License: BSD 2 clause

import time
from dataclasses import replace

import numpy as np

from .dpmm import DPMM, DpmmConfig
from .stream import assign_unit, build_report, stream_units
from ..data import BY_PERSON, GroupedFeatures
from ..exceptions import DimensionMismatchError, EmptyDataError
from ..transform import FisherTransform
from ..utils import check_parameter, logger, repr_estimator


class OnlineIdentifier(object):
    """Open-set identifier that learns its feature transform as it
    discovers people.

    The mixture starts on the raw features with one seeded identity.
    An identity is *confirmed* once its cluster holds
    ``confirm_min_count`` footsteps. Whenever a further identity is
    confirmed and at least two are, the Fisher transform is refit on the
    footsteps of all confirmed clusters (cluster ids as labels) and the
    mixture is rebuilt by replaying its assignment log in the new space.

    Parameters
    ----------
    config : DpmmConfig, optional
        Mixture settings. Unset prior hyperparameters are re-derived from
        the seed person after every refit. Default: ``DpmmConfig()``.
    transform : bool, optional
        ``False`` disables the transform (raw-feature ablation).
        Default: ``True``.
    n_components : int, optional
        Output dimension of the transform, see
        :class:`~vibestep.transform.FisherTransform`.
    gamma : float, optional
        Ridge of the transform.
    confirm_min_count : int, optional
        Footsteps needed to confirm an identity. Default: ``3``.
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Default: ``0``.

    Attributes
    ----------
    model_ : DPMM
        The mixture in the current feature space.
    transform_ : FisherTransform or None
        The current transform, ``None`` before the first refit.
    n_refits_ : int
        Number of refits so far.
    """

    def __init__(self, config=None, transform=True, n_components=None,
                 gamma=None, confirm_min_count=3, verbose=0):
        check_parameter(confirm_min_count, low=1,
                        param_name='confirm_min_count', include_left=True)
        self.config = DpmmConfig() if config is None else config
        self.transform = transform
        self.n_components = n_components
        self.gamma = gamma
        self.confirm_min_count = confirm_min_count
        self.verbose = verbose

        self.model_ = None
        self.transform_ = None
        self.n_refits_ = 0
        self._raw = []
        self._confirmed = set()

    def _project(self, X):
        if self.transform_ is None:
            return X
        return self.transform_.transform(X)

    def seed(self, X):
        """Enroll the seed person from raw features.

        Returns
        -------
        cluster_id : int
            The seed cluster.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[0] == 0:
            raise EmptyDataError('seed data is empty')
        self.model_ = DPMM(self.config, verbose=self.verbose)
        self.transform_ = None
        self.n_refits_ = 0
        self._raw = [x.copy() for x in X]
        cluster_id = self.model_.seed(X)
        self._confirmed = {cluster_id} if \
            X.shape[0] >= self.confirm_min_count else set()
        return cluster_id

    def _newly_confirmed(self):
        counts = self.model_.counts()
        fresh = {cid for cid, n in counts.items()
                 if n >= self.confirm_min_count} - self._confirmed
        self._confirmed |= fresh
        return bool(fresh)

    def _refit(self):
        assignments = [cid for _, cid in self.model_.assignments_]
        raw = np.vstack(self._raw)
        keep = np.array([cid in self._confirmed for cid in assignments])
        grouped = GroupedFeatures.from_arrays(
            raw[keep], [str(cid) for cid, k in zip(assignments, keep) if k],
            BY_PERSON)
        self.transform_ = FisherTransform(
            n_components=self.n_components, gamma=self.gamma,
            verbose=max(self.verbose - 1, 0)).fit(grouped)
        config = self.config
        if config.dim not in (None, self.transform_.dim_out):
            config = replace(config, m0=None, nu0=None, Psi0=None)
        # the prior follows the seed cluster into the new space
        self.model_ = DPMM.replay(self._project(raw), assignments, config,
                                  verbose=self.verbose)
        self.n_refits_ += 1

    def _rollback(self, n_samples):
        """Drop assignments past the first ``n_samples`` of the log."""
        log = self.model_.assignments_[:n_samples]
        if not log:
            self.model_ = DPMM(self.config, verbose=self.verbose)
            return
        self.model_ = DPMM.replay(np.array([x for x, _ in log]),
                                  [cid for _, cid in log], self.model_.config,
                                  verbose=self.verbose)

    def partial_fit(self, X, assignment_mode=None):
        """Identify one stream unit (a footstep or a whole walk).

        Parameters
        ----------
        X : array-like
            Raw features of the unit, ``n x d``.
        assignment_mode : str, optional
            Overrides ``config.assignment_mode``.

        Returns
        -------
        cluster_ids : list
            Cluster of every footstep.
        newcomer : list of bool
            Whether each footstep opened a new identity.
        """
        if self.model_ is None:
            self.model_ = DPMM(self.config, verbose=self.verbose)
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self._raw and X.shape[1] != self._raw[0].shape[0]:
            raise DimensionMismatchError('stream has {} features, seed had {}'
                                         .format(X.shape[1],
                                                 self._raw[0].shape[0]))
        mode = self.config.assignment_mode if assignment_mode is None \
            else assignment_mode
        n_before = self.model_.n_samples
        try:
            cluster_ids, newcomer = assign_unit(self.model_,
                                                self._project(X), mode)
        except Exception:
            self._rollback(n_before)
            raise
        self._raw.extend(x.copy() for x in X)
        if self._newly_confirmed() and self.transform and \
                len(self._confirmed) >= 2:
            self._refit()
        return cluster_ids, newcomer

    def run(self, X, label, groups=None, seed_X=None, known=(),
            assignment_mode=None):
        """Seed, stream and score.

        Parameters
        ----------
        X : array-like
            ``N x d`` raw footsteps in stream order.
        label : array-like
            True persons, used only for the report.
        groups : array-like, optional
            Walk of every footstep, for ``'per-trace-majority'``.
        seed_X : array-like, optional
            Raw footsteps of the seed person.
        known : iterable, optional
            Persons enrolled by the seed.
        assignment_mode : str, optional
            Overrides ``config.assignment_mode``.

        Returns
        -------
        report : OnlineRunReport
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[0] == 0:
            raise EmptyDataError('the stream is empty')
        if X.shape[0] != len(label):
            raise DimensionMismatchError('{} footsteps but {} labels'.format(
                X.shape[0], len(label)))
        if seed_X is not None:
            self.seed(seed_X)
        mode = self.config.assignment_mode if assignment_mode is None \
            else assignment_mode
        units = stream_units(X.shape[0], groups, mode)

        predictions, newcomer = [], []
        for step, (start, stop) in enumerate(units):
            tic = time.time()
            refits = self.n_refits_
            ids, flags = self.partial_fit(X[start:stop], mode)
            predictions.extend(ids)
            newcomer.extend(flags)
            if self.verbose > 0 and (any(flags) or
                                     self.n_refits_ > refits):
                logger(step=step, n_samples=len(units),
                       n_clusters=self.model_.n_clusters,
                       newcomer=any(flags), time=time.time() - tic,
                       verbose=self.verbose)
        return build_report(label, predictions, newcomer, known,
                            n_refits=self.n_refits_)

    def __repr__(self):
        return repr_estimator(self)
