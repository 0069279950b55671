# -*- coding: utf-8 -*-
"""Predict-then-update loop over a stream of footsteps and its report."""
# License: BSD 2 clause

import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .dpmm import NEW, PER_FOOTSTEP, PER_TRACE_MAJORITY
from ..exceptions import ConfigError, DimensionMismatchError, EmptyDataError
from ..metric import (eval_adjusted_rand, eval_identification_accuracy,
                      eval_newcomer_detection)
from ..utils import logger


@dataclass(frozen=True, eq=False)
class OnlineRunReport:
    """Outcome of an online identification run.

    Attributes
    ----------
    accuracy : float
        Accuracy after the best one-to-one cluster-to-person matching.
    mapping : dict
        ``{cluster_id: person_id}`` of that matching.
    n_samples : int
        Number of streamed footsteps.
    cluster_counts : dict
        Streamed footsteps per cluster.
    newcomer_log : list of dict
        One entry per newcomer decision: stream index, opened cluster
        and the true person.
    newcomer_precision, newcomer_recall : float
        Newcomer decisions against first appearances of persons.
    adjusted_rand : float
        Adjusted Rand index of clusters against persons.
    predictions : tuple
        Cluster id of every streamed footstep.
    n_refits : int
        Number of transform refits during the run.
    """

    accuracy: float
    mapping: dict
    n_samples: int
    cluster_counts: dict
    newcomer_log: list
    newcomer_precision: float
    newcomer_recall: float
    adjusted_rand: float
    predictions: tuple = field(default_factory=tuple)
    n_refits: int = 0

    @property
    def n_clusters(self):
        return len(self.cluster_counts)

    def to_dict(self):
        return {
            'accuracy': self.accuracy,
            'mapping': {str(k): v for k, v in sorted(self.mapping.items())},
            'n_samples': self.n_samples,
            'n_clusters': self.n_clusters,
            'cluster_counts': {str(k): v for k, v in
                               sorted(self.cluster_counts.items())},
            'newcomer_log': list(self.newcomer_log),
            'newcomer_precision': self.newcomer_precision,
            'newcomer_recall': self.newcomer_recall,
            'adjusted_rand': self.adjusted_rand,
            'predictions': list(self.predictions),
            'n_refits': self.n_refits,
        }

    @classmethod
    def from_dict(cls, payload):
        return cls(accuracy=payload['accuracy'],
                   mapping={int(k): v for k, v in payload['mapping'].items()},
                   n_samples=payload['n_samples'],
                   cluster_counts={int(k): v for k, v in
                                   payload['cluster_counts'].items()},
                   newcomer_log=list(payload['newcomer_log']),
                   newcomer_precision=payload['newcomer_precision'],
                   newcomer_recall=payload['newcomer_recall'],
                   adjusted_rand=payload['adjusted_rand'],
                   predictions=tuple(payload.get('predictions', ())),
                   n_refits=payload.get('n_refits', 0))


def majority_vote(decisions):
    """Most frequent assignment among ``decisions``.

    Ties go to the lowest cluster id; a newcomer only wins ties against
    nothing.
    """
    votes = Counter(d.assigned_cluster for d in decisions)
    existing = sorted(c for c in votes if c != NEW)
    order = existing + ([NEW] if NEW in votes else [])
    return max(order, key=lambda c: (votes[c], -order.index(c)))


def assign_unit(model, X, assignment_mode):
    """Identify one unit of the stream and update the model.

    A unit is a single footstep in ``'per-footstep'`` mode, or all
    footsteps of one walk in ``'per-trace-majority'`` mode, where every
    footstep is scored on the same model state and the majority decision
    is applied to all of them.

    Returns
    -------
    cluster_ids : list
        Cluster that received each row of ``X``.
    newcomer : list of bool
        Whether each row opened a new cluster.
    """
    cluster_ids, newcomer = [], []
    if assignment_mode == PER_FOOTSTEP:
        for x in X:
            decision = model.predict(x)
            model.update(x, decision)
            cluster_ids.append(model.assignments_[-1][1])
            newcomer.append(decision.is_newcomer)
        return cluster_ids, newcomer

    winner = majority_vote([model.predict(x) for x in X])
    cluster_id = model.assign(X[0], winner)
    for x in X[1:]:
        model.assign(x, cluster_id)
    newcomer = [winner == NEW] + [False] * (len(X) - 1)
    return [cluster_id] * len(X), newcomer


def stream_units(n_samples, groups, assignment_mode):
    """Index ranges of the stream units."""
    if assignment_mode == PER_FOOTSTEP:
        return [(i, i + 1) for i in range(n_samples)]
    if assignment_mode != PER_TRACE_MAJORITY:
        raise ConfigError('unknown assignment mode {!r}'.format(
            assignment_mode))
    if groups is None:
        raise ConfigError('per-trace-majority needs the walk of every '
                          'footstep')
    groups = list(groups)
    if len(groups) != n_samples:
        raise DimensionMismatchError('{} footsteps but {} group labels'
                                     .format(n_samples, len(groups)))
    units, start = [], 0
    for i in range(1, n_samples + 1):
        if i == n_samples or groups[i] != groups[start]:
            units.append((start, i))
            start = i
    return units


def build_report(label, predictions, newcomer, known=(), n_refits=0):
    """Score a finished stream."""
    label = [str(y) for y in label]
    accuracy, mapping = eval_identification_accuracy(label, predictions)
    precision, recall = eval_newcomer_detection(label, newcomer, known)
    log = [{'index': i, 'cluster_id': predictions[i], 'person_id': label[i]}
           for i in np.flatnonzero(newcomer).tolist()]
    counts = Counter(predictions)
    return OnlineRunReport(
        accuracy=accuracy, mapping=mapping, n_samples=len(label),
        cluster_counts={int(k): int(v) for k, v in sorted(counts.items())},
        newcomer_log=log, newcomer_precision=precision,
        newcomer_recall=recall,
        adjusted_rand=eval_adjusted_rand(label, predictions),
        predictions=tuple(int(p) for p in predictions), n_refits=n_refits)


def identify_stream(model, X, label, groups=None, assignment_mode=None,
                    known=(), verbose=0):
    """Run open-set identification over a stream.

    Parameters
    ----------
    model : DPMM
        Model to update in place, optionally seeded.
    X : array-like
        ``N x p`` footsteps in stream order.
    label : array-like
        True person of every footstep, hidden from the model and used
        only for the report.
    groups : array-like, optional
        Walk of every footstep, required for ``'per-trace-majority'``.
    assignment_mode : str, optional
        Overrides ``model.config.assignment_mode``.
    known : iterable, optional
        Persons enrolled before the stream (not expected as newcomers).
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Default: ``0``.

    Returns
    -------
    report : OnlineRunReport
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] == 0 or len(label) == 0:
        raise EmptyDataError('the stream is empty')
    if X.shape[0] != len(label):
        raise DimensionMismatchError('{} footsteps but {} labels'.format(
            X.shape[0], len(label)))
    mode = model.config.assignment_mode if assignment_mode is None \
        else assignment_mode
    units = stream_units(X.shape[0], groups, mode)

    predictions, newcomer = [], []
    for step, (start, stop) in enumerate(units):
        tic = time.time()
        ids, flags = assign_unit(model, X[start:stop], mode)
        predictions.extend(ids)
        newcomer.extend(flags)
        if verbose > 0:
            accuracy = None
            if verbose > 1:
                accuracy = eval_identification_accuracy(
                    [str(y) for y in label[:stop]], predictions)[0]
            logger(step=step, n_samples=len(units),
                   n_clusters=model.n_clusters, accuracy=accuracy,
                   newcomer=any(flags), time=time.time() - tic,
                   verbose=verbose)
    return build_report(label, predictions, newcomer, known)
