# -*- coding: utf-8 -*-
"""
Metrics used to evaluate online person identification
"""
# License: BSD 2 clause

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import (
    adjusted_rand_score,
    precision_score,
    recall_score
)
from sklearn.metrics.cluster import contingency_matrix


def eval_identification_accuracy(label, pred):
    """
    Accuracy of a clustering after the best one-to-one matching of
    clusters to persons (Hungarian algorithm). Samples of unmatched
    clusters count as errors.

    Parameters
    ----------
    label : array-like
        Ground-truth person ids in shape of ``(N, )``.
    pred : array-like
        Cluster ids in shape of ``(N, )``.

    Returns
    -------
    accuracy : float
        Fraction of samples whose cluster is matched to their person.
    mapping : dict
        Matched ``{cluster_id: person_id}`` pairs.
    """

    label = np.asarray(label)
    pred = np.asarray(pred)
    if label.shape[0] == 0:
        return 0., {}
    persons = np.unique(label)
    clusters = np.unique(pred)
    table = contingency_matrix(label, pred)
    rows, cols = linear_sum_assignment(table, maximize=True)
    accuracy = table[rows, cols].sum() / label.shape[0]
    mapping = {clusters[c].item(): persons[r].item()
               for r, c in zip(rows, cols)}
    return float(accuracy), mapping


def first_appearances(label, known=()):
    """
    Mask of the samples that show a person for the first time.

    Parameters
    ----------
    label : array-like
        Ground-truth person ids in stream order.
    known : iterable, optional
        Persons already enrolled before the stream starts.

    Returns
    -------
    mask : numpy.ndarray
        Boolean array in shape of ``(N, )``.
    """

    seen = set(known)
    mask = np.zeros(len(label), dtype=bool)
    for i, person in enumerate(label):
        if person not in seen:
            mask[i] = True
            seen.add(person)
    return mask


def eval_newcomer_detection(label, newcomer, known=()):
    """
    Precision and recall of newcomer decisions against the first
    appearance of every person not enrolled beforehand.

    Parameters
    ----------
    label : array-like
        Ground-truth person ids in stream order.
    newcomer : array-like
        Boolean newcomer decisions in shape of ``(N, )``.
    known : iterable, optional
        Persons enrolled before the stream starts.

    Returns
    -------
    precision : float
        Fraction of newcomer decisions that hit a first appearance.
    recall : float
        Fraction of first appearances flagged as newcomers.
    """

    truth = first_appearances(label, known)
    newcomer = np.asarray(newcomer, dtype=bool)
    precision = precision_score(truth, newcomer, zero_division=0)
    recall = recall_score(truth, newcomer, zero_division=0)
    return float(precision), float(recall)


def eval_adjusted_rand(label, pred):
    """
    Adjusted Rand index between persons and clusters.

    Parameters
    ----------
    label : array-like
        Ground-truth person ids in shape of ``(N, )``.
    pred : array-like
        Cluster ids in shape of ``(N, )``.

    Returns
    -------
    ari : float
        Adjusted Rand index, 1 for a perfect partition.
    """

    return float(adjusted_rand_score(label, pred))
