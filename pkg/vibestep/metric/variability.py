# -*- coding: utf-8 -*-
"""Decomposition of feature variability into a footstep part (spread of
repeated excitations at one location) and a structural part (spread of
the per-location means), and the within-person variability reduction of
a feature transform.

All covariances use population (``1 / N``) normalisation.
"""
# License: BSD 2 clause

from dataclasses import dataclass

import numpy as np

from ..data import BY_LOCATION, BY_PERSON
from ..exceptions import DataError, DimensionMismatchError


def _require_mode(grouped, mode, operation):
    if grouped.grouping_mode != mode:
        raise DataError('{} needs features grouped {}, got {}'.format(
            operation, mode, grouped.grouping_mode))


def _symmetric(matrix):
    return 0.5 * (matrix + matrix.T)


def group_means(grouped):
    """``K x d`` array of group means, in group order."""
    return np.vstack([rows.mean(axis=0) for _, rows in grouped])


def footstep_covariance(grouped):
    """Average within-location covariance.

    ``(1/K) sum_k (1/N_k) sum_i (x_i - mu_k)(x_i - mu_k)^T``

    Parameters
    ----------
    grouped : GroupedFeatures
        Features grouped by location, every group with at least two rows.

    Returns
    -------
    sigma : numpy.ndarray
        Symmetric ``d x d`` matrix.
    """
    _require_mode(grouped, BY_LOCATION, 'footstep_covariance')
    sigma = np.zeros((grouped.dim, grouped.dim))
    for key, rows in grouped:
        if rows.shape[0] < 2:
            raise DataError('location group {!r} has {} sample, at least 2 '
                            'are needed'.format(key, rows.shape[0]))
        centered = rows - rows.mean(axis=0)
        sigma += centered.T @ centered / rows.shape[0]
    return _symmetric(sigma / grouped.n_groups)


def structure_covariance(grouped):
    """Covariance of the per-location means.

    ``(1/K) sum_k (mu_k - mu)(mu_k - mu)^T`` where ``mu`` is the
    unweighted mean of the ``K`` group means.

    Parameters
    ----------
    grouped : GroupedFeatures
        Features grouped by location, at least two groups.

    Returns
    -------
    sigma : numpy.ndarray
        Symmetric ``d x d`` matrix.
    """
    _require_mode(grouped, BY_LOCATION, 'structure_covariance')
    if grouped.n_groups < 2:
        raise DataError('structure_covariance needs at least 2 locations, '
                        'got {}'.format(grouped.n_groups))
    means = group_means(grouped)
    centered = means - means.mean(axis=0)
    return _symmetric(centered.T @ centered / grouped.n_groups)


@dataclass(frozen=True, eq=False)
class VariabilityReport:
    """Footstep and structural covariances and their shares of the total
    variability (by trace)."""

    sigma_footstep: np.ndarray
    sigma_structure: np.ndarray
    footstep_share: float
    structure_share: float

    @property
    def footstep_trace(self):
        return float(np.trace(self.sigma_footstep))

    @property
    def structure_trace(self):
        return float(np.trace(self.sigma_structure))

    def to_dict(self):
        return {
            'sigma_footstep': _matrix_to_dict(self.sigma_footstep),
            'sigma_structure': _matrix_to_dict(self.sigma_structure),
            'footstep_share': self.footstep_share,
            'structure_share': self.structure_share,
            'footstep_trace': self.footstep_trace,
            'structure_trace': self.structure_trace,
        }

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(_matrix_from_dict(payload['sigma_footstep']),
                       _matrix_from_dict(payload['sigma_structure']),
                       float(payload['footstep_share']),
                       float(payload['structure_share']))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError('malformed variability report: {!r}'.format(e))


def _matrix_to_dict(matrix):
    matrix = np.asarray(matrix)
    return {'rows': matrix.shape[0], 'cols': matrix.shape[1],
            'data': matrix.ravel().tolist()}


def _matrix_from_dict(payload):
    return np.array(payload['data'], dtype=np.float64).reshape(
        int(payload['rows']), int(payload['cols']))


def variability_proportion(sigma_structure, sigma_footstep):
    """Shares of structural and footstep variability.

    ``structure_share = tr(S) / (tr(S) + tr(F))`` for structural
    covariance ``S`` and footstep covariance ``F``.

    Raises
    ------
    DataError
        If both traces are zero (nothing varies).
    """
    sigma_structure = np.asarray(sigma_structure, dtype=np.float64)
    sigma_footstep = np.asarray(sigma_footstep, dtype=np.float64)
    if sigma_structure.shape != sigma_footstep.shape:
        raise DimensionMismatchError(
            'covariances of shapes {} and {} do not share a feature space'
            .format(sigma_structure.shape, sigma_footstep.shape))
    structure = np.trace(sigma_structure)
    footstep = np.trace(sigma_footstep)
    total = structure + footstep
    if total <= 0:
        raise DataError('degenerate dataset: both variabilities are zero')
    return VariabilityReport(sigma_footstep, sigma_structure,
                             float(footstep / total),
                             float(structure / total))


def decompose_variability(grouped):
    """Footstep and structural covariances of location-grouped features
    and their shares."""
    return variability_proportion(structure_covariance(grouped),
                                  footstep_covariance(grouped))


def scatter_matrices(grouped):
    """Within-class, between-class and total scatter.

    Parameters
    ----------
    grouped : GroupedFeatures
        Any grouping; classes are the groups.

    Returns
    -------
    S_W : numpy.ndarray
        ``sum_i sum_n (x_n^i - mu_i)(x_n^i - mu_i)^T``.
    S_B : numpy.ndarray
        ``sum_i N_i (mu_i - m)(mu_i - m)^T`` with ``m`` the mean of all
        samples.
    S_T : numpy.ndarray
        ``sum_n (x_n - m)(x_n - m)^T``.
    means : numpy.ndarray
        Class means, ``C x d``.
    mean : numpy.ndarray
        Global mean ``m``.
    """
    X, _ = grouped.stacked()
    mean = X.mean(axis=0)
    means = group_means(grouped)
    S_W = np.zeros((grouped.dim, grouped.dim))
    for (_, rows), mu in zip(grouped, means):
        centered = rows - mu
        S_W += centered.T @ centered
    offsets = (means - mean) * np.sqrt(grouped.counts)[:, np.newaxis]
    S_B = offsets.T @ offsets
    centered = X - mean
    S_T = centered.T @ centered
    return (_symmetric(S_W), _symmetric(S_B), _symmetric(S_T), means, mean)


def _within_total_ratio(grouped, which):
    S_W, _, S_T, _, _ = scatter_matrices(grouped)
    total = np.trace(S_T)
    if total <= 0:
        raise DataError('total scatter of the {} features is zero'.format(
            which))
    return np.trace(S_W) / total


def within_person_variability_ratio(before, after):
    """Relative reduction of within-person variability.

    ``1 - [tr(S_W) / tr(S_T)]_after / [tr(S_W) / tr(S_T)]_before``, which
    does not depend on the scale of either feature space.

    Parameters
    ----------
    before : GroupedFeatures
        Person-grouped features in the original space.
    after : GroupedFeatures
        The same footsteps after the transform.

    Returns
    -------
    reduction : float
        ``0`` when nothing changed, ``1`` when every person collapses to
        a point.
    """
    _require_mode(before, BY_PERSON, 'within_person_variability_ratio')
    _require_mode(after, BY_PERSON, 'within_person_variability_ratio')
    if before.keys != after.keys or \
            not np.array_equal(before.counts, after.counts):
        raise DataError('before and after must hold the same persons with '
                        'the same sample counts')
    ratio_before = _within_total_ratio(before, 'original')
    if ratio_before <= 0:
        raise DataError('within-person scatter of the original features is '
                        'zero')
    return float(1. - _within_total_ratio(after, 'transformed') /
                 ratio_before)
