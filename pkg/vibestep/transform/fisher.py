# -*- coding: utf-8 -*-
"""Fisher discriminant transform of footstep features.

Finds the directions ``w`` maximising the ratio of between-person to
within-person scatter

    J(w) = w^T S_B w / w^T (S_W + gamma I) w

as the leading generalized eigenvectors of ``(S_B, S_W + gamma I)``, and
maps features with ``x -> w^T x``.
"""
# License: BSD 2 clause

import warnings

import numpy as np
from scipy.linalg import LinAlgError, eigh

from ..data import BY_PERSON, FeatureVector, GroupedFeatures
from ..exceptions import (ConfigError, DataError, DimensionMismatchError,
                          NumericalError)
from ..metric.variability import scatter_matrices
from ..utils import check_parameter, is_fitted, repr_estimator

RIDGE_SCALE = 1e-6
DEGENERATE_TOL = 1e-12


def rayleigh_quotient(v, S_B, S_W):
    """``v^T S_B v / v^T S_W v``, invariant to the scale of ``v``."""
    v = np.asarray(v, dtype=np.float64)
    return float(v @ S_B @ v) / float(v @ S_W @ v)


def _fix_signs(w):
    """Flip columns so that their first nonzero component is positive."""
    w = w.copy()
    for j in range(w.shape[1]):
        column = w[:, j]
        nonzero = np.flatnonzero(np.abs(column) > 1e-12 *
                                 np.abs(column).max())
        if nonzero.size and column[nonzero[0]] < 0:
            w[:, j] = -column
    return w


class FisherTransform(object):
    """Linear transform that pulls each person's footsteps together and
    pushes different persons apart.

    Parameters
    ----------
    n_components : int, optional
        Output dimension ``m``, at most ``C - 1`` for ``C`` persons.
        ``None`` uses ``min(C - 1, d)``. Default: ``None``.
    gamma : float, optional
        Ridge added to the within-person scatter. ``None`` uses
        ``1e-6 * tr(S_W) / d``. Default: ``None``.
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Larger value for printing out
        more log information. Default: ``0``.

    Attributes
    ----------
    w_ : numpy.ndarray
        ``d x m`` coefficient matrix. Columns are orthonormal in the
        ``S_W + gamma I`` inner product and their first nonzero component
        is positive.
    eigenvalues_ : numpy.ndarray
        ``m`` generalized eigenvalues, descending and nonnegative.
    gamma_ : float
        The ridge used.
    class_count_ : int
        Number of persons ``C`` seen by ``fit``.
    classes_ : tuple of str
        Person ids in group order.
    class_means_ : numpy.ndarray
        ``C x d`` person means.
    mean_ : numpy.ndarray
        Global mean of the training footsteps.
    S_W_, S_B_ : numpy.ndarray
        Within- and between-person scatter of the training footsteps.
    degenerate_ : bool
        ``True`` when all person means coincide (``S_B = 0``).
    """

    def __init__(self, n_components=None, gamma=None, verbose=0):
        if n_components is not None:
            if isinstance(n_components, bool) or \
                    not isinstance(n_components, (int, np.integer)):
                raise TypeError('n_components must be an integer or None, '
                                'got {!r}'.format(n_components))
            check_parameter(n_components, low=1, param_name='n_components',
                            include_left=True)
        if gamma is not None:
            check_parameter(gamma, low=0, param_name='gamma',
                            include_left=True)
        self.n_components = n_components
        self.gamma = gamma
        self.verbose = verbose

        self.w_ = None
        self.eigenvalues_ = None
        self.gamma_ = None
        self.class_count_ = None
        self.classes_ = None
        self.class_means_ = None
        self.mean_ = None
        self.S_W_ = None
        self.S_B_ = None
        self.degenerate_ = False

    @property
    def dim_in(self):
        return None if self.w_ is None else self.w_.shape[0]

    @property
    def dim_out(self):
        return None if self.w_ is None else self.w_.shape[1]

    def fit(self, grouped):
        """Fit the transform on person-grouped features.

        Parameters
        ----------
        grouped : GroupedFeatures
            Features grouped by person, at least two persons.

        Returns
        -------
        self : FisherTransform
            The fitted transform.
        """
        if grouped.grouping_mode != BY_PERSON:
            raise DataError('the Fisher transform is fitted on features '
                            'grouped by-person, got {}'.format(
                                grouped.grouping_mode))
        C, d = grouped.n_groups, grouped.dim
        if C < 2:
            raise DataError('the Fisher transform needs at least 2 persons, '
                            'got {}'.format(C))
        m = min(C - 1, d) if self.n_components is None else self.n_components
        if m > C - 1 or m > d:
            raise ConfigError('n_components={} exceeds min(C - 1, d) = {}'
                              .format(m, min(C - 1, d)))

        S_W, S_B, S_T, means, mean = scatter_matrices(grouped)
        gamma = RIDGE_SCALE * np.trace(S_W) / d if self.gamma is None \
            else float(self.gamma)
        try:
            evals, evecs = eigh(S_B, S_W + gamma * np.eye(d))
        except LinAlgError as e:
            raise NumericalError('within-person scatter is singular ({}); '
                                 'use gamma > 0'.format(e))
        if not (np.all(np.isfinite(evals)) and np.all(np.isfinite(evecs))):
            raise NumericalError('generalized eigenproblem returned '
                                 'non-finite values; use gamma > 0')

        order = np.argsort(-evals, kind='stable')[:m]
        evals = np.clip(evals[order], 0., None)
        w = _fix_signs(evecs[:, order])

        self.degenerate_ = bool(np.trace(S_B) <= DEGENERATE_TOL *
                                max(np.trace(S_T), np.finfo(float).tiny))
        if self.degenerate_:
            warnings.warn('all person means coincide; the Fisher transform '
                          'carries no discriminative information')
            evals = np.zeros(m)

        self.w_ = w
        self.eigenvalues_ = evals
        self.gamma_ = float(gamma)
        self.class_count_ = C
        self.classes_ = grouped.keys
        self.class_means_ = means
        self.mean_ = mean
        self.S_W_ = S_W
        self.S_B_ = S_B

        if self.verbose > 0:
            print('Fisher transform: {} persons, {} -> {} dims, '
                  'J {:.4f}'.format(C, d, m, evals[0]))
        return self

    def transform(self, x):
        """Map features into the discriminant space, ``w^T x``.

        Parameters
        ----------
        x : FeatureVector, list of FeatureVector, array-like or GroupedFeatures
            Input features of dimension ``d``. A 1-D input is one vector,
            a 2-D input holds one vector per row.

        Returns
        -------
        transformed : numpy.ndarray or GroupedFeatures
            ``(m, )`` for one vector, ``(N, m)`` for many, or grouped
            features of dimension ``m``.
        """
        is_fitted(self, ['w_'])
        if isinstance(x, GroupedFeatures):
            self._check_dim(x.dim)
            return x.map(lambda rows: rows @ self.w_)
        if isinstance(x, FeatureVector):
            x = x.values
        elif isinstance(x, (list, tuple)) and x and \
                isinstance(x[0], FeatureVector):
            x = np.vstack([f.values for f in x])
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2):
            raise DimensionMismatchError('expected 1-D or 2-D input, got '
                                         'shape {}'.format(x.shape))
        self._check_dim(x.shape[-1])
        return x @ self.w_

    def _check_dim(self, dim):
        if dim != self.dim_in:
            raise DimensionMismatchError(
                'transform was fitted on {} features, got {}'.format(
                    self.dim_in, dim))

    def objective(self, grouped=None):
        """Fisher criterion ``J`` of the leading direction.

        Parameters
        ----------
        grouped : GroupedFeatures, optional
            Person-grouped features to score on. ``None`` uses the
            scatter matrices of the training data.

        Returns
        -------
        J : float
            ``w_1^T S_B w_1 / w_1^T (S_W + gamma I) w_1``.
        """
        is_fitted(self, ['w_'])
        if grouped is None:
            S_W, S_B = self.S_W_, self.S_B_
        else:
            self._check_dim(grouped.dim)
            S_W, S_B = scatter_matrices(grouped)[:2]
        return rayleigh_quotient(self.w_[:, 0], S_B,
                                 S_W + self.gamma_ * np.eye(self.dim_in))

    def to_dict(self):
        is_fitted(self, ['w_'])
        return {
            'd': self.dim_in,
            'm': self.dim_out,
            'C': self.class_count_,
            'classes': list(self.classes_),
            'gamma': self.gamma_,
            'eigenvalues': self.eigenvalues_.tolist(),
            'w': {'rows': self.dim_in, 'cols': self.dim_out,
                  'data': self.w_.ravel().tolist()},
            'degenerate': self.degenerate_,
            'n_components': self.n_components,
        }

    @classmethod
    def from_dict(cls, payload):
        """Rebuild a fitted transform from :meth:`to_dict` output.

        Fit-time scatter matrices are not stored, so :meth:`objective`
        needs explicit data on a restored transform.
        """
        try:
            w = np.array(payload['w']['data'], dtype=np.float64).reshape(
                int(payload['w']['rows']), int(payload['w']['cols']))
            transform = cls(n_components=payload.get('n_components'),
                            gamma=float(payload['gamma']))
            transform.w_ = w
            transform.eigenvalues_ = np.array(payload['eigenvalues'],
                                              dtype=np.float64)
            transform.gamma_ = float(payload['gamma'])
            transform.class_count_ = int(payload['C'])
            transform.classes_ = tuple(payload.get('classes', ()))
            transform.degenerate_ = bool(payload.get('degenerate', False))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError('malformed transform: {!r}'.format(e))
        if w.shape != (int(payload['d']), int(payload['m'])):
            raise DimensionMismatchError('transform matrix shape {} does not '
                                         'match d={} m={}'.format(
                                             w.shape, payload['d'],
                                             payload['m']))
        return transform

    def __repr__(self):
        return repr_estimator(self)
