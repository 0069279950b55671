# -*- coding: utf-8 -*-
"""Normal-Inverse-Wishart conjugacy and Chinese-restaurant-process
weights used by the Dirichlet-process mixture.

See K. Murphy, "Conjugate Bayesian analysis of the Gaussian
distribution" (2007) for the update equations.
"""
# License: BSD 2 clause

import numpy as np
from scipy.linalg import LinAlgError
from scipy.special import logsumexp
from scipy.stats import multivariate_t

from ..exceptions import NumericalError


def niw_posterior(m0, kappa0, nu0, Psi0, n, s, ss):
    """Posterior NIW hyperparameters from sufficient statistics.

    Parameters
    ----------
    m0 : numpy.ndarray
        Prior mean, shape ``(p, )``.
    kappa0 : float
        Prior mean strength.
    nu0 : float
        Prior degrees of freedom.
    Psi0 : numpy.ndarray
        Prior scatter, ``p x p``.
    n : int
        Number of observations.
    s : numpy.ndarray
        Sum of the observations.
    ss : numpy.ndarray
        Sum of their outer products.

    Returns
    -------
    m_n, kappa_n, nu_n, Psi_n
        Updated hyperparameters.
    """
    if n == 0:
        return m0, kappa0, nu0, Psi0
    kappa_n = kappa0 + n
    nu_n = nu0 + n
    xbar = s / n
    m_n = (kappa0 * m0 + s) / kappa_n
    scatter = ss - n * np.outer(xbar, xbar)
    offset = xbar - m0
    Psi_n = Psi0 + scatter + kappa0 * n / kappa_n * np.outer(offset, offset)
    return m_n, kappa_n, nu_n, 0.5 * (Psi_n + Psi_n.T)


def student_t_params(m_n, kappa_n, nu_n, Psi_n):
    """Location, shape and degrees of freedom of the NIW posterior
    predictive, a multivariate Student-t."""
    p = m_n.shape[0]
    df = nu_n - p + 1.
    shape = Psi_n * (kappa_n + 1.) / (kappa_n * df)
    return m_n, shape, df


def predictive_distribution(m0, kappa0, nu0, Psi0, n, s, ss):
    """Frozen :class:`scipy.stats.multivariate_t` posterior predictive.

    Raises
    ------
    NumericalError
        If the predictive shape is not symmetric positive definite.
    """
    loc, shape, df = student_t_params(*niw_posterior(m0, kappa0, nu0, Psi0,
                                                     n, s, ss))
    try:
        return multivariate_t(loc=loc, shape=shape, df=df)
    except (ValueError, LinAlgError) as e:
        raise NumericalError('posterior predictive scale is not positive '
                             'definite: {}'.format(e))


def crp_log_weights(counts, alpha):
    """Log prior weights of the existing tables and of a new one.

    ``log n_c`` for every table followed by ``log alpha``.
    """
    counts = np.asarray(counts, dtype=np.float64)
    return np.append(np.log(counts), np.log(alpha))


def log_normalize(log_weights):
    """Subtract the log-sum-exp so that ``exp`` sums to one."""
    log_weights = np.asarray(log_weights, dtype=np.float64)
    return log_weights - logsumexp(log_weights)
