# -*- coding: utf-8 -*-
"""A set of utility functions shared across vibestep.
"""
# License: BSD 2 clause

import os
import numbers
from inspect import signature

import numpy as np

MAX_INT = np.iinfo(np.int32).max
MIN_INT = np.iinfo(np.int32).min

THREADS_ENV = 'VIBESTEP_THREADS'


def check_parameter(param, low=MIN_INT, high=MAX_INT, param_name='',
                    include_left=False, include_right=False):
    """Check if a numerical parameter lies within a range.

    Parameters
    ----------
    param : int, float
        The input parameter to check.
    low : int, float, optional
        The lower bound of the range.
    high : int, float, optional
        The upper bound of the range.
    param_name : str, optional
        The name of the parameter, used in error messages.
    include_left : bool, optional
        Whether the lower bound is admissible. Default: ``False``.
    include_right : bool, optional
        Whether the upper bound is admissible. Default: ``False``.

    Returns
    -------
    within_range : bool
        ``True`` if the check passes, otherwise an error is raised.
    """

    if isinstance(param, bool) or not isinstance(param, numbers.Real):
        raise TypeError('{} is set to {!r}, not numerical'.format(
            param_name, param))
    for name, bound in (('low', low), ('high', high)):
        if isinstance(bound, bool) or not isinstance(bound, numbers.Real):
            raise TypeError('{} is set to {!r}, not numerical'.format(
                name, bound))

    if low is MIN_INT and high is MAX_INT:
        raise ValueError('Neither low nor high bound is defined')
    if low > high:
        raise ValueError('Lower bound > Higher bound')
    if not np.isfinite(param):
        raise ValueError('{} is set to {}, not finite'.format(param_name,
                                                             param))

    # an omitted bound is unbounded, not the int32 sentinel
    lower = -np.inf if low is MIN_INT else low
    upper = np.inf if high is MAX_INT else high
    too_low = param < lower if include_left else param <= lower
    too_high = param > upper if include_right else param >= upper
    if too_low or too_high:
        left = '[' if include_left else '('
        right = ']' if include_right else ')'
        lo = '-inf' if low is MIN_INT else low
        hi = 'inf' if high is MAX_INT else high
        raise ValueError('{} is set to {}. Not in the range of '
                         '{}{}, {}{}.'.format(param_name, param, left, lo,
                                              hi, right))
    return True


def logger(step=0,
           n_samples=None,
           n_clusters=None,
           accuracy=None,
           newcomer=False,
           time=None,
           verbose=0,
           stage='stream'):
    """
    Progress logger for long-running loops.

    Parameters
    ----------
    step : int, optional
        The current step (sample, walk or refit index).
    n_samples : int, optional
        Total number of steps, printed as ``step/n_samples``.
    n_clusters : int, optional
        Current number of identities in the model.
    accuracy : float, optional
        Running accuracy, printed when ``verbose > 1``.
    newcomer : bool, optional
        Whether the current step opened a new identity.
    time : float, optional
        Elapsed time of the step in seconds, printed when ``verbose > 2``.
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Larger value for printing out
        more log information. Default: ``0``.
    stage : str, optional
        Prefix naming the loop. Default: ``'stream'``.
    """
    if verbose > 0:
        if n_samples is None:
            print("{} {:05d}: ".format(stage.capitalize(), step), end='')
        else:
            print("{} {:05d}/{:05d}: ".format(stage.capitalize(), step,
                                              n_samples), end='')
        if n_clusters is not None:
            print("Identities {:d}".format(n_clusters), end='')
        if newcomer:
            print(" | NEW", end='')

        if verbose > 1:
            if accuracy is not None:
                print(" | Accuracy {:.4f}".format(accuracy), end='')

            if verbose > 2 and time is not None:
                print(" | Time {:.4f}".format(time), end='')

        print()


def pprint(params, offset=0, printer=repr):
    """Pretty print the dictionary 'params'

    Parameters
    ----------
    params : dict
        The dictionary to pretty print
    offset : int, optional
        The offset at the beginning of each line.
    printer : callable, optional
        The function to convert entries to strings, typically
        the builtin str or repr.
    """

    params_list = list()
    this_line_length = offset
    line_sep = ',\n' + (1 + offset) * ' '
    for i, (k, v) in enumerate(sorted(params.items())):
        if type(v) is float:
            # str keeps float reprs stable across platforms
            this_repr = '%s=%s' % (k, str(v))
        else:
            this_repr = '%s=%s' % (k, printer(v))
        if len(this_repr) > 500:
            this_repr = this_repr[:300] + '...' + this_repr[-100:]
        if i > 0:
            if this_line_length + len(this_repr) >= 75 or '\n' in this_repr:
                params_list.append(line_sep)
                this_line_length = len(line_sep)
            else:
                params_list.append(', ')
                this_line_length += 2
        params_list.append(this_repr)
        this_line_length += len(this_repr)

    lines = ''.join(params_list)
    lines = '\n'.join(l.rstrip(' ') for l in lines.split('\n'))
    return lines


def is_fitted(estimator, attributes):
    """
    Check that an estimator has been fitted.

    Parameters
    ----------
    estimator : object
        The estimator to check.
    attributes : list of str
        Attributes that are set by ``fit``.

    Raises
    ------
    RuntimeError
        If any of the attributes is missing or ``None``.
    """
    missing = [attr for attr in attributes
               if getattr(estimator, attr, None) is None]
    if missing:
        raise RuntimeError("{} is not fitted yet (missing {})".format(
            type(estimator).__name__, ', '.join(missing)))


def get_n_jobs(n_jobs=None):
    """
    Resolve the number of worker threads.

    Parameters
    ----------
    n_jobs : int, optional
        Explicit request. ``None`` reads the ``VIBESTEP_THREADS``
        environment variable and falls back to ``1``.

    Returns
    -------
    n_jobs : int
        A positive number of workers, never above the environment cap.
    """
    cap = os.environ.get(THREADS_ENV)
    cap = int(cap) if cap not in (None, '') else None
    if cap is not None and cap < 1:
        raise ValueError('{} must be a positive integer, got {}'.format(
            THREADS_ENV, cap))
    if n_jobs is None:
        return 1 if cap is None else cap
    if n_jobs < 1:
        raise ValueError('n_jobs must be a positive integer, got {}'.format(
            n_jobs))
    return n_jobs if cap is None else min(n_jobs, cap)


def repr_estimator(estimator):
    """Render ``ClassName(param=value, ...)`` from the constructor
    signature of ``estimator``."""
    class_name = estimator.__class__.__name__
    init_signature = signature(estimator.__init__)
    parameters = [p for p in init_signature.parameters.values()
                  if p.name != 'self' and p.kind != p.VAR_KEYWORD]
    params = {}
    for key in sorted([p.name for p in parameters]):
        params[key] = getattr(estimator, key, None)
    return '%s(%s)' % (class_name, pprint(params, offset=len(class_name)))
