# -*- coding: utf-8 -*-

import io
import os
import unittest
from contextlib import redirect_stdout
from unittest import mock

from numpy.testing import assert_equal
from numpy.testing import assert_raises

from vibestep.exceptions import (ConfigError, DataError, MissingFileError,
                                 NumericalError, StaleDecisionError,
                                 VibestepError)
from vibestep.transform import FisherTransform
from vibestep.utils import (
    check_parameter,
    get_n_jobs,
    is_fitted,
    logger,
    repr_estimator
)


class TestUtils(unittest.TestCase):

    def test_check_parameter(self):
        # verify parameter type correction
        with assert_raises(TypeError):
            check_parameter('f', 0, 100)

        with assert_raises(TypeError):
            check_parameter(1, 'f', 100)

        with assert_raises(TypeError):
            check_parameter(1, 0, 'f')

        with assert_raises(TypeError):
            check_parameter(True, 0, 100)

        # if low and high are both unset
        with assert_raises(ValueError):
            check_parameter(50)

        # if low <= high
        with assert_raises(ValueError):
            check_parameter(50, 100, 99)

        with assert_raises(ValueError):
            check_parameter(50, 100, 100)

        # check one side
        with assert_raises(ValueError):
            check_parameter(50, low=100)
        with assert_raises(ValueError):
            check_parameter(50, high=0)

        assert_equal(True, check_parameter(50, low=10))
        assert_equal(True, check_parameter(50, high=100))
        # one-sided ranges have no hidden ceiling or floor
        assert_equal(True, check_parameter(30e9, low=0))
        assert_equal(True, check_parameter(-5e9, high=0))

        # if check fails
        with assert_raises(ValueError):
            check_parameter(-1, 0, 100)

        with assert_raises(ValueError):
            check_parameter(101, 0, 100)

        with assert_raises(ValueError):
            check_parameter(0.5, 0.2, 0.3)

        with assert_raises(ValueError):
            check_parameter(float('nan'), 0, 100)

        # bounds
        with assert_raises(ValueError):
            check_parameter(0, 0, 100)
        assert_equal(True, check_parameter(0, 0, 100, include_left=True))
        with assert_raises(ValueError):
            check_parameter(100, 0, 100)
        assert_equal(True, check_parameter(100, 0, 100, include_right=True))

        # if check passes
        assert_equal(True, check_parameter(50, 0, 100))

    def test_logger(self):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            logger(step=3, n_samples=10, n_clusters=2, verbose=0)
        assert_equal(buffer.getvalue(), '')

        with redirect_stdout(buffer):
            logger(step=3, n_samples=10, n_clusters=2, accuracy=0.5,
                   newcomer=True, time=0.1, verbose=3)
        line = buffer.getvalue()
        assert ('Stream 00003/00010' in line)
        assert ('Identities 2' in line)
        assert ('NEW' in line)
        assert ('Accuracy 0.5000' in line)
        assert ('Time' in line)

        buffer = io.StringIO()
        with redirect_stdout(buffer):
            logger(step=1, n_clusters=4, accuracy=0.9, verbose=1,
                   stage='refit')
        assert (buffer.getvalue().startswith('Refit 00001: '))
        assert ('Accuracy' not in buffer.getvalue())

    def test_is_fitted(self):
        transform = FisherTransform()
        with assert_raises(RuntimeError):
            is_fitted(transform, ['w_'])
        transform.w_ = 1
        is_fitted(transform, ['w_'])

    def test_get_n_jobs(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            assert_equal(get_n_jobs(), 1)
            assert_equal(get_n_jobs(8), 8)
            with assert_raises(ValueError):
                get_n_jobs(0)
        with mock.patch.dict(os.environ, {'VIBESTEP_THREADS': '2'}):
            assert_equal(get_n_jobs(), 2)
            assert_equal(get_n_jobs(8), 2)
            assert_equal(get_n_jobs(1), 1)
        with mock.patch.dict(os.environ, {'VIBESTEP_THREADS': '0'}):
            with assert_raises(ValueError):
                get_n_jobs()

    def test_repr_estimator(self):
        text = repr_estimator(FisherTransform(n_components=2, gamma=0.5))
        assert (text.startswith('FisherTransform('))
        assert ('n_components=2' in text)
        assert ('gamma=0.5' in text)
        assert_equal(text, repr(FisherTransform(n_components=2, gamma=0.5)))


class TestExceptions(unittest.TestCase):

    def test_hierarchy(self):
        for error in (ConfigError, DataError, MissingFileError,
                      NumericalError, StaleDecisionError):
            assert (issubclass(error, VibestepError))
            assert (issubclass(error, ValueError))

    def test_exit_codes(self):
        assert_equal(ConfigError.exit_code, 2)
        assert_equal(DataError.exit_code, 3)
        assert_equal(MissingFileError.exit_code, 3)
        assert_equal(NumericalError.exit_code, 4)

    def test_data_error_location(self):
        error = MissingFileError('gone', path='a/b.csv', row=7)
        assert_equal(error.path, 'a/b.csv')
        assert_equal(error.row, 7)
        assert_equal(str(error), 'gone')


if __name__ == '__main__':
    unittest.main()
