from .utility import check_parameter
from .utility import get_n_jobs
from .utility import is_fitted
from .utility import logger
from .utility import pprint
from .utility import repr_estimator

__all__ = ['check_parameter', 'get_n_jobs', 'is_fitted', 'logger', 'pprint',
           'repr_estimator']
