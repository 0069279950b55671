from . import data
from . import feature
from . import identifier
from . import metric
from . import pipeline
from . import simulator
from . import transform
from . import utils
from .version import __version__

__all__ = ['data', 'feature', 'identifier', 'metric', 'pipeline',
           'simulator', 'transform', 'utils']
