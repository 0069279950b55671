# -*- coding: utf-8 -*-
"""Domain types and file I/O."""

from .types import BALL_DROP
from .types import BY_LOCATION
from .types import BY_PERSON
from .types import Dataset
from .types import DatasetManifest
from .types import FOOTSTEP
from .types import FeatureVector
from .types import FootstepEvent
from .types import GroupedFeatures
from .types import Session
from .types import StructureInfo
from .types import TraceRef
from .types import VibrationTrace
from .types import WALK
from .io import load_dataset
from .io import load_events
from .io import load_features
from .io import load_json
from .io import load_manifest
from .io import load_trace
from .io import save_events
from .io import save_features
from .io import save_json
from .io import save_manifest
from .io import save_trace

__all__ = ['BALL_DROP', 'BY_LOCATION', 'BY_PERSON', 'Dataset',
           'DatasetManifest', 'FOOTSTEP', 'FeatureVector', 'FootstepEvent',
           'GroupedFeatures', 'Session', 'StructureInfo', 'TraceRef',
           'VibrationTrace', 'WALK', 'load_dataset', 'load_events',
           'load_features', 'load_json', 'load_manifest', 'load_trace',
           'save_events', 'save_features', 'save_json', 'save_manifest',
           'save_trace']
