# -*- coding: utf-8 -*-
"""Footstep detection and frequency-band features."""

from .spec import FeatureSpec
from .spec import default_band_edges
from .detection import detect_footsteps
from .detection import envelope
from .detection import noise_floor
from .extraction import band_amplitudes
from .extraction import extract_dataset
from .extraction import extract_feature_list
from .extraction import extract_features
from .extraction import one_sided_power

__all__ = ['FeatureSpec', 'default_band_edges', 'detect_footsteps',
           'envelope', 'noise_floor', 'band_amplitudes', 'extract_dataset',
           'extract_feature_list', 'extract_features', 'one_sided_power']
