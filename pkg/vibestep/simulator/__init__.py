# -*- coding: utf-8 -*-
"""Beam-physics generator of labeled synthetic vibration data."""

from .beam import BeamModel
from .beam import ForceEvent
from .beam import Pulse
from .beam import modal_filters
from .beam import modal_response
from .beam import simulate_response
from .gait import PersonGaitModel
from .gait import Recording
from .gait import ball_drop_sequence
from .gait import footstep_sequence
from .gait import grid_locations
from .gait import simulate_walk
from .transfer import AttenuationModel
from .transfer import apply_attenuation
from .transfer import band_transfer_ratio

__all__ = ['BeamModel', 'ForceEvent', 'Pulse', 'modal_filters',
           'modal_response', 'simulate_response', 'PersonGaitModel',
           'Recording', 'ball_drop_sequence', 'footstep_sequence',
           'grid_locations', 'simulate_walk', 'AttenuationModel',
           'apply_attenuation', 'band_transfer_ratio']
