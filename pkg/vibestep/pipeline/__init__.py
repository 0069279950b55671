# -*- coding: utf-8 -*-
"""Configuration and commands of the end-to-end pipeline."""

from .config import DpmmSettings
from .config import PipelineConfig
from .config import SimulationConfig
from .config import TransformConfig
from .commands import cmd_decompose
from .commands import cmd_evaluate
from .commands import cmd_extract
from .commands import cmd_fit_transform
from .commands import cmd_identify
from .commands import cmd_run_online
from .commands import cmd_simulate
from .commands import load_assignments
from .commands import load_transforms
from .commands import load_variability
from .commands import record_run

__all__ = ['DpmmSettings', 'PipelineConfig', 'SimulationConfig',
           'TransformConfig', 'cmd_decompose', 'cmd_evaluate', 'cmd_extract',
           'cmd_fit_transform', 'cmd_identify', 'cmd_run_online',
           'cmd_simulate', 'load_assignments', 'load_transforms',
           'load_variability', 'record_run']
