# -*- coding: utf-8 -*-
"""Pipeline configuration: one JSON document, overridable from the
command line."""
# License: BSD 2 clause

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional, Tuple

from ..data import load_json
from ..exceptions import ConfigError
from ..feature import FeatureSpec
from ..identifier import ASSIGNMENT_MODES, DpmmConfig, PER_FOOTSTEP
from ..utils import check_parameter

PER_STRUCTURE = 'per-structure'
JOINT = 'joint'
TRANSFORM_SCOPES = (PER_STRUCTURE, JOINT)


def _check(checks):
    try:
        for value, kwargs in checks:
            check_parameter(value, **kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e))


def _from_dict(cls, payload, section):
    if payload is None:
        return cls()
    if not isinstance(payload, dict):
        raise ConfigError('section {!r} must be a JSON object'.format(
            section))
    known = {f.name for f in fields(cls)}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError('unknown keys in {!r}: {}'.format(
            section, ', '.join(sorted(unknown))))
    payload = {k: tuple(v) if isinstance(v, list) else v
               for k, v in payload.items()}
    return cls(**payload)


@dataclass(frozen=True)
class SimulationConfig:
    """Layout of the synthetic experiment.

    Each structure gets ``n_persons`` walkers with ``walks`` walks each,
    plus ball drops and single footsteps on a grid of ``n_locations``
    excitation points.
    """

    materials: Tuple[str, ...] = ('wood', 'concrete')
    n_persons: int = 10
    walks: int = 10
    sensors_m: Tuple[float, ...] = (1., 3., 5., 7.)
    sample_rate_hz: float = 2000.
    n_modes: int = 30
    n_locations: int = 9
    ball_drop_repeats: int = 5
    footstep_repeats: int = 5
    output: str = 'velocity'
    snr_db: Optional[float] = None

    def __post_init__(self):
        if not self.materials:
            raise ConfigError('at least one material is required')
        if self.walks == 0 or self.n_persons == 0:
            raise ConfigError('empty experiment: walks and n_persons must '
                              'be positive')
        _check([(self.n_persons, dict(low=1, param_name='n_persons',
                                      include_left=True)),
                (self.walks, dict(low=1, param_name='walks',
                                  include_left=True)),
                (self.sample_rate_hz, dict(low=0,
                                           param_name='sample_rate_hz')),
                (self.n_locations, dict(low=1, param_name='n_locations',
                                        include_left=True)),
                (self.ball_drop_repeats, dict(low=1,
                                              param_name='ball_drop_repeats',
                                              include_left=True)),
                (self.footstep_repeats, dict(low=1,
                                             param_name='footstep_repeats',
                                             include_left=True))])
        if not self.sensors_m:
            raise ConfigError('at least one sensor is required')


@dataclass(frozen=True)
class TransformConfig:
    """Fisher transform settings.

    ``scope`` selects whether offline transforms are fitted per structure
    or jointly over all structures.
    """

    enabled: bool = True
    n_components: Optional[int] = None
    gamma: Optional[float] = None
    scope: str = PER_STRUCTURE
    confirm_min_count: int = 3

    def __post_init__(self):
        if self.scope not in TRANSFORM_SCOPES:
            raise ConfigError('transform scope must be one of {}, got {!r}'
                              .format(TRANSFORM_SCOPES, self.scope))
        _check([(self.confirm_min_count,
                 dict(low=1, param_name='confirm_min_count',
                      include_left=True))])


@dataclass(frozen=True)
class DpmmSettings:
    """Mixture settings; prior mean and scatter come from the seed."""

    alpha: float = 1.
    kappa0: float = 0.01
    nu0: Optional[float] = None
    assignment_mode: str = PER_FOOTSTEP

    def __post_init__(self):
        if self.assignment_mode not in ASSIGNMENT_MODES:
            raise ConfigError('assignment_mode must be one of {}, got {!r}'
                              .format(ASSIGNMENT_MODES, self.assignment_mode))

    def build(self):
        return DpmmConfig(alpha=self.alpha, kappa0=self.kappa0, nu0=self.nu0,
                          assignment_mode=self.assignment_mode)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a pipeline command needs.

    Parameters
    ----------
    dataset : str, optional
        Manifest of an existing dataset. ``None`` lets ``run-online``
        simulate one under ``<out>/dataset``.
    out : str, optional
        Output directory. Default: ``'out'``.
    seed : int, optional
        Master seed of the simulation. Default: ``0``.
    features : FeatureSpec, optional
        Feature settings. Raw band amplitudes unless
        ``log_amplitude`` is set.
    simulation : SimulationConfig, optional
    transform : TransformConfig, optional
    dpmm : DpmmSettings, optional
    seed_walks : int, optional
        Walks of the first person used to seed identification.
        Default: ``3``.
    sensor_ids : tuple of str, optional
        Channels used for identification, ``None`` for all.
    decompose_sensor : str, optional
        Channel used for the variability decomposition. Default: ``'s1'``.
    n_jobs : int, optional
        Worker threads, capped by ``VIBESTEP_THREADS``.
    verbose : int, optional
        Verbosity mode. Range in [0, 3]. Default: ``0``.
    """

    dataset: Optional[str] = None
    out: str = 'out'
    seed: int = 0
    features: FeatureSpec = field(default_factory=FeatureSpec)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    transform: TransformConfig = field(default_factory=TransformConfig)
    dpmm: DpmmSettings = field(default_factory=DpmmSettings)
    seed_walks: int = 3
    sensor_ids: Optional[Tuple[str, ...]] = None
    decompose_sensor: str = 's1'
    n_jobs: Optional[int] = None
    verbose: int = 0

    def __post_init__(self):
        _check([(self.seed, dict(low=0, param_name='seed',
                                 include_left=True)),
                (self.seed_walks, dict(low=1, param_name='seed_walks',
                                       include_left=True)),
                (self.verbose, dict(low=0, high=3, param_name='verbose',
                                    include_left=True,
                                    include_right=True))])
        if self.sensor_ids is not None:
            object.__setattr__(self, 'sensor_ids',
                               tuple(str(s) for s in self.sensor_ids))

    def to_dict(self):
        payload = asdict(self)
        payload['features'] = self.features.to_dict()
        payload['simulation'] = {k: list(v) if isinstance(v, tuple) else v
                                 for k, v in payload['simulation'].items()}
        if self.sensor_ids is not None:
            payload['sensor_ids'] = list(self.sensor_ids)
        return payload

    @classmethod
    def from_dict(cls, payload):
        if not isinstance(payload, dict):
            raise ConfigError('the configuration must be a JSON object')
        payload = dict(payload)
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError('unknown configuration keys: {}'.format(
                ', '.join(sorted(unknown))))
        features = payload.pop('features', None)
        payload['features'] = FeatureSpec() if features is None \
            else FeatureSpec.from_dict(features)
        payload['simulation'] = _from_dict(
            SimulationConfig, payload.pop('simulation', None), 'simulation')
        payload['transform'] = _from_dict(
            TransformConfig, payload.pop('transform', None), 'transform')
        payload['dpmm'] = _from_dict(DpmmSettings, payload.pop('dpmm', None),
                                     'dpmm')
        try:
            return cls(**payload)
        except TypeError as e:
            raise ConfigError(str(e))

    @classmethod
    def load(cls, path):
        return cls.from_dict(load_json(path))

    def with_overrides(self, dataset=None, out=None, seed=None,
                       no_transform=False, alpha=None, assignment_mode=None,
                       verbose=None, log_amplitude=False):
        """Copy with command-line values applied; given flags win."""
        config = self
        if dataset is not None:
            config = replace(config, dataset=dataset)
        if out is not None:
            config = replace(config, out=out)
        if seed is not None:
            config = replace(config, seed=seed)
        if no_transform:
            config = replace(config, transform=replace(config.transform,
                                                       enabled=False))
        if alpha is not None:
            config = replace(config, dpmm=replace(config.dpmm, alpha=alpha))
        if assignment_mode is not None:
            config = replace(config, dpmm=replace(
                config.dpmm, assignment_mode=assignment_mode))
        if verbose is not None:
            config = replace(config, verbose=verbose)
        if log_amplitude:
            config = replace(config, features=replace(config.features,
                                                      log_amplitude=True))
        return config
