# -*- coding: utf-8 -*-
"""Pipeline commands: simulate, extract, decompose, fit-transform,
identify, evaluate and the composite run-online.

Every command takes a :class:`PipelineConfig`, writes its outputs under
``config.out`` with fixed file names and returns what it wrote. Reports
are deterministic for a fixed configuration; wall-clock times only go to
``metadata.json``.
"""
# License: BSD 2 clause

import os
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from sklearn.decomposition import PCA

from ..data import (BALL_DROP, BY_LOCATION, BY_PERSON, FOOTSTEP, WALK,
                    DatasetManifest, GroupedFeatures, Session, StructureInfo,
                    TraceRef, load_dataset, load_json, save_events,
                    save_features, save_json, save_manifest, save_trace)
from ..exceptions import (ConfigError, DataError, EmptyDataError,
                          MalformedFileError, MissingFileError)
from ..feature import extract_feature_list
from ..identifier import DPMM, OnlineIdentifier, identify_stream
from ..identifier.stream import build_report
from ..metric import (VariabilityReport, decompose_variability,
                      footstep_covariance, scatter_matrices,
                      variability_proportion,
                      within_person_variability_ratio)
from ..simulator import (AttenuationModel, BeamModel, PersonGaitModel,
                         ball_drop_sequence, footstep_sequence,
                         grid_locations, simulate_walk)
from ..transform import FisherTransform
from ..utils import get_n_jobs
from ..version import __version__
from .config import JOINT

MANIFEST = 'manifest.json'
FEATURES = 'features.csv'
VARIABILITY = 'variability.json'
SCATTER = 'scatter_decompose.csv'
TRANSFORM = 'transform.json'
ASSIGNMENTS = 'assignments.csv'
CHECKPOINT = 'checkpoint.json'
REPORT = 'report.json'
PROJECTION_BEFORE = 'projection_before.csv'
PROJECTION_AFTER = 'projection_after.csv'
CONFIG = 'config.json'
METADATA = 'metadata.json'

FLOAT_FORMAT = '%.17g'
SEED_ROLE = 'seed'
STREAM_ROLE = 'stream'

_WALK_STREAM, _BALL_STREAM, _STEP_STREAM, _POPULATION = range(4)


def prepare_output(path):
    """Create ``path`` if needed and make sure it can be written to."""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError('cannot create output directory {}: {}'.format(
            path, e.strerror))
    if not os.access(path, os.W_OK):
        raise ConfigError('output directory {} is not writable'.format(path))
    return path


def record_run(config, command, started_at):
    """Write the merged configuration and the run metadata."""
    out = prepare_output(config.out)
    save_json(config.to_dict(), out / CONFIG)
    save_json({'command': command,
               'version': __version__,
               'started_at': started_at.isoformat(),
               'finished_at': datetime.now(timezone.utc).isoformat()},
              out / METADATA)


def derive_seed(*keys):
    """Independent seed for one stream of the experiment."""
    return int(np.random.SeedSequence([int(k) for k in keys])
               .generate_state(1)[0])


def _require_dataset(config):
    if config.dataset is None:
        raise ConfigError('no dataset given: pass --dataset or set '
                          '"dataset" in the configuration')
    return load_dataset(config.dataset)


def _write_session(root, session_id, kind, structure_id, recording,
                   timestamp, person_id=None, location_id=None):
    refs = []
    for trace in recording.traces:
        path = 'traces/{}_{}.csv'.format(session_id, trace.sensor_id)
        save_trace(trace, root / path)
        refs.append(TraceRef(path, trace.sensor_id,
                             trace.sensor_position_m, trace.sample_rate_hz))
    events_path = 'events/{}.csv'.format(session_id)
    save_events(recording.events, root / events_path)
    return Session(session_id, kind, structure_id, tuple(refs),
                   person_id=person_id, location_id=location_id,
                   location_m=recording.location_m, timestamp=timestamp,
                   events_path=events_path)


def _walk_session(root, beam, gait, sim, attenuation, structure_id, seed,
                  session_id, timestamp):
    recording = simulate_walk(beam, gait, sensors=sim.sensors_m, seed=seed,
                              sample_rate_hz=sim.sample_rate_hz,
                              attenuation=attenuation, output=sim.output,
                              snr_db=sim.snr_db, trace_ref=session_id)
    return _write_session(root, session_id, WALK, structure_id, recording,
                          timestamp, person_id=gait.person_id)


def cmd_simulate(config, out=None):
    """Generate the synthetic experiment and write it as a dataset.

    Each structure in ``config.simulation.materials`` receives a ball-drop
    grid, single footsteps of its first walker on the same grid, and the
    walks of ``n_persons`` walkers. Walks are time-stamped person after
    person. Person ids are prefixed with the structure id.

    Parameters
    ----------
    config : PipelineConfig
        The experiment layout and the master seed.
    out : str or Path, optional
        Dataset directory, ``config.out`` by default.

    Returns
    -------
    manifest_path : Path
        The written ``manifest.json``.
    """
    sim = config.simulation
    root = prepare_output(config.out if out is None else out)
    prepare_output(root / 'traces')
    prepare_output(root / 'events')
    n_jobs = get_n_jobs(config.n_jobs)

    structures, sessions = [], []
    for s, material in enumerate(sim.materials):
        beam = BeamModel.preset(material, n_modes=sim.n_modes)
        attenuation = AttenuationModel.preset(material)
        structures.append(StructureInfo(material, material))
        persons = [replace(gait, person_id='{}-{}'.format(material,
                                                          gait.person_id))
                   for gait in PersonGaitModel.population(
                       sim.n_persons, seed=derive_seed(config.seed, s,
                                                       _POPULATION))]
        locations = grid_locations(beam, sim.n_locations)
        kwargs = dict(sensors=sim.sensors_m, sample_rate_hz=sim.sample_rate_hz,
                      attenuation=attenuation, output=sim.output,
                      snr_db=sim.snr_db, n_jobs=n_jobs)

        fixed = [(BALL_DROP, 'ball', sim.ball_drop_repeats, None,
                  ball_drop_sequence(beam, locations, sim.ball_drop_repeats,
                                     seed=derive_seed(config.seed, s,
                                                      _BALL_STREAM),
                                     **kwargs)),
                 (FOOTSTEP, 'step', sim.footstep_repeats, persons[0].person_id,
                  footstep_sequence(beam, persons[0], locations,
                                    sim.footstep_repeats,
                                    seed=derive_seed(config.seed, s,
                                                     _STEP_STREAM),
                                    **kwargs))]
        for kind, tag, repeats, person_id, recordings in fixed:
            for i, recording in enumerate(recordings):
                location, r = divmod(i, repeats)
                session_id = '{}-{}-L{}-r{}'.format(material, tag,
                                                    location + 1, r)
                sessions.append(_write_session(
                    root, session_id, kind, material, recording,
                    timestamp=float(i), person_id=person_id,
                    location_id='L{}'.format(location + 1)))

        sessions.extend(Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(_walk_session)(
                root, beam, gait, sim, attenuation, material,
                derive_seed(config.seed, s, _WALK_STREAM, k, w),
                '{}-walk-{}'.format(gait.person_id, w),
                60. * (k * sim.walks + w))
            for k, gait in enumerate(persons) for w in range(sim.walks)))

    manifest = DatasetManifest(tuple(structures), tuple(sessions),
                               config.features.to_dict())
    manifest_path = root / MANIFEST
    save_manifest(manifest, manifest_path)
    return manifest_path


def cmd_extract(config, dataset=None):
    """Detect footsteps in every session and write ``features.csv``."""
    dataset = _require_dataset(config) if dataset is None else dataset
    out = prepare_output(config.out)
    features = extract_feature_list(dataset, config.features,
                                     sensor_ids=config.sensor_ids,
                                     n_jobs=config.n_jobs)
    if not features:
        raise EmptyDataError('no events detected')
    save_features(features, out / FEATURES)
    return features


def _decompose(grouped):
    if grouped.n_groups == 1:
        sigma_footstep = footstep_covariance(grouped)
        return variability_proportion(np.zeros_like(sigma_footstep),
                                      sigma_footstep)
    return decompose_variability(grouped)


def _scatter_rows(features, kinds):
    X = np.vstack([f.values for f in features])
    n_components = min(2, X.shape[0], X.shape[1])
    projected = PCA(n_components=n_components,
                    svd_solver='full').fit_transform(X)
    if n_components < 2:
        projected = np.hstack([projected, np.zeros(
            (X.shape[0], 2 - n_components))])
    return [{'structure_id': f.structure_id, 'kind': kinds[f.session_id],
             'location_id': f.location_id, 'session_id': f.session_id,
             'pc1': pc[0], 'pc2': pc[1]}
            for f, pc in zip(features, projected)]


def cmd_decompose(config, dataset=None):
    """Split the variability of fixed-location recordings.

    Ball-drop and single-footstep features of ``config.decompose_sensor``
    are grouped by excitation location; each structure and impulse kind
    gets a :class:`VariabilityReport`. A single location has no
    structural variability. The first two principal components of each
    structure's features are written to ``scatter_decompose.csv``.

    Returns
    -------
    reports : dict
        ``{structure_id: {kind: VariabilityReport}}``.
    """
    dataset = _require_dataset(config) if dataset is None else dataset
    out = prepare_output(config.out)
    kinds = {s.session_id: s.kind for s in dataset.manifest.sessions}
    fixed = [s for s in dataset.manifest.sessions
             if s.kind in (BALL_DROP, FOOTSTEP)]
    sensors = {ref.sensor_id for s in fixed for ref in s.traces}
    if fixed and config.decompose_sensor not in sensors:
        raise ConfigError('sensor {!r} is not part of the fixed-location '
                          'recordings ({})'.format(config.decompose_sensor,
                                                   ', '.join(sorted(sensors))))

    reports, rows = {}, []
    for structure in dataset.manifest.structures:
        sid = structure.structure_id
        features = [f for kind in (BALL_DROP, FOOTSTEP)
                    for f in extract_feature_list(
                        dataset, config.features, kind=kind, structure_id=sid,
                        sensor_ids=[config.decompose_sensor],
                        n_jobs=config.n_jobs)]
        if not features:
            continue
        for kind in (BALL_DROP, FOOTSTEP):
            selected = [f for f in features if kinds[f.session_id] == kind]
            if selected:
                reports.setdefault(sid, {})[kind] = _decompose(
                    GroupedFeatures.from_features(selected, BY_LOCATION))
        rows.extend(_scatter_rows(features, kinds))
    if not reports:
        raise EmptyDataError('no ball-drop or footstep events to decompose')

    save_json({sid: {kind: report.to_dict() for kind, report in by_kind.items()}
               for sid, by_kind in reports.items()}, out / VARIABILITY)
    pd.DataFrame(rows, columns=['structure_id', 'kind', 'location_id',
                                'session_id', 'pc1', 'pc2']).to_csv(
        out / SCATTER, index=False, float_format=FLOAT_FORMAT)
    return reports


def load_variability(path):
    """Read ``variability.json`` back into reports."""
    return {sid: {kind: VariabilityReport.from_dict(payload)
                  for kind, payload in by_kind.items()}
            for sid, by_kind in load_json(path).items()}


def walk_stream(dataset, features):
    """Order walk features as they arrive: by session timestamp, then by
    peak time, then by sensor."""
    order = {s.session_id: i for i, s in enumerate(dataset.sessions(kind=WALK))}
    return sorted(features, key=lambda f: (order[f.session_id], f.time_s,
                                           f.sensor_id))


def split_seed(stream, seed_walks):
    """Split a walk stream into the seed person's first walks and the rest.

    The seed person is the first one to appear.
    """
    seed_person = stream[0].person_id
    walks = []
    for f in stream:
        if f.person_id == seed_person and f.session_id not in walks:
            walks.append(f.session_id)
    walks = set(walks[:seed_walks])
    seed = [f for f in stream if f.session_id in walks]
    rest = [f for f in stream if f.session_id not in walks]
    return seed_person, seed, rest


def _values(features, dim=None):
    if not features:
        return np.empty((0, dim or 0))
    return np.vstack([f.values for f in features])


def _walk_features(config, dataset):
    features = extract_feature_list(dataset, config.features, kind=WALK,
                                     sensor_ids=config.sensor_ids,
                                     n_jobs=config.n_jobs)
    if not features:
        raise EmptyDataError('no footsteps detected in the walks')
    by_structure = {}
    for f in walk_stream(dataset, features):
        by_structure.setdefault(f.structure_id, []).append(f)
    return by_structure


def _require_persons(structure_id, stream):
    persons = {f.person_id for f in stream}
    if None in persons:
        raise DataError('walks of structure {} lack a person id'.format(
            structure_id))
    if len(persons) < 2:
        raise DataError('structure {} has fewer than 2 persons'.format(
            structure_id))


def _within_total(grouped):
    S_W, _, S_T, _, _ = scatter_matrices(grouped)
    return float(np.trace(S_W) / np.trace(S_T))


def _fit_reduction(config, features):
    before = GroupedFeatures.from_features(features, BY_PERSON)
    transform = FisherTransform(n_components=config.transform.n_components,
                                gamma=config.transform.gamma,
                                verbose=config.verbose).fit(before)
    after = transform.transform(before)
    return transform, {
        'within_total_before': _within_total(before),
        'within_total_after': _within_total(after),
        'variability_reduction': within_person_variability_ratio(before,
                                                                 after),
    }


def cmd_fit_transform(config, dataset=None):
    """Fit the Fisher transform on labeled walks.

    With ``transform.scope = 'per-structure'`` one transform is fitted
    per structure, with ``'joint'`` a single one on all walks (key
    ``'joint'``). ``transform.json`` holds each transform and its
    variability reduction.

    Returns
    -------
    fitted : dict
        ``{key: (FisherTransform, metrics)}``.
    """
    dataset = _require_dataset(config) if dataset is None else dataset
    out = prepare_output(config.out)
    by_structure = _walk_features(config, dataset)
    if config.transform.scope == JOINT:
        pools = {JOINT: [f for sid in sorted(by_structure)
                         for f in by_structure[sid]]}
    else:
        pools = by_structure
    fitted = {key: _fit_reduction(config, features)
              for key, features in sorted(pools.items())}
    save_json({key: dict(metrics, transform=transform.to_dict())
               for key, (transform, metrics) in fitted.items()},
              out / TRANSFORM)
    return fitted


def load_transforms(path):
    """Read ``transform.json`` back into fitted transforms."""
    return {key: FisherTransform.from_dict(payload['transform'])
            for key, payload in load_json(path).items()}


def _fixed_transform(config, structure_id):
    if not config.transform.enabled:
        return None
    path = Path(config.out) / TRANSFORM
    if not path.exists():
        return None
    transforms = load_transforms(path)
    if structure_id in transforms:
        return transforms[structure_id]
    return transforms.get(JOINT)


def _assignment_rows(structure_id, features, role, cluster_ids, newcomer):
    return [{'structure_id': structure_id, 'session_id': f.session_id,
             'sensor_id': f.sensor_id, 'time_s': f.time_s,
             'person_id': f.person_id, 'role': role, 'cluster_id': c,
             'newcomer': int(n)}
            for f, c, n in zip(features, cluster_ids, newcomer)]


def cmd_identify(config, dataset=None):
    """Identify the walkers of every structure in a fixed feature space.

    The model is seeded with the first ``seed_walks`` walks of the first
    person and the remaining walks are streamed in arrival order. When
    the transform is enabled and ``transform.json`` exists in the output
    directory, features are mapped through it first. Assignments go to
    ``assignments.csv`` and the final models to ``checkpoint.json``.

    Returns
    -------
    reports : dict
        ``{structure_id: OnlineRunReport}``.
    """
    dataset = _require_dataset(config) if dataset is None else dataset
    out = prepare_output(config.out)
    reports, rows, checkpoints = {}, [], {}
    for sid, stream in sorted(_walk_features(config, dataset).items()):
        _require_persons(sid, stream)
        seed_person, seed, rest = split_seed(stream, config.seed_walks)
        if not rest:
            raise EmptyDataError('structure {} has nothing to stream after '
                                 'the seed walks'.format(sid))
        transform = _fixed_transform(config, sid)
        seed_X, X = _values(seed), _values(rest)
        if transform is not None:
            seed_X, X = transform.transform(seed_X), transform.transform(X)

        model = DPMM(config.dpmm.build(), verbose=config.verbose)
        seed_cluster = model.seed(seed_X)
        report = identify_stream(model, X, [f.person_id for f in rest],
                                 groups=[f.session_id for f in rest],
                                 known=(seed_person,),
                                 verbose=config.verbose)
        reports[sid] = report
        checkpoints[sid] = model.to_dict()
        rows.extend(_assignment_rows(sid, seed, SEED_ROLE,
                                     [seed_cluster] * len(seed),
                                     [False] * len(seed)))
        rows.extend(_assignment_rows(sid, rest, STREAM_ROLE,
                                     report.predictions,
                                     _newcomer_flags(report)))

    save_assignments(rows, out / ASSIGNMENTS)
    save_json(checkpoints, out / CHECKPOINT)
    return reports


def _newcomer_flags(report):
    flags = np.zeros(report.n_samples, dtype=bool)
    flags[[entry['index'] for entry in report.newcomer_log]] = True
    return flags.tolist()


ASSIGNMENT_COLUMNS = ['structure_id', 'session_id', 'sensor_id', 'time_s',
                      'person_id', 'role', 'cluster_id', 'newcomer']


def save_assignments(rows, path):
    pd.DataFrame(rows, columns=ASSIGNMENT_COLUMNS).to_csv(
        path, index=False, float_format=FLOAT_FORMAT)


def load_assignments(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFileError('{} does not exist'.format(path), path=path)
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    if list(frame.columns) != ASSIGNMENT_COLUMNS:
        raise MalformedFileError('{}: unexpected assignment header'.format(
            path), path=path, row=1)
    try:
        frame['cluster_id'] = frame['cluster_id'].astype(int)
        frame['newcomer'] = frame['newcomer'].astype(int).astype(bool)
    except ValueError as e:
        raise MalformedFileError('{}: {}'.format(path, e), path=path)
    return frame


def _summary(reports, key):
    values = [r[key] for r in reports.values() if key in r]
    return float(np.mean(values)) if values else None


def cmd_evaluate(config):
    """Score ``assignments.csv`` against the true persons and write
    ``report.json``."""
    out = prepare_output(config.out)
    frame = load_assignments(out / ASSIGNMENTS)
    if frame.empty:
        raise EmptyDataError('{} holds no assignments'.format(
            out / ASSIGNMENTS))
    structures = {}
    for sid, rows in frame.groupby('structure_id', sort=True):
        known = sorted(set(rows.loc[rows['role'] == SEED_ROLE, 'person_id']))
        stream = rows[rows['role'] == STREAM_ROLE]
        if stream.empty:
            continue
        report = build_report(stream['person_id'].tolist(),
                              stream['cluster_id'].tolist(),
                              stream['newcomer'].tolist(), known)
        structures[sid] = {'online': report.to_dict(),
                           'seed_persons': known}
    payload = {'structures': structures,
               'mean_accuracy': _summary(
                   {k: v['online'] for k, v in structures.items()},
                   'accuracy')}
    save_json(payload, out / REPORT)
    return payload


def _projection_rows(features, Y):
    if Y.shape[1] < 2:
        Y = np.hstack([Y, np.zeros((Y.shape[0], 2 - Y.shape[1]))])
    return [{'structure_id': f.structure_id, 'person_id': f.person_id,
             'session_id': f.session_id, 'sensor_id': f.sensor_id,
             'time_s': f.time_s, 'x': y[0], 'y': y[1]}
            for f, y in zip(features, Y)]


PROJECTION_COLUMNS = ['structure_id', 'person_id', 'session_id', 'sensor_id',
                      'time_s', 'x', 'y']


def cmd_run_online(config):
    """The full experiment.

    Simulates a dataset under ``<out>/dataset`` unless one is given, runs
    the variability decomposition when fixed-location recordings exist,
    then for every structure

    - fits the offline Fisher transform on the labeled walks to measure
      the variability reduction and the 2-D projections (with
      ``transform.scope = 'joint'`` one transform on the walks of all
      structures, stored under ``'joint'``),
    - runs :class:`~vibestep.identifier.OnlineIdentifier` seeded with the
      first person's first walks over the remaining walks in arrival
      order, refitting its transform as identities are confirmed.

    Writes ``report.json``, ``transform.json``,
    ``projection_before.csv`` (first two principal components of the
    raw features) and ``projection_after.csv`` (first two Fisher
    components), plus the decomposition outputs.

    Returns
    -------
    payload : dict
        The content of ``report.json``.
    """
    out = prepare_output(config.out)
    if config.dataset is None:
        manifest_path = cmd_simulate(config, out=out / 'dataset')
        config = replace(config, dataset=str(manifest_path))
    dataset = load_dataset(config.dataset)

    if any(s.kind in (BALL_DROP, FOOTSTEP) for s in dataset.manifest.sessions):
        cmd_decompose(config, dataset)

    by_structure = _walk_features(config, dataset)
    for sid, stream in sorted(by_structure.items()):
        _require_persons(sid, stream)
    structures, transforms = {}, {}
    before_rows, after_rows = [], []
    joint = None
    if config.transform.scope == JOINT:
        joint = _fit_reduction(config, [f for sid in sorted(by_structure)
                                        for f in by_structure[sid]])
        transforms[JOINT] = dict(joint[1], transform=joint[0].to_dict())
    for sid, stream in sorted(by_structure.items()):
        if joint is None:
            transform, metrics = _fit_reduction(config, stream)
            transforms[sid] = dict(metrics, transform=transform.to_dict())
        else:
            transform, metrics = joint
        X_all = _values(stream)
        n_components = min(2, X_all.shape[0], X_all.shape[1])
        before_rows.extend(_projection_rows(
            stream, PCA(n_components=n_components,
                        svd_solver='full').fit_transform(X_all)))
        after_rows.extend(_projection_rows(
            stream, transform.transform(X_all)[:, :2]))

        seed_person, seed, rest = split_seed(stream, config.seed_walks)
        if not rest:
            raise EmptyDataError('structure {} has nothing to stream after '
                                 'the seed walks'.format(sid))
        identifier = OnlineIdentifier(
            config.dpmm.build(), transform=config.transform.enabled,
            n_components=config.transform.n_components,
            gamma=config.transform.gamma,
            confirm_min_count=config.transform.confirm_min_count,
            verbose=config.verbose)
        report = identifier.run(_values(rest), [f.person_id for f in rest],
                                groups=[f.session_id for f in rest],
                                seed_X=_values(seed), known=(seed_person,))
        structures[sid] = {'online': report.to_dict(),
                           'seed_persons': [seed_person],
                           'n_persons': len({f.person_id for f in stream}),
                           'transform_enabled': config.transform.enabled,
                           'variability': metrics}

    payload = {
        'structures': structures,
        'transform_scope': config.transform.scope,
        'mean_accuracy': _summary(
            {k: v['online'] for k, v in structures.items()}, 'accuracy'),
        'mean_variability_reduction': _summary(
            {k: v['variability'] for k, v in structures.items()},
            'variability_reduction'),
    }
    save_json(payload, out / REPORT)
    save_json(transforms, out / TRANSFORM)
    pd.DataFrame(before_rows, columns=PROJECTION_COLUMNS).to_csv(
        out / PROJECTION_BEFORE, index=False, float_format=FLOAT_FORMAT)
    pd.DataFrame(after_rows, columns=PROJECTION_COLUMNS).to_csv(
        out / PROJECTION_AFTER, index=False, float_format=FLOAT_FORMAT)
    return payload
