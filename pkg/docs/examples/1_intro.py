"""
Identification Walkthrough
==========================

In this tutorial, you will simulate a small footstep-vibration experiment,
measure how much of the spectral variability comes from the floor rather
than from the walker, and identify the walkers online with and without a
Fisher transform.

(Time estimate: 2 minutes)
"""
#######################################################################
# Simulation
# ----------
# A :class:`~vibestep.pipeline.PipelineConfig` describes the experiment.
# Here, a single wooden floor with four walkers, three walks each, and
# ball drops on a grid of five locations. ``cmd_simulate`` writes the
# traces, the footstep events and a ``manifest.json``.


import tempfile

from vibestep.pipeline import PipelineConfig, SimulationConfig, cmd_simulate

root = tempfile.mkdtemp()
config = PipelineConfig(
    out=root, seed=7,
    simulation=SimulationConfig(materials=('wood',), n_persons=4, walks=3,
                                sensors_m=(3., 5.), n_modes=15,
                                n_locations=5))
manifest_path = cmd_simulate(config)

#######################################################################
# The dataset is loaded back from its manifest.


from vibestep.data import load_dataset

dataset = load_dataset(manifest_path)
print(dataset.person_ids())

#######################################################################
# Variability Decomposition
# -------------------------
# Repeated ball drops at fixed locations separate the structure's share
# of the variability from the share of the impulse itself. Features of a
# single sensor are grouped by excitation location.


from vibestep.data import BALL_DROP, BY_LOCATION
from vibestep.feature import extract_dataset
from vibestep.metric import decompose_variability

by_location = extract_dataset(dataset, config.features, BY_LOCATION,
                              kind=BALL_DROP, sensor_ids=['s1'])
report = decompose_variability(by_location)
print('structure share: {:.3f}, footstep share: {:.3f}'.format(
    report.structure_share, report.footstep_share))

#######################################################################
# Fisher Transform
# ----------------
# With the walkers' labels, :class:`~vibestep.transform.FisherTransform`
# finds the directions that spread persons apart while keeping each
# person's footsteps together.


from vibestep.data import BY_PERSON, WALK
from vibestep.metric import within_person_variability_ratio
from vibestep.transform import FisherTransform

by_person = extract_dataset(dataset, config.features, BY_PERSON, kind=WALK)
transform = FisherTransform().fit(by_person)
reduction = within_person_variability_ratio(
    by_person, transform.transform(by_person))
print('within-person variability reduced by {:.1%}'.format(reduction))

#######################################################################
# Online Identification
# ---------------------
# Footsteps arrive one at a time. The first walker's first walk seeds the
# mixture; every later footstep is assigned to a known identity or opens
# a new one. :class:`~vibestep.identifier.OnlineIdentifier` refits the
# transform whenever a new identity is confirmed.


import numpy as np

from vibestep.feature import extract_feature_list
from vibestep.identifier import OnlineIdentifier

stream = extract_feature_list(dataset, config.features, kind=WALK)
first = stream[0].session_id
seed = [f for f in stream if f.session_id == first]
rest = [f for f in stream if f.session_id != first]
X_seed = np.array([f.values for f in seed])
X = np.array([f.values for f in rest])
labels = [f.person_id for f in rest]

for use_transform in (True, False):
    identifier = OnlineIdentifier(transform=use_transform)
    result = identifier.run(X, labels, seed_X=X_seed,
                            known=[seed[0].person_id])
    print('transform={}: accuracy {:.3f}, {} identities, {} refits'.format(
        use_transform, result.accuracy, result.n_clusters, result.n_refits))

#######################################################################
# Command Line
# ------------
# The same experiment, with the decomposition, projections and reports
# written to disk, is one command:
#
# .. code-block:: bash
#
#     vibestep run-online --out out --seed 7
