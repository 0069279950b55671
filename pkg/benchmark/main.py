import argparse
import os
import tempfile
from dataclasses import replace

import numpy as np
import tqdm

from vibestep.pipeline import PipelineConfig, cmd_run_online


def summarize(name, values):
    values = np.asarray(values)
    return "{}: {:.4f}±{:.4f} ({:.4f})".format(name, np.mean(values),
                                              np.std(values),
                                              np.min(values))


def main(args):
    base = PipelineConfig() if args.config is None \
        else PipelineConfig.load(args.config)
    acc = {True: [], False: []}
    red = []

    for seed in tqdm.tqdm(range(args.seed, args.seed + args.trials)):
        with tempfile.TemporaryDirectory() as root:
            config = replace(base, seed=seed, dataset=None,
                             out=os.path.join(root, 'transform'))
            report = cmd_run_online(config)
            acc[True].append(report['mean_accuracy'])
            red.append(report['mean_variability_reduction'])

            # same recordings without the transform
            config = replace(
                config, out=os.path.join(root, 'raw'),
                dataset=os.path.join(root, 'transform', 'dataset',
                                     'manifest.json'),
                transform=replace(base.transform, enabled=False))
            acc[False].append(cmd_run_online(config)['mean_accuracy'])

    print("seeds {}..{}\t".format(args.seed, args.seed + args.trials - 1) +
          summarize("Accuracy", acc[True]) + "\t" +
          summarize("Accuracy (no transform)", acc[False]) + "\t" +
          summarize("Reduction", red))


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument("--config", type=str, default=None,
                        help="JSON configuration of the experiment. "
                             "Default: the built-in experiment")
    parser.add_argument("--seed", type=int, default=0,
                        help="First master seed. Default: 0")
    parser.add_argument("--trials", type=int, default=10,
                        help="Number of seeds. Default: 10")
    args = parser.parse_args()

    main(args)
