# -*- coding: utf-8 -*-
"""The ``vibestep`` console script."""
# License: BSD 2 clause

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .exceptions import (ConfigError, DataError, NumericalError,
                         VibestepError)
from .identifier import ASSIGNMENT_MODES
from .pipeline import (PipelineConfig, cmd_decompose, cmd_evaluate,
                       cmd_extract, cmd_fit_transform, cmd_identify,
                       cmd_run_online, cmd_simulate, record_run)
from .version import __version__

COMMANDS = {
    'simulate': (cmd_simulate,
                 'simulate the synthetic experiment into --out'),
    'extract': (cmd_extract,
                'detect footsteps and write features.csv'),
    'decompose': (cmd_decompose,
                  'split footstep and structural variability'),
    'fit-transform': (cmd_fit_transform,
                      'fit the Fisher transform on labeled walks'),
    'identify': (cmd_identify,
                 'identify walkers in a fixed feature space'),
    'evaluate': (cmd_evaluate,
                 'score assignments.csv and write report.json'),
    'run-online': (cmd_run_online,
                   'full experiment with the transform in the loop'),
}

EPILOG = """examples:
  vibestep run-online --out results
  vibestep run-online --out ablation --no-transform
  vibestep simulate --out data --seed 3
  vibestep decompose --dataset data/manifest.json --out results
"""


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as :class:`ConfigError` instead of exiting."""

    def error(self, message):
        raise ConfigError('{}: {}'.format(self.prog, message))


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', default=None,
                        help='JSON pipeline configuration')
    common.add_argument('--out', default=None, help='output directory')
    common.add_argument('--dataset', default=None,
                        help='manifest.json of an existing dataset')
    common.add_argument('--seed', type=int, default=None,
                        help='master seed of the simulation')
    common.add_argument('--no-transform', action='store_true',
                        help='identify on raw features')
    common.add_argument('--alpha', type=float, default=None,
                        help='concentration of the identity mixture')
    common.add_argument('--assignment-mode', default=None,
                        choices=ASSIGNMENT_MODES,
                        help='score footsteps one by one or whole walks')
    common.add_argument('--log-amplitude', action='store_true',
                        help='use log band amplitudes as features')
    common.add_argument('--verbose', type=int, default=None,
                        choices=range(4), help='progress output, 0 to 3')

    parser = ArgumentParser(
        prog='vibestep',
        description='Online person identification from footstep-induced '
                    'floor vibrations.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG)
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, (_, text) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=text,
                              description=text)
    return parser


def load_config(args):
    """Configuration file (or defaults) with the flags applied."""
    config = PipelineConfig() if args.config is None \
        else PipelineConfig.load(args.config)
    return config.with_overrides(dataset=args.dataset, out=args.out,
                                 seed=args.seed,
                                 no_transform=args.no_transform,
                                 alpha=args.alpha,
                                 assignment_mode=args.assignment_mode,
                                 verbose=args.verbose,
                                 log_amplitude=args.log_amplitude)


def error_payload(error):
    payload = {'error': type(error).__name__, 'message': str(error),
               'exit_code': error.exit_code}
    if isinstance(error, DataError):
        if error.path is not None:
            payload['path'] = error.path
        if error.row is not None:
            payload['row'] = error.row
    return payload


def main(argv=None):
    """Run one command; returns the process exit code.

    ``0`` on success, ``2`` for configuration and usage errors, ``3``
    for data and I/O errors, ``4`` for numerical failures and ``1`` for
    anything else. Errors are reported as one JSON object on stderr.
    """
    started_at = datetime.now(timezone.utc)
    try:
        try:
            args = build_parser().parse_args(argv)
            config = load_config(args)
            COMMANDS[args.command][0](config)
            record_run(config, args.command, started_at)
        except np.linalg.LinAlgError as e:
            raise NumericalError(str(e))
        except VibestepError:
            raise
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))
        except OSError as e:
            raise DataError(str(e), path=e.filename)
        except Exception as e:
            raise VibestepError('{}: {}'.format(type(e).__name__, e))
    except VibestepError as e:
        sys.stderr.write(json.dumps(error_payload(e), sort_keys=True) + '\n')
        return e.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())
