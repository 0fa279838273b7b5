# Copyright 2022 Google LLC.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Command line entry point.

```
pathfield simulate --preset=fig2 --out=/tmp/fig2
pathfield validate --config=my_experiment.json --num_workers=4
pathfield render --preset=fig2d --grid=1024,1024 --seeds=40 --out=/tmp/img
```

Exit status is 0 on success, 1 when the experiment cannot be loaded or run,
and 2 when `validate` completes but a check fails.
"""

from typing import Callable, Sequence

from absl import app
from absl import flags
from absl import logging

from pathfield._src import errors
from pathfield._src.experiments import config as config_lib
from pathfield._src.experiments import presets
from pathfield._src.experiments import runners

flags.DEFINE_string('config', None, 'Path of a JSON experiment file.')
flags.DEFINE_enum('preset', None, presets.preset_names(),
                  'Name of a built-in experiment.')
flags.DEFINE_string('out', '.', 'Directory receiving the artifacts.')
flags.DEFINE_list('grid', None,
                  'Overrides the field grid size, given as nx,nt.')
flags.DEFINE_integer('seeds', None, 'Overrides the number of flux lines.')
flags.DEFINE_enum('format', 'csv', ['csv'],
                  'Table format of simulate and trajectories.')
flags.DEFINE_integer('num_workers', 1,
                     'Threads used for sampling and integration.')

FLAGS = flags.FLAGS

EXIT_ERROR = 1
EXIT_VALIDATION_FAILED = 2

_USAGE = 'Usage: pathfield {simulate|trajectories|validate|render} [flags]'


def _grid_size(values: Sequence[str]):
  try:
    nx, nt = (int(v) for v in values)
  except ValueError as e:
    raise app.UsageError(f'--grid expects nx,nt, got {values}.') from e
  return nx, nt


def load_experiment() -> config_lib.ExperimentConfig:
  """The experiment selected by --config or --preset, with overrides."""
  if (FLAGS.config is None) == (FLAGS.preset is None):
    raise app.UsageError('Pass exactly one of --config and --preset.')
  if FLAGS.config is not None:
    cfg = config_lib.parse_config(FLAGS.config)
  else:
    cfg = presets.preset(FLAGS.preset)
  try:
    if FLAGS.grid:
      cfg = cfg.with_grid_size(*_grid_size(FLAGS.grid))
    if FLAGS.seeds is not None:
      cfg = cfg.with_seed_count(FLAGS.seeds)
  except ValueError as e:
    raise app.UsageError(str(e)) from e
  return cfg


def _validate(cfg: config_lib.ExperimentConfig) -> int:
  report = runners.run_validate(cfg, FLAGS.out, FLAGS.num_workers)
  print(report.to_text(), end='')
  return 0 if report.passed else EXIT_VALIDATION_FAILED


def _write(
    run: Callable[..., str]
) -> Callable[[config_lib.ExperimentConfig], int]:
  """Wraps a runner that writes one artifact and prints its path."""

  def command(cfg: config_lib.ExperimentConfig) -> int:
    path = run(cfg, FLAGS.out, FLAGS.num_workers)
    print(path)
    return 0

  return command


_COMMANDS = {
    'simulate': _write(runners.run_simulate),
    'trajectories': _write(runners.run_trajectories),
    'validate': _validate,
    'render': _write(runners.run_render),
}


def main(argv: Sequence[str]) -> int:
  if len(argv) != 2 or argv[1] not in _COMMANDS:
    raise app.UsageError(_USAGE)
  command = _COMMANDS[argv[1]]
  try:
    cfg = load_experiment()
    logging.info('Running %s on %s', argv[1], cfg.name)
    return command(cfg)
  except errors.PathFieldError as e:
    logging.error('%s failed: %s', argv[1], e)
    return EXIT_ERROR


def run() -> None:
  app.run(main)


if __name__ == '__main__':
  run()
