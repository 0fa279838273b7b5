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

"""Renders and validates every preset into one directory.

```
python render_presets.py --out=/tmp/pathfield --num_workers=8
```

Each preset yields `<name>.png` and its validation report. Presets whose
report fails are listed at the end; the images are written regardless.
"""

from typing import Sequence

from absl import app
from absl import flags
from absl import logging

from pathfield import experiments

flags.DEFINE_string('out', '/tmp/pathfield', 'Directory receiving the images.')
flags.DEFINE_integer('num_workers', 4, 'Threads per preset.')
flags.DEFINE_integer(
    'seeds', None,
    'Flux lines per image. Defaults to the preset seeding.')
flags.DEFINE_boolean('validate', True,
                     'Whether to also write a validation report per preset.')

FLAGS = flags.FLAGS


def main(argv: Sequence[str]) -> None:
  if len(argv) > 1:
    raise app.UsageError('Too many command-line arguments.')

  failed = []
  for name in experiments.preset_names():
    cfg = experiments.preset(name)
    if FLAGS.seeds is not None:
      cfg = cfg.with_seed_count(FLAGS.seeds)
    path = experiments.run_render(cfg, FLAGS.out, FLAGS.num_workers)
    logging.info('Rendered %s to %s', name, path)
    if FLAGS.validate:
      report = experiments.run_validate(cfg, FLAGS.out, FLAGS.num_workers)
      if not report.passed:
        failed.append(name)

  if failed:
    logging.warning('Validation failed for %s', failed)
  else:
    logging.info('All %d presets rendered.', len(experiments.preset_names()))


if __name__ == '__main__':
  app.run(main)
