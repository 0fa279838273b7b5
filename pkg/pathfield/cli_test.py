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

"""Tests for cli."""

import json
import os
import shutil
import tempfile

from absl import app
from absl import flags
from absl.testing import flagsaver

from pathfield import cli
from absl.testing import absltest

FLAGS = flags.FLAGS


def _tempdir(test_case):
  directory = tempfile.mkdtemp()
  test_case.addCleanup(shutil.rmtree, directory, ignore_errors=True)
  return directory


def _write_document(directory, filename, data):
  path = os.path.join(directory, filename)
  with open(path, 'w') as f:
    json.dump(data, f)
  return path


def _minimal_config(directory, **packet_overrides):
  packet = dict(center=5.0, drift=-0.25)
  packet.update(packet_overrides)
  data = {
      'packets': [packet, {'center': -5.0, 'drift': 0.25}],
      'grid': {'nx': 12, 'nt': 6},
  }
  return _write_document(directory, 'small.json', data)


class CliTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    if not FLAGS.is_parsed():
      FLAGS.mark_as_parsed()
    self.out = _tempdir(self)

  def test_simulate_preset_with_overrides(self):
    with flagsaver.flagsaver(
        preset='fig2', grid=['10', '4'], out=self.out):
      self.assertEqual(cli.main(['pathfield', 'simulate']), 0)
    path = os.path.join(self.out, 'fig2_intensity.csv')
    with open(path) as f:
      self.assertLen(f.readlines(), 1 + 10 * 4)

  def test_simulate_config_file(self):
    config = _minimal_config(_tempdir(self))
    with flagsaver.flagsaver(config=config, out=self.out):
      self.assertEqual(cli.main(['pathfield', 'simulate']), 0)
    self.assertTrue(
        os.path.exists(os.path.join(self.out, 'small_intensity.csv')))

  def test_invalid_config_exits_with_error(self):
    config = _minimal_config(_tempdir(self), sigma0=0.0)
    with flagsaver.flagsaver(config=config, out=self.out):
      with self.assertLogs(level='ERROR') as logs:
        self.assertEqual(cli.main(['pathfield', 'simulate']), cli.EXIT_ERROR)
    self.assertIn('packets[0].sigma0', logs.output[0])

  def test_missing_config_file(self):
    missing = os.path.join(self.out, 'absent.json')
    with flagsaver.flagsaver(config=missing):
      self.assertEqual(cli.main(['pathfield', 'validate']), cli.EXIT_ERROR)

  def test_unknown_subcommand(self):
    with flagsaver.flagsaver(preset='fig2'):
      with self.assertRaises(app.UsageError):
        cli.main(['pathfield', 'animate'])

  def test_needs_exactly_one_source(self):
    with flagsaver.flagsaver(preset='fig2', config='x.json'):
      with self.assertRaises(app.UsageError):
        cli.main(['pathfield', 'simulate'])
    with self.assertRaises(app.UsageError):
      cli.main(['pathfield', 'simulate'])

  def test_bad_grid_flag(self):
    with flagsaver.flagsaver(preset='fig2', grid=['10']):
      with self.assertRaises(app.UsageError):
        cli.main(['pathfield', 'simulate'])
    with flagsaver.flagsaver(preset='fig2', grid=['1', '10']):
      with self.assertRaises(app.UsageError):
        cli.main(['pathfield', 'simulate'])

  def test_bad_seed_count(self):
    with flagsaver.flagsaver(preset='fig2', seeds=0):
      with self.assertRaises(app.UsageError):
        cli.main(['pathfield', 'trajectories'])

  def test_trajectories_with_seed_override(self):
    with flagsaver.flagsaver(
        preset='fig2', seeds=2, num_workers=2, out=self.out):
      self.assertEqual(cli.main(['pathfield', 'trajectories']), 0)
    path = os.path.join(self.out, 'fig2_trajectories.csv')
    with open(path) as f:
      self.assertLen(f.readlines(), 1 + 2 * 2001)

  def test_failed_validation_exit_status(self):
    # A single sub-step of length 10 breaks the width limit, so no flux line
    # can be integrated while the field checks still pass.
    data = {
        'packets': [{'center': 5.0, 'drift': -0.25},
                    {'center': -5.0, 'drift': 0.25}],
        'integrator': {'base_step': 10.0, 'max_substeps': 1},
    }
    config = _write_document(_tempdir(self), 'coarse.json', data)
    with flagsaver.flagsaver(config=config, out=self.out):
      self.assertEqual(
          cli.main(['pathfield', 'validate']), cli.EXIT_VALIDATION_FAILED)
    with open(os.path.join(self.out, 'coarse_report.json')) as f:
      report = json.load(f)
    self.assertFalse(report['passed'])
    self.assertFalse(report['no_crossing'])


if __name__ == '__main__':
  absltest.main()
