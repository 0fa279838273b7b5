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

"""Tests for rendering."""

from matplotlib import colors
import numpy as np

from pathfield._src.experiments import rendering
from pathfield._src.flux import fields
from pathfield._src.flux import trajectories
from absl.testing import absltest
from absl.testing import parameterized

_SPEC = fields.GridSpec(x_min=-2.0, x_max=2.0, t_min=0.0, t_max=1.0, nx=5, nt=3)


class RenderSettingsTest(parameterized.TestCase):

  @parameterized.parameters(
      dict(width_px=1),
      dict(height_px=0),
      dict(colormap='viridis'),
      dict(trajectory_color='not-a-color'),
  )
  def test_invalid(self, **kwargs):
    with self.assertRaises(ValueError):
      rendering.RenderSettings(**kwargs)

  def test_frame_keeps_window(self):
    frame = rendering.RenderSettings(width_px=40, height_px=30).frame(_SPEC)
    self.assertEqual((frame.nx, frame.nt), (40, 30))
    self.assertEqual((frame.x_min, frame.t_max), (-2.0, 1.0))


class ColormapTest(parameterized.TestCase):

  @parameterized.parameters(
      ('white_yellow_orange', 'yellow', 'orange'),
      ('white_orange_red', 'orange', 'red'),
  )
  def test_control_points(self, name, middle, high):
    cmap = rendering.colormap(name)
    np.testing.assert_allclose(cmap(0.0), colors.to_rgba('white'), atol=1e-2)
    np.testing.assert_allclose(cmap(0.5), colors.to_rgba(middle), atol=1e-2)
    np.testing.assert_allclose(cmap(1.0), colors.to_rgba(high), atol=1e-2)

  def test_time_runs_upward(self):
    values = np.zeros((3, 5))
    values[0, 2] = 1.0  # earliest row
    rgba = rendering.intensity_to_rgba(values, 'white_yellow_orange')
    self.assertEqual(rgba.shape, (3, 5, 4))
    np.testing.assert_allclose(
        rgba[-1, 2], colors.to_rgba('orange'), atol=1e-2)
    np.testing.assert_allclose(rgba[0, 2], colors.to_rgba('white'), atol=1e-2)

  def test_normalized_per_frame(self):
    values = np.array([[0.0, 2e-8], [1e-8, 0.0]])
    rgba = rendering.intensity_to_rgba(values, 'white_yellow_orange')
    np.testing.assert_allclose(
        rgba[-1, 1], colors.to_rgba('orange'), atol=1e-2)

  def test_blank_frame(self):
    rgba = rendering.intensity_to_rgba(np.zeros((2, 2)), 'white_orange_red')
    np.testing.assert_allclose(rgba[..., :3], 1.0, atol=1e-2)


class OverlayTest(absltest.TestCase):

  def test_paints_line_pixels(self):
    base = rendering.intensity_to_rgba(np.zeros((3, 5)), 'white_yellow_orange')
    line = trajectories.Trajectory(
        np.array([0.0, 0.5, 1.0]), np.array([-2.0, 0.0, 1.0]))
    image = rendering.overlay_trajectories(base, _SPEC, [line], 'red')
    red = np.all(image == colors.to_rgba('red'), axis=-1)
    # t = 0 is the bottom row; the first segment spans columns 0..2.
    np.testing.assert_array_equal(red[2], [True, True, True, False, False])
    np.testing.assert_array_equal(red[1], [False, False, True, True, False])
    np.testing.assert_array_equal(red[0], [False, False, False, True, False])
    self.assertFalse(np.all(base == colors.to_rgba('red'), axis=-1).any())

  def test_line_outside_frame_is_skipped(self):
    base = rendering.intensity_to_rgba(np.zeros((3, 5)), 'white_yellow_orange')
    line = trajectories.Trajectory(
        np.array([0.0, 1.0]), np.array([10.0, 12.0]))
    image = rendering.overlay_trajectories(base, _SPEC, [line], 'red')
    np.testing.assert_array_equal(image, base)


if __name__ == '__main__':
  absltest.main()
