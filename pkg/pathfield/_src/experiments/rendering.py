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

"""Raster images of the intensity field with flux lines drawn on top.

The image has one row per sampled time and one column per sampled position.
Time increases upwards. Intensity is divided by the frame maximum and mapped
through a colormap; flux lines are painted in a flat color.
"""

from typing import Sequence

import attr
from matplotlib import colors
import numpy as np

from pathfield._src.flux import fields
from pathfield._src.flux import trajectories

# Control points, low to high intensity.
_COLORMAPS = {
    'white_yellow_orange': ('white', 'yellow', 'orange'),
    'white_orange_red': ('white', 'orange', 'red'),
}


def _assert_pixels(instance, attribute, value) -> None:
  if value < 2:
    raise ValueError(f'{attribute.name} must be >= 2 in '
                     f'{type(instance).__name__}, got {value!r}.')


def _assert_colormap(instance, attribute, value) -> None:
  if value not in _COLORMAPS:
    raise ValueError(f'{attribute.name} must be one of {sorted(_COLORMAPS)} '
                     f'in {type(instance).__name__}, got {value!r}.')


def _assert_color(instance, attribute, value) -> None:
  if not colors.is_color_like(value):
    raise ValueError(f'{attribute.name} is not a color in '
                     f'{type(instance).__name__}: {value!r}.')


@attr.define(frozen=True)
class RenderSettings:
  """Image size and colors.

  Attributes:
    width_px: Columns, one per sampled position.
    height_px: Rows, one per sampled time.
    colormap: Name of the intensity colormap.
    trajectory_color: Any matplotlib color spec.
  """

  width_px: int = attr.field(
      default=512, converter=int, validator=_assert_pixels)
  height_px: int = attr.field(
      default=512, converter=int, validator=_assert_pixels)
  colormap: str = attr.field(
      default='white_yellow_orange', validator=_assert_colormap)
  trajectory_color: str = attr.field(default='red', validator=_assert_color)

  def frame(self, grid: fields.GridSpec) -> fields.GridSpec:
    """The grid window resampled at the image resolution."""
    return attr.evolve(grid, nx=self.width_px, nt=self.height_px)


def colormap(name: str) -> colors.LinearSegmentedColormap:
  return colors.LinearSegmentedColormap.from_list(name, _COLORMAPS[name])


def intensity_to_rgba(values: np.ndarray, name: str) -> np.ndarray:
  """Maps an (nt, nx) intensity grid to (nt, nx, 4) floats, time upward."""
  peak = values.max()
  scaled = values / peak if peak > 0 else np.zeros_like(values)
  return colormap(name)(scaled[::-1])


def _column(spec: fields.GridSpec, x: np.ndarray) -> np.ndarray:
  return np.rint((x - spec.x_min) / spec.dx).astype(int)


def overlay_trajectories(rgba: np.ndarray, spec: fields.GridSpec,
                         trajs: Sequence[trajectories.Trajectory],
                         color: str) -> np.ndarray:
  """Paints each line onto a copy of `rgba`.

  Consecutive rows are joined by filling the columns in between, so fast
  lateral moves stay connected.

  Args:
    rgba: Image from `intensity_to_rgba` on `spec`.
    spec: Grid of the image.
    trajs: Lines to paint; parts outside the frame are skipped.
    color: Line color.

  Returns:
    The painted image.
  """
  image = rgba.copy()
  paint = colors.to_rgba(color)
  ts = spec.ts
  for traj in trajs:
    lo, hi = traj.t_span
    rows = np.flatnonzero((ts >= lo) & (ts <= hi))
    if not rows.size:
      continue
    cols = _column(spec, np.interp(ts[rows], traj.times, traj.positions))
    for k, (row, col) in enumerate(zip(rows, cols)):
      nxt = cols[k + 1] if k + 1 < cols.size else col
      first, last = sorted((col, nxt))
      first, last = max(first, 0), min(last, spec.nx - 1)
      if first <= last:
        image[spec.nt - 1 - row, first:last + 1] = paint
  return image
