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

"""Fields sampled on rectangular (t, x) grids.

Rows are fixed times. Every row is computed independently, so a grid is the
same bit for bit whatever the number of workers.
"""

import multiprocessing.pool
from typing import Callable, List, Optional

from absl import logging
import attr
import numpy as np

from pathfield._src.kinematics import interference
from pathfield.utils import attrs_utils

# (cfg, t, x) -> array with a trailing (J_x, J_y) axis.
CurrentFn = Callable[[interference.DoubleSlitConfig, float, np.ndarray],
                     np.ndarray]


def _assert_at_least_two(instance, attribute, value) -> None:
  if value < 2:
    raise ValueError(f'{attribute.name} must be >= 2 in '
                     f'{type(instance).__name__}, got {value!r}.')


@attr.define(frozen=True)
class GridSpec:
  """Uniform grid, endpoints included on both axes."""

  x_min: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  x_max: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  t_min: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  t_max: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  nx: int = attr.field(
      default=512, converter=int, validator=_assert_at_least_two)
  nt: int = attr.field(
      default=512, converter=int, validator=_assert_at_least_two)

  def __attrs_post_init__(self):
    if not self.x_max > self.x_min:
      raise ValueError(f'x_max must exceed x_min, got [{self.x_min}, '
                       f'{self.x_max}].')
    if not self.t_max > self.t_min:
      raise ValueError(f't_max must exceed t_min, got [{self.t_min}, '
                       f'{self.t_max}].')

  @property
  def xs(self) -> np.ndarray:
    return np.linspace(self.x_min, self.x_max, self.nx)

  @property
  def ts(self) -> np.ndarray:
    return np.linspace(self.t_min, self.t_max, self.nt)

  @property
  def dx(self) -> float:
    return (self.x_max - self.x_min) / (self.nx - 1)

  @property
  def dt(self) -> float:
    return (self.t_max - self.t_min) / (self.nt - 1)


def _grid_shape(grid: 'FieldGrid'):
  return (grid.spec.nt, grid.spec.nx)


def _assert_values(instance, attribute, value) -> None:
  shape = (instance.spec.nt, instance.spec.nx)
  if value.shape not in (shape, shape + (2,)):
    raise ValueError(f'{attribute.name} must have shape {shape} or '
                     f'{shape + (2,)}, got {value.shape}.')
  if not np.all(np.isfinite(value)):
    raise ValueError(f'{attribute.name} must be finite.')


@attr.define(frozen=True, eq=False)
class FieldGrid:
  """Values on a GridSpec.

  Attributes:
    spec: The grid.
    values: Array of shape (nt, nx) or (nt, nx, 2); row i is time ts[i].
    mask: Optional boolean (nt, nx) array, True where `values` is defined.
      Undefined cells hold 0.
  """

  spec: GridSpec = attr.field(validator=attr.validators.instance_of(GridSpec))
  values: np.ndarray = attr.field(
      converter=np.asarray, validator=_assert_values)
  mask: Optional[np.ndarray] = attr.field(
      default=None,
      validator=attr.validators.optional(
          attrs_utils.shape_equals(_grid_shape)))

  @property
  def masked_fraction(self) -> float:
    if self.mask is None:
      return 0.0
    return float(np.count_nonzero(~self.mask)) / self.mask.size


@attr.define(frozen=True)
class ResidualNorms:
  max_abs: float
  mean_abs: float


def _map_rows(row_fn: Callable[[float], np.ndarray], ts: np.ndarray,
              num_workers: int) -> List[np.ndarray]:
  if num_workers <= 1:
    return [row_fn(t) for t in ts]
  pool = multiprocessing.pool.ThreadPool(num_workers)
  try:
    return pool.map(row_fn, list(ts))
  finally:
    pool.close()
    pool.join()


def sample_intensity(cfg: interference.DoubleSlitConfig,
                     spec: GridSpec,
                     num_workers: int = 1) -> FieldGrid:
  """values[i, j] = total_intensity(cfg, ts[i], xs[j])."""
  xs = spec.xs
  rows = _map_rows(lambda t: interference.total_intensity(cfg, t, xs),
                   spec.ts, num_workers)
  logging.info('Sampled %dx%d intensity grid', spec.nt, spec.nx)
  return FieldGrid(spec, np.stack(rows))


def sample_current(cfg: interference.DoubleSlitConfig,
                   spec: GridSpec,
                   num_workers: int = 1) -> FieldGrid:
  """values[i, j] = total_current(cfg, ts[i], xs[j]), shape (nt, nx, 2)."""
  xs = spec.xs
  rows = _map_rows(lambda t: interference.total_current(cfg, t, xs), spec.ts,
                   num_workers)
  logging.info('Sampled %dx%d current grid', spec.nt, spec.nx)
  return FieldGrid(spec, np.stack(rows))


def sample_velocity(cfg: interference.DoubleSlitConfig,
                    spec: GridSpec,
                    num_workers: int = 1) -> FieldGrid:
  """Velocity J / I with a mask of the cells above the intensity floor.

  Args:
    cfg: Experiment.
    spec: Grid.
    num_workers: Threads; rows are independent.

  Returns:
    Grid of shape (nt, nx, 2). Cells with `mask == False` hold 0.0 as a
    placeholder; the velocity is undefined there and must not be read as a
    value.
  """
  xs = spec.xs

  def row(t):
    velocity, valid = interference.masked_total_velocity(cfg, t, xs)
    return np.where(valid[:, np.newaxis], velocity, 0.0), valid

  rows = _map_rows(row, spec.ts, num_workers)
  grid = FieldGrid(
      spec, np.stack([r[0] for r in rows]), mask=np.stack([r[1] for r in rows]))
  if grid.masked_fraction:
    logging.info('%.3g%% of the velocity grid lies below the intensity floor',
                 100.0 * grid.masked_fraction)
  return grid


def continuity_residual_map(cfg: interference.DoubleSlitConfig,
                            spec: GridSpec,
                            current_fn: Optional[CurrentFn] = None,
                            num_workers: int = 1) -> FieldGrid:
  """dI/dt + dJ_x/dx by finite differences on the grid.

  Interior cells use central differences; the outermost rows and columns use
  second-order one-sided stencils and are left out of `residual_norms`.

  Args:
    cfg: Experiment.
    spec: Grid with nx, nt >= 5.
    current_fn: Current to test against the intensity; defaults to
      `interference.total_current`.
    num_workers: Threads used to sample rows.

  Returns:
    Residual grid of shape (nt, nx).

  Raises:
    ValueError: The grid is too coarse for the stencils.
  """
  if spec.nx < 5 or spec.nt < 5:
    raise ValueError(f'Continuity stencils need nx, nt >= 5, got {spec.nx}, '
                     f'{spec.nt}.')
  current_fn = current_fn or interference.total_current
  xs = spec.xs
  intensity = sample_intensity(cfg, spec, num_workers).values
  jx = np.stack(
      _map_rows(lambda t: current_fn(cfg, t, xs)[..., 0], spec.ts,
                num_workers))
  residual = (np.gradient(intensity, spec.dt, axis=0, edge_order=2) +
              np.gradient(jx, spec.dx, axis=1, edge_order=2))
  return FieldGrid(spec, residual)


def residual_norms(grid: FieldGrid) -> ResidualNorms:
  """Max and mean |value| over interior cells."""
  interior = np.abs(grid.values[1:-1, 1:-1])
  return ResidualNorms(
      max_abs=float(interior.max()), mean_abs=float(interior.mean()))


def riemann_mass(grid: FieldGrid) -> np.ndarray:
  """Row sums times dx, one per time."""
  return grid.values.sum(axis=1) * grid.spec.dx


def local_minima(row: np.ndarray) -> np.ndarray:
  """Interior indices below the left neighbour and not above the right one."""
  row = np.asarray(row)
  inner = row[1:-1]
  return np.flatnonzero((inner < row[:-2]) & (inner <= row[2:])) + 1


def fringe_contrast(row: np.ndarray) -> float:
  """Visibility of the brightest fringe against its two dark neighbours.

  (I_max - I_min) / (I_max + I_min) with I_min the mean of the nearest local
  minima on each side of the global maximum.

  Args:
    row: Intensity along x at one time.

  Returns:
    Contrast in [0, 1].

  Raises:
    ValueError: The maximum is not flanked by a minimum on both sides.
  """
  row = np.asarray(row)
  peak = int(np.argmax(row))
  minima = local_minima(row)
  left, right = minima[minima < peak], minima[minima > peak]
  if not left.size or not right.size:
    raise ValueError('The brightest fringe has no dark neighbour on each side.')
  dark = 0.5 * (row[left[-1]] + row[right[0]])
  return float((row[peak] - dark) / (row[peak] + dark))
