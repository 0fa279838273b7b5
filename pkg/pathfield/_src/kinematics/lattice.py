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

"""Coupled-map lattice reproducing packet dispersion as classical diffusion.

The density of a packet, viewed from its moving center, obeys a diffusion
equation whose diffusivity grows linearly in time, D(t) = u0^2 t. The lattice
advances a sampled density with the nearest-neighbour map

  P_j <- P_j + lambda (P_{j+1} - 2 P_j + P_{j-1}),  lambda = D dt / dx^2,

taking D at the middle of each step, with lambda <= courant <= 1/2. The
lattice ends are held at zero.
"""

import math
from typing import Tuple

from absl import logging
import attr
import numpy as np

from pathfield._src.kinematics import packets
from pathfield.utils import attrs_utils


def _assert_stable_courant(instance, attribute, value) -> None:
  if not 0 < value <= 0.5:
    raise ValueError(f'{attribute.name} must lie in (0, 0.5] in '
                     f'{type(instance).__name__}, got {value!r}.')


@attr.define(frozen=True)
class LatticeSpec:
  """Uniform co-moving lattice.

  Attributes:
    spacing: Cell width dx.
    half_width: The lattice covers [-half_width, half_width] about the center.
    courant: Upper bound on lambda per update.
  """

  spacing: float = attr.field(
      default=0.05,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  half_width: float = attr.field(
      default=20.0,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  courant: float = attr.field(
      default=0.4, converter=float, validator=_assert_stable_courant)

  @property
  def offsets(self) -> np.ndarray:
    n = int(math.ceil(self.half_width / self.spacing))
    return self.spacing * np.arange(-n, n + 1, dtype=float)


@attr.define
class CoupledMapLattice:
  """Mutable lattice state; `advance` moves it forward in time."""

  packet: packets.GaussianPacket
  scales: packets.PhysicalScales
  spec: LatticeSpec
  time: float
  values: np.ndarray

  @classmethod
  def from_packet(cls,
                  packet: packets.GaussianPacket,
                  scales: packets.PhysicalScales,
                  spec: LatticeSpec = LatticeSpec(),
                  t0: float = 0.0) -> 'CoupledMapLattice':
    """Samples the packet density at t0 onto the lattice."""
    if t0 < 0:
      raise ValueError(f'The lattice starts at t0 >= 0, got {t0!r}.')
    offsets = spec.offsets
    values = packets.density(packet, scales, t0,
                             packets.moving_center(packet, t0) + offsets)
    values[0] = values[-1] = 0.0
    return cls(packet, scales, spec, float(t0), values)

  def advance(self, t_end: float) -> None:
    """Advances the state to t_end.

    Args:
      t_end: Target time, not earlier than the current time.

    Raises:
      ValueError: t_end lies in the past.
    """
    if t_end < self.time:
      raise ValueError(f'Cannot advance from {self.time} back to {t_end}.')
    duration = t_end - self.time
    if duration == 0:
      return
    u0 = packets.initial_osmotic_speed(self.packet, self.scales)
    dx2 = self.spec.spacing**2
    d_max = u0 * u0 * t_end
    steps = max(1, int(math.ceil(d_max * duration / (self.spec.courant * dx2))))
    dt = duration / steps
    logging.debug('Lattice advance %g -> %g in %d steps', self.time, t_end,
                  steps)
    values = self.values
    for step in range(steps):
      t_mid = self.time + (step + 0.5) * dt
      lam = u0 * u0 * t_mid * dt / dx2
      laplacian = values[2:] - 2.0 * values[1:-1] + values[:-2]
      values = values.copy()
      values[1:-1] += lam * laplacian
    self.values = values
    self.time = float(t_end)

  def density(self) -> Tuple[np.ndarray, np.ndarray]:
    """(positions, values) in the laboratory frame."""
    center = packets.moving_center(self.packet, self.time)
    return center + self.spec.offsets, self.values.copy()

  def mass(self) -> float:
    return float(np.sum(self.values) * self.spec.spacing)

  def variance(self) -> float:
    offsets = self.spec.offsets
    return float(np.sum(offsets**2 * self.values) / np.sum(self.values))
