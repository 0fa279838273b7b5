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

"""Closed-form kinematics of one freely dispersing Gaussian packet.

A packet is one slit channel. Its density spreads ballistically,

  sigma(t)^2 = sigma0^2 + u0^2 t^2,   u0 = D / sigma0,   D = hbar / (2 m),

and two velocity fields ride on it: the outward osmotic velocity
u = D (x - c) / sigma^2 and the convective velocity v = v_x + (x - c) u0^2 t /
sigma^2, where c = X + v_x t is the moving center. The convective velocity is
the gradient of `action_phase` divided by the mass.

Every function broadcasts over numpy arrays of `t` and `x`. Negative times are
evaluated by the same formulas.
"""

from typing import Union

import attr
import numpy as np

from pathfield.utils import attrs_utils

ArrayLike = Union[float, np.ndarray]


@attr.define(frozen=True)
class PhysicalScales:
  """Unit system: reduced Planck constant and particle mass."""

  hbar: float = attr.field(
      default=1.0,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  mass: float = attr.field(
      default=1.0,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])

  @property
  def diffusivity(self) -> float:
    """D = hbar / (2 m)."""
    return self.hbar / (2.0 * self.mass)


@attr.define(frozen=True)
class GaussianPacket:
  """One slit channel.

  Attributes:
    center: Transverse offset X of the packet at t = 0.
    drift: Transverse drift velocity v_x.
    sigma0: Initial r.m.s. width.
    weight: Relative probability weight; multiplies the density.
  """

  center: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  drift: float = attr.field(
      converter=float, validator=attrs_utils.assert_finite)
  sigma0: float = attr.field(
      default=1.0,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  weight: float = attr.field(
      default=1.0,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_not_negative])

  def mirrored(self) -> 'GaussianPacket':
    """Reflection through x = 0."""
    return attr.evolve(self, center=-self.center, drift=-self.drift)


def initial_osmotic_speed(packet: GaussianPacket,
                          scales: PhysicalScales) -> float:
  """u0 = D / sigma0."""
  return scales.diffusivity / packet.sigma0


def moving_center(packet: GaussianPacket, t: ArrayLike) -> ArrayLike:
  return packet.center + packet.drift * np.asarray(t, dtype=float)


def sigma_t(packet: GaussianPacket, scales: PhysicalScales,
            t: ArrayLike) -> ArrayLike:
  """Width at time t, sigma0 * sqrt(1 + D^2 t^2 / sigma0^4)."""
  t = np.asarray(t, dtype=float)
  ratio = scales.diffusivity * t / packet.sigma0**2
  return packet.sigma0 * np.sqrt(1.0 + ratio * ratio)


def _variance(packet: GaussianPacket, scales: PhysicalScales,
              t: ArrayLike) -> ArrayLike:
  u0 = initial_osmotic_speed(packet, scales)
  t = np.asarray(t, dtype=float)
  return packet.sigma0**2 + (u0 * t)**2


def ballistic_diffusivity(packet: GaussianPacket, scales: PhysicalScales,
                          t: ArrayLike) -> ArrayLike:
  """D(t) = u0^2 t, so that sigma^2(t) = sigma0^2 + D(t) t."""
  return initial_osmotic_speed(packet, scales)**2 * np.asarray(t, dtype=float)


def spreading_rate(packet: GaussianPacket, scales: PhysicalScales,
                   t: ArrayLike) -> ArrayLike:
  """u0^2 t / sigma^2(t), which equals d(sigma)/dt / sigma."""
  return ballistic_diffusivity(packet, scales, t) / _variance(packet, scales, t)


def density(packet: GaussianPacket, scales: PhysicalScales, t: ArrayLike,
            x: ArrayLike) -> ArrayLike:
  """Weighted Gaussian density about the moving center."""
  variance = _variance(packet, scales, t)
  offset = np.asarray(x, dtype=float) - moving_center(packet, t)
  return packet.weight * np.exp(-0.5 * offset * offset / variance) / np.sqrt(
      2.0 * np.pi * variance)


def osmotic_velocity(packet: GaussianPacket, scales: PhysicalScales,
                     t: ArrayLike, x: ArrayLike) -> ArrayLike:
  """D (x - c) / sigma^2; points away from the moving center."""
  offset = np.asarray(x, dtype=float) - moving_center(packet, t)
  return scales.diffusivity * offset / _variance(packet, scales, t)


def convective_velocity(packet: GaussianPacket, scales: PhysicalScales,
                        t: ArrayLike, x: ArrayLike) -> ArrayLike:
  """v_x + (x - c) u0^2 t / sigma^2."""
  offset = np.asarray(x, dtype=float) - moving_center(packet, t)
  return packet.drift + offset * spreading_rate(packet, scales, t)


def action_phase(packet: GaussianPacket, scales: PhysicalScales, t: ArrayLike,
                 x: ArrayLike) -> ArrayLike:
  """Action S with grad(S) / m equal to `convective_velocity`.

  S = m v_x (x - X - v_x t / 2) + (m / 2) (x - c)^2 u0^2 t / sigma^2
      - (hbar / 2) arctan(u0 t / sigma0).

  The last term is uniform in x; it cancels between packets of equal width.

  Args:
    packet: The channel.
    scales: Unit system.
    t: Time.
    x: Transverse position.

  Returns:
    S(x, t) in units of action.
  """
  t = np.asarray(t, dtype=float)
  x = np.asarray(x, dtype=float)
  m = scales.mass
  u0 = initial_osmotic_speed(packet, scales)
  offset = x - moving_center(packet, t)
  plane = m * packet.drift * (x - packet.center - 0.5 * packet.drift * t)
  curvature = 0.5 * m * offset * offset * spreading_rate(packet, scales, t)
  gouy = 0.5 * scales.hbar * np.arctan(u0 * t / packet.sigma0)
  return plane + curvature - gouy


def smoothed_trajectory(packet: GaussianPacket, scales: PhysicalScales,
                        x0: ArrayLike, t: ArrayLike) -> ArrayLike:
  """Flux line of a lone packet: X + v_x t + (x0 - X) sigma(t) / sigma0."""
  x0 = np.asarray(x0, dtype=float)
  return moving_center(packet, t) + (x0 - packet.center) * sigma_t(
      packet, scales, t) / packet.sigma0


def anomalous_diffusion_residual(packet: GaussianPacket,
                                 scales: PhysicalScales, t: ArrayLike,
                                 x: ArrayLike, h: float) -> ArrayLike:
  """Central-difference residual of dP/dt + v_x dP/dx - D(t) d2P/dx2.

  In the frame drifting with v_x the density solves a diffusion equation with
  the ballistic diffusivity D(t) = u0^2 t. The residual vanishes as h^2.

  Args:
    packet: The channel.
    scales: Unit system.
    t: Time.
    x: Transverse position.
    h: Stencil width, used for both t and x.

  Returns:
    Residual at (t, x).
  """
  t = np.asarray(t, dtype=float)
  x = np.asarray(x, dtype=float)
  p = lambda tt, xx: density(packet, scales, tt, xx)
  centre = p(t, x)
  dp_dt = (p(t + h, x) - p(t - h, x)) / (2.0 * h)
  dp_dx = (p(t, x + h) - p(t, x - h)) / (2.0 * h)
  d2p_dx2 = (p(t, x + h) - 2.0 * centre + p(t, x - h)) / (h * h)
  return (dp_dt + packet.drift * dp_dx -
          ballistic_diffusivity(packet, scales, t) * d2p_dx2)
