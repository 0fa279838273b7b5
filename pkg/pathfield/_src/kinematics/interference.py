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

"""Superposition of two slit channels.

Each channel contributes a density P_i, a convective velocity v_i, an osmotic
velocity u_i and an action S_i (see `packets`). With phi = (S_1 - S_2) / hbar
the superposed intensity and averaged current are

  I   = N^2 (P_1 + P_2 + 2 sqrt(P_1 P_2) cos(phi)),
  J_x = N^2 (P_1 v_1 + P_2 v_2 + sqrt(P_1 P_2) (v_1 + v_2) cos(phi)
             + sqrt(P_1 P_2) (u_2 - u_1) sin(phi)),
  J_y = forward_speed * I.

The orientation of the sine term follows from the outward osmotic velocity
and phi = (S_1 - S_2) / hbar; it is the one that conserves I.
"""

from typing import Iterable, Optional, Tuple

from absl import logging
import attr
import numpy as np
from scipy import integrate

from pathfield._src import errors
from pathfield._src.kinematics import packets
from pathfield.utils import attrs_utils

ArrayLike = packets.ArrayLike

# Velocities are undefined where the intensity drops below this fraction of
# the instantaneous peak.
NODE_FLOOR_RATIO = 1e-12

# Half-width, in initial widths, of each envelope integrated for the norm.
_ENVELOPE_HALF_WIDTH = 10.0


def _normalization_for(packet1: packets.GaussianPacket,
                       packet2: packets.GaussianPacket,
                       scales: packets.PhysicalScales) -> float:
  """N such that the t = 0 intensity integrates to one."""
  if packet1.weight == 0 and packet2.weight == 0:
    raise errors.DegenerateConfig('Both packet weights are zero.')

  def integrand(x):
    p1 = packets.density(packet1, scales, 0.0, x)
    p2 = packets.density(packet2, scales, 0.0, x)
    phi = (packets.action_phase(packet1, scales, 0.0, x) -
           packets.action_phase(packet2, scales, 0.0, x)) / scales.hbar
    return p1 + p2 + 2.0 * np.sqrt(p1 * p2) * np.cos(phi)

  mass = 0.0
  for lo, hi in _envelope_union((packet1, packet2)):
    centers = [p.center for p in (packet1, packet2) if lo < p.center < hi]
    value, _ = integrate.quad(
        integrand,
        lo,
        hi,
        points=centers or None,
        limit=400,
        epsabs=1e-14,
        epsrel=1e-13)
    mass += value
  if not mass > 0:
    raise errors.DegenerateConfig(
        f'The superposed intensity has no mass (integral {mass!r}).')
  return float(1.0 / np.sqrt(mass))


def _envelope_union(
    members: Iterable[packets.GaussianPacket]) -> list[Tuple[float, float]]:
  """Merged +-10 sigma0 intervals around each weighted packet at t = 0."""
  intervals = sorted((p.center - _ENVELOPE_HALF_WIDTH * p.sigma0,
                      p.center + _ENVELOPE_HALF_WIDTH * p.sigma0)
                     for p in members
                     if p.weight > 0)
  merged = [list(intervals[0])]
  for lo, hi in intervals[1:]:
    if lo <= merged[-1][1]:
      merged[-1][1] = max(merged[-1][1], hi)
    else:
      merged.append([lo, hi])
  return [(lo, hi) for lo, hi in merged]


@attr.define(frozen=True, init=False)
class DoubleSlitConfig:
  """Two slit channels and the common forward motion.

  Attributes:
    packet1: Channel of slit 1, conventionally centered at +X.
    packet2: Channel of slit 2.
    scales: Unit system shared by both channels.
    forward_speed: Uniform speed v_y along the forward direction; time maps to
      forward distance as y = forward_speed * t.
    normalization: N, fixed at construction so that the t = 0 intensity has
      unit mass.
  """

  packet1: packets.GaussianPacket = attr.field(
      validator=attr.validators.instance_of(packets.GaussianPacket))
  packet2: packets.GaussianPacket = attr.field(
      validator=attr.validators.instance_of(packets.GaussianPacket))
  scales: packets.PhysicalScales = attr.field(
      validator=attr.validators.instance_of(packets.PhysicalScales))
  forward_speed: float = attr.field(
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  normalization: float = attr.field(
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])

  def __init__(self,
               packet1: packets.GaussianPacket,
               packet2: packets.GaussianPacket,
               scales: Optional[packets.PhysicalScales] = None,
               forward_speed: float = 1.0):
    scales = scales or packets.PhysicalScales()
    normalization = _normalization_for(packet1, packet2, scales)
    logging.debug('Normalization of %s / %s: %.17g', packet1, packet2,
                  normalization)
    self.__attrs_init__(packet1, packet2, scales, forward_speed, normalization)

  @property
  def channels(self) -> Tuple[packets.GaussianPacket, packets.GaussianPacket]:
    return (self.packet1, self.packet2)

  @property
  def is_mirror_symmetric(self) -> bool:
    """Whether slit 2 is the exact reflection of slit 1 through x = 0."""
    return self.packet2 == self.packet1.mirrored()

  def replace(self, **changes) -> 'DoubleSlitConfig':
    """Returns a copy with `changes` applied and the norm recomputed."""
    kwargs = dict(
        packet1=self.packet1,
        packet2=self.packet2,
        scales=self.scales,
        forward_speed=self.forward_speed)
    kwargs.update(changes)
    return DoubleSlitConfig(**kwargs)


def compute_normalization(cfg: DoubleSlitConfig) -> float:
  """N such that the intensity at t = 0 integrates to one.

  Args:
    cfg: Any config; its stored normalization is ignored.

  Returns:
    The normalization.

  Raises:
    DegenerateConfig: Both weights are zero.
  """
  return _normalization_for(cfg.packet1, cfg.packet2, cfg.scales)


def wavenumber(packet: packets.GaussianPacket,
               scales: packets.PhysicalScales) -> float:
  """k_x = m v_x / hbar."""
  return scales.mass * packet.drift / scales.hbar


def phase_difference(cfg: DoubleSlitConfig, t: ArrayLike,
                     x: ArrayLike) -> ArrayLike:
  """phi = (S_1 - S_2) / hbar."""
  return (packets.action_phase(cfg.packet1, cfg.scales, t, x) -
          packets.action_phase(cfg.packet2, cfg.scales, t, x)) / cfg.scales.hbar


def mirrored_phase_difference(cfg: DoubleSlitConfig, t: ArrayLike,
                              x: ArrayLike) -> ArrayLike:
  """Product form of phi for a mirrored pair of equal-width channels.

  phi = 2 k_x x - (X + v_x t) x hbar t / (2 m sigma0^2 sigma^2(t)), with X, v_x
  and k_x taken from packet 1.

  Args:
    cfg: Config whose packet 2 mirrors packet 1 (weights may differ).
    t: Time.
    x: Transverse position.

  Returns:
    The phase difference.

  Raises:
    ValueError: The channels are not mirror images of equal width.
  """
  p1, p2 = cfg.packet1, cfg.packet2
  if attr.evolve(p2, weight=p1.weight) != p1.mirrored():
    raise ValueError(f'Channels are not mirrored: {p1} vs {p2}.')
  t = np.asarray(t, dtype=float)
  x = np.asarray(x, dtype=float)
  hbar, m = cfg.scales.hbar, cfg.scales.mass
  sigma = packets.sigma_t(p1, cfg.scales, t)
  dispersive = (packets.moving_center(p1, t) * x * hbar * t /
                (2.0 * m * p1.sigma0**2 * sigma**2))
  return 2.0 * wavenumber(p1, cfg.scales) * x - dispersive


def _amplitudes(cfg: DoubleSlitConfig, t: ArrayLike,
                x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
  return (np.sqrt(packets.density(cfg.packet1, cfg.scales, t, x)),
          np.sqrt(packets.density(cfg.packet2, cfg.scales, t, x)))


def total_intensity(cfg: DoubleSlitConfig, t: ArrayLike,
                    x: ArrayLike) -> ArrayLike:
  """N^2 (P_1 + P_2 + 2 sqrt(P_1 P_2) cos(phi)).

  Evaluated as N^2 ((R_1 - R_2)^2 + 4 R_1 R_2 cos^2(phi / 2)) with R_i =
  sqrt(P_i), which is the same quantity without cancellation at dark fringes.

  Args:
    cfg: Experiment.
    t: Time.
    x: Transverse position.

  Returns:
    The non-negative intensity.
  """
  r1, r2 = _amplitudes(cfg, t, x)
  half = np.cos(0.5 * phase_difference(cfg, t, x))
  return cfg.normalization**2 * ((r1 - r2)**2 + 4.0 * r1 * r2 * half * half)


def total_current(cfg: DoubleSlitConfig, t: ArrayLike,
                  x: ArrayLike) -> np.ndarray:
  """Averaged current (J_x, J_y) stacked along a trailing axis of size 2."""
  first, second = cfg.channels
  scales = cfg.scales
  r1, r2 = _amplitudes(cfg, t, x)
  phi = phase_difference(cfg, t, x)
  v1 = packets.convective_velocity(first, scales, t, x)
  v2 = packets.convective_velocity(second, scales, t, x)
  u1 = packets.osmotic_velocity(first, scales, t, x)
  u2 = packets.osmotic_velocity(second, scales, t, x)
  cross = r1 * r2
  jx = (r1 * r1 * v1 + r2 * r2 * v2 + cross * (v1 + v2) * np.cos(phi) +
        cross * (u2 - u1) * np.sin(phi))
  jx = cfg.normalization**2 * jx
  jy = cfg.forward_speed * total_intensity(cfg, t, x)
  return np.stack(np.broadcast_arrays(jx, jy), axis=-1)


def peak_intensity(cfg: DoubleSlitConfig, t: ArrayLike) -> ArrayLike:
  """N^2 (sqrt(P_1,max) + sqrt(P_2,max))^2, an upper bound of the intensity."""
  bound = 0.0
  for packet in cfg.channels:
    sigma = packets.sigma_t(packet, cfg.scales, t)
    bound = bound + np.sqrt(packet.weight / np.sqrt(2.0 * np.pi * sigma**2))
  return cfg.normalization**2 * bound * bound


def intensity_floor(cfg: DoubleSlitConfig, t: ArrayLike) -> ArrayLike:
  return NODE_FLOOR_RATIO * peak_intensity(cfg, t)


def masked_total_velocity(cfg: DoubleSlitConfig, t: ArrayLike,
                          x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
  """J / I where the intensity clears the floor.

  Args:
    cfg: Experiment.
    t: Time.
    x: Transverse position.

  Returns:
    (velocity, valid): velocity has a trailing axis of size 2 and is NaN where
    `valid` is False.
  """
  t = np.asarray(t, dtype=float)
  intensity = total_intensity(cfg, t, x)
  valid = intensity > intensity_floor(cfg, t)
  current = total_current(cfg, t, x)
  safe = np.where(valid, intensity, 1.0)
  velocity = current / safe[..., np.newaxis]
  velocity = np.where(valid[..., np.newaxis], velocity, np.nan)
  return velocity, valid


def total_velocity(cfg: DoubleSlitConfig, t: ArrayLike,
                   x: ArrayLike) -> np.ndarray:
  """J / I.

  Args:
    cfg: Experiment.
    t: Time.
    x: Transverse position.

  Returns:
    Velocity (v_x, v_y) along a trailing axis of size 2.

  Raises:
    NodeSingularity: The intensity is below the floor at any requested point.
  """
  velocity, valid = masked_total_velocity(cfg, t, x)
  if not np.all(valid):
    raise errors.NodeSingularity(
        f'Intensity below {NODE_FLOOR_RATIO:g} x peak at '
        f'{np.count_nonzero(~valid)} point(s).')
  return velocity


def dark_nodes(k_x: float, n_range: Iterable[int]) -> np.ndarray:
  """Fringe minima x_n = (n + 1/2) pi / k_x.

  Args:
    k_x: Transverse wavenumber m v_x / hbar.
    n_range: Fringe orders, e.g. range(-3, 3).

  Returns:
    Positions in the order of `n_range`.

  Raises:
    ZeroWavenumber: k_x is zero.
  """
  if k_x == 0:
    raise errors.ZeroWavenumber('k_x = 0 has no fringe nodes.')
  n = np.asarray(list(n_range), dtype=float)
  return (n + 0.5) * np.pi / k_x
