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

"""Complex-amplitude reference for the superposed intensity and current.

Nothing here calls the real-valued engine in `packets` or `interference`; the
two only share the parameters of the experiment. Each channel is the free
Gaussian amplitude

  Psi(x, t) = sqrt(w) (2 pi s_t^2)^(-1/4)
              exp(-(x - c)^2 / (4 sigma0 s_t) + i k (x - X - v_x t / 2)),

with s_t = sigma0 (1 + i hbar t / (2 m sigma0^2)), c = X + v_x t and
k = m v_x / hbar. Its spatial derivative is taken in closed form.

A ComplexAmplitude is a complex128 numpy array (or scalar).
"""

from typing import Tuple

import attr
import numpy as np
from scipy import integrate

from pathfield._src import errors
from pathfield._src.kinematics import interference
from pathfield._src.kinematics import packets

ArrayLike = packets.ArrayLike
ComplexAmplitude = np.ndarray

# Mirrors interference.NODE_FLOOR_RATIO without sharing its code path.
_FLOOR_RATIO = 1e-12


def _complex_width_factor(packet: packets.GaussianPacket,
                          scales: packets.PhysicalScales,
                          t: np.ndarray) -> np.ndarray:
  """a(t) = s_t / sigma0 = 1 + i hbar t / (2 m sigma0^2)."""
  return 1.0 + 1j * scales.hbar * t / (2.0 * scales.mass * packet.sigma0**2)


def packet_wavefunction(packet: packets.GaussianPacket,
                        scales: packets.PhysicalScales, t: ArrayLike,
                        x: ArrayLike) -> ComplexAmplitude:
  """Free Gaussian amplitude of one channel, scaled by sqrt(weight)."""
  t = np.asarray(t, dtype=float)
  x = np.asarray(x, dtype=float)
  a = _complex_width_factor(packet, scales, t)
  k = scales.mass * packet.drift / scales.hbar
  offset = x - (packet.center + packet.drift * t)
  prefactor = np.sqrt(packet.weight) * (2.0 * np.pi * packet.sigma0**2)**(
      -0.25) / np.sqrt(a)
  exponent = (-offset * offset / (4.0 * packet.sigma0**2 * a) + 1j * k *
              (x - packet.center - 0.5 * packet.drift * t))
  return prefactor * np.exp(exponent)


def wavefunction_gradient(packet: packets.GaussianPacket,
                          scales: packets.PhysicalScales, t: ArrayLike,
                          x: ArrayLike) -> ComplexAmplitude:
  """Closed-form dPsi/dx of `packet_wavefunction`."""
  t = np.asarray(t, dtype=float)
  x = np.asarray(x, dtype=float)
  a = _complex_width_factor(packet, scales, t)
  k = scales.mass * packet.drift / scales.hbar
  offset = x - (packet.center + packet.drift * t)
  log_derivative = -offset / (2.0 * packet.sigma0**2 * a) + 1j * k
  return packet_wavefunction(packet, scales, t, x) * log_derivative


def superposed_wavefunction(cfg: interference.DoubleSlitConfig, t: ArrayLike,
                            x: ArrayLike) -> ComplexAmplitude:
  """N (Psi_1 + Psi_2)."""
  return cfg.normalization * (
      packet_wavefunction(cfg.packet1, cfg.scales, t, x) +
      packet_wavefunction(cfg.packet2, cfg.scales, t, x))


def superposed_gradient(cfg: interference.DoubleSlitConfig, t: ArrayLike,
                        x: ArrayLike) -> ComplexAmplitude:
  """N (dPsi_1/dx + dPsi_2/dx)."""
  return cfg.normalization * (
      wavefunction_gradient(cfg.packet1, cfg.scales, t, x) +
      wavefunction_gradient(cfg.packet2, cfg.scales, t, x))


def quantum_current(cfg: interference.DoubleSlitConfig, t: ArrayLike,
                    x: ArrayLike) -> np.ndarray:
  """(hbar / m) Im(Psi* dPsi/dx) and |Psi|^2 forward_speed, stacked last."""
  psi = superposed_wavefunction(cfg, t, x)
  dpsi = superposed_gradient(cfg, t, x)
  jx = cfg.scales.hbar / cfg.scales.mass * np.imag(np.conj(psi) * dpsi)
  jy = cfg.forward_speed * np.abs(psi)**2
  return np.stack(np.broadcast_arrays(jx, jy), axis=-1)


def _peak_density(cfg: interference.DoubleSlitConfig,
                  t: np.ndarray) -> np.ndarray:
  """N^2 (|Psi_1|max + |Psi_2|max)^2."""
  total = 0.0
  for packet in cfg.channels:
    a = _complex_width_factor(packet, cfg.scales, t)
    total = total + np.sqrt(packet.weight / (np.sqrt(2.0 * np.pi) *
                                             packet.sigma0 * np.abs(a)))
  return cfg.normalization**2 * total * total


def quantum_velocity(cfg: interference.DoubleSlitConfig, t: ArrayLike,
                     x: ArrayLike) -> np.ndarray:
  """-(i hbar / 2m) (dPsi/Psi - dPsi*/Psi*) in x, forward_speed in y.

  Args:
    cfg: Experiment.
    t: Time.
    x: Transverse position.

  Returns:
    Velocity along a trailing axis of size 2.

  Raises:
    NodeSingularity: |Psi|^2 is below the floor at any requested point.
  """
  t = np.asarray(t, dtype=float)
  psi = superposed_wavefunction(cfg, t, x)
  density = np.abs(psi)**2
  if not np.all(density > _FLOOR_RATIO * _peak_density(cfg, t)):
    raise errors.NodeSingularity('|Psi|^2 below the floor.')
  dpsi = superposed_gradient(cfg, t, x)
  vx = cfg.scales.hbar / cfg.scales.mass * np.imag(dpsi / psi)
  vy = np.full_like(vx, cfg.forward_speed)
  return np.stack([vx, vy], axis=-1)


def _window(cfg: interference.DoubleSlitConfig,
            t: float,
            half_width: float = 12.0) -> Tuple[float, float, list[float]]:
  """Interval covering every weighted channel at time t."""
  los, his, centers = [], [], []
  for packet in cfg.channels:
    if packet.weight == 0:
      continue
    a = _complex_width_factor(packet, cfg.scales, np.asarray(t, dtype=float))
    sigma = packet.sigma0 * float(np.abs(a))
    c = packet.center + packet.drift * t
    los.append(c - half_width * sigma)
    his.append(c + half_width * sigma)
    centers.append(c)
  return min(los), max(his), sorted(set(centers))


def total_probability(cfg: interference.DoubleSlitConfig, t: float) -> float:
  """Quadrature of |Psi_tot|^2 over the occupied window."""
  lo, hi, centers = _window(cfg, t)
  value, _ = integrate.quad(
      lambda x: float(np.abs(superposed_wavefunction(cfg, t, x))**2),
      lo,
      hi,
      points=centers,
      limit=400,
      epsabs=1e-13,
      epsrel=1e-12)
  return value


@attr.define(frozen=True)
class MomentumBudget:
  """Split of the mean squared momentum at one instant.

  Attributes:
    total: hbar^2 int |dPsi/dx|^2 dx.
    convective: m^2 int P v^2 dx, from the phase gradient.
    osmotic: m^2 int P u^2 dx, from the amplitude gradient.
  """
  total: float
  convective: float
  osmotic: float


def momentum_decomposition(cfg: interference.DoubleSlitConfig,
                           t: float) -> MomentumBudget:
  """Mean squared momentum and its convective and osmotic parts.

  Pointwise |Psi* dPsi|^2 = |Psi|^2 |dPsi|^2, so `total` equals
  `convective + osmotic` up to quadrature error.

  Args:
    cfg: Experiment.
    t: Time.

  Returns:
    The three integrals.
  """
  hbar = cfg.scales.hbar
  lo, hi, centers = _window(cfg, t)

  def parts(x):
    psi = superposed_wavefunction(cfg, t, x)
    dpsi = superposed_gradient(cfg, t, x)
    density = float(np.abs(psi)**2)
    product = np.conj(psi) * dpsi
    if density == 0.0:
      return 0.0, 0.0, 0.0
    return (hbar**2 * float(np.abs(dpsi)**2),
            hbar**2 * float(np.imag(product))**2 / density,
            hbar**2 * float(np.real(product))**2 / density)

  values = []
  for index in range(3):
    value, _ = integrate.quad(
        lambda x, i=index: parts(x)[i],
        lo,
        hi,
        points=centers,
        limit=400,
        epsabs=1e-12,
        epsrel=1e-11)
    values.append(value)
  return MomentumBudget(*values)
