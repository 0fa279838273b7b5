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

"""Tests for oracle."""

import numpy as np

from pathfield._src import errors
from pathfield._src.kinematics import interference
from pathfield._src.kinematics import oracle
from pathfield._src.kinematics import packets
from absl.testing import absltest
from absl.testing import parameterized

GaussianPacket = packets.GaussianPacket
DoubleSlitConfig = interference.DoubleSlitConfig

_CONFIGS = {
    'symmetric':
        DoubleSlitConfig(
            GaussianPacket(5.0, -0.25), GaussianPacket(-5.0, 0.25)),
    'large_dispersion':
        DoubleSlitConfig(GaussianPacket(5.0, 0.0), GaussianPacket(-5.0, 0.0)),
    'unequal_drifts':
        DoubleSlitConfig(GaussianPacket(5.0, -0.1), GaussianPacket(-5.0, 0.4)),
    'unequal_widths':
        DoubleSlitConfig(
            GaussianPacket(5.0, -0.1, 3.0), GaussianPacket(-5.0, 0.4, 1.0)),
    'unequal_weights':
        DoubleSlitConfig(
            GaussianPacket(5.0, -0.1, 3.0, 2.0),
            GaussianPacket(-5.0, 0.4, 1.0, 1.0)),
    'other_units':
        DoubleSlitConfig(
            GaussianPacket(2.0, -0.8, 0.5),
            GaussianPacket(-1.0, 0.3, 0.9, 0.5),
            packets.PhysicalScales(hbar=0.7, mass=1.9),
            forward_speed=3.0),
}

_SINGLE = DoubleSlitConfig(
    GaussianPacket(1.0, 0.3, 0.8), GaussianPacket(-5.0, 0.0, weight=0.0))


def _grid(n=256):
  return np.meshgrid(
      np.linspace(0.0, 20.0, n), np.linspace(-12.0, 12.0, n), indexing='ij')


def _term_scale(cfg, t, x):
  """N^2 (sqrt(P_1) + sqrt(P_2))^2, the size of the largest single term."""
  r1 = np.sqrt(packets.density(cfg.packet1, cfg.scales, t, x))
  r2 = np.sqrt(packets.density(cfg.packet2, cfg.scales, t, x))
  return cfg.normalization**2 * (r1 + r2)**2


def _speed_scale(cfg, t, x):
  speeds = [cfg.forward_speed]
  for packet in cfg.channels:
    speeds.append(np.abs(packets.convective_velocity(packet, cfg.scales, t, x)))
    speeds.append(np.abs(packets.osmotic_velocity(packet, cfg.scales, t, x)))
  return sum(speeds)


class PacketWavefunctionTest(parameterized.TestCase):

  def setUp(self):
    super().setUp()
    self.packet = GaussianPacket(center=-1.5, drift=0.7, sigma0=0.6, weight=1.4)
    self.scales = packets.PhysicalScales(hbar=1.0, mass=1.3)

  def test_initial_modulus(self):
    x = np.linspace(-6, 3, 91)
    np.testing.assert_allclose(
        np.abs(oracle.packet_wavefunction(self.packet, self.scales, 0.0, x))**2,
        packets.density(self.packet, self.scales, 0.0, x),
        rtol=1e-13)

  def test_modulus_matches_density(self):
    rng = np.random.default_rng(0)
    t = rng.uniform(0, 20, 1000)
    x = rng.uniform(-10, 10, 1000)
    np.testing.assert_allclose(
        np.abs(oracle.packet_wavefunction(self.packet, self.scales, t, x))**2,
        packets.density(self.packet, self.scales, t, x),
        rtol=1e-10)

  def test_phase_matches_action(self):
    t, x = np.meshgrid(np.linspace(0, 10, 6), np.linspace(-5, 5, 11))
    psi = oracle.packet_wavefunction(self.packet, self.scales, t, x)
    action = packets.action_phase(self.packet, self.scales, t, x)
    residue = psi * np.exp(-1j * action / self.scales.hbar)
    np.testing.assert_allclose(np.angle(residue), 0.0, atol=1e-10)

  def test_phase_gradient_is_convective_velocity(self):
    rng = np.random.default_rng(1)
    h = 1e-6
    for t, x in zip(rng.uniform(0, 15, 50), rng.uniform(-5, 5, 50)):
      forward = oracle.packet_wavefunction(self.packet, self.scales, t, x + h)
      backward = oracle.packet_wavefunction(self.packet, self.scales, t, x - h)
      grad = np.angle(forward * np.conj(backward)) / (2 * h)
      v = packets.convective_velocity(self.packet, self.scales, t, x)
      self.assertAlmostEqual(
          self.scales.hbar * grad / self.scales.mass,
          v,
          delta=1e-6 * max(1.0, abs(v)))

  def test_closed_form_gradient(self):
    h = 1e-6
    for t, x in ((0.0, 0.3), (2.0, -1.0), (9.0, 4.0)):
      numeric = (
          oracle.packet_wavefunction(self.packet, self.scales, t, x + h) -
          oracle.packet_wavefunction(self.packet, self.scales, t, x - h)) / (
              2 * h)
      exact = oracle.wavefunction_gradient(self.packet, self.scales, t, x)
      self.assertLess(abs(numeric - exact), 1e-7 * max(1.0, abs(exact)))


class SuperposedWavefunctionTest(parameterized.TestCase):

  def test_single_channel(self):
    x = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(
        oracle.superposed_wavefunction(_SINGLE, 3.0, x),
        _SINGLE.normalization *
        oracle.packet_wavefunction(_SINGLE.packet1, _SINGLE.scales, 3.0, x))

  def test_constructive_center(self):
    cfg = _CONFIGS['symmetric']
    for t in (0.0, 4.0, 20.0):
      self.assertAlmostEqual(
          abs(oracle.superposed_wavefunction(cfg, t, 0.0))**2 /
          (4 * cfg.normalization**2 *
           packets.density(cfg.packet1, cfg.scales, t, 0.0)), 1.0, 12)

  @parameterized.named_parameters(*[(k, v) for k, v in _CONFIGS.items()])
  def test_intensity_matches_classical_engine(self, cfg):
    t, x = _grid()
    classical = interference.total_intensity(cfg, t, x)
    quantum = np.abs(oracle.superposed_wavefunction(cfg, t, x))**2
    mask = classical > interference.intensity_floor(cfg, t)
    error = np.abs(classical - quantum) / _term_scale(cfg, t, x)
    self.assertGreater(mask.mean(), 0.5)
    self.assertLess(error[mask].max(), 1e-9)

  @parameterized.named_parameters(*[(k, v) for k, v in _CONFIGS.items()])
  def test_probability_is_conserved(self, cfg):
    for t in (0.0, 2.0, 7.5, 20.0):
      self.assertAlmostEqual(oracle.total_probability(cfg, t), 1.0, delta=1e-8)


class QuantumCurrentTest(parameterized.TestCase):

  @parameterized.named_parameters(*[(k, v) for k, v in _CONFIGS.items()])
  def test_current_matches_classical_engine(self, cfg):
    t, x = _grid()
    classical = interference.total_current(cfg, t, x)
    quantum = oracle.quantum_current(cfg, t, x)
    mask = interference.total_intensity(cfg, t, x) > (
        interference.intensity_floor(cfg, t))
    scale = _term_scale(cfg, t, x) * _speed_scale(cfg, t, x)
    for axis in (0, 1):
      error = np.abs(classical[..., axis] - quantum[..., axis]) / scale
      self.assertLess(error[mask].max(), 1e-9)

  def test_centerline_vanishes(self):
    cfg = _CONFIGS['symmetric']
    t = np.linspace(0, 20, 21)
    scale = oracle.quantum_current(cfg, t, 1.0)[..., 1]
    np.testing.assert_array_less(
        np.abs(oracle.quantum_current(cfg, t, 0.0)[..., 0]), 1e-14 * scale)

  def test_single_channel(self):
    rng = np.random.default_rng(2)
    t = rng.uniform(0, 20, 100)
    x = rng.uniform(-5, 5, 100)
    expected = _SINGLE.normalization**2 * packets.density(
        _SINGLE.packet1, _SINGLE.scales, t, x) * packets.convective_velocity(
            _SINGLE.packet1, _SINGLE.scales, t, x)
    np.testing.assert_allclose(
        oracle.quantum_current(_SINGLE, t, x)[..., 0],
        expected,
        rtol=1e-10,
        atol=1e-300)

  @parameterized.named_parameters(('symmetric', 'symmetric'),
                                  ('unequal_weights', 'unequal_weights'))
  def test_continuity_is_second_order(self, name):
    cfg = _CONFIGS[name]

    def residual(t, x, h):
      density = lambda tt: np.abs(oracle.superposed_wavefunction(cfg, tt, x))**2
      dp_dt = (density(t + h) - density(t - h)) / (2 * h)
      dj_dx = (oracle.quantum_current(cfg, t, x + h)[..., 0] -
               oracle.quantum_current(cfg, t, x - h)[..., 0]) / (2 * h)
      return np.abs(dp_dt + dj_dx).max()

    t = np.array([1.5, 5.0, 12.0])
    x = np.array([0.9, -2.2, 4.1])
    r1, r2, r3 = (residual(t, x, h) for h in (0.04, 0.02, 0.01))
    self.assertBetween(r1 / r2, 3.5, 4.5)
    self.assertBetween(r2 / r3, 3.5, 4.5)


class QuantumVelocityTest(parameterized.TestCase):

  def test_centerline(self):
    cfg = _CONFIGS['symmetric']
    velocity = oracle.quantum_velocity(cfg, np.array([0.0, 10.0]), 0.0)
    np.testing.assert_allclose(velocity, [[0.0, 1.0], [0.0, 1.0]], atol=1e-14)

  def test_single_channel(self):
    t, x = np.meshgrid(np.linspace(0, 10, 11), np.linspace(-4, 4, 9))
    velocity = oracle.quantum_velocity(_SINGLE, t, x)
    np.testing.assert_allclose(
        velocity[..., 0],
        packets.convective_velocity(_SINGLE.packet1, _SINGLE.scales, t, x),
        rtol=1e-10,
        atol=1e-13)
    np.testing.assert_allclose(velocity[..., 1], 1.0)

  @parameterized.named_parameters(*[(k, v) for k, v in _CONFIGS.items()])
  def test_matches_classical_velocity(self, cfg):
    rng = np.random.default_rng(3)
    t = rng.uniform(0, 20, 20000)
    x = rng.uniform(-12, 12, 20000)
    keep = interference.total_intensity(cfg, t, x) > (
        1e-6 * interference.peak_intensity(cfg, t))
    t, x = t[keep][:1000], x[keep][:1000]
    self.assertLen(t, 1000)
    classical = interference.total_velocity(cfg, t, x)
    quantum = oracle.quantum_velocity(cfg, t, x)
    norm = np.linalg.norm(quantum, axis=-1, keepdims=True)
    bound = np.broadcast_to(1e-8 * norm, classical.shape)
    np.testing.assert_array_less(np.abs(classical - quantum), bound)

  def test_phase_gradient_consistency(self):
    cfg = _CONFIGS['unequal_widths']
    h = 1e-6
    rng = np.random.default_rng(4)
    for t, x in zip(rng.uniform(1, 20, 40), rng.uniform(-6, 6, 40)):
      forward = oracle.superposed_wavefunction(cfg, t, x + h)
      backward = oracle.superposed_wavefunction(cfg, t, x - h)
      grad = np.angle(forward * np.conj(backward)) / (2 * h)
      vx = oracle.quantum_velocity(cfg, t, x)[0]
      self.assertAlmostEqual(
          cfg.scales.hbar * grad / cfg.scales.mass,
          vx,
          delta=1e-6 * max(1.0, abs(vx)))

  def test_node_singularity(self):
    cfg = DoubleSlitConfig(
        GaussianPacket(5.0, -np.pi / 2, 10.0),
        GaussianPacket(-5.0, np.pi / 2, 10.0))
    with self.assertRaises(errors.NodeSingularity):
      oracle.quantum_velocity(cfg, 10.0 / np.pi, 1.0)


class MomentumDecompositionTest(parameterized.TestCase):

  @parameterized.named_parameters(*[(k, v) for k, v in _CONFIGS.items()])
  def test_parts_add_up(self, cfg):
    for t in (0.0, 5.0, 20.0):
      budget = oracle.momentum_decomposition(cfg, t)
      self.assertGreater(budget.osmotic, 0)
      self.assertAlmostEqual(
          budget.total,
          budget.convective + budget.osmotic,
          delta=1e-8 * budget.total)

  def test_single_packet(self):
    packet = GaussianPacket(0.0, 0.6, sigma0=0.5)
    cfg = DoubleSlitConfig(packet, GaussianPacket(9.0, 0.0, weight=0.0))
    start = oracle.momentum_decomposition(cfg, 0.0)
    # hbar^2 / (4 sigma0^2) from the width, (m v_x)^2 from the drift.
    self.assertAlmostEqual(start.osmotic, 1.0, delta=1e-9)
    self.assertAlmostEqual(start.convective, 0.36, delta=1e-9)
    later = oracle.momentum_decomposition(cfg, 6.0)
    self.assertAlmostEqual(later.total, start.total, delta=1e-9)
    self.assertLess(later.osmotic, start.osmotic)
    self.assertGreater(later.convective, start.convective)


if __name__ == '__main__':
  absltest.main()
