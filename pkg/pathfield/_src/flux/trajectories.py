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

"""Flux lines of the averaged velocity field.

A flux line solves dx/dt = J_x / I from a seed x0 at the start of the window;
its forward coordinate is y = forward_speed * t. Lines are integrated with
classical RK4 on a shared lattice of base steps. A base step that meets a
stage velocity which is undefined, faster than `speed_cap`, or that would
cross more than `max_step_fraction` of the narrowest packet width is redone
with 2, 4, 8, ... uniform sub-steps for the affected lines only.
"""

import enum
import functools
import math
import multiprocessing.pool
from typing import List, Optional, Sequence, Tuple

from absl import logging
import attr
import numpy as np
from scipy import integrate as scipy_integrate
from scipy import optimize

from pathfield._src import errors
from pathfield._src.kinematics import interference
from pathfield._src.kinematics import packets
from pathfield.utils import attrs_utils

# Seeds integrated together. Fixed so results do not depend on worker count.
_CHUNK_SIZE = 32


class SeedStrategy(enum.Enum):
  EQUIDISTANT = 'equidistant'
  EQUAL_FLUX = 'equal_flux'


def _to_span(value) -> Tuple[float, float]:
  lo, hi = value
  return (float(lo), float(hi))


def _assert_finite_span(instance, attribute, value) -> None:
  if not all(math.isfinite(v) for v in value):
    raise ValueError(f'{attribute.name} must be finite in '
                     f'{type(instance).__name__}, got {value!r}.')


def _assert_count(instance, attribute, value) -> None:
  if value < 1:
    raise ValueError(f'{attribute.name} must be >= 1 in '
                     f'{type(instance).__name__}, got {value!r}.')


@attr.define(frozen=True)
class SeedSpec:
  """Where flux lines start at the beginning of the window.

  Attributes:
    count: Number of seeds.
    strategy: Uniform spacing, or equal intensity mass between neighbours.
    span: (lo, hi) transverse interval holding the seeds.
  """

  count: int = attr.field(converter=int, validator=_assert_count)
  strategy: SeedStrategy = attr.field(converter=SeedStrategy)
  span: Tuple[float, float] = attr.field(
      converter=_to_span, validator=_assert_finite_span)


@attr.define(frozen=True)
class IntegratorSettings:
  """Step control of the flux-line integrator.

  Attributes:
    base_step: Spacing of the recorded time lattice.
    max_substeps: Largest number of sub-steps tried for one base step.
    speed_cap: Largest |v_x| accepted at an RK4 stage.
    max_step_fraction: Largest |v_x| * step accepted, as a fraction of the
      narrowest packet width at the stage time.
  """

  base_step: float = attr.field(
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  speed_cap: float = attr.field(
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])
  max_substeps: int = attr.field(
      default=1024, converter=int, validator=_assert_count)
  max_step_fraction: float = attr.field(
      default=0.02,
      converter=float,
      validator=[attrs_utils.assert_finite, attrs_utils.assert_positive])


def default_settings(cfg: interference.DoubleSlitConfig,
                     t_span: Tuple[float, float]) -> IntegratorSettings:
  """2000 base steps over the window, speed cap 50 x forward_speed."""
  t_start, t_end = t_span
  return IntegratorSettings(
      base_step=(t_end - t_start) / 2000.0,
      speed_cap=50.0 * cfg.forward_speed)


def _assert_increasing(instance, attribute, value) -> None:
  if value.ndim != 1 or value.size < 1 or np.any(np.diff(value) <= 0):
    raise ValueError(f'{attribute.name} must be a strictly increasing 1-D '
                     f'array in {type(instance).__name__}.')


def _assert_positions(instance, attribute, value) -> None:
  if value.shape != instance.times.shape:
    raise ValueError(f'{attribute.name} has shape {value.shape}, expected '
                     f'{instance.times.shape}.')
  if not np.all(np.isfinite(value)):
    raise ValueError(f'{attribute.name} must be finite.')


@attr.define(frozen=True, eq=False)
class Trajectory:
  """Samples (times[k], positions[k]) of one flux line."""

  times: np.ndarray = attr.field(
      converter=lambda a: np.asarray(a, dtype=float),
      validator=_assert_increasing)
  positions: np.ndarray = attr.field(
      converter=lambda a: np.asarray(a, dtype=float),
      validator=_assert_positions)

  @property
  def t_span(self) -> Tuple[float, float]:
    return (float(self.times[0]), float(self.times[-1]))

  def forward_distance(self, forward_speed: float) -> np.ndarray:
    """y = forward_speed * t at every sample."""
    return forward_speed * self.times

  def position_at(self, t: float) -> float:
    """Linear interpolation of x between samples.

    Args:
      t: Time inside the sampled window.

    Returns:
      Transverse position.

    Raises:
      OutOfRange: t lies outside the window.
    """
    lo, hi = self.t_span
    if not lo <= t <= hi:
      raise errors.OutOfRange(f't={t} outside sampled window [{lo}, {hi}].')
    return float(np.interp(t, self.times, self.positions))


@attr.define(frozen=True)
class OrderingReport:
  """Outcome of `ordering_check`.

  Attributes:
    passed: True when every pair keeps its initial order.
    violation_time: First time at which a pair changed order, if any.
    violation_pair: Indices (into the checked list) of that pair.
  """
  passed: bool
  violation_time: Optional[float] = None
  violation_pair: Optional[Tuple[int, int]] = None


def _weighted_channels(cfg: interference.DoubleSlitConfig):
  return [p for p in cfg.channels if p.weight > 0]


def _initial_mass_integrand(cfg: interference.DoubleSlitConfig):
  return lambda x: float(interference.total_intensity(cfg, 0.0, x))


def _equal_flux_seeds(cfg: interference.DoubleSlitConfig, lo: float, hi: float,
                      count: int) -> np.ndarray:
  """Quantiles (i + 1) / (count + 1) of the t = 0 intensity inside [lo, hi]."""
  integrand = _initial_mass_integrand(cfg)
  inner = sorted(
      {p.center for p in _weighted_channels(cfg) if lo < p.center < hi})
  knots = np.array([lo] + inner + [hi])

  def mass(a, b):
    value, _ = scipy_integrate.quad(
        integrand, a, b, limit=200, epsabs=1e-14, epsrel=1e-12)
    return value

  cumulative = np.concatenate(
      [[0.0], np.cumsum([mass(a, b) for a, b in zip(knots[:-1], knots[1:])])])
  total = cumulative[-1]
  if total <= 0:
    raise errors.DegenerateSpan(f'No intensity inside [{lo}, {hi}].')
  seeds = []
  for i in range(count):
    target = total * (i + 1) / (count + 1)
    segment = min(int(np.searchsorted(cumulative, target)), knots.size - 1)
    a, b = knots[segment - 1], knots[segment]
    base = cumulative[segment - 1]
    seeds.append(
        optimize.brentq(
            lambda x, a=a, base=base: base + mass(a, x) - target,
            a,
            b,
            xtol=1e-13,
            rtol=1e-14))
  return np.array(seeds)


def seed_positions(cfg: interference.DoubleSlitConfig,
                   spec: SeedSpec) -> np.ndarray:
  """Seeds at the start of the window, in increasing order.

  Args:
    cfg: Experiment.
    spec: Seeding rule.

  Returns:
    Array of `spec.count` positions.

  Raises:
    DegenerateSpan: The span has zero or negative width, or holds no intensity.
  """
  lo, hi = spec.span
  if not hi > lo:
    raise errors.DegenerateSpan(f'Seed span [{lo}, {hi}] is empty.')
  if spec.strategy == SeedStrategy.EQUAL_FLUX:
    return _equal_flux_seeds(cfg, lo, hi, spec.count)
  if spec.count == 1:
    return np.array([0.5 * (lo + hi)])
  return np.linspace(lo, hi, spec.count)


def default_seed_spec(cfg: interference.DoubleSlitConfig) -> SeedSpec:
  """20 equidistant seeds over +-(max |X| + 3 max sigma0)."""
  reach = (max(abs(p.center) for p in cfg.channels) +
           3.0 * max(p.sigma0 for p in cfg.channels))
  return SeedSpec(
      count=20, strategy=SeedStrategy.EQUIDISTANT, span=(-reach, reach))


def _time_lattice(t_span: Tuple[float, float], base_step: float) -> np.ndarray:
  t_start, t_end = (float(t) for t in t_span)
  if not t_end > t_start:
    raise ValueError(f't_span must be increasing, got {t_span}.')
  steps = max(1, int(math.ceil((t_end - t_start) / base_step - 1e-9)))
  return np.linspace(t_start, t_end, steps + 1)


def _width_limit(cfg: interference.DoubleSlitConfig, t: float,
                 settings: IntegratorSettings) -> float:
  return settings.max_step_fraction * min(
      float(packets.sigma_t(p, cfg.scales, t)) for p in _weighted_channels(cfg))


def _rk4(cfg: interference.DoubleSlitConfig, t0: float, x: np.ndarray,
         h: float, substeps: int,
         settings: IntegratorSettings) -> Tuple[np.ndarray, np.ndarray]:
  """Advances x over [t0, t0 + h] in uniform RK4 sub-steps.

  Returns:
    (x, ok): ok is False for lines that met a rejected stage; their x is
    meaningless.
  """
  dt = h / substeps
  ok = np.ones(x.shape, dtype=bool)

  def slope(t, xs):
    velocity, valid = interference.masked_total_velocity(cfg, t, xs)
    vx = velocity[..., 0]
    speed = np.abs(vx)
    good = (valid & (speed <= settings.speed_cap) &
            (speed * dt <= _width_limit(cfg, t, settings)))
    return np.where(good, vx, 0.0), good

  for j in range(substeps):
    t = t0 + j * dt
    k1, g1 = slope(t, x)
    k2, g2 = slope(t + 0.5 * dt, x + 0.5 * dt * k1)
    k3, g3 = slope(t + 0.5 * dt, x + 0.5 * dt * k2)
    k4, g4 = slope(t + dt, x + dt * k3)
    ok &= g1 & g2 & g3 & g4
    x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
  return x, ok


def _integrate_chunk(seeds: np.ndarray, *, cfg: interference.DoubleSlitConfig,
                     times: np.ndarray,
                     settings: IntegratorSettings) -> np.ndarray:
  """Positions of shape (len(times), len(seeds))."""
  positions = np.empty((times.size, seeds.size))
  positions[0] = seeds
  x = seeds.copy()
  for n in range(times.size - 1):
    t, h = times[n], times[n + 1] - times[n]
    pending = np.arange(x.size)
    substeps = 1
    while pending.size:
      if substeps > settings.max_substeps:
        stuck = pending[0]
        raise errors.StuckAtNode(
            f'Flux line from x0={seeds[stuck]!r} needs more than '
            f'{settings.max_substeps} sub-steps.',
            t=float(t),
            x=float(x[stuck]))
      trial, ok = _rk4(cfg, t, x[pending], h, substeps, settings)
      x[pending[ok]] = trial[ok]
      pending = pending[~ok]
      substeps *= 2
    if substeps > 2:
      logging.debug('t=%g: %d sub-steps near a dark fringe', t, substeps // 2)
    positions[n + 1] = x
  return positions


def _check_seeds(cfg: interference.DoubleSlitConfig, t: float,
                 seeds: np.ndarray) -> None:
  intensity = interference.total_intensity(cfg, t, seeds)
  bad = np.flatnonzero(~(intensity > interference.intensity_floor(cfg, t)))
  if bad.size:
    raise errors.InvalidSeed(
        f'Seed x0={seeds[bad[0]]!r} starts below the intensity floor at t={t}.')


def integrate_many(cfg: interference.DoubleSlitConfig,
                   seeds: Sequence[float],
                   t_span: Tuple[float, float],
                   settings: Optional[IntegratorSettings] = None,
                   num_workers: int = 1) -> List[Trajectory]:
  """Integrates one flux line per seed.

  Seeds are split into fixed chunks that are integrated independently, so
  the result does not depend on `num_workers`.

  Args:
    cfg: Experiment.
    seeds: Positions at t_span[0].
    t_span: (t_start, t_end).
    settings: Step control; `default_settings` when omitted.
    num_workers: Threads used across chunks.

  Returns:
    Trajectories in seed order, all on the same time lattice.

  Raises:
    InvalidSeed: A seed starts below the intensity floor.
    StuckAtNode: A line exhausted its sub-step budget.
  """
  settings = settings or default_settings(cfg, t_span)
  times = _time_lattice(t_span, settings.base_step)
  seeds = np.asarray(seeds, dtype=float).ravel()
  _check_seeds(cfg, times[0], seeds)
  chunks = [
      seeds[i:i + _CHUNK_SIZE] for i in range(0, seeds.size, _CHUNK_SIZE)
  ]
  run = functools.partial(
      _integrate_chunk, cfg=cfg, times=times, settings=settings)
  if num_workers <= 1:
    results = [run(chunk) for chunk in chunks]
  else:
    pool = multiprocessing.pool.ThreadPool(num_workers)
    try:
      results = pool.map(run, chunks)
    finally:
      pool.close()
      pool.join()
  logging.info('Integrated %d flux lines over %d base steps', seeds.size,
               times.size - 1)
  positions = np.concatenate(results, axis=1)
  return [Trajectory(times, positions[:, i]) for i in range(seeds.size)]


def integrate(cfg: interference.DoubleSlitConfig,
              x0: float,
              t_span: Tuple[float, float],
              settings: Optional[IntegratorSettings] = None) -> Trajectory:
  """Single flux line; see `integrate_many`."""
  return integrate_many(cfg, [x0], t_span, settings)[0]


def ordering_check(trajs: Sequence[Trajectory]) -> OrderingReport:
  """Checks that no two flux lines swap order.

  Args:
    trajs: Trajectories sampled at identical times.

  Returns:
    The first time and pair at which the order of a pair differs from its
    order at the first sample.

  Raises:
    MismatchedSampling: The trajectories do not share sample times.
  """
  if len(trajs) < 2:
    return OrderingReport(passed=True)
  times = trajs[0].times
  for traj in trajs[1:]:
    if not np.array_equal(traj.times, times):
      raise errors.MismatchedSampling('Trajectories have different samples.')
  positions = np.stack([traj.positions for traj in trajs], axis=1)
  order = np.argsort(positions[0], kind='stable')
  gaps = np.sign(np.diff(positions[:, order], axis=1))
  flipped = gaps != gaps[0]
  if not flipped.any():
    return OrderingReport(passed=True)
  row, col = np.argwhere(flipped)[0]
  pair = (int(order[col]), int(order[col + 1]))
  logging.warning('Flux lines %s change order at t=%g', pair, times[row])
  return OrderingReport(
      passed=False, violation_time=float(times[row]), violation_pair=pair)


def flux_between(cfg: interference.DoubleSlitConfig, traj_a: Trajectory,
                 traj_b: Trajectory, t: float) -> float:
  """Intensity mass between two flux lines at time t.

  Args:
    cfg: Experiment the lines were integrated in.
    traj_a: First line.
    traj_b: Second line.
    t: Time inside both sampled windows.

  Returns:
    Non-negative mass.

  Raises:
    OutOfRange: t lies outside either window.
  """
  xa, xb = traj_a.position_at(t), traj_b.position_at(t)
  lo, hi = min(xa, xb), max(xa, xb)
  if lo == hi:
    return 0.0
  value, _ = scipy_integrate.quad(
      lambda x: float(interference.total_intensity(cfg, t, x)),
      lo,
      hi,
      limit=200,
      epsabs=1e-14,
      epsrel=1e-12)
  return value


def velocity_sign_changes(trajectory: Trajectory) -> int:
  """Number of reversals of the transverse velocity along a line."""
  velocity = np.diff(trajectory.positions) / np.diff(trajectory.times)
  signs = np.sign(velocity)
  signs = signs[signs != 0]
  return int(np.count_nonzero(signs[1:] != signs[:-1]))
