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

"""Runs an experiment and writes its artifacts.

Each `run_*` function takes a validated ExperimentConfig and an output
directory and returns the paths it wrote. Files are named after the
experiment:

  <name>_intensity.csv      t,x,value on the config grid
  <name>_trajectories.csv   seed_index,t,x,y on the integrator lattice
  <name>_report.json        ValidationReport, machine readable
  <name>_report.txt         ValidationReport, human readable
  <name>.png                intensity heatmap with flux lines

Every artifact is written atomically and depends only on the config.
"""

import os
from typing import Dict, List, Optional, Sequence, Tuple, Union

from absl import logging
import attr
from matplotlib import image as mpl_image
import numpy as np
from scipy import integrate as scipy_integrate

from pathfield._src import errors
from pathfield._src.experiments import config as config_lib
from pathfield._src.experiments import rendering
from pathfield._src.flux import fields
from pathfield._src.flux import trajectories
from pathfield._src.kinematics import interference
from pathfield._src.kinematics import oracle
from pathfield._src.kinematics import packets
from pathfield.utils import file_utils
from pathfield.utils import json_utils

PathLike = Union[str, os.PathLike]

_CSV_FORMAT = '%.17g'
_ORACLE_GRID_SIZE = 256
_CONTINUITY_LEVELS = (257, 513, 1025)
_DRIFT_SAMPLES = 11
# Neighbouring flux lines holding less mass than this are not compared.
_MIN_PAIR_FLUX = 1e-6


@attr.define(frozen=True)
class ValidationThresholds:
  """Pass limits of the validation gate."""

  oracle_max_rel_error: float = 1e-9
  continuity_ratio_range: Tuple[float, float] = (3.5, 4.5)
  mass_drift: float = 1e-8
  centerline: float = 1e-12
  flux_max_drift: float = 0.01


@attr.define(frozen=True)
class ValidationReport:
  """Outcome of `run_validate`.

  Attributes:
    name: Experiment name.
    oracle_max_rel_error: Largest difference between the classical and the
      complex-amplitude intensity and current on a 256 x 256 grid, relative to
      the incoherent term scale, over cells above the intensity floor.
    oracle_pointwise_rel_error: The same mismatch relative to the classical
      intensity and current magnitude, on the same cells. Informational; cells
      just above the floor near dark fringes are dominated by rounding.
    continuity_interior_max: Max interior continuity residual on the finest
      refinement level.
    continuity_ratios: Residual reduction between consecutive levels.
    mass_drift: Largest change of the total intensity mass over the window.
    no_crossing: Whether the seeded flux lines kept their order (and, for
      mirrored configs, their side of the centreline).
    centerline_max: Largest |x| of the line seeded at x = 0; None unless the
      config is mirror symmetric.
    flux_max_drift: Largest relative change of the mass between neighbouring
      flux lines; infinite when the lines could not be integrated.
    fringe_contrast: Visibility of the brightest fringe of the final row; None
      when it has no dark neighbour on either side. Informational.
    thresholds: Limits the checks are judged against.
  """

  name: str
  oracle_max_rel_error: float
  oracle_pointwise_rel_error: float
  continuity_interior_max: float
  continuity_ratios: Tuple[float, ...] = attr.field(converter=tuple)
  mass_drift: float
  no_crossing: bool
  centerline_max: Optional[float]
  flux_max_drift: float
  fringe_contrast: Optional[float]
  thresholds: ValidationThresholds = attr.field(factory=ValidationThresholds)

  @property
  def checks(self) -> Dict[str, bool]:
    limits = self.thresholds
    lo, hi = limits.continuity_ratio_range
    checks = {
        'oracle':
            self.oracle_max_rel_error <= limits.oracle_max_rel_error,
        'continuity':
            all(lo <= r <= hi for r in self.continuity_ratios),
        'mass':
            self.mass_drift <= limits.mass_drift,
        'no_crossing':
            self.no_crossing,
        'flux':
            self.flux_max_drift <= limits.flux_max_drift,
    }
    if self.centerline_max is not None:
      checks['centerline'] = self.centerline_max <= limits.centerline
    return checks

  @property
  def passed(self) -> bool:
    return all(self.checks.values())

  def to_dict(self) -> Dict[str, object]:
    data = attr.asdict(self)
    data['checks'] = self.checks
    data['passed'] = self.passed
    return data

  def to_json(self) -> str:
    return json_utils.canonical_dumps(self.to_dict())

  def to_text(self) -> str:
    limits = self.thresholds
    lo, hi = limits.continuity_ratio_range
    checks = self.checks

    def verdict(key):
      return 'PASS' if checks[key] else 'FAIL'

    ratios = ', '.join(f'{r:.4f}' for r in self.continuity_ratios)
    lines = [
        f'validation of {self.name}',
        f'  oracle max rel error   {self.oracle_max_rel_error:.3e}'
        f'  (<= {limits.oracle_max_rel_error:g})  {verdict("oracle")}',
        f'  oracle pointwise error {self.oracle_pointwise_rel_error:.3e}',
        f'  continuity ratios      [{ratios}]'
        f'  (in [{lo:g}, {hi:g}])  {verdict("continuity")}',
        f'  continuity max         {self.continuity_interior_max:.3e}',
        f'  mass drift             {self.mass_drift:.3e}'
        f'  (<= {limits.mass_drift:g})  {verdict("mass")}',
        f'  no crossing            {self.no_crossing}'
        f'  {verdict("no_crossing")}',
    ]
    if self.centerline_max is not None:
      lines.append(f'  centerline max |x|     {self.centerline_max:.3e}'
                   f'  (<= {limits.centerline:g})  {verdict("centerline")}')
    lines.append(f'  flux max drift         {self.flux_max_drift:.3e}'
                 f'  (<= {limits.flux_max_drift:g})  {verdict("flux")}')
    if self.fringe_contrast is not None:
      lines.append(f'  fringe contrast        {self.fringe_contrast:.4f}')
    lines.append('PASSED' if self.passed else 'FAILED')
    return '\n'.join(lines) + '\n'


def write_intensity_csv(path: PathLike, grid: fields.FieldGrid) -> None:
  """Writes a scalar grid as `t,x,value` rows, time major."""
  t, x = np.meshgrid(grid.spec.ts, grid.spec.xs, indexing='ij')
  table = np.column_stack([t.ravel(), x.ravel(), grid.values.ravel()])
  with file_utils.atomic_open(path) as f:
    np.savetxt(
        f, table, fmt=_CSV_FORMAT, delimiter=',', header='t,x,value',
        comments='')


def write_trajectories_csv(path: PathLike,
                           trajs: Sequence[trajectories.Trajectory],
                           forward_speed: float) -> None:
  """Writes flux lines as `seed_index,t,x,y` rows with y = forward_speed t."""
  blocks = []
  for index, traj in enumerate(trajs):
    blocks.append(
        np.column_stack([
            np.full(traj.times.shape, float(index)), traj.times,
            traj.positions, forward_speed * traj.times
        ]))
  table = np.concatenate(blocks) if blocks else np.empty((0, 4))
  with file_utils.atomic_open(path) as f:
    np.savetxt(
        f,
        table,
        fmt=('%d',) + (_CSV_FORMAT,) * 3,
        delimiter=',',
        header='seed_index,t,x,y',
        comments='')


def _output_path(out_dir: PathLike, filename: str) -> str:
  return os.path.join(os.fspath(out_dir), filename)


def _flux_lines(cfg: config_lib.ExperimentConfig,
                num_workers: int) -> List[trajectories.Trajectory]:
  seeds = trajectories.seed_positions(cfg.double_slit, cfg.seeds)
  return trajectories.integrate_many(cfg.double_slit, seeds, cfg.t_span,
                                     cfg.integrator, num_workers)


def run_simulate(cfg: config_lib.ExperimentConfig,
                 out_dir: PathLike,
                 num_workers: int = 1) -> str:
  """Samples the intensity on the config grid and writes it as CSV."""
  grid = fields.sample_intensity(cfg.double_slit, cfg.grid, num_workers)
  path = _output_path(out_dir, f'{cfg.name}_intensity.csv')
  write_intensity_csv(path, grid)
  return path


def run_trajectories(cfg: config_lib.ExperimentConfig,
                     out_dir: PathLike,
                     num_workers: int = 1) -> str:
  """Integrates the seeded flux lines and writes them as CSV.

  Raises:
    InvalidSeed: A seed starts below the intensity floor.
    StuckAtNode: A line exhausted its sub-step budget.
    IoError: The file could not be written.
  """
  trajs = _flux_lines(cfg, num_workers)
  path = _output_path(out_dir, f'{cfg.name}_trajectories.csv')
  write_trajectories_csv(path, trajs, cfg.double_slit.forward_speed)
  return path


def run_render(cfg: config_lib.ExperimentConfig,
               out_dir: PathLike,
               num_workers: int = 1) -> str:
  """Renders the intensity heatmap with the flux lines as a PNG."""
  frame = cfg.render.frame(cfg.grid)
  grid = fields.sample_intensity(cfg.double_slit, frame, num_workers)
  rgba = rendering.intensity_to_rgba(grid.values, cfg.render.colormap)
  rgba = rendering.overlay_trajectories(rgba, frame,
                                        _flux_lines(cfg, num_workers),
                                        cfg.render.trajectory_color)
  path = _output_path(out_dir, f'{cfg.name}.png')
  with file_utils.atomic_open(path, 'wb') as f:
    mpl_image.imsave(f, rgba, format='png')
  return path


def _term_scale(cfg: interference.DoubleSlitConfig, t: np.ndarray,
                x: np.ndarray) -> np.ndarray:
  r1 = np.sqrt(packets.density(cfg.packet1, cfg.scales, t, x))
  r2 = np.sqrt(packets.density(cfg.packet2, cfg.scales, t, x))
  return cfg.normalization**2 * (r1 + r2)**2


def _speed_scale(cfg: interference.DoubleSlitConfig, t: np.ndarray,
                 x: np.ndarray) -> np.ndarray:
  total = cfg.forward_speed
  for packet in cfg.channels:
    total = total + np.abs(
        packets.convective_velocity(packet, cfg.scales, t, x))
    total = total + np.abs(packets.osmotic_velocity(packet, cfg.scales, t, x))
  return total


def _oracle_mismatch(cfg: interference.DoubleSlitConfig,
                     spec: fields.GridSpec) -> Tuple[float, float]:
  """Scaled and pointwise classical/complex-amplitude mismatch on `spec`."""
  t, x = np.meshgrid(spec.ts, spec.xs, indexing='ij')
  classical = interference.total_intensity(cfg, t, x)
  valid = classical > interference.intensity_floor(cfg, t)
  scale = _term_scale(cfg, t, x)
  quantum = np.abs(oracle.superposed_wavefunction(cfg, t, x))**2
  classical_current = interference.total_current(cfg, t, x)
  current_diff = classical_current - oracle.quantum_current(cfg, t, x)

  current_scale = (scale * _speed_scale(cfg, t, x))[..., np.newaxis]
  scaled = np.maximum(
      np.abs(classical - quantum) / scale,
      (np.abs(current_diff) / current_scale).max(axis=-1))

  # The y component I * forward_speed keeps |j| positive above the floor.
  pointwise = np.maximum(
      np.abs(classical[valid] - quantum[valid]) / classical[valid],
      np.linalg.norm(current_diff[valid], axis=-1) /
      np.linalg.norm(classical_current[valid], axis=-1))
  return float(scaled[valid].max()), float(pointwise.max())


def oracle_max_rel_error(cfg: interference.DoubleSlitConfig,
                         spec: fields.GridSpec) -> float:
  """Largest mismatch relative to the incoherent term scale; the gate."""
  return _oracle_mismatch(cfg, spec)[0]


def oracle_pointwise_rel_error(cfg: interference.DoubleSlitConfig,
                               spec: fields.GridSpec) -> float:
  """Largest mismatch relative to the classical intensity and current."""
  return _oracle_mismatch(cfg, spec)[1]


def _continuity(cfg: config_lib.ExperimentConfig,
                num_workers: int) -> Tuple[float, List[float]]:
  maxima = []
  for n in _CONTINUITY_LEVELS:
    spec = attr.evolve(cfg.grid, nx=n, nt=n)
    residual = fields.continuity_residual_map(
        cfg.double_slit, spec, num_workers=num_workers)
    maxima.append(fields.residual_norms(residual).max_abs)
  ratios = [coarse / fine for coarse, fine in zip(maxima[:-1], maxima[1:])]
  logging.info('Continuity residual maxima %s', maxima)
  return maxima[-1], ratios


def _total_mass(cfg: interference.DoubleSlitConfig, t: float) -> float:
  los, his, centers = [], [], []
  for packet in cfg.channels:
    if packet.weight == 0:
      continue
    center = float(packets.moving_center(packet, t))
    width = 12.0 * float(packets.sigma_t(packet, cfg.scales, t))
    los.append(center - width)
    his.append(center + width)
    centers.append(center)
  value, _ = scipy_integrate.quad(
      lambda x: float(interference.total_intensity(cfg, t, x)),
      min(los),
      max(his),
      points=sorted(set(centers)),
      limit=400,
      epsabs=1e-13,
      epsrel=1e-12)
  return value


def _mass_drift(cfg: config_lib.ExperimentConfig) -> float:
  times = np.linspace(*cfg.t_span, _DRIFT_SAMPLES)
  masses = np.array([_total_mass(cfg.double_slit, t) for t in times])
  return float(np.abs(masses - masses[0]).max())


def _flux_drift(cfg: config_lib.ExperimentConfig,
                trajs: Sequence[trajectories.Trajectory]) -> float:
  times = np.linspace(*cfg.t_span, _DRIFT_SAMPLES)
  worst = 0.0
  for a, b in zip(trajs[:-1], trajs[1:]):
    initial = trajectories.flux_between(cfg.double_slit, a, b, times[0])
    if initial < _MIN_PAIR_FLUX:
      continue
    for t in times[1:]:
      later = trajectories.flux_between(cfg.double_slit, a, b, t)
      worst = max(worst, abs(later - initial) / initial)
  return worst


def _sides_kept(trajs: Sequence[trajectories.Trajectory]) -> bool:
  for traj in trajs:
    start = np.sign(traj.positions[0])
    if start and np.any(np.sign(traj.positions) != start):
      return False
  return True


def _final_contrast(cfg: config_lib.ExperimentConfig) -> Optional[float]:
  row = interference.total_intensity(cfg.double_slit, cfg.grid.t_max,
                                     cfg.grid.xs)
  try:
    return fields.fringe_contrast(row)
  except ValueError:
    return None


def run_validate(cfg: config_lib.ExperimentConfig,
                 out_dir: Optional[PathLike] = None,
                 num_workers: int = 1) -> ValidationReport:
  """Runs every validation check on `cfg`.

  Args:
    cfg: Experiment.
    out_dir: When given, the report is written there as JSON and text.
    num_workers: Threads used for sampling and integration.

  Returns:
    The report; `report.passed` is the gate.

  Raises:
    InvalidSeed: A seed starts below the intensity floor.
    IoError: The report could not be written.
  """
  ds = cfg.double_slit
  oracle_error, oracle_pointwise = _oracle_mismatch(
      ds,
      attr.evolve(cfg.grid, nx=_ORACLE_GRID_SIZE, nt=_ORACLE_GRID_SIZE))
  continuity_max, ratios = _continuity(cfg, num_workers)
  mass_drift = _mass_drift(cfg)

  centerline_max = None
  try:
    trajs = _flux_lines(cfg, num_workers)
    no_crossing = trajectories.ordering_check(trajs).passed
    if ds.is_mirror_symmetric:
      no_crossing = no_crossing and _sides_kept(trajs)
      centre = trajectories.integrate(ds, 0.0, cfg.t_span, cfg.integrator)
      centerline_max = float(np.abs(centre.positions).max())
    flux_drift = _flux_drift(cfg, trajs)
  except errors.StuckAtNode as e:
    logging.warning('Flux lines of %s could not be integrated: %s', cfg.name,
                    e)
    no_crossing = False
    flux_drift = float('inf')
    if ds.is_mirror_symmetric:
      centerline_max = float('inf')

  report = ValidationReport(
      name=cfg.name,
      oracle_max_rel_error=oracle_error,
      oracle_pointwise_rel_error=oracle_pointwise,
      continuity_interior_max=continuity_max,
      continuity_ratios=ratios,
      mass_drift=mass_drift,
      no_crossing=no_crossing,
      centerline_max=centerline_max,
      flux_max_drift=flux_drift,
      fringe_contrast=_final_contrast(cfg))
  logging.info('Validation of %s %s', cfg.name,
               'passed' if report.passed else 'failed')
  if out_dir is not None:
    with file_utils.atomic_open(
        _output_path(out_dir, f'{cfg.name}_report.json')) as f:
      f.write(report.to_json())
    with file_utils.atomic_open(
        _output_path(out_dir, f'{cfg.name}_report.txt')) as f:
      f.write(report.to_text())
  return report
