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

"""Experiment files.

An experiment is a JSON object; docs/config_format.md has the grammar. Only
`packets` is required. Omitted sections take these defaults:

  scales          hbar = mass = 1
  forward_speed   1
  grid            x in [-12, 12], t in [0, 20], 512 x 512
  seeds           20 equidistant seeds over +-(max |X| + 3 max sigma0)
  integrator      2000 base steps over the grid's time window, speed cap
                  50 x forward_speed
  render          512 x 512, white -> yellow -> orange, red flux lines

Every problem found while reading a file is raised as a ValidationError that
names the dotted path of the offending field.
"""

import json
import os
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Union

from absl import logging
import attr

from pathfield._src import errors
from pathfield._src.experiments import rendering
from pathfield._src.flux import fields
from pathfield._src.flux import trajectories
from pathfield._src.kinematics import interference
from pathfield._src.kinematics import packets

_TOP_LEVEL_KEYS = ('scales', 'packets', 'forward_speed', 'grid', 'seeds',
                   'integrator', 'render')
_PACKET_KEYS = ('center', 'drift', 'sigma0', 'weight')
_GRID_KEYS = ('x_min', 'x_max', 'nx', 't_min', 't_max', 'nt')
_DEFAULT_GRID = dict(x_min=-12.0, x_max=12.0, nx=512, t_min=0.0, t_max=20.0,
                     nt=512)


@attr.define(frozen=True)
class ExperimentConfig:
  """Everything one run needs.

  Attributes:
    double_slit: The two channels and their normalization.
    grid: Sampling window of the fields; its time range is also the window of
      the flux lines.
    seeds: Seeding rule of the flux lines.
    integrator: Step control of the flux lines.
    render: Image settings.
    name: Preset name or file stem; not part of equality.
  """

  double_slit: interference.DoubleSlitConfig = attr.field(
      validator=attr.validators.instance_of(interference.DoubleSlitConfig))
  grid: fields.GridSpec = attr.field(
      validator=attr.validators.instance_of(fields.GridSpec))
  seeds: trajectories.SeedSpec = attr.field(
      validator=attr.validators.instance_of(trajectories.SeedSpec))
  integrator: trajectories.IntegratorSettings = attr.field(
      validator=attr.validators.instance_of(trajectories.IntegratorSettings))
  render: rendering.RenderSettings = attr.field(
      factory=rendering.RenderSettings,
      validator=attr.validators.instance_of(rendering.RenderSettings))
  name: str = attr.field(default='experiment', eq=False)

  @property
  def t_span(self):
    return (self.grid.t_min, self.grid.t_max)

  def with_grid_size(self, nx: int, nt: int) -> 'ExperimentConfig':
    return attr.evolve(self, grid=attr.evolve(self.grid, nx=nx, nt=nt))

  def with_seed_count(self, count: int) -> 'ExperimentConfig':
    return attr.evolve(self, seeds=attr.evolve(self.seeds, count=count))


class _Reader:
  """Walks a decoded document, tracking the dotted path for error messages."""

  def __init__(self, source: str):
    self._source = source

  def fail(self, path: str, message: str) -> errors.ValidationError:
    return errors.ValidationError(
        message, field=path or '<root>', source=self._source)

  def section(self, value: Any, path: str,
              allowed: Iterable[str]) -> Dict[str, Any]:
    if not isinstance(value, Mapping):
      raise self.fail(path, f'expected an object, got {type(value).__name__}')
    unknown = sorted(set(value) - set(allowed))
    if unknown:
      raise self.fail(_join(path, unknown[0]), 'unknown key')
    return dict(value)

  def number(self, value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
      raise self.fail(path, f'expected a number, got {value!r}')
    return float(value)

  def integer(self, value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
      raise self.fail(path, f'expected an integer, got {value!r}')
    return value

  def string(self, value: Any, path: str) -> str:
    if not isinstance(value, str):
      raise self.fail(path, f'expected a string, got {value!r}')
    return value

  def build(self, factory: Callable[..., Any], path: str, **kwargs) -> Any:
    """Calls factory(**kwargs), blaming the field a ValueError names."""
    try:
      return factory(**kwargs)
    except ValueError as e:
      message = str(e)
      blamed = next((k for k in kwargs if message.startswith(k)), None)
      raise self.fail(_join(path, blamed) if blamed else path, message) from e


def _join(path: str, key: Optional[str]) -> str:
  if not key:
    return path
  return f'{path}.{key}' if path else key


def _read_packet(reader: _Reader, value: Any,
                 path: str) -> packets.GaussianPacket:
  data = reader.section(value, path, _PACKET_KEYS)
  kwargs = {}
  for key in _PACKET_KEYS:
    if key in data:
      kwargs[key] = reader.number(data[key], _join(path, key))
    elif key in ('center', 'drift'):
      raise reader.fail(_join(path, key), 'missing')
  return reader.build(packets.GaussianPacket, path, **kwargs)


def _read_double_slit(reader: _Reader,
                      data: Dict[str, Any]) -> interference.DoubleSlitConfig:
  if 'packets' not in data:
    raise reader.fail('packets', 'missing')
  raw = data['packets']
  if not isinstance(raw, list) or len(raw) != 2:
    raise reader.fail('packets', 'expected a list of exactly two packets')
  channels = [
      _read_packet(reader, p, f'packets[{i}]') for i, p in enumerate(raw)
  ]
  scales = packets.PhysicalScales()
  if 'scales' in data:
    section = reader.section(data['scales'], 'scales', ('hbar', 'mass'))
    scales = reader.build(
        packets.PhysicalScales, 'scales', **{
            k: reader.number(v, _join('scales', k)) for k, v in section.items()
        })
  forward_speed = 1.0
  if 'forward_speed' in data:
    forward_speed = reader.number(data['forward_speed'], 'forward_speed')
  try:
    return reader.build(
        interference.DoubleSlitConfig,
        '',
        packet1=channels[0],
        packet2=channels[1],
        scales=scales,
        forward_speed=forward_speed)
  except errors.DegenerateConfig as e:
    raise reader.fail('packets', str(e)) from e


def _read_grid(reader: _Reader, data: Dict[str, Any]) -> fields.GridSpec:
  kwargs = dict(_DEFAULT_GRID)
  if 'grid' in data:
    section = reader.section(data['grid'], 'grid', _GRID_KEYS)
    for key, value in section.items():
      path = _join('grid', key)
      kwargs[key] = (
          reader.integer(value, path)
          if key in ('nx', 'nt') else reader.number(value, path))
  return reader.build(fields.GridSpec, 'grid', **kwargs)


def _read_seeds(reader: _Reader, data: Dict[str, Any],
                double_slit: interference.DoubleSlitConfig
               ) -> trajectories.SeedSpec:
  default = trajectories.default_seed_spec(double_slit)
  if 'seeds' not in data:
    return default
  section = reader.section(data['seeds'], 'seeds',
                           ('count', 'strategy', 'span'))
  kwargs = dict(
      count=default.count, strategy=default.strategy, span=default.span)
  if 'count' in section:
    kwargs['count'] = reader.integer(section['count'], 'seeds.count')
  if 'strategy' in section:
    strategy = reader.string(section['strategy'], 'seeds.strategy')
    if strategy not in {s.value for s in trajectories.SeedStrategy}:
      raise reader.fail('seeds.strategy', f'unknown strategy {strategy!r}')
    kwargs['strategy'] = strategy
  if 'span' in section:
    span = section['span']
    if not isinstance(span, list) or len(span) != 2:
      raise reader.fail('seeds.span', 'expected [lo, hi]')
    lo, hi = (reader.number(v, f'seeds.span[{i}]') for i, v in enumerate(span))
    if not hi > lo:
      raise reader.fail('seeds.span', f'empty span [{lo}, {hi}]')
    kwargs['span'] = (lo, hi)
  return reader.build(trajectories.SeedSpec, 'seeds', **kwargs)


def _read_integrator(reader: _Reader, data: Dict[str, Any],
                     double_slit: interference.DoubleSlitConfig,
                     grid: fields.GridSpec
                    ) -> trajectories.IntegratorSettings:
  default = trajectories.default_settings(double_slit,
                                          (grid.t_min, grid.t_max))
  if 'integrator' not in data:
    return default
  section = reader.section(
      data['integrator'], 'integrator',
      ('base_step', 'max_substeps', 'speed_cap', 'max_step_fraction'))
  kwargs = attr.asdict(default)
  for key, value in section.items():
    path = _join('integrator', key)
    kwargs[key] = (
        reader.integer(value, path)
        if key == 'max_substeps' else reader.number(value, path))
  return reader.build(trajectories.IntegratorSettings, 'integrator', **kwargs)


def _read_render(reader: _Reader,
                 data: Dict[str, Any]) -> rendering.RenderSettings:
  if 'render' not in data:
    return rendering.RenderSettings()
  section = reader.section(
      data['render'], 'render',
      ('width_px', 'height_px', 'colormap', 'trajectory_color'))
  kwargs = {}
  for key, value in section.items():
    path = _join('render', key)
    kwargs[key] = (
        reader.integer(value, path)
        if key.endswith('_px') else reader.string(value, path))
  return reader.build(rendering.RenderSettings, 'render', **kwargs)


def config_from_dict(data: Any,
                     *,
                     name: str = 'experiment',
                     source: str = '<memory>') -> ExperimentConfig:
  """Builds an ExperimentConfig from a decoded document.

  Args:
    data: Decoded JSON object.
    name: Name given to the result.
    source: Where the document came from; prefixed to error messages.

  Returns:
    The validated config, normalization included.

  Raises:
    ValidationError: The document breaks the grammar or an invariant.
  """
  reader = _Reader(source)
  data = reader.section(data, '', _TOP_LEVEL_KEYS)
  double_slit = _read_double_slit(reader, data)
  grid = _read_grid(reader, data)
  return ExperimentConfig(
      double_slit=double_slit,
      grid=grid,
      seeds=_read_seeds(reader, data, double_slit),
      integrator=_read_integrator(reader, data, double_slit, grid),
      render=_read_render(reader, data),
      name=name)


def parse_config_text(text: str,
                      *,
                      name: str = 'experiment',
                      source: str = '<memory>') -> ExperimentConfig:
  """Parses a JSON document; see `config_from_dict`.

  Raises:
    ParseError: The text is not valid JSON.
    ValidationError: See `config_from_dict`.
  """
  try:
    data = json.loads(text)
  except json.JSONDecodeError as e:
    raise errors.ParseError(
        f'{source}:{e.lineno}:{e.colno}: {e.msg}') from e
  return config_from_dict(data, name=name, source=source)


def parse_config(path: Union[str, os.PathLike]) -> ExperimentConfig:
  """Reads and parses an experiment file.

  Args:
    path: JSON file.

  Returns:
    The validated config, named after the file stem.

  Raises:
    IoError: The file cannot be read.
    ParseError: Malformed JSON.
    ValidationError: An invariant is violated; the message names the field.
  """
  path = os.fspath(path)
  try:
    with open(path) as f:
      text = f.read()
  except OSError as e:
    raise errors.IoError(f'Cannot read {path}: {e}') from e
  name = os.path.splitext(os.path.basename(path))[0]
  cfg = parse_config_text(text, name=name, source=path)
  logging.info('Loaded experiment %r from %s', name, path)
  return cfg
