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

"""Exceptions raised by the pathfield library and command line."""


class PathFieldError(Exception):
  """Abstract superclass of pathfield errors."""


class NodeSingularity(PathFieldError):
  """The velocity field was requested where the intensity is below the floor.

  Intensity vanishes at (or near) a dark fringe, so J/P is undefined there.
  Integrators catch this to sub-step; bulk sampling masks instead of raising.
  """


class ZeroWavenumber(PathFieldError):
  """Dark-node positions were requested for k_x == 0, which has no fringes."""


class DegenerateConfig(PathFieldError):
  """Both packet weights are zero, so there is nothing to normalize."""


class DegenerateSpan(PathFieldError):
  """A seed span has zero or negative width."""


class InvalidSeed(PathFieldError):
  """A trajectory was seeded where the intensity is below the floor."""


class StuckAtNode(PathFieldError):
  """The sub-step budget ran out inside a dark fringe.

  Attributes:
    t: Time of the last accepted state.
    x: Position of the last accepted state.
  """

  def __init__(self, message: str, *, t: float, x: float):
    super().__init__(f'{message} (last good state t={t!r}, x={x!r})')
    self.t = t
    self.x = x


class MismatchedSampling(PathFieldError):
  """Trajectories that must share sample times do not."""


class OutOfRange(PathFieldError):
  """A time lies outside the sampled window of a trajectory."""


class UnknownPreset(PathFieldError):
  """The preset name is not registered."""


class ConfigError(PathFieldError):
  """Abstract superclass of experiment configuration errors."""


class ParseError(ConfigError):
  """The configuration text is not a well-formed document."""


class ValidationError(ConfigError):
  """A configuration value violates an invariant.

  Attributes:
    field: Dotted path of the offending field, e.g. `packets[0].sigma0`.
  """

  def __init__(self, message: str, *, field: str, source: str = '<memory>'):
    super().__init__(f'{source}: {field}: {message}')
    self.field = field
    self.source = source


class IoError(PathFieldError, OSError):
  """An output artifact could not be written."""
