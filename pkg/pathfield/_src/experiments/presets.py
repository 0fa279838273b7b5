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

"""Named experiments in natural units (hbar = m = 1, forward_speed = 1).

Slits sit at X = +-5 and every window is x in [-12, 12], t in [0, 20].

  fig2   mirrored drifts -+0.25, sigma0 = 1: converging packets.
  fig3   no drift, sigma0 = 1: interference from dispersion alone.
  fig2b  drifts -0.1 and +0.4 (v_2 = -4 v_1).
  fig2c  fig2b with widths 3 and 1.
  fig2d  fig2c with weights 2 and 1.
"""

import copy
from typing import Any, Dict, List

from pathfield._src import errors
from pathfield._src.experiments import config


def _document(drifts, widths=(1.0, 1.0), weights=(1.0, 1.0)) -> Dict[str, Any]:
  return {
      'packets': [
          dict(
              center=5.0, drift=drifts[0], sigma0=widths[0],
              weight=weights[0]),
          dict(
              center=-5.0, drift=drifts[1], sigma0=widths[1],
              weight=weights[1]),
      ],
      'grid': dict(x_min=-12.0, x_max=12.0, nx=512, t_min=0.0, t_max=20.0,
                   nt=512),
  }


_PRESETS = {
    'fig2': _document(drifts=(-0.25, 0.25)),
    'fig3': _document(drifts=(0.0, 0.0)),
    'fig2b': _document(drifts=(-0.1, 0.4)),
    'fig2c': _document(drifts=(-0.1, 0.4), widths=(3.0, 1.0)),
    'fig2d': _document(drifts=(-0.1, 0.4), widths=(3.0, 1.0),
                       weights=(2.0, 1.0)),
}


def preset_names() -> List[str]:
  return sorted(_PRESETS)


def preset_document(name: str) -> Dict[str, Any]:
  """The file form of a preset.

  Raises:
    UnknownPreset: `name` is not registered.
  """
  if name not in _PRESETS:
    raise errors.UnknownPreset(
        f'Unknown preset {name!r}; choose from {preset_names()}.')
  return copy.deepcopy(_PRESETS[name])


def preset(name: str) -> config.ExperimentConfig:
  """A preset as a validated experiment.

  Args:
    name: One of `preset_names()`.

  Returns:
    The experiment, named `name`.

  Raises:
    UnknownPreset: `name` is not registered.
  """
  return config.config_from_dict(
      preset_document(name), name=name, source=f'preset:{name}')
