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

"""Experiment configs, presets, rendering and runners."""

from pathfield._src.errors import ConfigError
from pathfield._src.errors import IoError
from pathfield._src.errors import ParseError
from pathfield._src.errors import UnknownPreset
from pathfield._src.errors import ValidationError
from pathfield._src.experiments.config import config_from_dict
from pathfield._src.experiments.config import ExperimentConfig
from pathfield._src.experiments.config import parse_config
from pathfield._src.experiments.config import parse_config_text
from pathfield._src.experiments.presets import preset
from pathfield._src.experiments.presets import preset_document
from pathfield._src.experiments.presets import preset_names
from pathfield._src.experiments.rendering import colormap
from pathfield._src.experiments.rendering import intensity_to_rgba
from pathfield._src.experiments.rendering import overlay_trajectories
from pathfield._src.experiments.rendering import RenderSettings
from pathfield._src.experiments.runners import oracle_max_rel_error
from pathfield._src.experiments.runners import oracle_pointwise_rel_error
from pathfield._src.experiments.runners import run_render
from pathfield._src.experiments.runners import run_simulate
from pathfield._src.experiments.runners import run_trajectories
from pathfield._src.experiments.runners import run_validate
from pathfield._src.experiments.runners import ValidationReport
from pathfield._src.experiments.runners import ValidationThresholds
from pathfield._src.experiments.runners import write_intensity_csv
from pathfield._src.experiments.runners import write_trajectories_csv
