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

"""Numerical core: packets, interference, oracle, fields and flux lines."""

from pathfield._src.errors import DegenerateConfig
from pathfield._src.errors import DegenerateSpan
from pathfield._src.errors import InvalidSeed
from pathfield._src.errors import MismatchedSampling
from pathfield._src.errors import NodeSingularity
from pathfield._src.errors import OutOfRange
from pathfield._src.errors import PathFieldError
from pathfield._src.errors import StuckAtNode
from pathfield._src.errors import ZeroWavenumber
from pathfield._src.flux.fields import continuity_residual_map
from pathfield._src.flux.fields import FieldGrid
from pathfield._src.flux.fields import fringe_contrast
from pathfield._src.flux.fields import GridSpec
from pathfield._src.flux.fields import local_minima
from pathfield._src.flux.fields import residual_norms
from pathfield._src.flux.fields import ResidualNorms
from pathfield._src.flux.fields import riemann_mass
from pathfield._src.flux.fields import sample_current
from pathfield._src.flux.fields import sample_intensity
from pathfield._src.flux.fields import sample_velocity
from pathfield._src.flux.trajectories import default_seed_spec
from pathfield._src.flux.trajectories import default_settings
from pathfield._src.flux.trajectories import flux_between
from pathfield._src.flux.trajectories import integrate
from pathfield._src.flux.trajectories import integrate_many
from pathfield._src.flux.trajectories import IntegratorSettings
from pathfield._src.flux.trajectories import ordering_check
from pathfield._src.flux.trajectories import OrderingReport
from pathfield._src.flux.trajectories import seed_positions
from pathfield._src.flux.trajectories import SeedSpec
from pathfield._src.flux.trajectories import SeedStrategy
from pathfield._src.flux.trajectories import Trajectory
from pathfield._src.flux.trajectories import velocity_sign_changes
from pathfield._src.kinematics import oracle
from pathfield._src.kinematics import packets
from pathfield._src.kinematics.interference import compute_normalization
from pathfield._src.kinematics.interference import dark_nodes
from pathfield._src.kinematics.interference import DoubleSlitConfig
from pathfield._src.kinematics.interference import intensity_floor
from pathfield._src.kinematics.interference import masked_total_velocity
from pathfield._src.kinematics.interference import mirrored_phase_difference
from pathfield._src.kinematics.interference import peak_intensity
from pathfield._src.kinematics.interference import phase_difference
from pathfield._src.kinematics.interference import total_current
from pathfield._src.kinematics.interference import total_intensity
from pathfield._src.kinematics.interference import total_velocity
from pathfield._src.kinematics.interference import wavenumber
from pathfield._src.kinematics.lattice import CoupledMapLattice
from pathfield._src.kinematics.lattice import LatticeSpec
from pathfield._src.kinematics.packets import GaussianPacket
from pathfield._src.kinematics.packets import PhysicalScales
