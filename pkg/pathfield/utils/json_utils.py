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

"""Json utils."""

import json
from typing import Any

import numpy as np


class NumpyEncoder(json.JSONEncoder):
  """Example: json.dumps(np.float64(...), cls=NumpyEncoder).

  Numpy scalars become Python scalars and arrays become nested lists. Reports
  are read by people as well as by tools, so arrays carry no dtype envelope.
  """

  def default(self, obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
      return obj.tolist()
    if isinstance(obj, np.bool_):
      return bool(obj)
    if isinstance(obj, np.integer):
      return int(obj)
    if isinstance(obj, np.floating):
      return float(obj)
    return json.JSONEncoder.default(self, obj)


def canonical_dumps(obj: Any) -> str:
  """Serializes `obj` with sorted keys and fixed indentation.

  Identical inputs produce byte-identical text, which the report writers rely
  on.

  Args:
    obj: Json-compatible value; numpy values are accepted.

  Returns:
    Json text terminated by a newline.
  """
  return json.dumps(
      obj, cls=NumpyEncoder, sort_keys=True, indent=2, allow_nan=True) + '\n'
