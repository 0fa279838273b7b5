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

"""Validators for attrs value types."""

import math
from typing import Any, Callable, Collection, Optional

import attr


def assert_positive(instance: Any, attribute: attr.Attribute,
                    value: float) -> None:
  if not value > 0:
    raise ValueError(
        f'{attribute.name} must be positive in {type(instance).__name__}, '
        f'got {value!r}.')


def assert_not_negative(instance: Any, attribute: attr.Attribute,
                        value: float) -> None:
  if value < 0:
    raise ValueError(
        f'{attribute.name} must not be negative in {type(instance).__name__}, '
        f'got {value!r}.')


def assert_finite(instance: Any, attribute: attr.Attribute,
                  value: float) -> None:
  if not math.isfinite(value):
    raise ValueError(
        f'{attribute.name} must be finite in {type(instance).__name__}, '
        f'got {value!r}.')


def shape_equals(instance_to_shape: Callable[[Any], Collection[Optional[int]]]):
  """Creates a shape validator for attrs.

  For example, shape_equals(lambda s: (s.nt, s.nx)) validates that the value
  is two-dimensional with the instance's row and column counts. A trailing
  `None` accepts any size along that axis.

  Args:
    instance_to_shape: Takes instance as input and returns the desired shape for
      the instance. `None` is treated as "any number".

  Returns:
    A validator that can be passed into attr.field.
  """

  def validator(instance, attribute, value) -> None:
    shape = tuple(instance_to_shape(instance))
    if len(value.shape) != len(shape) or any(
        s2 is not None and s1 != s2 for s1, s2 in zip(value.shape, shape)):
      raise ValueError(f'{attribute.name} has shape {value.shape} '
                       f'which does not match the expected shape {shape}')

  return validator
