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

"""Atomic output of artifacts."""

import contextlib
import os
import tempfile
from typing import Iterator, IO, Union

from absl import logging

from pathfield._src import errors


@contextlib.contextmanager
def atomic_open(path: Union[str, os.PathLike],
                mode: str = 'w') -> Iterator[IO]:
  """Opens a temporary sibling of `path` and renames it over `path` on exit.

  Readers never observe a partially written artifact. If the body raises, the
  temporary file is removed and `path` is left untouched.

  Args:
    path: Final destination.
    mode: 'w' for text or 'wb' for bytes.

  Yields:
    A writable file object.

  Raises:
    IoError: The directory or file could not be written.
  """
  path = os.fspath(path)
  directory = os.path.dirname(os.path.abspath(path))
  try:
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(
        dir=directory, prefix='.' + os.path.basename(path) + '.', suffix='.tmp')
  except OSError as e:
    raise errors.IoError(f'Cannot create {path}: {e}') from e

  newline = '' if 'b' not in mode else None
  try:
    with os.fdopen(fd, mode, newline=newline) as f:
      yield f
    os.replace(tmp_path, path)
  except OSError as e:
    _remove_quietly(tmp_path)
    raise errors.IoError(f'Cannot write {path}: {e}') from e
  except BaseException:
    _remove_quietly(tmp_path)
    raise
  logging.info('Wrote %s', path)


def _remove_quietly(path: str) -> None:
  try:
    os.remove(path)
  except OSError:
    pass
