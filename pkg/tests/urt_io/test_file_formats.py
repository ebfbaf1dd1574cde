# Copyright (c) 2022 The URT Tomography Tool authors.
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
"""
Unit test for the image, sinogram and operator files.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_io.image_io import quantize, read_image_csv, read_pgm, write_image_csv, write_pgm
from urt_tomo.urt_io.operator_cache import read_operator_cache, write_operator_cache
from urt_tomo.urt_io.sinogram_io import read_sinogram_csv, write_sinogram_csv
from tests.urt_io.conftest import get_test_image, get_test_operator, get_test_sinogram


def test_quantize():
    """
    Test the linear quantisation onto 16 bit levels.
    """
    assert list(quantize(np.array([-1.0, 0.0, 1.0, 2.0]))) == [0, 0, 32768, 65535]
    assert not np.any(quantize(np.zeros(4)))


@pytest.mark.parametrize("fmt", ["P5", "P2"])
def test_pgm_round_trip(fmt, io_dir):
    """
    Test that PGM files keep the image up to quantisation.
    """
    # arrange
    image = get_test_image()
    path = str(io_dir / f"image_{fmt}.pgm")
    peak = image.values.max()
    # act
    write_pgm(image, path, fmt)
    restored = read_pgm(path, scale=peak)
    # assert
    with open(path, "rb") as infile:
        assert infile.read(2) == fmt.encode()
    assert restored.grid == image.grid
    assert restored.values == approx(image.values, abs=peak / 65535.0)


def test_pgm_unknown_format(io_dir):
    """
    Test the rejection of unknown PGM variants.
    """
    with pytest.raises(ValueError):
        write_pgm(get_test_image(), str(io_dir / "bad.pgm"), "P6")


def test_image_csv_round_trip(io_dir):
    """
    Test that CSV files keep the image exactly.
    """
    image = get_test_image(11, seed=2)
    path = str(io_dir / "image.csv")
    write_image_csv(image, path)
    restored = read_image_csv(path)
    assert restored.grid == image.grid
    assert np.array_equal(restored.values, image.values)


def test_sinogram_csv_round_trip(io_dir):
    """
    Test that CSV files keep the sinogram and its axes exactly.
    """
    # arrange
    sino = get_test_sinogram()
    path = str(io_dir / "sinogram.csv")
    # act
    write_sinogram_csv(sino, path)
    restored = read_sinogram_csv(path)
    # assert
    with open(path) as infile:
        assert infile.readline().strip() == "transform,1,2.5"
    assert restored.axes == sino.axes
    assert (restored.j, restored.s) == (1, 2.5)
    assert np.array_equal(restored.values, sino.values)


def test_sinogram_csv_malformed(io_dir):
    """
    Test the rejection of files without sinogram header.
    """
    path = io_dir / "not_a_sinogram.csv"
    path.write_text("1,2,3\n4,5,6\n7,8,9\n")
    with pytest.raises(ValueError):
        read_sinogram_csv(str(path))


def test_operator_cache_round_trip(io_dir):
    """
    Test that the cache keeps the operator exactly.
    """
    # arrange
    operator = get_test_operator()
    path = str(io_dir / "operator.bin")
    # act
    write_operator_cache(operator, path)
    restored = read_operator_cache(path)
    # assert
    with open(path, "rb") as infile:
        assert infile.read(8) == b"URTCSR01"
    assert restored.shape == operator.shape
    assert np.array_equal(restored.row_offsets, operator.row_offsets)
    assert np.array_equal(restored.col_indices, operator.col_indices)
    assert np.array_equal(restored.weights, operator.weights)


def test_operator_cache_errors(io_dir):
    """
    Test the rejection of foreign and truncated files.
    """
    foreign = io_dir / "foreign.bin"
    foreign.write_bytes(b"NOTACSR0" + bytes(32))
    with pytest.raises(ValueError):
        read_operator_cache(str(foreign))

    path = str(io_dir / "truncated.bin")
    write_operator_cache(get_test_operator(), path)
    with open(path, "rb") as infile:
        content = infile.read()
    with open(path, "wb") as outfile:
        outfile.write(content[:-8])
    with pytest.raises(ValueError):
        read_operator_cache(path)
