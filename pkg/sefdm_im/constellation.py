# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

"""
Unit-mean-energy complex alphabets with Gray (or quasi-Gray) bit labels.

Points are stored in label order: ``points[i]`` is the point whose label is
the binary representation of ``i`` (most significant bit first).
"""

import functools
from dataclasses import dataclass, field

import numpy as np

from sefdm_im.utils.exceptions import ConfigurationError, UsageError

SUPPORTED_CARDINALITIES = (2, 4, 8, 16)

# Gray-coded 4-PAM levels indexed by their 2-bit label
_PAM4_GRAY = np.array([-3.0, -1.0, 3.0, 1.0])
# Single-bit antipodal level: 0 -> +1, 1 -> -1
_PAM2 = np.array([1.0, -1.0])


@dataclass(frozen=True, eq=False)
class Alphabet:
    """
    A complex alphabet of size ``cardinality`` scaled by ``scale``.
    Unit mean energy before scaling.
    """

    cardinality: int
    points: np.ndarray = field(repr=False)
    scale: float = 1.0

    @property
    def bits_per_symbol(self):
        return int(np.log2(self.cardinality))

    @property
    def labels(self):
        return tuple(
            format(i, f"0{self.bits_per_symbol}b") for i in range(self.cardinality)
        )

    @property
    def mean_energy(self):
        return float(np.mean(np.abs(self.points) ** 2))

    def signalling_point(self):
        """The point labelled all-zeros."""
        return complex(self.points[0])

    def scaled(self, scale):
        return build_alphabet(self.cardinality, scale)


def _unit_points(cardinality):
    labels = np.arange(cardinality)
    if cardinality == 2:
        return _PAM2[labels].astype(np.complex128)
    if cardinality == 4:
        real = _PAM2[labels >> 1]
        imag = _PAM2[labels & 1]
        return (real + 1j * imag) / np.sqrt(2.0)
    if cardinality == 8:
        # rectangular 4x2 grid, mean energy 6 before normalisation
        real = _PAM4_GRAY[labels >> 1]
        imag = _PAM2[labels & 1]
        return (real + 1j * imag) / np.sqrt(6.0)
    # 16QAM, Gray per axis
    real = _PAM4_GRAY[labels >> 2]
    imag = _PAM4_GRAY[labels & 3]
    return (real + 1j * imag) / np.sqrt(10.0)


@functools.lru_cache(maxsize=None)
def build_alphabet(cardinality, scale=1.0):
    """
    Returns the alphabet of the given cardinality multiplied by ``scale``.

    :param cardinality: one of 2, 4, 8, 16
    :param scale: positive real scale applied to every point
    """
    if cardinality not in SUPPORTED_CARDINALITIES:
        raise ConfigurationError(
            f"Unsupported alphabet cardinality {cardinality}, "
            f"expected one of {SUPPORTED_CARDINALITIES}"
        )
    if not scale > 0:
        raise ConfigurationError(f"Alphabet scale must be positive, got {scale}")
    points = _unit_points(cardinality) * float(scale)
    points.setflags(write=False)
    return Alphabet(cardinality=cardinality, points=points, scale=float(scale))


def bits_to_int(bits):
    """MSB-first bit sequence (string or array-like of 0/1) to an integer."""
    if isinstance(bits, str):
        if any(b not in "01" for b in bits):
            raise UsageError(f"Bit string {bits!r} contains symbols other than 0/1")
        return int(bits, 2) if bits else 0
    value = 0
    for b in np.asarray(bits, dtype=np.int64).ravel():
        if b not in (0, 1):
            raise UsageError(f"Bit value {b} is not 0/1")
        value = (value << 1) | int(b)
    return value


def int_to_bits(value, width):
    """Integer to an MSB-first uint8 bit array of the given width."""
    shifts = np.arange(width - 1, -1, -1)
    return ((int(value) >> shifts) & 1).astype(np.uint8)


def map_bits(alphabet, bits):
    """
    Maps one label (``log2 M`` bits) to its complex point.
    """
    width = len(bits)
    if width != alphabet.bits_per_symbol:
        raise UsageError(
            f"Expected {alphabet.bits_per_symbol} bits for a "
            f"{alphabet.cardinality}-ary alphabet, got {width}"
        )
    return complex(alphabet.points[bits_to_int(bits)])


def map_labels(alphabet, labels):
    """Vectorised mapping of integer labels to points."""
    return alphabet.points[np.asarray(labels, dtype=np.int64)]


def demap_point(alphabet, point):
    """Nearest-point inverse of map_bits. Returns the label as a bit array."""
    label = int(np.argmin(np.abs(alphabet.points - point)))
    return int_to_bits(label, alphabet.bits_per_symbol)


def labeling_table(cardinality):
    """Rows of (label, real, imag) for the unit-energy alphabet."""
    alphabet = build_alphabet(cardinality)
    return [
        (label, float(p.real), float(p.imag))
        for label, p in zip(alphabet.labels, alphabet.points)
    ]
