"""Fixed-width modular arithmetic over the rings Z_L, Z_K and Z_P.

Scalar values are represented by `RingElement`. Share vectors, which flow through
the protocols, are numpy arrays: Z_L and Z_K residues are stored as uint64, where
Z_L uses the native wrapping of unsigned 64 bit integers and Z_K is reduced by
masking the most significant bit. Z_P residues are stored as int64 and reduced
with `%`.

Numpy arrays of dtype uint64 must never be combined with negative Python
integers. All constants are converted with `np.uint64()` before use.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import

MASK_K = np.uint64(K - 1)
U64 = np.uint64
# shift distances of the MSB-first bit layout, cached per bit length
_SHIFTS = {}


@dataclass(frozen=True)
class RingElement:
    """An unsigned residue tagged with its modulus. The modulus needs to be one of
    L, K or P.
    """

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus not in MODULI:
            raise ValueError(f"unknown modulus {self.modulus}")
        # accept numpy scalars, store a Python int
        object.__setattr__(self, "value", int(self.value))
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a residue of {self.modulus}")

    def _same_ring(self, other: "RingElement"):
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other)}")
        if other.modulus != self.modulus:
            raise TypeError(
                f"ring mismatch: Z_{self.modulus} and Z_{other.modulus} can not be mixed"
            )

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._same_ring(other)
        return RingElement((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "RingElement":
        return RingElement((-self.value) % self.modulus, self.modulus)


@dataclass(frozen=True)
class BitVector:
    """ELL binary digits, most significant bit first."""

    bits: Tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != ELL:
            raise ValueError(f"a BitVector has {ELL} bits, got {len(self.bits)}")
        if any(bit not in (0, 1) for bit in self.bits):
            raise ValueError("bits needs to be 0 or 1")

    def to_int(self) -> int:
        value = 0
        for bit in self.bits:
            value = (value << 1) | bit
        return value


@typechecked
def wrap_flag(a: RingElement, b: RingElement) -> int:
    """Returns 1, if the integer sum of both values reaches the modulus.

    Args:
        a (RingElement): first summand
        b (RingElement): second summand

    Raises:
        TypeError: if the moduli of a and b are different

    Returns:
        int: 1 if a + b wraps, otherwise 0
    """
    a._same_ring(b)  # pylint: disable=protected-access
    return int(a.value + b.value >= a.modulus)


@typechecked
def bit_decompose(x: RingElement) -> BitVector:
    """Decompose a Z_K or Z_L element into ELL bits, most significant bit first.

    Args:
        x (RingElement): element of Z_K or Z_L

    Raises:
        ValueError: if x is an element of Z_P

    Returns:
        BitVector: the bits of x
    """
    if x.modulus == P:
        raise ValueError("bit decomposition is defined for Z_K and Z_L only")
    return BitVector(tuple((x.value >> (ELL - 1 - j)) & 1 for j in range(ELL)))


@typechecked
def msb(x: RingElement) -> int:
    """Most significant bit of a Z_L element.

    Args:
        x (RingElement): element of Z_L

    Raises:
        ValueError: if x is not an element of Z_L

    Returns:
        int: 1 if x >= 2^63, otherwise 0
    """
    if x.modulus != L:
        raise ValueError("msb is defined for Z_L only")
    return x.value >> (ELL - 1)


def to_ring(values, modulus: int = L) -> np.ndarray:
    """Convert integers (Python ints, possibly negative or wide) to a residue vector.

    Args:
        values: iterable of integers
        modulus (int, optional): target ring. Defaults to L.

    Returns:
        np.ndarray: uint64 residues for Z_L and Z_K, int64 residues for Z_P
    """
    residues = [int(value) % modulus for value in values]
    if modulus == P:
        return np.array(residues, dtype=np.int64)
    return np.array(residues, dtype=np.uint64)


def to_ints(values: np.ndarray) -> list:
    """Convert a residue vector into a list of Python ints."""
    return [int(value) for value in values.tolist()]


# no typechecked, because function is performance critical
def reduce(values: np.ndarray, modulus: int) -> np.ndarray:
    """Reduce a vector produced by uint64 (or int64 for Z_P) arithmetic into the ring."""
    if modulus == L:
        return values
    if modulus == K:
        return values & MASK_K
    return values % P


# no typechecked, because function is performance critical
def add(a: np.ndarray, b: np.ndarray, modulus: int = L) -> np.ndarray:
    return reduce(a + b, modulus)


# no typechecked, because function is performance critical
def sub(a: np.ndarray, b: np.ndarray, modulus: int = L) -> np.ndarray:
    return reduce(a - b, modulus)


# no typechecked, because function is performance critical
def neg(a: np.ndarray, modulus: int = L) -> np.ndarray:
    if modulus == P:
        return (-a) % P
    return reduce(U64(0) - a, modulus)


# no typechecked, because function is performance critical
def mul(a: np.ndarray, b: np.ndarray, modulus: int = L) -> np.ndarray:
    return reduce(a * b, modulus)


# no typechecked, because function is performance critical
def wraps(a: np.ndarray, b: np.ndarray, modulus: int = L) -> np.ndarray:
    """Element-wise wrap flag of a + b, returned as uint64 vector of 0 and 1.

    Args:
        a (np.ndarray): uint64 residues of Z_L or Z_K
        b (np.ndarray): uint64 residues of the same ring
        modulus (int, optional): L or K. Defaults to L.

    Returns:
        np.ndarray: 1 where the integer sum reaches the modulus
    """
    if modulus == L:
        return ((a + b) < a).astype(np.uint64)
    # both values are smaller than 2^63, the sum fits into 64 bit
    return ((a + b) >= U64(K)).astype(np.uint64)


def _shifts(bits: int) -> np.ndarray:
    if bits not in _SHIFTS:
        _SHIFTS[bits] = np.arange(bits - 1, -1, -1, dtype=np.uint64)
    return _SHIFTS[bits]


# no typechecked, because function is performance critical
def decompose_bits(values: np.ndarray, bits: int = ELL) -> np.ndarray:
    """Bit matrix of a uint64 vector, most significant bit first.

    Args:
        values (np.ndarray): uint64 vector of length n
        bits (int, optional): number of low bits to extract. Defaults to ELL.

    Returns:
        np.ndarray: int64 matrix of shape (n, bits)
    """
    return ((values[:, None] >> _shifts(bits)) & U64(1)).astype(np.int64)


# no typechecked, because function is performance critical
def compose_bits(bit_matrix: np.ndarray) -> np.ndarray:
    """Inverse of decompose_bits."""
    bits = bit_matrix.shape[1]
    return np.bitwise_or.reduce(
        bit_matrix.astype(np.uint64) << _shifts(bits), axis=1
    ).astype(np.uint64)


# no typechecked, because function is performance critical
def msbs(values: np.ndarray) -> np.ndarray:
    """Most significant bits of a Z_L vector."""
    return values >> U64(ELL - 1)
