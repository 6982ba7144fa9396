"""Deterministic randomness streams.

A `PairStream` expands a 32 byte seed with SHAKE-256. Two parties, which hold the
same seed and draw in the same order, obtain identical values. Every draw call
consumes one block index of the counter, so the position of a stream is fully
described by (seed, pair, session, tag, counter).
"""

import hashlib
import secrets
from typing import Dict, Optional

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.ring_core import RingElement

SEED_SIZE: int = 32
_FULL_WORD = np.uint64(2**64 - 1)


def _label(text: str) -> bytes:
    data = text.encode("utf-8")
    return len(data).to_bytes(2, "little") + data


class PairStream:
    """Common (or private) randomness stream.

    Attributes:
        seed (bytes): 32 byte seed
        peer (str): identity of the party pair, which shares the seed, e.g. "s0-s1"
        session (str): session label
        tag (str): protocol tag of the stream, empty for the root stream
        counter (int): number of blocks drawn so far
    """

    def __init__(self, seed: bytes, peer: str, session: str = "", tag: str = ""):
        if len(seed) != SEED_SIZE:
            raise ValueError(f"seed needs {SEED_SIZE} bytes, got {len(seed)}")
        self.seed = seed
        self.peer = peer
        self.session = session
        self.tag = tag
        self.counter = 0
        self._prefix = (
            b"secure-auc"
            + _label(peer)
            + _label(session)
            + _label(tag)
            + seed
        )
        self._children: Dict[str, "PairStream"] = {}

    def __repr__(self) -> str:
        return (
            f"PairStream(peer={self.peer!r}, session={self.session!r}, "
            f"tag={self.tag!r}, counter={self.counter})"
        )

    def for_tag(self, tag: str) -> "PairStream":
        """Returns the domain separated stream of a protocol tag. The stream is
        created at the first call and reused afterwards.
        """
        if tag not in self._children:
            self._children[tag] = PairStream(self.seed, self.peer, self.session, tag)
        return self._children[tag]

    def next_bytes(self, size: int) -> bytes:
        block = hashlib.shake_256(
            self._prefix + self.counter.to_bytes(8, "little")
        ).digest(size)
        self.counter += 1
        return block

    def next_words(self, count: int) -> np.ndarray:
        """Uniform 64 bit words."""
        if count == 0:
            return np.zeros(0, dtype=np.uint64)
        return np.frombuffer(self.next_bytes(8 * count), dtype="<u8").astype(np.uint64)

    # no typechecked, because function is performance critical
    def next_below(self, bounds) -> np.ndarray:
        """Uniform draws in [0, bound) with rejection sampling. `bounds` is a scalar
        or a uint64 vector with one bound per draw (the vector length is the
        number of draws then).

        Raises:
            ValueError: if a bound is 0
        """
        bounds = np.atleast_1d(np.asarray(bounds, dtype=np.uint64))
        if np.any(bounds == 0):
            raise ValueError("upper bound needs to be greater than 0")
        count = bounds.size
        # largest multiple of the bound, which fits into a word
        limits = (_FULL_WORD // bounds) * bounds
        result = np.empty(count, dtype=np.uint64)
        missing = np.arange(count)
        while missing.size:
            words = self.next_words(missing.size)
            accepted = words < limits[missing]
            index = missing[accepted]
            result[index] = words[accepted] % bounds[index]
            missing = missing[~accepted]
        return result

    # no typechecked, because function is performance critical
    def next_elements(
        self, count: int, modulus: int = L, upper_bound: Optional[int] = None
    ) -> np.ndarray:
        """Uniform vector in [0, upper_bound) or in the full ring.

        Args:
            count (int): number of elements
            modulus (int, optional): ring of the elements. Defaults to L.
            upper_bound (Optional[int], optional): exclusive bound. Defaults to the
            modulus.

        Raises:
            ValueError: if the upper bound is 0 or greater than the modulus

        Returns:
            np.ndarray: uint64 vector for Z_L and Z_K, int64 vector for Z_P
        """
        bound = modulus if upper_bound is None else upper_bound
        if bound == 0:
            raise ValueError("upper bound needs to be greater than 0")
        if bound > modulus:
            raise ValueError(f"upper bound {bound} exceeds the modulus {modulus}")
        if bound == L:
            return self.next_words(count)
        if bound == K:
            return self.next_words(count) & np.uint64(K - 1)
        values = self.next_below(np.full(count, bound, dtype=np.uint64))
        if modulus == P:
            return values.astype(np.int64)
        return values

    def next_bits(self, count: int) -> np.ndarray:
        return self.next_elements(count, L, 2)

    # no typechecked, because function is performance critical
    def next_permutations(self, count: int, size: int) -> np.ndarray:
        """`count` independent uniform permutations of `size` indices.

        Returns:
            np.ndarray: int64 matrix of shape (count, size), each row is a permutation
        """
        keys = self.next_words(count * size).reshape(count, size)
        return np.argsort(keys, axis=1, kind="stable")

    @typechecked
    def next_element(self, modulus: int = L, upper_bound: Optional[int] = None) -> RingElement:
        return RingElement(int(self.next_elements(1, modulus, upper_bound)[0]), modulus)

    @typechecked
    def next_bit(self) -> int:
        return int(self.next_bits(1)[0])

    @typechecked
    def next_permutation(self, n: int) -> np.ndarray:
        """Uniform permutation of n indices.

        Raises:
            ValueError: if n is 0
        """
        if n < 1:
            raise ValueError("a permutation needs at least one element")
        return self.next_permutations(1, n)[0]


def inverse_permutation(permutation: np.ndarray) -> np.ndarray:
    inverse = np.empty_like(permutation)
    inverse[permutation] = np.arange(permutation.size)
    return inverse


@typechecked
def local_seed(master: Optional[bytes], name: str) -> bytes:
    """Seed of the private stream of a party. Without master seed, a fresh seed
    from the operating system is used.

    A master seed is for tests only: whoever knows it can recompute the private
    stream of every party. SessionConfig refuses it for owners.

    Args:
        master (Optional[bytes]): master seed of a reproducible run
        name (str): name of the party

    Returns:
        bytes: 32 byte seed
    """
    if master is None:
        return secrets.token_bytes(SEED_SIZE)
    return hashlib.sha256(master + b"/" + name.encode("utf-8")).digest()
