"""Additive sharing, reconstruction, Beaver multiplication and private compare.

Protocol functions are executed by both proxies with their own share vectors.
Each protocol has a counterpart `*_helper(party, count, scale, bits)`, which is
executed by S2 and registered in helper.py.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.party import Party, invocation
from secure_auc.randomness import PairStream
from secure_auc.ring_core import RingElement, U64, decompose_bits, reduce

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Share:
    """Additive share of a value, held by S0 or S1."""

    element: RingElement
    owner: str

    def __post_init__(self):
        if self.owner not in PROXIES:
            raise ValueError(f"shares are held by {PROXIES}, not by {self.owner}")


@dataclass
class BitFieldShares:
    """Shares over Z_P of the bits of a value vector, most significant bit first.

    Attributes:
        bits (np.ndarray): int64 matrix (values, bit length), each entry < P
        owner (str): S0 or S1
    """

    bits: np.ndarray
    owner: str

    def __post_init__(self):
        if self.owner not in PROXIES:
            raise ValueError(f"shares are held by {PROXIES}, not by {self.owner}")
        if self.bits.ndim != 2:
            raise ValueError("bit shares need the shape (values, bit length)")
        if np.any(self.bits < 0) or np.any(self.bits >= P):
            raise ValueError(f"bit shares needs to be residues of Z_{P}")


@dataclass
class BeaverTriple:
    """One party's shares of multiplication triples with c = a * b over Z_L."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    owner: str

    def words(self) -> np.ndarray:
        return np.concatenate((self.a, self.b, self.c))

    @staticmethod
    def from_words(words: np.ndarray, owner: str) -> "BeaverTriple":
        a, b, c = np.split(words, 3)
        return BeaverTriple(a, b, c, owner)


@typechecked
def make_shares(x: RingElement, rng: PairStream) -> Tuple[Share, Share]:
    """Split a value into two additive shares.

    Args:
        x (RingElement): secret value
        rng (PairStream): randomness of the dealer

    Returns:
        Tuple[Share, Share]: share of S0 and share of S1
    """
    mask = rng.next_element(x.modulus)
    return Share(mask, S0), Share(x - mask, S1)


@typechecked
def reconstruct(s0: Share, s1: Share) -> RingElement:
    """Sum of two shares.

    Raises:
        TypeError: if the shares are elements of different rings
        ValueError: if both shares belong to the same party
    """
    if s0.owner == s1.owner:
        raise ValueError(f"both shares are held by {s0.owner}")
    return s0.element + s1.element


# no typechecked, because function is performance critical
def share_vector(
    values: np.ndarray, rng: PairStream, modulus: int = L
) -> Tuple[np.ndarray, np.ndarray]:
    """Vector version of make_shares."""
    mask = rng.next_elements(values.size, modulus)
    if modulus == P:
        return mask, (values - mask) % P
    return mask, reduce(values - mask, modulus)


# no typechecked, because function is performance critical
def reconstruct_vector(s0: np.ndarray, s1: np.ndarray, modulus: int = L) -> np.ndarray:
    """Vector version of reconstruct."""
    if modulus == P:
        return (s0 + s1) % P
    return reduce(s0 + s1, modulus)


def share_bits(
    bits: np.ndarray, rng: PairStream
) -> Tuple[np.ndarray, np.ndarray]:
    """Boolean (xor) shares of a 0/1 vector."""
    mask = rng.next_bits(bits.size)
    return mask, mask ^ bits


def deal_triples(rng: PairStream, count: int) -> Tuple[BeaverTriple, BeaverTriple]:
    """Random multiplication triples, shared for S0 and S1."""
    a = rng.next_elements(count)
    b = rng.next_elements(count)
    a0, a1 = share_vector(a, rng)
    b0, b1 = share_vector(b, rng)
    c0, c1 = share_vector(a * b, rng)
    return BeaverTriple(a0, b0, c0, S0), BeaverTriple(a1, b1, c1, S1)


# no typechecked, because function is performance critical
def mul(party: Party, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Element-wise product of two shared vectors over Z_L.

    S2 deals one triple (a, b, c) per element. The proxies open e = x - a and
    f = y - b and compute z_i = f x_i + e y_i + c_i, where S1 subtracts the public e f.

    Args:
        party (Party): S0 or S1
        x (np.ndarray): share of the first factor
        y (np.ndarray): share of the second factor

    Returns:
        np.ndarray: share of x * y
    """
    count = x.size
    with invocation(party, MUL, count):
        triple = BeaverTriple.from_words(party.endpoint.recv_words(S2, MUL), party.role)
        masked = np.concatenate((x - triple.a, y - triple.b))
        opened = masked + party.exchange(masked, MUL)
        e, f = opened[:count], opened[count:]
        z = f * x + e * y + triple.c
        if party.index == 1:
            z = z - e * f
        return z


def mul_helper(party: Party, count: int, scale: int, bits: int):
    triple0, triple1 = deal_triples(party.local, count)
    party.endpoint.send(S0, triple0.words(), MUL, offline=True)
    party.endpoint.send(S1, triple1.words(), MUL, offline=True)


# no typechecked, because function is performance critical
def open_shares(party: Party, x: np.ndarray) -> np.ndarray:
    """Reveal a shared vector to both proxies. One round, S2 is not involved."""
    with invocation(party, OPEN, x.size, helper=False):
        return x + party.exchange(x, OPEN)


def _compare_terms(
    index: int, r_bits: np.ndarray, public_bits: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Shares of the xor terms and their exclusive prefix sums over the more
    significant bits, for one public operand.
    """
    xor_terms = (r_bits + index * public_bits - 2 * public_bits * r_bits) % P
    prefix = (np.cumsum(xor_terms, axis=1) - xor_terms) % P
    return xor_terms, prefix


# no typechecked, because function is performance critical
def compute_private_compare(
    party: Party, r_bits: np.ndarray, y: np.ndarray, n: np.ndarray, bits: int = ELL
) -> np.ndarray:
    """Proxy side of private compare without own invocation scope. Used directly by
    the modulus conversion, which runs private compare inside its own rounds.
    """
    count = y.size
    index = party.index
    stream = party.common(PC)
    blind = stream.next_elements(count * bits, P, P - 1).reshape(count, bits) + 1
    edge_values = stream.next_elements(count * bits, P, P - 1).reshape(count, bits) + 1
    permutations = stream.next_permutations(count, bits)

    top = U64((1 << bits) - 1)
    y = y & top
    y_bits = decompose_bits(y, bits)
    t_bits = decompose_bits((y + U64(1)) & top, bits)

    # n = 0: zero at position j iff r > y is decided at bit j
    _, prefix = _compare_terms(index, r_bits, y_bits)
    c_zero = (index * y_bits - r_bits + index + prefix) % P
    # n = 1: zero at position j iff y + 1 > r is decided at bit j
    _, prefix = _compare_terms(index, r_bits, t_bits)
    c_one = (-index * t_bits + r_bits + index + prefix) % P
    # n = 1 and y = 2^bits - 1, the result is always 1: a single zero at the least
    # significant bit
    if index == 0:
        c_edge = edge_values + 1
        c_edge[:, -1] = edge_values[:, -1]
    else:
        c_edge = -edge_values
    c_edge = c_edge % P

    n_column = (n == U64(1))[:, None]
    edge = (n_column & (y == top)[:, None])
    c = np.where(edge, c_edge, np.where(n_column, c_one, c_zero))
    d = np.take_along_axis((blind * c) % P, permutations, axis=1)

    party.endpoint.send(S2, d.astype(np.uint64).ravel(), PC)
    return party.endpoint.recv_words(S2, PC)


# no typechecked, because function is performance critical
def private_compare(
    party: Party,
    r: BitFieldShares,
    y: np.ndarray,
    n: np.ndarray,
    bits: int = ELL,
) -> np.ndarray:
    """Boolean shares of n' = n xor (r > y) for every element of the batch.

    Args:
        party (Party): S0 or S1
        r (BitFieldShares): shares over Z_P of the bits of r
        y (np.ndarray): public uint64 values, known by both proxies
        n (np.ndarray): common random bits of the proxies
        bits (int, optional): bit length of r and y. Defaults to ELL.

    Returns:
        np.ndarray: uint64 vector of 0/1, xor shares of n'
    """
    if r.bits.shape != (y.size, bits):
        raise ValueError(f"expected bit shares of shape {(y.size, bits)}, got {r.bits.shape}")
    with invocation(party, PC, y.size, bits=bits):
        return compute_private_compare(party, r.bits, y, n, bits)


def pc_helper(party: Party, count: int, scale: int, bits: int):
    """S2 side of private compare: n' is 1 iff a reconstructed term is zero."""
    d0 = party.endpoint.recv_words(S0, PC).astype(np.int64)
    d1 = party.endpoint.recv_words(S1, PC).astype(np.int64)
    d = ((d0 + d1) % P).reshape(count, bits)
    result = np.any(d == 0, axis=1).astype(np.uint64)
    share0, share1 = share_bits(result, party.local)
    party.endpoint.send(S0, share0, PC)
    party.endpoint.send(S1, share1, PC)
