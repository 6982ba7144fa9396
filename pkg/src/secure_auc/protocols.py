"""Multiplexer, modulus conversion, comparison and division on shared vectors.

All protocols are batched: one invocation processes a whole vector with the
round complexity of a single element. Inputs and outputs are the local share
vectors of a proxy over Z_L (uint64), if not stated otherwise.
"""

import logging
from typing import Tuple

import numpy as np

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.party import Party, invocation
from secure_auc.primitives import (
    compute_private_compare,
    pc_helper,
    share_bits,
    share_vector,
)
from secure_auc.ring_core import MASK_K, U64, decompose_bits, wraps

log = logging.getLogger(__name__)

# share over Z_L of a bit, which reconstructs to 0 or 1
SelectionBitShare = np.ndarray


# no typechecked, because function is performance critical
def mux(party: Party, x: np.ndarray, y: np.ndarray, b: SelectionBitShare) -> np.ndarray:
    """Select x where b is 0 and y where b is 1, z = x - b(x - y).

    The proxies mask their shares with four common random values. S2 only sees the
    masked values M2, M3 (from S0) and M5, M6 (from S1), computes
    M2 M5 + M3 M6 and returns fresh shares of it.

    Args:
        party (Party): S0 or S1
        x (np.ndarray): share of the first input
        y (np.ndarray): share of the second input
        b (SelectionBitShare): share of the selection bit

    Returns:
        np.ndarray: share of the selected value
    """
    count = x.size
    with invocation(party, MUX, count):
        r0, r1, r2, r3 = party.common(MUX).next_elements(4 * count).reshape(4, count)
        d = x - y
        if party.index == 0:
            own = x - b * d + r1 * b + r2 * d + r2 * r3
            masked = np.concatenate((b + r0, d + r3))
        else:
            own = x - b * d + r0 * d + r0 * r1 + r3 * b
            masked = np.concatenate((d + r1, b + r2))
        party.endpoint.send(S2, masked, MUX)
        return own - party.endpoint.recv_words(S2, MUX)


def mux_helper(party: Party, count: int, scale: int, bits: int):
    m2, m3 = np.split(party.endpoint.recv_words(S0, MUX), 2)
    m5, m6 = np.split(party.endpoint.recv_words(S1, MUX), 2)
    share0, share1 = share_vector(m2 * m5 + m3 * m6, party.local)
    party.endpoint.send(S0, share0, MUX)
    party.endpoint.send(S1, share1, MUX)


def _convert(party: Party, x: np.ndarray) -> np.ndarray:
    count = x.size
    index = party.index
    n = party.common(MC).next_bits(count)
    dealt = party.endpoint.recv_words(S2, MC)
    r, w = dealt[:count], dealt[count : 2 * count]
    r_bits = dealt[2 * count :].astype(np.int64).reshape(count, ELL)

    y_own = (x + r) & MASK_K
    y_peer = party.exchange(y_own, MC)
    y0, y1 = (y_own, y_peer) if index == 0 else (y_peer, y_own)
    y = (y0 + y1) & MASK_K

    # xor shares of (r > y), the wrap of x + r over Z_K
    wrapped = compute_private_compare(party, r_bits, y, n)
    if index == 0:
        wrapped = wrapped ^ n
    c = w ^ wrapped

    y_lifted = y_own + wraps(y0, y1, K) * U64(K) if index == 0 else y_own
    return y_lifted - (r + c * U64(K))


# no typechecked, because function is performance critical
def modulus_conversion(party: Party, x: np.ndarray) -> np.ndarray:
    """Convert shares over Z_K into shares over Z_L of the same value.

    S2 deals a random r over Z_K with its bit shares over Z_P and xor shares of the
    wrap bit of its shares. The proxies open y = x + r over Z_K, learn xor shares of
    (r > y) with private compare and remove r and the wraps over Z_L.

    Args:
        party (Party): S0 or S1
        x (np.ndarray): share over Z_K (uint64 values < K)

    Returns:
        np.ndarray: share over Z_L
    """
    with invocation(party, MC, x.size):
        return _convert(party, x)


def modulus_conversion_helper(party: Party, count: int, scale: int, bits: int):
    rng = party.local
    r = rng.next_elements(count, K)
    r0, r1 = share_vector(r, rng, K)
    w0, w1 = share_bits(wraps(r0, r1, K), rng)
    bits0, bits1 = share_vector(decompose_bits(r).ravel(), rng, P)
    party.endpoint.send(
        S0, np.concatenate((r0, w0, bits0.astype(np.uint64))), MC, offline=True
    )
    party.endpoint.send(
        S1, np.concatenate((r1, w1, bits1.astype(np.uint64))), MC, offline=True
    )
    pc_helper(party, count, scale, ELL)


# no typechecked, because function is performance critical
def compare(party: Party, x: np.ndarray, y: np.ndarray) -> SelectionBitShare:
    """Shares of 1 where x < y and of 0 where x >= y. Requires |x - y| < K.

    The difference is reduced to Z_K and lifted back to Z_L; subtracting the lift
    leaves 0 or K, the most significant bit. A common random bit f decides the
    order, in which the proxies send the two candidate values to S2. S2 reveals
    only values of the form {0, K}, divides them by K and returns fresh shares.

    Args:
        party (Party): S0 or S1
        x (np.ndarray): share of the first operand
        y (np.ndarray): share of the second operand

    Returns:
        SelectionBitShare: share over Z_L of the comparison bit
    """
    count = x.size
    with invocation(party, CMP, count):
        f = party.common(CMP).next_bits(count)
        difference = x - y
        lifted = _convert(party, difference & MASK_K)
        z = difference - lifted
        public = f * U64(K) * U64(party.index)
        complement = (U64(K) - f * U64(K)) * U64(party.index)
        candidates = np.concatenate((public - z, complement - z))
        party.endpoint.send(S2, candidates, CMP)
        result = party.endpoint.recv_words(S2, CMP)
        return np.where(f == U64(1), result[count:], result[:count])


def compare_helper(party: Party, count: int, scale: int, bits: int):
    modulus_conversion_helper(party, count, scale, bits)
    a0 = party.endpoint.recv_words(S0, CMP)
    a1 = party.endpoint.recv_words(S1, CMP)
    # the reconstructed candidates are 0 or K
    share0, share1 = share_vector((a0 + a1) >> U64(ELL - 1), party.local)
    party.endpoint.send(S0, share0, CMP)
    party.endpoint.send(S1, share1, CMP)


def division_masks(
    party: Party, count: int, bound: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Common masks of the division: r1 in [1, B) and q in [1, (B - 1) / r1] with
    B = floor(L / 2U), so that r0 = q r1 < B.
    """
    limit = L // (2 * bound)
    if limit < 2:
        raise ValueError(f"upper bound {bound} is too large for the division")
    stream = party.common(DIV)
    r1 = stream.next_elements(count, L, limit - 1) + U64(1)
    q = stream.next_below(U64(limit - 1) // r1) + U64(1)
    return r1, q


# no typechecked, because function is performance critical
def divide(
    party: Party, x: np.ndarray, y: np.ndarray, bound: int, scale: int
) -> np.ndarray:
    """Shares of floor(x * scale / y) for 0 <= x <= bound and 1 <= y <= bound.

    The proxies mask with common r1 and r0 = q r1 and send a = r1 x + r0 y and
    b = r1 y to S2, which computes floor(a * scale / b) = floor(x * scale / y) + q * scale
    with wide integers. S1 removes the public correction q * scale.

    Args:
        party (Party): S0 or S1
        x (np.ndarray): share of the numerator
        y (np.ndarray): share of the denominator
        bound (int): public upper bound U of x and y
        scale (int): fixed-point scale F

    Raises:
        ValueError: if the bound leaves no room for the masks

    Returns:
        np.ndarray: share of the quotient
    """
    count = x.size
    r1, q = division_masks(party, count, bound)
    with invocation(party, DIV, count, scale=scale):
        r0 = q * r1
        masked = np.concatenate((r1 * x + r0 * y, r1 * y))
        party.endpoint.send(S2, masked, DIV)
        quotient = party.endpoint.recv_words(S2, DIV)
        if party.index == 1:
            quotient = quotient - q * U64(scale)
        return quotient


def divide_helper(party: Party, count: int, scale: int, bits: int):
    a0, b0 = np.split(party.endpoint.recv_words(S0, DIV), 2)
    a1, b1 = np.split(party.endpoint.recv_words(S1, DIV), 2)
    numerators = (a0 + a1).tolist()
    denominators = (b0 + b1).tolist()
    quotients = []
    for numerator, denominator in zip(numerators, denominators):
        if denominator == 0:
            log.warning("division by zero in a batch of %d elements", count)
            quotients.append(0)
        else:
            quotients.append((numerator * scale // denominator) % L)
    share0, share1 = share_vector(np.array(quotients, dtype=np.uint64), party.local)
    party.endpoint.send(S0, share0, DIV)
    party.endpoint.send(S1, share1, DIV)
