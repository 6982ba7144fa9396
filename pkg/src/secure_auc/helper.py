"""Service loop of the helper party S2."""

import logging
from typing import Callable, Dict

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.auc_engine import detect_ties_helper
from secure_auc.party import Party
from secure_auc.primitives import mul_helper, pc_helper
from secure_auc.protocols import (
    compare_helper,
    divide_helper,
    modulus_conversion_helper,
    mux_helper,
)
from secure_auc.transport import ProtocolDesyncError, decode_words

log = logging.getLogger(__name__)

HANDLERS: Dict[str, Callable[[Party, int, int, int], None]] = {
    MUL: mul_helper,
    PC: pc_helper,
    MUX: mux_helper,
    MC: modulus_conversion_helper,
    CMP: compare_helper,
    DIV: divide_helper,
    TIES: detect_ties_helper,
}


def serve(party: Party) -> int:
    """Execute the helper side of every protocol, which S0 announces, until S0
    closes the session.

    Args:
        party (Party): the helper S2

    Raises:
        ProtocolDesyncError: if S0 sends something else than a control frame

    Returns:
        int: number of served invocations
    """
    if party.role != S2:
        raise ValueError(f"{party.name} is not the helper")
    served = 0
    while True:
        tag, payload = party.endpoint.recv_frame(S0)
        if tag == CLOSE:
            log.info("helper closed after %d invocations", served)
            return served
        if tag != CONTROL:
            raise ProtocolDesyncError(f"helper expected a control frame, got {tag}")
        tag_id, count, scale, bits = decode_words(payload).tolist()
        protocol = TAG_NAMES[tag_id]
        with party.endpoint.invocation(protocol):
            HANDLERS[protocol](party, count, scale, bits)
        served += 1


def close_helper(party: Party):
    """Sent by S0 at the end of the session."""
    party.endpoint.send(S2, b"", CLOSE, offline=True)
