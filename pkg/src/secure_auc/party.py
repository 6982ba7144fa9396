"""State of one party during a session and the scope of protocol invocations."""

from contextlib import contextmanager
from typing import Iterator, Optional

import numpy as np

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.randomness import PairStream
from secure_auc.transport import PartyEndpoint


class Party:
    """A party of the three server setup.

    Attributes:
        endpoint (PartyEndpoint): links and transcript
        local (PairStream): private randomness
        pair (Optional[PairStream]): randomness shared by S0 and S1, None for S2 and owners
    """

    def __init__(
        self, endpoint: PartyEndpoint, local: PairStream, pair: Optional[PairStream] = None
    ):
        if endpoint.role in PROXIES and pair is None:
            raise ValueError(f"{endpoint.name} needs the common stream of the proxies")
        self.endpoint = endpoint
        self.local = local
        self.pair = pair

    def __repr__(self) -> str:
        return f"Party({self.endpoint.name!r}, role={self.role!r})"

    @property
    def role(self) -> str:
        return self.endpoint.role

    @property
    def name(self) -> str:
        return self.endpoint.name

    @property
    def index(self) -> int:
        """0 for S0 and 1 for S1. The index appears as public factor in the share
        arithmetic, e.g. only S1 adds a public constant.
        """
        if self.role == S0:
            return 0
        if self.role == S1:
            return 1
        raise ValueError(f"{self.name} is not a proxy")

    @property
    def peer(self) -> str:
        """The other proxy."""
        return S1 if self.index == 0 else S0

    def common(self, tag: str) -> PairStream:
        """Common stream of S0 and S1 for one protocol."""
        if self.pair is None:
            raise ValueError(f"{self.name} holds no common randomness")
        return self.pair.for_tag(tag)

    def exchange(self, payload: np.ndarray, tag: str) -> np.ndarray:
        """Send a vector to the other proxy and receive its vector."""
        self.endpoint.send(self.peer, payload, tag)
        return self.endpoint.recv_words(self.peer, tag)


@contextmanager
def invocation(
    party: Party,
    tag: str,
    count: int = 0,
    scale: int = 0,
    bits: int = ELL,
    helper: bool = True,
) -> Iterator[bool]:
    """Scope of a protocol invocation of a proxy. At the top level, S0 tells the
    helper S2 which protocol follows with a control frame.

    Args:
        party (Party): S0 or S1
        tag (str): protocol tag
        count (int, optional): batch size
        scale (int, optional): fixed-point scale, used by the division
        bits (int, optional): bit length of private compare
        helper (bool, optional): protocol needs S2. Defaults to True.

    Yields:
        bool: True, if the scope is the top-level invocation
    """
    if party.role not in PROXIES:
        raise ValueError(f"{tag} is executed by the proxies, not by {party.name}")
    with party.endpoint.invocation(tag) as top_level:
        if top_level and helper and party.role == S0:
            control = np.array([TAG_IDS[tag], count, scale, bits], dtype=np.uint64)
            party.endpoint.send(S2, control, CONTROL, offline=True)
        yield top_level
