"""Ordered point-to-point messaging between the parties with round and byte accounting.

Every message is a frame with a 6 byte header followed by the payload:

    4 byte little endian payload length | 1 byte protocol tag | 1 byte round depth

Payloads of the protocols are raw little endian 64 bit words. The round depth is
the logical send depth of the message inside the current protocol invocation:
a party sends with depth `1 + deepest depth received so far`, offline messages
(correlated randomness of the helper, control frames) are sent with depth 0. The
number of rounds of an invocation is the deepest depth, which a party observed.
This makes the round count independent of thread scheduling and identical for the
in-process and the TCP backend.
"""

import logging
import queue
import socket
import struct
import threading
import time
from abc import ABC, abstractmethod
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import

log = logging.getLogger(__name__)

HEADER = struct.Struct("<IBB")
HEADER_SIZE: int = HEADER.size
DEFAULT_TIMEOUT: float = 120.0

Payload = Union[bytes, np.ndarray]


class LinkClosedError(ConnectionError):
    """The link to a peer was closed while sending or receiving."""


class ProtocolDesyncError(RuntimeError):
    """A frame with an unexpected tag was received."""


def encode_words(words: np.ndarray) -> bytes:
    return np.ascontiguousarray(words, dtype="<u8").tobytes()


def decode_words(payload: bytes) -> np.ndarray:
    if len(payload) % 8:
        raise ValueError(f"payload of {len(payload)} bytes is not a word sequence")
    return np.frombuffer(payload, dtype="<u8").astype(np.uint64)


class Link(ABC):
    """Bidirectional FIFO connection to one peer. A link transports complete frames."""

    @abstractmethod
    def send_frame(self, frame: bytes):
        pass

    @abstractmethod
    def recv_frame(self) -> bytes:
        pass

    @abstractmethod
    def close(self):
        pass


class QueueLink(Link):
    """In-process link, one queue per direction."""

    _CLOSED = None

    def __init__(
        self, outgoing: queue.Queue, incoming: queue.Queue, timeout: float = DEFAULT_TIMEOUT
    ):
        self.outgoing = outgoing
        self.incoming = incoming
        self.timeout = timeout
        self.closed = False

    @staticmethod
    def pair(timeout: float = DEFAULT_TIMEOUT) -> Tuple["QueueLink", "QueueLink"]:
        first: queue.Queue = queue.Queue()
        second: queue.Queue = queue.Queue()
        return QueueLink(first, second, timeout), QueueLink(second, first, timeout)

    def send_frame(self, frame: bytes):
        if self.closed:
            raise LinkClosedError("send on closed link")
        self.outgoing.put(frame)

    def recv_frame(self) -> bytes:
        if self.closed:
            raise LinkClosedError("receive on closed link")
        try:
            frame = self.incoming.get(timeout=self.timeout)
        except queue.Empty as error:
            raise LinkClosedError(f"no frame within {self.timeout} s") from error
        if frame is self._CLOSED:
            self.closed = True
            raise LinkClosedError("peer closed the link")
        return frame

    def close(self):
        if not self.closed:
            self.closed = True
            self.outgoing.put(self._CLOSED)


class SocketLink(Link):
    """TCP link."""

    def __init__(self, sock: socket.socket, timeout: float = DEFAULT_TIMEOUT):
        self.sock = sock
        self.sock.settimeout(timeout)
        self.sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)

    def _recv_exact(self, size: int) -> bytes:
        chunks = []
        while size:
            try:
                chunk = self.sock.recv(min(size, 1 << 20))
            except OSError as error:
                raise LinkClosedError(str(error)) from error
            if not chunk:
                raise LinkClosedError("peer closed the connection")
            chunks.append(chunk)
            size -= len(chunk)
        return b"".join(chunks)

    def send_frame(self, frame: bytes):
        try:
            self.sock.sendall(frame)
        except OSError as error:
            raise LinkClosedError(str(error)) from error

    def recv_frame(self) -> bytes:
        header = self._recv_exact(HEADER_SIZE)
        length, _, _ = HEADER.unpack(header)
        return header + self._recv_exact(length)

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


@dataclass
class Transcript:
    """Communication counters of one party.

    Attributes:
        rounds (Dict[str, List[int]]): rounds of each top-level invocation per tag
        bytes_sent (Dict[str, int]): bytes sent per peer, header included
        invocation_bytes (Dict[str, List[int]]): bytes sent per invocation and tag
        invocation_messages (Dict[str, List[int]]): frames sent per invocation and tag
    """

    rounds: Dict[str, List[int]] = field(default_factory=dict)
    bytes_sent: Dict[str, int] = field(default_factory=dict)
    invocation_bytes: Dict[str, List[int]] = field(default_factory=dict)
    invocation_messages: Dict[str, List[int]] = field(default_factory=dict)

    def record(self, tag: str, rounds: int, sent_bytes: int, messages: int):
        self.rounds.setdefault(tag, []).append(rounds)
        self.invocation_bytes.setdefault(tag, []).append(sent_bytes)
        self.invocation_messages.setdefault(tag, []).append(messages)

    def total_bytes(self) -> int:
        return sum(self.bytes_sent.values())

    def to_dict(self) -> Dict:
        return {
            "bytes_sent": dict(self.bytes_sent),
            "invocations": {tag: len(counts) for tag, counts in self.rounds.items()},
            "rounds": {tag: max(counts) for tag, counts in self.rounds.items()},
        }


class PartyEndpoint:
    """Role identity of a party plus its links to the peers and its transcript.

    Attributes:
        name (str): unique party name, e.g. "s0" or "owner3"
        role (str): one of S0, S1, S2 and OWNER
        links (Dict[str, Link]): links by peer name
        transcript (Transcript): communication counters
    """

    def __init__(self, name: str, role: str, links: Optional[Dict[str, Link]] = None):
        if role not in ROLES:
            raise ValueError(f"unknown role {role}")
        self.name = name
        self.role = role
        self.links: Dict[str, Link] = links if links is not None else {}
        self.transcript = Transcript()
        # state of the open invocation scope
        self._scope_tag: Optional[str] = None
        self._scope_level = 0
        self._clock = 0
        self._scope_rounds = 0
        self._scope_bytes = 0
        self._scope_messages = 0

    def __repr__(self) -> str:
        return f"PartyEndpoint({self.name!r}, peers={sorted(self.links)})"

    @property
    def peers(self) -> List[str]:
        return list(self.links)

    def _link(self, peer: str) -> Link:
        if peer == self.name:
            raise ValueError(f"{self.name} can not send to itself")
        if peer not in self.links:
            raise LinkClosedError(f"{self.name} has no link to {peer}")
        return self.links[peer]

    @contextmanager
    def invocation(self, tag: str) -> Iterator[bool]:
        """Scope of one protocol invocation. Nested scopes are folded into the
        outermost one. Yields True for the outermost scope.
        """
        top_level = self._scope_level == 0
        if top_level:
            self._scope_tag = tag
            self._clock = 0
            self._scope_rounds = 0
            self._scope_bytes = 0
            self._scope_messages = 0
        self._scope_level += 1
        try:
            yield top_level
        finally:
            self._scope_level -= 1
        if top_level:
            self.transcript.record(
                tag, self._scope_rounds, self._scope_bytes, self._scope_messages
            )
            log.debug(
                "%s: %s finished, %d rounds, %d bytes",
                self.name,
                tag,
                self._scope_rounds,
                self._scope_bytes,
            )
            self._scope_tag = None

    # no typechecked, because function is performance critical
    def send(self, peer: str, payload: Payload, tag: str, offline: bool = False):
        """Send a payload to a peer.

        Args:
            peer (str): name of the receiver
            payload (Payload): bytes or a uint64 vector
            tag (str): protocol tag
            offline (bool, optional): message does not depend on a received message
            of the current invocation (depth 0). Defaults to False.

        Raises:
            ValueError: if the peer is the sender itself
            LinkClosedError: if the link is closed
        """
        data = payload if isinstance(payload, bytes) else encode_words(payload)
        depth = 0 if offline or self._scope_level == 0 else self._clock + 1
        frame = HEADER.pack(len(data), TAG_IDS[tag], depth) + data
        self._link(peer).send_frame(frame)
        self.transcript.bytes_sent[peer] = (
            self.transcript.bytes_sent.get(peer, 0) + len(frame)
        )
        if self._scope_level:
            self._scope_rounds = max(self._scope_rounds, depth)
            self._scope_bytes += len(frame)
            self._scope_messages += 1

    def recv_frame(self, peer: str) -> Tuple[str, bytes]:
        """Receive the next frame of a peer.

        Returns:
            Tuple[str, bytes]: tag and payload
        """
        frame = self._link(peer).recv_frame()
        length, tag_id, depth = HEADER.unpack_from(frame)
        if tag_id not in TAG_NAMES:
            raise ProtocolDesyncError(f"{self.name}: unknown tag id {tag_id} from {peer}")
        if self._scope_level:
            self._clock = max(self._clock, depth)
            self._scope_rounds = max(self._scope_rounds, depth)
        return TAG_NAMES[tag_id], frame[HEADER_SIZE : HEADER_SIZE + length]

    # no typechecked, because function is performance critical
    def recv(self, peer: str, tag: str) -> bytes:
        """Receive the next payload of a peer, which needs to carry the tag.

        Raises:
            ProtocolDesyncError: if the frame has another tag
            LinkClosedError: if the link is closed
        """
        received_tag, payload = self.recv_frame(peer)
        if received_tag != tag:
            raise ProtocolDesyncError(
                f"{self.name}: expected {tag} from {peer}, got {received_tag}"
            )
        return payload

    # no typechecked, because function is performance critical
    def recv_words(self, peer: str, tag: str) -> np.ndarray:
        return decode_words(self.recv(peer, tag))

    def close(self):
        for link in self.links.values():
            link.close()


@typechecked
def round_count(endpoint: PartyEndpoint, tag: str) -> int:
    """Rounds of the latest top-level invocation of a protocol.

    Args:
        endpoint (PartyEndpoint): the party
        tag (str): protocol tag

    Raises:
        KeyError: if the protocol was never executed by the party

    Returns:
        int: number of rounds
    """
    if tag not in endpoint.transcript.rounds:
        raise KeyError(f"{tag} was not executed by {endpoint.name}")
    return endpoint.transcript.rounds[tag][-1]


class InProcessNetwork:
    """Creates queue links between every pair of the given party names."""

    def __init__(self, names: List[str], timeout: float = DEFAULT_TIMEOUT):
        self.names = list(names)
        self._links: Dict[str, Dict[str, Link]] = {name: {} for name in names}
        for index, first in enumerate(names):
            for second in names[index + 1 :]:
                link_first, link_second = QueueLink.pair(timeout)
                self._links[first][second] = link_first
                self._links[second][first] = link_second

    @typechecked
    def endpoint(self, name: str, role: str, peers: Optional[List[str]] = None) -> PartyEndpoint:
        """Endpoint of a party. Without `peers`, the party is linked to every other party."""
        links = self._links[name]
        if peers is not None:
            links = {peer: links[peer] for peer in peers}
        return PartyEndpoint(name, role, dict(links))

    def close(self):
        for links in self._links.values():
            for link in links.values():
                link.close()


def _identification(name: str) -> bytes:
    data = name.encode("utf-8")
    return HEADER.pack(len(data), TAG_IDS[HELLO], 0) + data


class TcpListener:
    """Listening socket, which accepts identified connections of peers."""

    def __init__(self, host: str, port: int):
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self.sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self.sock.bind((host, port))
        self.sock.listen()

    @property
    def address(self) -> Tuple[str, int]:
        return self.sock.getsockname()

    def accept(self, count: int, timeout: float = DEFAULT_TIMEOUT) -> Dict[str, Link]:
        """Accept `count` connections. Each peer announces its name with the first frame."""
        links: Dict[str, Link] = {}
        self.sock.settimeout(timeout)
        while len(links) < count:
            try:
                connection, address = self.sock.accept()
            except socket.timeout as error:
                raise LinkClosedError(
                    f"only {len(links)} of {count} peers connected within {timeout} s"
                ) from error
            link = SocketLink(connection, timeout)
            frame = link.recv_frame()
            name = frame[HEADER_SIZE:].decode("utf-8")
            log.info("accepted %s from %s:%d", name, *address[:2])
            links[name] = link
        return links

    def close(self):
        self.sock.close()


@typechecked
def tcp_connect(
    own_name: str, host: str, port: int, timeout: float = DEFAULT_TIMEOUT
) -> SocketLink:
    """Connect to a listening peer and announce the own name. Retries until the
    peer accepts or the timeout expires.

    Raises:
        LinkClosedError: if the peer is not reachable within the timeout
    """
    deadline = time.monotonic() + timeout
    while True:
        try:
            sock = socket.create_connection((host, port), timeout=timeout)
            break
        except OSError as error:
            if time.monotonic() > deadline:
                raise LinkClosedError(f"could not connect to {host}:{port}") from error
            time.sleep(0.1)
    link = SocketLink(sock, timeout)
    link.send_frame(_identification(own_name))
    return link


@typechecked
def connect_tcp_endpoint(
    name: str,
    role: str,
    listener: Optional[TcpListener],
    incoming: int,
    connect: Dict[str, Tuple[str, int]],
    timeout: float = DEFAULT_TIMEOUT,
) -> PartyEndpoint:
    """Build the endpoint of a party from outgoing and incoming TCP connections.

    The outgoing connections are opened in a background thread, so that parties,
    which both listen and connect, do not block each other.

    Args:
        name (str): own party name
        role (str): own role
        listener (Optional[TcpListener]): bound listener, required if incoming > 0
        incoming (int): number of peers, which connect to this party
        connect (Dict[str, Tuple[str, int]]): address of each peer to connect to
        timeout (float, optional): connection timeout in seconds

    Returns:
        PartyEndpoint: connected endpoint
    """
    links: Dict[str, Link] = {}
    errors: List[Exception] = []

    def connect_all():
        try:
            for peer, (host, port) in connect.items():
                links[peer] = tcp_connect(name, host, port, timeout)
        except Exception as error:  # pylint: disable=broad-except
            errors.append(error)

    connector = threading.Thread(target=connect_all, daemon=True)
    connector.start()
    if incoming:
        if listener is None:
            raise ValueError(f"{name} expects {incoming} incoming connections, but does not listen")
        links.update(listener.accept(incoming, timeout))
    connector.join()
    if errors:
        raise errors[0]
    return PartyEndpoint(name, role, links)
