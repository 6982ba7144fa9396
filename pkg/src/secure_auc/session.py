"""Orchestration of a complete session: seed setup, hello negotiation, the server
programs and the owner program, in-process with threads or over TCP.
"""

import logging
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import yaml
from packaging.version import Version
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.auc_engine import AucResult, AucShare, run_engine
from secure_auc.config import SessionConfig
from secure_auc.helper import close_helper, serve
from secure_auc.owner import (
    OwnerDataset,
    decode_payload,
    decode_result,
    encode_payload,
    ingest_csv,
    outsource,
)
from secure_auc.party import Party
from secure_auc.primitives import Share, reconstruct
from secure_auc.private_sort import LeakageReport, merge_many
from secure_auc.randomness import SEED_SIZE, PairStream, local_seed
from secure_auc.ring_core import RingElement
from secure_auc.transport import (
    InProcessNetwork,
    LinkClosedError,
    PartyEndpoint,
    TcpListener,
    Transcript,
    connect_tcp_endpoint,
)
from secure_auc.util import natural_key

log = logging.getLogger(__name__)

# name of the common stream of S0 and S1
PROXY_PAIR: str = f"{S0}-{S1}"


class SessionMismatchError(ValueError):
    """Parties disagree on the session parameters."""


@typechecked
def setup_party(
    endpoint: PartyEndpoint, master_seed: Optional[bytes] = None, session: str = ""
) -> Party:
    """Create the randomness of a party. S0 draws the seed of the common stream and
    sends it to S1.

    Args:
        endpoint (PartyEndpoint): connected endpoint
        master_seed (Optional[bytes], optional): master seed of a reproducible run.
        Without, the private seeds come from the operating system.
        session (str, optional): session label for the domain separation

    Returns:
        Party: the party
    """
    local = PairStream(local_seed(master_seed, endpoint.name), endpoint.name, session)
    pair = None
    if endpoint.role == S0:
        seed = local.next_bytes(SEED_SIZE)
        endpoint.send(S1, seed, SEED, offline=True)
        pair = PairStream(seed, PROXY_PAIR, session)
    elif endpoint.role == S1:
        seed = endpoint.recv(S0, SEED)
        if len(seed) != SEED_SIZE:
            raise SessionMismatchError(f"common seed has {len(seed)} bytes")
        pair = PairStream(seed, PROXY_PAIR, session)
    return Party(endpoint, local, pair)


def _compatible(first: str, second: str) -> bool:
    return Version(first).release[:2] == Version(second).release[:2]


def _check_hello(own: Dict, remote: Dict, peer: str):
    for key, value in own.items():
        if key not in remote:
            raise SessionMismatchError(f"{peer} did not send {key}")
        if key == "version":
            if not _compatible(value, str(remote[key])):
                raise SessionMismatchError(
                    f"version {remote[key]} of {peer} is not compatible to {value}"
                )
        elif remote[key] != value:
            raise SessionMismatchError(f"{key} is {value}, but {remote[key]} at {peer}")


def negotiate(party: Party, config: SessionConfig, samples: Optional[int] = None):
    """Exchange the hello message of the servers. The proxies send the session
    parameters plus the number of records to each other and the parameters without
    the number of records to S2.

    Raises:
        SessionMismatchError: if a server uses other parameters
    """
    hello = {"version": VERSION, **config.agreed()}
    endpoint = party.endpoint
    if party.role in PROXIES:
        own = dict(hello, samples=samples)
        endpoint.send(party.peer, yaml.safe_dump(own).encode("utf-8"), HELLO)
        endpoint.send(S2, yaml.safe_dump(hello).encode("utf-8"), HELLO)
        remote = yaml.safe_load(endpoint.recv(party.peer, HELLO).decode("utf-8"))
        _check_hello(own, remote, party.peer)
    else:
        for proxy in PROXIES:
            remote = yaml.safe_load(endpoint.recv(proxy, HELLO).decode("utf-8"))
            _check_hello(hello, remote, proxy)
    log.info("%s: hello negotiated, metric %s", party.name, config.metric)


def _owner_hello(config: SessionConfig) -> Dict:
    return {
        "version": VERSION,
        "metric": config.metric,
        "scale": config.scale,
        "session": config.session,
    }


def greet_owners(party: Party, config: SessionConfig, owners: Sequence[str]):
    """Send the session parameters and the number of owners to every owner and
    check the parameters of the owners.

    Raises:
        SessionMismatchError: if an owner uses other parameters
    """
    own = _owner_hello(config)
    data = yaml.safe_dump(dict(own, owners=len(owners))).encode("utf-8")
    for owner in owners:
        party.endpoint.send(owner, data, HELLO)
    for owner in owners:
        remote = yaml.safe_load(party.endpoint.recv(owner, HELLO).decode("utf-8"))
        _check_hello(own, remote, owner)


def owner_hello(party: Party, config: SessionConfig) -> Dict:
    """Receive the session parameters of both proxies and answer with the own ones.
    The owner sends nothing else before the parameters match.

    Raises:
        SessionMismatchError: if a proxy uses other parameters or the proxies
        disagree on the number of owners

    Returns:
        Dict: agreed parameters including the number of owners
    """
    expected = _owner_hello(config)
    data = yaml.safe_dump(expected).encode("utf-8")
    for proxy in PROXIES:
        remote = yaml.safe_load(party.endpoint.recv(proxy, HELLO).decode("utf-8"))
        _check_hello(expected, remote, proxy)
        expected = dict(expected, owners=remote.get("owners"))
    for proxy in PROXIES:
        party.endpoint.send(proxy, data, HELLO)
    return expected


def server_main(
    party: Party,
    config: SessionConfig,
    owners: Sequence[str],
    report: Optional[LeakageReport] = None,
) -> Any:
    """Program of a server.

    The proxies receive the share lists of the owners, merge them, run the engine
    and send their result share to every owner. S2 serves the proxies until S0
    closes the session.

    Args:
        party (Party): S0, S1 or S2
        config (SessionConfig): session parameters
        owners (Sequence[str]): names of the owners
        report (Optional[LeakageReport], optional): collects what the merges reveal

    Returns:
        Any: AucShare for the proxies, number of served invocations for S2
    """
    if party.role == S2:
        negotiate(party, config)
        return serve(party)

    ordered = sorted(owners, key=natural_key)
    greet_owners(party, config, ordered)
    lists = [decode_payload(party.endpoint.recv(owner, SHARES)) for owner in ordered]
    negotiate(party, config, sum(len(shares) for shares in lists))

    merged = merge_many(party, lists, config.delta, report)
    log.info("%s: merged %d lists", party.name, len(lists))
    result = run_engine(party, config.metric, merged, config.scale, config.recall_axis)
    for owner in ordered:
        party.endpoint.send(
            owner, np.array([result.share.element.value], dtype=np.uint64), RESULT
        )
    log.info("%s: result delivered to %d owners", party.name, len(ordered))
    if party.role == S0:
        close_helper(party)
    return result


def owner_main(party: Party, dataset: OwnerDataset, config: SessionConfig) -> str:
    """Program of an owner: agree on the parameters with S0 and S1, outsource the
    samples and decode the result with the agreed scale.

    The owner checks the classes of its samples only, if it is the sole owner.

    Raises:
        SessionMismatchError: if the proxies use other parameters

    Returns:
        str: result with four decimal places
    """
    agreed = owner_hello(party, config)
    metric = config.metric if agreed["owners"] == 1 else None
    payload0, payload1 = outsource(dataset, agreed["scale"], party.local, metric)
    party.endpoint.send(S0, encode_payload(payload0), SHARES)
    party.endpoint.send(S1, encode_payload(payload1), SHARES)
    shares = [
        Share(RingElement(party.endpoint.recv_words(proxy, RESULT)[0], L), proxy)
        for proxy in PROXIES
    ]
    return decode_result(shares[0], shares[1], agreed["scale"])


def run_threads(
    programs: Dict[str, Callable[[], Any]], network: InProcessNetwork
) -> Dict[str, Any]:
    """Run one program per party in threads.

    If a program raises, every link is closed so that the other parties stop with
    LinkClosedError. The first error, which is not a LinkClosedError, is re-raised.

    Returns:
        Dict[str, Any]: return value of each program
    """
    with ThreadPoolExecutor(max_workers=len(programs)) as executor:
        futures = {name: executor.submit(program) for name, program in programs.items()}
        done, _ = wait(futures.values(), return_when=FIRST_EXCEPTION)
        if any(future.exception() is not None for future in done):
            network.close()
        wait(futures.values())
    errors = [future.exception() for future in futures.values() if future.exception()]
    if errors:
        primary = [error for error in errors if not isinstance(error, LinkClosedError)]
        raise (primary or errors)[0]
    return {name: future.result() for name, future in futures.items()}


@dataclass
class ServerRun:
    """Outputs and parties of a run of the three servers."""

    outputs: Dict[str, Any]
    parties: Dict[str, Party]

    def __getitem__(self, name: str) -> Any:
        return self.outputs[name]

    @property
    def transcripts(self) -> Dict[str, Transcript]:
        return {name: party.endpoint.transcript for name, party in self.parties.items()}


def run_servers_in_process(
    program0: Callable[[Party], Any],
    program1: Callable[[Party], Any],
    seed: Optional[bytes] = None,
    session: str = "",
    timeout: float = 120.0,
) -> ServerRun:
    """Run a program on S0 and S1 with S2 as helper, each in its own thread.

    Args:
        program0 (Callable[[Party], Any]): program of S0
        program1 (Callable[[Party], Any]): program of S1
        seed (Optional[bytes], optional): master seed of a reproducible run
        session (str, optional): session label
        timeout (float, optional): timeout of a receive in seconds

    Returns:
        ServerRun: outputs of S0 and S1 and the number of helper invocations of S2
    """
    network = InProcessNetwork(SERVERS, timeout)
    parties: Dict[str, Party] = {}

    def start(name: str, program: Callable[[Party], Any]) -> Callable[[], Any]:
        def run() -> Any:
            party = setup_party(network.endpoint(name, name), seed, session)
            parties[name] = party
            output = program(party)
            if name == S0:
                close_helper(party)
            return output

        return run

    outputs = run_threads(
        {S0: start(S0, program0), S1: start(S1, program1), S2: start(S2, serve)},
        network,
    )
    return ServerRun(outputs, parties)


@dataclass
class SessionOutcome:
    """Result of an in-process session.

    Attributes:
        value (str): decoded result, identical for every owner
        result (AucResult): reconstructed result
        values (Dict[str, str]): decoded result of each owner
        transcripts (Dict[str, Transcript]): communication of every party
        leakage (LeakageReport): what the merges revealed to the proxies
    """

    value: str
    result: AucResult
    values: Dict[str, str] = field(default_factory=dict)
    transcripts: Dict[str, Transcript] = field(default_factory=dict)
    leakage: LeakageReport = field(default_factory=LeakageReport)


@typechecked
def owner_names(count: int) -> List[str]:
    return [f"{OWNER}{index}" for index in range(count)]


@typechecked
def run_in_process(
    datasets: Sequence[OwnerDataset],
    config: SessionConfig,
    seed: Optional[bytes] = None,
) -> SessionOutcome:
    """Run the owners and the three servers in threads of this process.

    Args:
        datasets (Sequence[OwnerDataset]): one dataset per owner
        config (SessionConfig): session parameters, the role is ignored
        seed (Optional[bytes], optional): master seed of a reproducible run

    Raises:
        ValueError: if no dataset is given

    Returns:
        SessionOutcome: result, transcripts and leakage report
    """
    if not datasets:
        raise ValueError("a session needs at least one owner")
    config = replace(config, owners=len(datasets))
    owners = owner_names(len(datasets))
    network = InProcessNetwork(SERVERS + owners, config.timeout)
    endpoints = {
        S0: network.endpoint(S0, S0),
        S1: network.endpoint(S1, S1),
        S2: network.endpoint(S2, S2, [S0, S1]),
    }
    for owner in owners:
        endpoints[owner] = network.endpoint(owner, OWNER, [S0, S1])
    report = LeakageReport()

    def server(name: str) -> Callable[[], Any]:
        def run() -> Any:
            party = setup_party(endpoints[name], seed, config.session)
            return server_main(party, config, owners, report if name == S0 else None)

        return run

    def owner(name: str, dataset: OwnerDataset) -> Callable[[], Any]:
        def run() -> Any:
            party = setup_party(endpoints[name], seed, config.session)
            return owner_main(party, dataset, config)

        return run

    programs: Dict[str, Callable[[], Any]] = {name: server(name) for name in SERVERS}
    programs.update({name: owner(name, data) for name, data in zip(owners, datasets)})
    outputs = run_threads(programs, network)

    share0: AucShare = outputs[S0]
    share1: AucShare = outputs[S1]
    result = AucResult(reconstruct(share0.share, share1.share).value, config.scale)
    values = {name: outputs[name] for name in owners}
    return SessionOutcome(
        value=values[owners[0]],
        result=result,
        values=values,
        transcripts={name: endpoint.transcript for name, endpoint in endpoints.items()},
        leakage=report,
    )


# peers, which a role connects to; all other links are accepted
CONNECTS_TO: Dict[str, List[str]] = {
    S0: [],
    S1: [S0],
    S2: [S0, S1],
    OWNER: [S0, S1],
}


@typechecked
def incoming_links(role: str, owners: int) -> int:
    """Number of peers, which connect to a role."""
    if role == S0:
        return 2 + owners
    if role == S1:
        return 1 + owners
    return 0


@typechecked
def run_tcp_party(config: SessionConfig, report: Optional[LeakageReport] = None) -> Any:
    """Run the role of the configuration over TCP.

    Args:
        config (SessionConfig): session parameters and addresses
        report (Optional[LeakageReport], optional): leakage report of a proxy

    Raises:
        ValueError: if a required address or the input of an owner is missing

    Returns:
        Any: decoded result for owners, AucShare for the proxies, number of served
        invocations for S2
    """
    missing = [peer for peer in CONNECTS_TO[config.role] if peer not in config.connect]
    if missing:
        raise ValueError(f"{config.name} needs the addresses of {missing}")
    incoming = incoming_links(config.role, config.owners)
    if incoming and config.listen is None:
        raise ValueError(f"{config.name} needs a listen address")
    if config.role == OWNER and config.input is None:
        raise ValueError("an owner needs an input file")
    dataset = ingest_csv(config.input, config.owner_id) if config.role == OWNER else None

    listener = TcpListener(*config.listen) if incoming else None
    try:
        endpoint = connect_tcp_endpoint(
            config.name,
            config.role,
            listener,
            incoming,
            {peer: config.connect[peer] for peer in CONNECTS_TO[config.role]},
            config.timeout,
        )
    finally:
        if listener is not None:
            listener.close()
    log.info("%s: connected to %s", config.name, sorted(endpoint.peers))

    try:
        party = setup_party(endpoint, config.seed, config.session)
        if config.role == OWNER:
            return owner_main(party, dataset, config)
        owners = [peer for peer in endpoint.peers if peer.startswith(OWNER)]
        if config.role in PROXIES and len(owners) != config.owners:
            raise SessionMismatchError(f"expected {config.owners} owners, got {len(owners)}")
        return server_main(party, config, owners, report)
    finally:
        endpoint.close()
