import os
import socket
from typing import Any, Callable, Sequence, Tuple

import numpy as np

from secure_auc.globals import *
from secure_auc.experiments import random_samples, split_samples  # pylint: disable=unused-import
from secure_auc.party import Party
from secure_auc.primitives import reconstruct_vector, share_vector
from secure_auc.randomness import PairStream, local_seed
from secure_auc.session import ServerRun, run_servers_in_process
from secure_auc.transport import PartyEndpoint


def full_run() -> bool:
    """True, if the acceptance sizes are requested with SECURE_AUC_FULL=1."""
    return os.environ.get("SECURE_AUC_FULL", "") == "1"


def dealer(seed: int = 0) -> PairStream:
    """Randomness of the test, which plays the role of the data owner."""
    return PairStream(local_seed(seed.to_bytes(8, "little"), "dealer"), "dealer")


def run_proxies(
    program: Callable[..., Any],
    shares0: Sequence[Any],
    shares1: Sequence[Any],
    seed: bytes = b"test",
) -> ServerRun:
    """Run `program(party, *shares)` on S0 and S1 with the in-process helper S2."""
    return run_servers_in_process(
        lambda party: program(party, *shares0),
        lambda party: program(party, *shares1),
        seed=seed,
    )


def secure_call(
    program: Callable[..., np.ndarray],
    *values: np.ndarray,
    moduli: Sequence[int] = (),
    extra: Tuple = (),
    seed: int = 0,
) -> Tuple[np.ndarray, ServerRun]:
    """Share the plain vectors, run the protocol on both proxies and reconstruct
    the output over Z_L.

    Args:
        program (Callable[..., np.ndarray]): protocol function
        values (np.ndarray): plain uint64 input vectors
        moduli (Sequence[int], optional): ring of each input. Defaults to L for all.
        extra (Tuple, optional): public arguments appended to the shares
        seed (int, optional): seed of the sharing and of the session

    Returns:
        Tuple[np.ndarray, ServerRun]: reconstructed output and the run
    """
    rng = dealer(seed)
    moduli = list(moduli) or [L] * len(values)
    shares = [share_vector(value, rng, modulus) for value, modulus in zip(values, moduli)]
    run = run_proxies(
        program,
        [share[0] for share in shares] + list(extra),
        [share[1] for share in shares] + list(extra),
        seed=seed.to_bytes(8, "little"),
    )
    return reconstruct_vector(run[S0], run[S1]), run


def offline_party(role: str = S0) -> Party:
    """Party without links, for checks which fail before any message is sent."""
    seed = local_seed(b"offline", role)
    pair = PairStream(seed, "s0-s1") if role in PROXIES else None
    return Party(PartyEndpoint(role, role), PairStream(seed, role), pair)


def free_port() -> int:
    """A currently unused TCP port of the loopback interface."""
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]
