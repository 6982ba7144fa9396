"""Run the oracle equivalence sessions of a sparse session matrix and measure the
communication of the building blocks. The result is written as yaml report."""
import argparse
import sys
from typing import Callable, Dict, List

import numpy as np
import yaml

from secure_auc import run_servers_in_process
from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.experiments import run_session_matrix
from secure_auc.primitives import share_vector
from secure_auc.protocols import compare, divide, modulus_conversion, mux
from secure_auc.randomness import PairStream, local_seed
from secure_auc.transport import round_count
from secure_auc.util import cs


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Compare secure sessions with the plaintext oracle and report the "
        "communication per protocol."
    )
    parser.add_argument("--datasets", type=int, default=100, help="Number of sessions.")
    parser.add_argument("--max-samples", type=int, default=200, help="Largest dataset.")
    parser.add_argument("--seed", type=int, default=42, help="Seed of the datasets.")
    parser.add_argument(
        "-o", "--output-path", type=str, default="./acceptance.yml", help="Path of the report."
    )
    return parser.parse_args()


def run_sessions(count: int, max_samples: int, seed: int) -> List[Dict]:
    parameters = {
        METRIC: METRICS,
        DELTA: [1, 3, 5],
        OWNERS: [1, 2, 4, 8],
        TIED: [False, True],
        SAMPLES: sorted({max(8, max_samples // 8), max(8, max_samples // 2), max_samples}),
    }
    results = run_session_matrix(parameters, count, seed)
    for number, result in enumerate(results):
        status = cs("ok", "Green") if result["passed"] else cs("failed", "Red")
        print(
            f"{number:3d} {result[METRIC]:10s} {result['value']} "
            f"oracle {result['oracle']} {status}"
        )
    return results


def measure(protocol: Callable, count: int, seed: int) -> Dict:
    """Run a protocol on `count` elements and return bytes and rounds."""
    rng = PairStream(local_seed(seed.to_bytes(8, "little"), "acceptance"), "acceptance")
    values = np.arange(1, count + 1, dtype=np.uint64)
    x0, x1 = share_vector(values, rng)
    bits0, bits1 = share_vector(values % np.uint64(2), rng)
    k0, k1 = share_vector(values, rng, K)
    inputs = {
        mux: ([x0, x0, bits0], [x1, x1, bits1]),
        modulus_conversion: ([k0], [k1]),
        compare: ([x0, x0], [x1, x1]),
        divide: ([x0, x0, count, 1], [x1, x1, count, 1]),
    }[protocol]
    run = run_servers_in_process(
        lambda party: protocol(party, *inputs[0]), lambda party: protocol(party, *inputs[1])
    )
    tag = {mux: MUX, modulus_conversion: MC, compare: CMP, divide: DIV}[protocol]
    total = sum(sum(t.invocation_bytes[tag]) for t in run.transcripts.values())
    return {"bytes": total, "rounds": round_count(run.parties[S0].endpoint, tag)}


def communication_report() -> Dict:
    report = {}
    for protocol, tag in ((mux, MUX), (modulus_conversion, MC), (compare, CMP), (divide, DIV)):
        small = measure(protocol, 100, 1)
        large = measure(protocol, 200, 2)
        report[tag] = {
            "rounds": large["rounds"],
            "measured_bits_per_element": (large["bytes"] - small["bytes"]) * 8 // 100,
            "reference_bits_per_element": REFERENCE_COMMUNICATION_BITS[tag],
        }
    return report


if __name__ == "__main__":
    args = get_args()

    sessions = run_sessions(args.datasets, args.max_samples, args.seed)
    communication = communication_report()
    for tag, entry in communication.items():
        print(
            f"{tag}: {entry['rounds']} rounds, {entry['measured_bits_per_element']} bits "
            f"per element (reference {entry['reference_bits_per_element']})"
        )

    with open(args.output_path, "w", encoding="utf-8") as output_file:
        yaml.dump({"sessions": sessions, "communication": communication}, output_file)

    failed = [session for session in sessions if not session["passed"]]
    if failed:
        print(cs(f"{len(failed)} of {len(sessions)} sessions failed", "Red"))
        sys.exit(1)
    print(cs(f"all {len(sessions)} sessions passed", "Green"))
