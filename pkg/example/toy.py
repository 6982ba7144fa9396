"""Compute all metrics of a small dataset split over two owners in one process."""
import argparse

from secure_auc import OwnerDataset, SessionConfig, run_in_process
from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.util import cs

OWNER_SAMPLES = [
    [("0.9", 1), ("0.7", 1)],
    [("0.8", 0), ("0.6", 0)],
]


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Secure AUC of a toy dataset.")
    parser.add_argument("--delta", type=int, default=1, help="Records per merge cycle.")
    parser.add_argument(
        "--print-leakage", action="store_true", help="Display the leakage report."
    )
    return parser.parse_args()


if __name__ == "__main__":
    args = get_args()
    datasets = [OwnerDataset(samples, index) for index, samples in enumerate(OWNER_SAMPLES)]

    for metric in METRICS:
        outcome = run_in_process(datasets, SessionConfig(metric=metric, delta=args.delta))
        traffic = sum(transcript.total_bytes() for transcript in outcome.transcripts.values())
        print(f"{metric:10s} {cs(outcome.value, 'Green')} ({traffic} bytes)")
        if args.print_leakage:
            print(outcome.leakage.dumps())
