"""Spread of the plaintext AUROC over random subsets of a pool of test samples.
Small subsets, like the test set of a single owner, give unstable values.

The pool is either the joined prediction and ground truth files or random
samples. The statistics per subset size are written as yaml report."""
import argparse
import random

import yaml

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.experiments import auc_stability, random_samples
from secure_auc.oracle import plain_auroc_tie, plain_samples
from secure_auc.owner import OwnerDataset, join_prediction_files
from secure_auc.util import cs


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="AUROC stability over the sample count.")
    parser.add_argument("--predictions", type=str, help="CSV file with the predictions.")
    parser.add_argument("--truth", type=str, help="CSV file with the ground truth.")
    parser.add_argument("--id-column", type=str, default="id", help="Join column.")
    parser.add_argument("--pcv-column", type=str, default="pcv", help="Confidence column.")
    parser.add_argument("--label-column", type=str, default="label", help="Label column.")
    parser.add_argument(
        "--positive", type=str, default="1", help="Label value of the positive class."
    )
    parser.add_argument(
        "--pool-size", type=int, default=191, help="Size of a random pool without files."
    )
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=STABILITY_SIZES, help="Subset sizes."
    )
    parser.add_argument(
        "--repetitions", type=int, default=STABILITY_REPETITIONS, help="Subsets per size."
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed of the draws.")
    parser.add_argument(
        "-o", "--output-path", type=str, default="./stability.yml", help="Path of the report."
    )
    return parser.parse_args()


if __name__ == "__main__":
    args = get_args()

    if bool(args.predictions) != bool(args.truth):
        print(cs("--predictions and --truth are only usable together", "Red"))
        raise SystemExit(1)
    if args.predictions:
        dataset = join_prediction_files(
            args.predictions,
            args.truth,
            args.id_column,
            args.pcv_column,
            args.label_column,
            args.positive,
        )
    else:
        dataset = OwnerDataset(random_samples(random.Random(args.seed), args.pool_size))
    pool = plain_samples(dataset)

    statistics = auc_stability(pool, args.sizes, args.repetitions, args.seed)
    reference = float(plain_auroc_tie(pool))
    print(f"AUROC of all {len(pool)} samples: {cs(f'{reference:.4f}', 'Green')}")
    for size, entry in statistics.items():
        print(
            f"{size:5d} samples: mean {entry['mean']:.4f}, std {entry['std']:.4f}, "
            f"90% in [{entry['q05']:.4f}, {entry['q95']:.4f}]"
        )

    with open(args.output_path, "w", encoding="utf-8") as output_file:
        yaml.dump({"pool": len(pool), "auroc": reference, "sizes": statistics}, output_file)
