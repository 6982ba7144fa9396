"""Run the synthetic scalability experiments in one process: growing sample counts,
growing owner counts, the delta sweep and the unbalanced owner sizes. Time and
sent megabytes per server are written as yaml report."""
import argparse
from typing import Dict, List

import yaml

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.experiments import benchmark_session, scalability_settings
from secure_auc.util import cs


def get_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Scalability of secure AUC sessions.")
    parser.add_argument(
        "--experiment",
        type=str,
        choices=EXPERIMENTS,
        action="append",
        help="Experiment to run. Can be repeated. Default are all experiments.",
    )
    parser.add_argument(
        "--metric",
        type=str,
        choices=METRICS,
        action="append",
        help="Metric of the sessions. Can be repeated. Default are all metrics.",
    )
    parser.add_argument(
        "--reduction",
        type=int,
        default=1,
        help="Divide every sample count by this factor, e.g. 10 for a desk run.",
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed of the samples.")
    parser.add_argument(
        "-o", "--output-path", type=str, default="./benchmark.yml", help="Path of the report."
    )
    return parser.parse_args()


def run_experiment(experiment: str, metrics: List[str], reduction: int, seed: int) -> List[Dict]:
    runs = []
    for setting, sizes, delta in scalability_settings(experiment, reduction):
        for metric in metrics:
            run = benchmark_session(sizes, metric, delta, seed, setting)
            print(
                f"{experiment:10s} {setting:10s} delta {delta:3d} {metric:10s} "
                f"{cs(run.value, 'Green')} {run.seconds:8.2f} s "
                f"{run.megabytes['total']:10.2f} MB"
            )
            runs.append(run.to_dict())
    return runs


if __name__ == "__main__":
    args = get_args()
    if args.reduction < 1:
        print(cs("--reduction needs to be at least 1", "Red"))
        raise SystemExit(1)

    report = {
        experiment: run_experiment(
            experiment, args.metric or METRICS, args.reduction, args.seed
        )
        for experiment in (args.experiment or EXPERIMENTS)
    }

    with open(args.output_path, "w", encoding="utf-8") as output_file:
        yaml.dump(report, output_file)
