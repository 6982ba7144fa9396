"""Synthetic datasets and the experiments around complete sessions: oracle
equivalence over a sparse session matrix, the scalability sweeps and the AUC
stability study.

All sessions run in-process. The timings measure threads of one process and
are only comparable with each other.
"""

import logging
import random
import time
from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.config import SessionConfig
from secure_auc.coverage import create_session_matrix, shuffle_session_matrix
from secure_auc.oracle import (
    PlainSample,
    plain_aupr,
    plain_auroc_no_tie,
    plain_auroc_tie,
    plain_samples,
    scaled,
)
from secure_auc.owner import OwnerDataset
from secure_auc.session import run_in_process

log = logging.getLogger(__name__)

Sample = Tuple[str, int]


@typechecked
def random_samples(
    rng: random.Random, size: int, tie_runs: int = 0, tie_free: bool = False
) -> List[Sample]:
    """Random samples with four decimal confidence values and both classes.

    Args:
        rng (random.Random): random generator
        size (int): number of samples, at least 2
        tie_runs (int, optional): number of planted runs of equal confidence values
        tie_free (bool, optional): all confidence values are distinct, needs
        size <= 10001

    Raises:
        ValueError: if size is smaller than 2

    Returns:
        List[Sample]: (pcv, label) pairs
    """
    if size < 2:
        raise ValueError(f"both classes need at least 2 samples, got {size}")
    if tie_free:
        values = rng.sample(range(10**4 + 1), size)
    else:
        values = [rng.randint(0, 10**4) for _ in range(size)]
        for _ in range(tie_runs):
            value = rng.randint(0, 10**4)
            for index in rng.sample(range(size), min(size, rng.randint(2, 5))):
                values[index] = value
    labels = [rng.randint(0, 1) for _ in range(size)]
    labels[0], labels[1] = 0, 1
    return [(f"{value / 10**4:.4f}", label) for value, label in zip(values, labels)]


@typechecked
def split_samples(rng: random.Random, samples: List[Sample], owners: int) -> List[OwnerDataset]:
    """Distribute the samples randomly over owners, every owner gets at least one."""
    shuffled = list(samples)
    rng.shuffle(shuffled)
    cuts = sorted(rng.sample(range(1, len(shuffled)), owners - 1))
    bounds = [0] + cuts + [len(shuffled)]
    return [
        OwnerDataset(shuffled[start:end], owner_id)
        for owner_id, (start, end) in enumerate(zip(bounds[:-1], bounds[1:]))
    ]


@typechecked
def split_by_sizes(samples: List[Sample], sizes: Sequence[int]) -> List[OwnerDataset]:
    """Give the owners consecutive slices of the given sizes.

    Raises:
        ValueError: if the sizes do not add up to the number of samples
    """
    if sum(sizes) != len(samples):
        raise ValueError(f"sizes add up to {sum(sizes)}, but there are {len(samples)} samples")
    bounds = np.cumsum([0] + list(sizes)).tolist()
    return [
        OwnerDataset(samples[start:end], owner_id)
        for owner_id, (start, end) in enumerate(zip(bounds[:-1], bounds[1:]))
    ]


@typechecked
def oracle_value(
    metric: str, samples: List[Sample], scale: int = DEFAULT_SCALE, recall_axis: str = RECALL
) -> int:
    """Plaintext result of the metric at scale, floored like the session result."""
    plain = plain_samples(OwnerDataset(samples))
    if metric == AUROC:
        return scaled(plain_auroc_no_tie(plain), scale)
    if metric == AUROC_TIE:
        return scaled(plain_auroc_tie(plain), scale)
    if metric == AUPR:
        return scaled(plain_aupr(plain, recall_axis), scale)
    raise ValueError(f"unknown metric {metric}")


@typechecked
def run_session_matrix(
    parameters: Dict[str, List], count: int, seed: int = 42, scale: int = DEFAULT_SCALE
) -> List[Dict]:
    """Run `count` sessions by cycling through the shuffled session matrix and compare
    every result with the oracle.

    Args:
        parameters (Dict[str, List]): values of METRIC, DELTA, OWNERS, TIED and
        SAMPLES, SAMPLES is required
        count (int): number of sessions
        seed (int, optional): seed of the shuffle and of the datasets. Defaults to 42.
        scale (int, optional): fixed-point scale. Defaults to DEFAULT_SCALE.

    Raises:
        KeyError: if SAMPLES is missing

    Returns:
        List[Dict]: session parameters plus value, oracle, error and passed
    """
    if SAMPLES not in parameters:
        raise KeyError(f"the session matrix needs the parameter {SAMPLES}")
    matrix = create_session_matrix(parameters)
    shuffle_session_matrix(matrix, seed)
    rng = random.Random(seed)
    results = []
    for number in range(count):
        session = matrix[number % len(matrix)]
        tied = session.get(TIED, False)
        samples = random_samples(
            rng, session[SAMPLES], tie_runs=3 if tied else 0, tie_free=not tied
        )
        config = SessionConfig(
            metric=session.get(METRIC, AUROC_TIE), delta=session.get(DELTA, 1), scale=scale
        )
        outcome = run_in_process(
            split_samples(rng, samples, session.get(OWNERS, 1)),
            config,
            number.to_bytes(4, "little"),
        )
        expected = oracle_value(config.metric, samples, scale)
        error = abs(outcome.result.value - expected)
        passed = error <= TOLERANCE[config.metric] and len(set(outcome.values.values())) == 1
        results.append(
            {
                **session,
                "value": outcome.value,
                "oracle": expected,
                "error": error,
                "passed": passed,
            }
        )
        log.info("session %d %s: %s, error %d", number, session, outcome.value, error)
    return results


@dataclass
class BenchmarkRun:
    """Cost of one session.

    Attributes:
        setting (str): name of the setting, e.g. 16x64
        sizes (List[int]): samples per owner
        delta (int): records per merge cycle
        metric (str): computed metric
        value (str): decoded result
        seconds (float): wall clock time of the session
        megabytes (Dict[str, float]): sent megabytes of S0, S1, S2 and in total
    """

    setting: str
    sizes: List[int]
    delta: int
    metric: str
    value: str
    seconds: float
    megabytes: Dict[str, float]

    def to_dict(self) -> Dict:
        return asdict(self)


@typechecked
def benchmark_session(
    sizes: Sequence[int], metric: str, delta: int = 1, seed: int = 0, setting: str = ""
) -> BenchmarkRun:
    """Run a session on random samples with the given number of samples per owner.

    Args:
        sizes (Sequence[int]): samples per owner, each at least 1
        metric (str): metric of the session
        delta (int, optional): records per merge cycle. Defaults to 1.
        seed (int, optional): seed of the samples and of the session. Defaults to 0.
        setting (str, optional): name of the setting in the report

    Returns:
        BenchmarkRun: result, time and communication
    """
    rng = random.Random(seed)
    samples = random_samples(rng, sum(sizes))
    datasets = split_by_sizes(samples, sizes)
    start = time.perf_counter()
    outcome = run_in_process(
        datasets, SessionConfig(metric=metric, delta=delta), seed.to_bytes(8, "little")
    )
    seconds = time.perf_counter() - start
    megabytes = {name: outcome.transcripts[name].total_bytes() / 10**6 for name in SERVERS}
    megabytes["total"] = (
        sum(transcript.total_bytes() for transcript in outcome.transcripts.values()) / 10**6
    )
    log.info("%s %s delta %d: %.2f s, %.2f MB", setting, metric, delta, seconds, megabytes["total"])
    return BenchmarkRun(setting, list(sizes), delta, metric, outcome.value, seconds, megabytes)


@typechecked
def reduced(size: int, reduction: int) -> int:
    """Sample count divided by the reduction factor of a desk run, at least 1."""
    return max(1, size // reduction)


@typechecked
def scalability_settings(experiment: str, reduction: int = 1) -> List[Tuple[str, List[int], int]]:
    """Settings of a scalability experiment.

    Experiments:
        SAMPLES: 16 owners, N in SAMPLES_SWEEP samples each, delta 1
        OWNERS: D in OWNERS_SWEEP owners with 1000 samples each, delta 1
        DELTA: 8 owners with 1000 samples each, delta in DELTA_SWEEP
        UNBALANCED: 8 owners with UNBALANCED_SIZES samples and, for comparison,
        8 owners with 250 samples each

    Args:
        experiment (str): one of EXPERIMENTS
        reduction (int, optional): every sample count is divided by it. Defaults to 1.

    Raises:
        ValueError: if the experiment is unknown

    Returns:
        List[Tuple[str, List[int], int]]: name, samples per owner and delta per setting
    """
    if experiment == SAMPLES:
        return [
            (f"{SAMPLES_SWEEP_OWNERS}x{size}", [reduced(size, reduction)] * SAMPLES_SWEEP_OWNERS, 1)
            for size in SAMPLES_SWEEP
        ]
    if experiment == OWNERS:
        size = reduced(OWNERS_SWEEP_SAMPLES, reduction)
        return [(f"{owners}x{OWNERS_SWEEP_SAMPLES}", [size] * owners, 1) for owners in OWNERS_SWEEP]
    if experiment == DELTA:
        size = reduced(DELTA_SWEEP_SAMPLES, reduction)
        return [
            (f"{DELTA_SWEEP_OWNERS}x{DELTA_SWEEP_SAMPLES}", [size] * DELTA_SWEEP_OWNERS, delta)
            for delta in DELTA_SWEEP
        ]
    if experiment == UNBALANCED:
        owners = len(UNBALANCED_SIZES)
        return [
            (f"{owners}x250", [reduced(250, reduction)] * owners, 1),
            (f"{owners}xUNB", [reduced(size, reduction) for size in UNBALANCED_SIZES], 1),
        ]
    raise ValueError(f"unknown experiment {experiment}, known experiments: {EXPERIMENTS}")


@typechecked
def auc_stability(
    pool: Sequence[PlainSample],
    sizes: Sequence[int] = tuple(STABILITY_SIZES),
    repetitions: int = STABILITY_REPETITIONS,
    seed: int = 0,
) -> Dict[int, Dict[str, float]]:
    """Spread of the plaintext AUROC with ties of random subsets of a pool.

    Subsets are drawn without replacement, subsets with a single class are drawn
    again.

    Args:
        pool (Sequence[PlainSample]): all samples, both classes required
        sizes (Sequence[int], optional): subset sizes. Defaults to STABILITY_SIZES.
        repetitions (int, optional): subsets per size. Defaults to STABILITY_REPETITIONS.
        seed (int, optional): seed of the draws. Defaults to 0.

    Raises:
        ValueError: if the pool misses a class or a size is not in [2, len(pool)]

    Returns:
        Dict[int, Dict[str, float]]: mean, std, min, max, q05 and q95 per size
    """
    reference = plain_auroc_tie(pool)
    rng = random.Random(seed)
    samples = list(pool)
    statistics = {}
    for size in sizes:
        if not 2 <= size <= len(samples):
            raise ValueError(f"subset size {size} is not in [2, {len(samples)}]")
        values = []
        while len(values) < repetitions:
            subset = rng.sample(samples, size)
            if len({sample.label for sample in subset}) == 2:
                values.append(float(plain_auroc_tie(subset)))
        array = np.array(values)
        statistics[size] = {
            "mean": float(array.mean()),
            "std": float(array.std()),
            "min": float(array.min()),
            "max": float(array.max()),
            "q05": float(np.quantile(array, 0.05)),
            "q95": float(np.quantile(array, 0.95)),
        }
        log.info("%d samples: AUROC %.4f +- %.4f", size, array.mean(), array.std())
    log.info("AUROC of the pool: %.4f", float(reference))
    return statistics
