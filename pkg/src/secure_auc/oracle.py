"""Plaintext reference implementations with exact rational arithmetic.

All functions sort the samples by descending confidence (stable, so equal
confidences keep their input order) before evaluating the curve.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.owner import OwnerDataset
from secure_auc.primitives import reconstruct_vector, share_vector
from secure_auc.protocols import compare, divide, modulus_conversion, mux
from secure_auc.randomness import PairStream, local_seed
from secure_auc.session import run_servers_in_process

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlainSample:
    pcv: Fraction
    label: int

    def __post_init__(self):
        object.__setattr__(self, "pcv", Fraction(self.pcv))
        if not 0 <= self.pcv <= 1:
            raise ValueError(f"confidence {self.pcv} is outside of [0, 1]")
        if self.label not in (0, 1):
            raise ValueError(f"label needs to be 0 or 1, got {self.label}")


@typechecked
def plain_samples(dataset: OwnerDataset) -> List[PlainSample]:
    """Exact rational view of the samples of an owner."""
    return [PlainSample(Fraction(pcv), label) for pcv, label in dataset.samples]


def _sorted(samples: Sequence[PlainSample]) -> List[PlainSample]:
    return sorted(samples, key=lambda sample: sample.pcv, reverse=True)


def _class_counts(samples: Sequence[PlainSample]) -> Tuple[int, int]:
    positives = sum(sample.label for sample in samples)
    return positives, len(samples) - positives


def _require_both_classes(samples: Sequence[PlainSample]):
    positives, negatives = _class_counts(samples)
    if positives == 0 or negatives == 0:
        raise ValueError("AUROC needs positive and negative samples")


@typechecked
def plain_auroc_ordered(samples: Sequence[PlainSample]) -> Fraction:
    """AUROC without tie handling: every sample is its own point of the curve, equal
    confidences are evaluated in input order.

    Raises:
        ValueError: if one class is missing
    """
    _require_both_classes(samples)
    numerator = true_positives = 0
    for sample in _sorted(samples):
        if sample.label:
            true_positives += 1
        else:
            numerator += true_positives
    positives, negatives = _class_counts(samples)
    return Fraction(numerator, positives * negatives)


@typechecked
def plain_auroc_no_tie(samples: Sequence[PlainSample]) -> Fraction:
    """AUROC, N = sum TP * dFP and D = TP_M * FP_M.

    Raises:
        ValueError: if confidences are tied or one class is missing
    """
    if len({sample.pcv for sample in samples}) != len(samples):
        raise ValueError("samples contain tied confidences")
    return plain_auroc_ordered(samples)


def _change_points(samples: Sequence[PlainSample]) -> List[Tuple[int, int]]:
    """(TP, rank) at every index, where the confidence changes to the successor."""
    ordered = _sorted(samples)
    points = []
    true_positives = 0
    for rank, sample in enumerate(ordered, start=1):
        true_positives += sample.label
        if rank == len(ordered) or ordered[rank].pcv != sample.pcv:
            points.append((true_positives, rank))
    return points


@typechecked
def plain_auroc_tie(samples: Sequence[PlainSample]) -> Fraction:
    """Exact AUROC with trapezoids between the change points.

    Raises:
        ValueError: if one class is missing
    """
    _require_both_classes(samples)
    area = Fraction(0)
    previous_tp = previous_fp = 0
    for true_positives, rank in _change_points(samples):
        false_positives = rank - true_positives
        area += Fraction((false_positives - previous_fp) * (true_positives + previous_tp), 2)
        previous_tp, previous_fp = true_positives, false_positives
    positives, negatives = _class_counts(samples)
    return area / (positives * negatives)


@typechecked
def plain_aupr(samples: Sequence[PlainSample], recall_axis: str = RECALL) -> Fraction:
    """Exact area under the precision recall curve with trapezoids between the
    change points, starting at recall 0 and precision 1. With the RANK axis the x
    coordinate is rank / M instead of the recall.

    Raises:
        ValueError: if there is no positive sample
    """
    positives, _ = _class_counts(samples)
    if positives == 0:
        raise ValueError("AUPR needs at least one positive sample")
    area = Fraction(0)
    previous_recall, previous_precision = Fraction(0), Fraction(1)
    for true_positives, rank in _change_points(samples):
        if recall_axis == RECALL:
            recall = Fraction(true_positives, positives)
        else:
            recall = Fraction(rank, len(samples))
        precision = Fraction(true_positives, rank)
        area += (recall - previous_recall) * (precision + previous_precision) / 2
        previous_recall, previous_precision = recall, precision
    return area


@typechecked
def scaled(value: Fraction, scale: int = DEFAULT_SCALE) -> int:
    """Floor of value * scale."""
    return int(value * scale // 1)


@typechecked
def possible_interleavings(n1: int, n2: int) -> int:
    """Count order preserving interleavings of two lists by enumeration."""
    return sum(1 for _ in itertools.combinations(range(n1 + n2), n2))


@dataclass
class CheckReport:
    """Result of a brute force protocol check."""

    protocol: str
    checked: int
    failures: List[Tuple]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict:
        return {
            "protocol": self.protocol,
            "checked": self.checked,
            "passed": self.passed,
            "failures": [list(map(int, failure)) for failure in self.failures[:10]],
        }


def _domain(protocol: str, bound: int, samples: int, seed: int) -> Tuple[np.ndarray, ...]:
    generator = np.random.default_rng(seed)
    if protocol == CMP:
        grid = np.arange(bound, dtype=np.uint64)
        return np.repeat(grid, bound), np.tile(grid, bound)
    if protocol == MUX:
        x = generator.integers(0, 2**63, samples, dtype=np.uint64)
        y = generator.integers(0, 2**63, samples, dtype=np.uint64)
        bits = np.repeat(np.array([0, 1], dtype=np.uint64), samples)
        return np.tile(x, 2), np.tile(y, 2), bits
    if protocol == DIV:
        grid = np.arange(1, bound + 1, dtype=np.uint64)
        return np.repeat(grid, bound), np.tile(grid, bound)
    if protocol == MC:
        return (np.arange(bound, dtype=np.uint64),)
    raise ValueError(f"no brute force check for {protocol}")


@typechecked
def brute_force_protocol_check(
    protocol: str,
    bound: int,
    samples: int = 1000,
    scale: int = DEFAULT_SCALE,
    seed: int = 0,
    batch: int = 1 << 16,
) -> CheckReport:
    """Run a protocol on every input of a domain under random sharings and compare
    the reconstruction with the plain semantics.

    Domains:
        CMP: all pairs (x, y) in [0, bound)^2
        MUX: `samples` random pairs (x, y), each with b = 0 and b = 1
        DIV: all pairs (x, y) in [1, bound]^2
        MC: all x in [0, bound)

    Args:
        protocol (str): CMP, MUX, DIV or MC
        bound (int): size of the domain
        samples (int, optional): number of random pairs for MUX. Defaults to 1000.
        scale (int, optional): scale of DIV. Defaults to DEFAULT_SCALE.
        seed (int, optional): seed of the inputs and of the session. Defaults to 0.
        batch (int, optional): maximal elements per invocation. Defaults to 2^16.

    Returns:
        CheckReport: number of checked inputs and the failing ones
    """
    inputs = _domain(protocol, bound, samples, seed)
    dealer = PairStream(local_seed(seed.to_bytes(8, "little"), "dealer"), "dealer")
    modulus = K if protocol == MC else L
    shares = [share_vector(values, dealer, modulus) for values in inputs]

    def run(index: int) -> Callable:
        def program(party) -> np.ndarray:
            own = [pair[index] for pair in shares]
            outputs = []
            for start in range(0, own[0].size, batch):
                chunk = [values[start : start + batch] for values in own]
                if protocol == CMP:
                    outputs.append(compare(party, *chunk))
                elif protocol == MUX:
                    outputs.append(mux(party, *chunk))
                elif protocol == DIV:
                    outputs.append(divide(party, *chunk, bound, scale))
                else:
                    outputs.append(modulus_conversion(party, *chunk))
            return np.concatenate(outputs)

        return program

    results = run_servers_in_process(run(0), run(1), seed=seed.to_bytes(8, "little"))
    output = reconstruct_vector(results[S0], results[S1])

    if protocol == CMP:
        expected = (inputs[0] < inputs[1]).astype(np.uint64)
    elif protocol == MUX:
        expected = np.where(inputs[2] == 0, inputs[0], inputs[1])
    elif protocol == DIV:
        expected = np.array(
            [x * scale // y for x, y in zip(inputs[0].tolist(), inputs[1].tolist())],
            dtype=np.uint64,
        )
    else:
        expected = inputs[0]

    wrong = np.nonzero(output != expected)[0]
    failures = [tuple(values[index] for values in inputs) for index in wrong.tolist()]
    if failures:
        log.warning("%s: %d of %d inputs failed", protocol, len(failures), output.size)
    return CheckReport(protocol, int(output.size), failures)
