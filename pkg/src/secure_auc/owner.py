"""Data owner side: ingestion, fixed-point encoding, outsourcing and result decoding."""

import csv
import logging
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from typing import List, Optional, Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.auc_engine import AucResult
from secure_auc.primitives import Share, reconstruct, share_vector
from secure_auc.private_sort import ShareList
from secure_auc.randomness import PairStream
from secure_auc.transport import decode_words, encode_words

log = logging.getLogger(__name__)


def _parse_pcv(text: str) -> Decimal:
    try:
        value = Decimal(text.strip())
    except InvalidOperation as error:
        raise ValueError(f"confidence value {text!r} is not a number") from error
    if not value.is_finite() or not Decimal(0) <= value <= Decimal(1):
        raise ValueError(f"confidence value {text!r} is outside of [0, 1]")
    return value


def _parse_label(text: str) -> int:
    if text.strip() not in ("0", "1"):
        raise ValueError(f"label {text!r} needs to be 0 or 1")
    return int(text)


@dataclass
class OwnerDataset:
    """Plain test samples of one data owner.

    Attributes:
        samples (List[Tuple[str, int]]): confidence value as decimal string and label
        owner_id (int): number of the owner
    """

    samples: List[Tuple[str, int]]
    owner_id: int = 0

    def __post_init__(self):
        if not self.samples:
            raise ValueError("a dataset needs at least one sample")
        for pcv, label in self.samples:
            _parse_pcv(pcv)
            if label not in (0, 1):
                raise ValueError(f"label needs to be 0 or 1, got {label}")

    def __len__(self) -> int:
        return len(self.samples)

    def positives(self) -> int:
        return sum(label for _, label in self.samples)


@typechecked
def ingest_csv(path: str, owner_id: int = 0) -> OwnerDataset:
    """Read a file with lines "pcv,label". An optional first line "pcv,label" is
    skipped, so are empty lines.

    Args:
        path (str): path of the csv file
        owner_id (int, optional): number of the owner. Defaults to 0.

    Raises:
        ValueError: on a malformed line, with the line number, or if the file has no samples

    Returns:
        OwnerDataset: the validated samples
    """
    samples: List[Tuple[str, int]] = []
    with open(path, "r", encoding="utf-8", newline="") as csv_file:
        for line_number, row in enumerate(csv.reader(csv_file), start=1):
            if not row or all(not field.strip() for field in row):
                continue
            if line_number == 1 and [field.strip() for field in row] == ["pcv", "label"]:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{line_number}: expected 2 fields, got {len(row)}")
            try:
                _parse_pcv(row[0])
                samples.append((row[0].strip(), _parse_label(row[1])))
            except ValueError as error:
                raise ValueError(f"{path}:{line_number}: {error}") from error
    if not samples:
        raise ValueError(f"{path} contains no samples")
    return OwnerDataset(samples, owner_id)


@typechecked
def join_prediction_files(
    submission: str,
    truth: str,
    id_column: str,
    score_column: str,
    label_column: str,
    positive: str,
) -> OwnerDataset:
    """Join a submission file (id, confidence) with a ground truth file (id, label)
    by the id column. Both files need a header line.

    Args:
        submission (str): path of the csv file with the predictions
        truth (str): path of the csv file with the ground truth
        id_column (str): column name of the sample id in both files
        score_column (str): column name of the confidence value in the submission
        label_column (str): column name of the outcome in the truth file
        positive (str): outcome value, which is labeled 1

    Raises:
        ValueError: if a submitted id has no ground truth

    Returns:
        OwnerDataset: joined samples in submission order
    """
    with open(truth, "r", encoding="utf-8", newline="") as truth_file:
        labels = {
            row[id_column].strip(): int(row[label_column].strip() == positive)
            for row in csv.DictReader(truth_file)
        }
    samples: List[Tuple[str, int]] = []
    with open(submission, "r", encoding="utf-8", newline="") as submission_file:
        for row in csv.DictReader(submission_file):
            sample_id = row[id_column].strip()
            if sample_id not in labels:
                raise ValueError(f"{sample_id} has no ground truth in {truth}")
            samples.append((row[score_column].strip(), labels[sample_id]))
    return OwnerDataset(samples)


@typechecked
def encode_pcv(pcv: str, scale: int = DEFAULT_SCALE) -> int:
    """Fixed-point encoding round(pcv * scale), halves are rounded up."""
    return int((_parse_pcv(pcv) * scale).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@typechecked
def outsource(
    dataset: OwnerDataset,
    scale: int,
    rng: PairStream,
    metric: Optional[str] = None,
) -> Tuple[ShareList, ShareList]:
    """Sort the samples by descending confidence and split them into the payloads of
    S0 and S1.

    Args:
        dataset (OwnerDataset): plain samples
        scale (int): fixed-point scale
        rng (PairStream): private randomness of the owner
        metric (Optional[str], optional): if given, reject datasets, for which the
        metric is undefined. Only meaningful if the owner holds all samples.

    Raises:
        ValueError: if a class required by the metric is missing

    Returns:
        Tuple[ShareList, ShareList]: share lists of S0 and S1
    """
    positives = dataset.positives()
    if metric in (AUROC, AUROC_TIE) and positives in (0, len(dataset)):
        raise ValueError(f"{metric} needs positive and negative samples")
    if metric == AUPR and positives == 0:
        raise ValueError(f"{metric} needs at least one positive sample")

    encoded = sorted(
        ((encode_pcv(pcv, scale), label) for pcv, label in dataset.samples),
        key=lambda record: record[0],
        reverse=True,
    )
    cons = np.array([con for con, _ in encoded], dtype=np.uint64)
    labels = np.array([label for _, label in encoded], dtype=np.uint64)
    con0, con1 = share_vector(cons, rng)
    label0, label1 = share_vector(labels, rng)
    return ShareList(con0, label0), ShareList(con1, label1)


def encode_payload(shares: ShareList) -> bytes:
    """Record count, then (con share, label share) per record, 64 bit little endian."""
    records = np.column_stack((shares.con, shares.label)).ravel()
    return encode_words(np.concatenate((np.array([len(shares)], dtype=np.uint64), records)))


def decode_payload(payload: bytes) -> ShareList:
    """Inverse of encode_payload.

    Raises:
        ValueError: if the record count does not match the payload size
    """
    words = decode_words(payload)
    if words.size == 0 or words.size != 1 + 2 * int(words[0]):
        raise ValueError("malformed share payload")
    records = words[1:].reshape(-1, 2)
    return ShareList(records[:, 0].copy(), records[:, 1].copy())


@typechecked
def decode_result(share0: Share, share1: Share, scale: int = DEFAULT_SCALE) -> str:
    """Reconstruct the result and render it with four decimal places.

    Raises:
        ValueError: if the value exceeds the scale, which signals a corrupted execution
    """
    return str(AucResult(reconstruct(share0, share1).value, scale))
