"""Secure tie detection and the AUC engines over the globally sorted share list.

The engines follow the trapezoid construction over the points of the curve:
the area is accumulated as numerator N and denominator D, each a share, and a
single division produces the result at scale F.
"""

import logging
from dataclasses import dataclass
from math import ceil
from typing import List, Optional, Tuple

import numpy as np
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.party import Party, invocation
from secure_auc.primitives import Share, mul, share_vector
from secure_auc.private_sort import ShareList
from secure_auc.protocols import divide, mux
from secure_auc.ring_core import RingElement, U64, compose_bits, decompose_bits

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoredRecord:
    """Shares of one test sample."""

    con: Share
    label: Share
    tie_mark: Optional[Share] = None


@dataclass(frozen=True)
class AucResult:
    """Reconstructed AUC value at fixed-point scale."""

    value: int
    scale: int

    def __post_init__(self):
        if not 0 <= self.value <= self.scale:
            raise ValueError(
                f"AUC {self.value} at scale {self.scale} is outside of [0, 1], "
                "the protocol execution is corrupted"
            )

    def __str__(self) -> str:
        whole, fraction = divmod(self.value * 10**4 // self.scale, 10**4)
        return f"{whole}.{fraction:04d}"


@dataclass(frozen=True)
class AucShare:
    """Share of the AUC value, held by one proxy."""

    share: Share
    scale: int
    metric: str


@typechecked
def to_records(shares: ShareList, owner: str) -> List[ScoredRecord]:
    """Expand the share vectors of a proxy into records.

    Args:
        shares (ShareList): list of one proxy
        owner (str): S0 or S1

    Returns:
        List[ScoredRecord]: one record per sample
    """
    marks = shares.tie_mark
    return [
        ScoredRecord(
            Share(RingElement(shares.con[index], L), owner),
            Share(RingElement(shares.label[index], L), owner),
            None if marks is None else Share(RingElement(marks[index], L), owner),
        )
        for index in range(len(shares))
    ]


def _result(party: Party, value: np.ndarray, scale: int, metric: str) -> AucShare:
    return AucShare(Share(RingElement(value[0], L), party.role), scale, metric)


def _cumulative(party: Party, records: ShareList) -> Tuple[np.ndarray, np.ndarray]:
    """Shares of the true positive counter and of the public rank 1..M. The rank is
    added by S1 only.
    """
    positives = np.cumsum(records.label, dtype=np.uint64)
    ranks = np.arange(1, len(records) + 1, dtype=np.uint64) * U64(party.index)
    return positives, ranks


def dummy_count(count: int, stream) -> int:
    """Number of dummies, uniform in [ceil(M / 4), ceil(M / 2)]."""
    lower, upper = ceil(count / 4), ceil(count / 2)
    return lower + int(stream.next_elements(1, L, upper - lower + 1)[0])


# no typechecked, because function is performance critical
def detect_ties(party: Party, cons: np.ndarray) -> np.ndarray:
    """Shares of the tie marks of a descending sorted list. The mark of a record is
    1 iff its confidence differs from the confidence of its successor. The last
    mark is always 1.

    The proxies negate/keep their shares of the successive differences, so equal
    confidences give equal words. The words are masked, bit-permuted per item,
    permuted in position and mixed with dummies from common randomness. S2 only
    learns how many words pairs differ, including the dummies.

    Args:
        party (Party): S0 or S1
        cons (np.ndarray): shares of the confidence values

    Raises:
        ValueError: if the list is empty

    Returns:
        np.ndarray: shares over Z_L of the marks
    """
    count = cons.size
    if count == 0:
        raise ValueError("tie detection needs at least one record")
    last = np.array([party.index], dtype=np.uint64)
    if count == 1:
        return last

    index = party.index
    stream = party.common(TIES)
    items = count - 1
    difference = cons[:-1] - cons[1:]
    if index == 0:
        difference = U64(0) - difference
    masked = difference ^ stream.next_words(items)
    bit_permutations = stream.next_permutations(items, ELL)
    masked = compose_bits(
        np.take_along_axis(decompose_bits(masked), bit_permutations, axis=1)
    )
    permutation = stream.next_permutation(items)
    masked = masked[permutation]

    dummies = dummy_count(count, stream)
    slots = stream.next_permutation(items + dummies)
    dummy_slots = np.sort(slots[:dummies])
    real_slots = np.sort(slots[dummies:])
    dummy_words = stream.next_words(dummies)
    nonzero = stream.next_bits(dummies)
    offsets = (stream.next_elements(dummies, L, L - 1) + U64(1)) * nonzero

    payload = np.empty(items + dummies, dtype=np.uint64)
    payload[real_slots] = masked
    payload[dummy_slots] = dummy_words if index == 0 else dummy_words ^ offsets

    with invocation(party, TIES, items + dummies):
        party.endpoint.send(S2, payload, TIES)
        marks = party.endpoint.recv_words(S2, TIES)

    restored = np.empty(items, dtype=np.uint64)
    restored[permutation] = marks[real_slots]
    return np.concatenate((restored, last))


def detect_ties_helper(party: Party, count: int, scale: int, bits: int):
    words0 = party.endpoint.recv_words(S0, TIES)
    words1 = party.endpoint.recv_words(S1, TIES)
    differs = ((words0 ^ words1) != U64(0)).astype(np.uint64)
    share0, share1 = share_vector(differs, party.local)
    party.endpoint.send(S0, share0, TIES)
    party.endpoint.send(S1, share1, TIES)


def auroc_no_ties(party: Party, records: ShareList, scale: int = DEFAULT_SCALE) -> AucShare:
    """AUROC of a list without ties: N = sum TP * dFP, D = TP_M * FP_M.

    Records with equal confidence are treated in list order.

    Args:
        party (Party): S0 or S1
        records (ShareList): descending sorted list
        scale (int, optional): fixed-point scale. Defaults to DEFAULT_SCALE.

    Returns:
        AucShare: share of AUROC * scale
    """
    count = len(records)
    if count == 0:
        raise ValueError("AUROC needs at least one record")
    positives, ranks = _cumulative(party, records)
    negatives = ranks - positives
    negative_steps = negatives - np.concatenate((np.zeros(1, dtype=np.uint64), negatives[:-1]))
    products = mul(
        party,
        np.concatenate((positives, positives[-1:])),
        np.concatenate((negative_steps, negatives[-1:])),
    )
    numerator = products[:count].sum(keepdims=True, dtype=np.uint64)
    value = divide(party, numerator, products[count:], count * count, scale)
    return _result(party, value, scale, AUROC)


def _require_marks(records: ShareList) -> np.ndarray:
    if records.tie_mark is None:
        raise ValueError("tie marks are missing, run detect_ties first")
    if len(records) == 0:
        raise ValueError("AUC needs at least one record")
    return records.tie_mark


# no typechecked, because function is performance critical
def accumulate_trapezoids(
    party: Party,
    y_values: np.ndarray,
    x_values: np.ndarray,
    marks: np.ndarray,
    y_start: np.ndarray,
    anchors: Optional[List[Tuple[np.ndarray, np.ndarray]]] = None,
) -> np.ndarray:
    """Twice the area under the points (x[j], y[j]) with mark 1, starting at
    (0, y_start). Rectangles and triangles are gated by the mark, the anchor
    registers are updated with a multiplexer on the mark.

    Args:
        party (Party): S0 or S1
        y_values (np.ndarray): shares of the y coordinates
        x_values (np.ndarray): shares of the x coordinates
        marks (np.ndarray): shares of the tie marks
        y_start (np.ndarray): share of the y coordinate of the first anchor
        anchors (Optional[List], optional): receives the (y, x) anchor shares after
        every record

    Returns:
        np.ndarray: share of 2 * rectangles + triangles
    """
    previous_y = y_start
    previous_x = np.zeros(1, dtype=np.uint64)
    rectangles = np.zeros(1, dtype=np.uint64)
    triangles = np.zeros(1, dtype=np.uint64)
    for index in range(y_values.size):
        y_now = y_values[index : index + 1]
        x_now = x_values[index : index + 1]
        gate = np.repeat(marks[index : index + 1], 2)
        x_step = x_now - previous_x
        areas = mul(
            party,
            np.concatenate((previous_y, x_step)),
            np.concatenate((x_step, y_now - previous_y)),
        )
        areas = mul(party, areas, gate)
        rectangles = rectangles + areas[:1]
        triangles = triangles + areas[1:]
        updated = mux(
            party,
            np.concatenate((previous_y, previous_x)),
            np.concatenate((y_now, x_now)),
            gate,
        )
        previous_y, previous_x = updated[:1], updated[1:]
        if anchors is not None:
            anchors.append((previous_y, previous_x))
    return U64(2) * rectangles + triangles


def auroc_with_ties(
    party: Party,
    records: ShareList,
    scale: int = DEFAULT_SCALE,
    anchors: Optional[List[Tuple[np.ndarray, np.ndarray]]] = None,
) -> AucShare:
    """Exact AUROC with ties. Points of the ROC curve are placed at the records
    with tie mark 1; N = 2 N1 + N2, D = 2 TP_M FP_M.

    Args:
        party (Party): S0 or S1
        records (ShareList): descending sorted list with tie marks
        scale (int, optional): fixed-point scale. Defaults to DEFAULT_SCALE.
        anchors (Optional[List], optional): receives the (TP, FP) anchor shares
        after every record

    Returns:
        AucShare: share of AUROC * scale
    """
    marks = _require_marks(records)
    count = len(records)
    positives, ranks = _cumulative(party, records)
    negatives = ranks - positives
    numerator = accumulate_trapezoids(
        party, positives, negatives, marks, np.zeros(1, dtype=np.uint64), anchors
    )
    denominator = U64(2) * mul(party, positives[-1:], negatives[-1:])
    value = divide(party, numerator, denominator, 2 * count * count, scale)
    return _result(party, value, scale, AUROC_TIE)


def aupr(
    party: Party,
    records: ShareList,
    scale: int = DEFAULT_SCALE,
    recall_axis: str = RECALL,
) -> AucShare:
    """Area under the precision recall curve with ties.

    The precision of every record is computed with one batched division under a
    common permutation of the records, which is inverted afterwards. The curve
    starts at precision 1 and recall 0.

    Args:
        party (Party): S0 or S1
        records (ShareList): descending sorted list with tie marks
        scale (int, optional): fixed-point scale. Defaults to DEFAULT_SCALE.
        recall_axis (str, optional): RECALL uses the true positive count as x axis,
        RANK accumulates the rank as x axis and normalises by M. Defaults to RECALL.

    Returns:
        AucShare: share of AUPR * scale
    """
    if recall_axis not in RECALL_AXES:
        raise ValueError(f"unknown recall axis {recall_axis}")
    marks = _require_marks(records)
    count = len(records)
    positives, ranks = _cumulative(party, records)

    permutation = party.common(AUPR).next_permutation(count)
    precision = np.empty(count, dtype=np.uint64)
    precision[permutation] = divide(
        party, positives[permutation], ranks[permutation], count, scale
    )

    x_values = positives if recall_axis == RECALL else ranks
    start = np.array([scale * party.index], dtype=np.uint64)
    numerator = accumulate_trapezoids(party, precision, x_values, marks, start)
    if recall_axis == RECALL:
        denominator = U64(2) * positives[-1:]
    else:
        denominator = np.array([2 * count * party.index], dtype=np.uint64)
    # the precision already carries the scale
    value = divide(party, numerator, denominator, 2 * scale * count, 1)
    return _result(party, value, scale, AUPR)


@typechecked
def run_engine(
    party: Party,
    metric: str,
    records: ShareList,
    scale: int = DEFAULT_SCALE,
    recall_axis: str = RECALL,
) -> AucShare:
    """Compute the selected metric. The tie based engines run detect_ties first.

    Args:
        party (Party): S0 or S1
        metric (str): AUROC, AUROC_TIE or AUPR
        records (ShareList): descending sorted list
        scale (int, optional): fixed-point scale. Defaults to DEFAULT_SCALE.
        recall_axis (str, optional): x axis of AUPR. Defaults to RECALL.

    Raises:
        ValueError: if the metric is unknown

    Returns:
        AucShare: share of the result
    """
    if metric == AUROC:
        return auroc_no_ties(party, records, scale)
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric}")
    marked = ShareList(records.con, records.label, detect_ties(party, records.con))
    if metric == AUROC_TIE:
        return auroc_with_ties(party, marked, scale)
    return aupr(party, marked, scale, recall_axis)
