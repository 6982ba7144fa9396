"""Privacy preserving merge of descending sorted share lists.

Two lists are merged in cycles. Each cycle starts with a shuffle: the aligned
prefix of both lists is compared element-wise and the larger record moves to
the first list, the smaller one to the second list, with fresh shares. The head
of the first list is then the global maximum and is moved to the output. With
delta > 1, up to delta - 1 further records are selected by head-vs-head
comparisons, whose results are revealed to the proxies.
"""

import io
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pyaml
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.party import Party
from secure_auc.primitives import open_shares
from secure_auc.protocols import compare, mux

log = logging.getLogger(__name__)


@dataclass
class ShareList:
    """Shares of scored records, held by one proxy. Both proxies hold lists of equal
    length with index aligned records.

    Attributes:
        con (np.ndarray): shares of the fixed-point confidence values
        label (np.ndarray): shares of the labels
        tie_mark (Optional[np.ndarray]): shares of the tie marks, set by detect_ties
    """

    con: np.ndarray
    label: np.ndarray
    tie_mark: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.con.size != self.label.size:
            raise ValueError(
                f"{self.con.size} confidence values, but {self.label.size} labels"
            )
        if self.tie_mark is not None and self.tie_mark.size != self.con.size:
            raise ValueError("tie marks and records are not aligned")

    def __len__(self) -> int:
        return self.con.size

    def head(self, count: int) -> "ShareList":
        return ShareList(self.con[:count], self.label[:count])

    def drop(self, count: int) -> "ShareList":
        return ShareList(self.con[count:], self.label[count:])

    @staticmethod
    def concat(lists: Sequence["ShareList"]) -> "ShareList":
        if not lists:
            return ShareList(np.zeros(0, dtype=np.uint64), np.zeros(0, dtype=np.uint64))
        return ShareList(
            np.concatenate([part.con for part in lists]),
            np.concatenate([part.label for part in lists]),
        )


@dataclass(frozen=True)
class DeltaParam:
    """Number of records moved per merge cycle, delta = 2a + 1."""

    delta: int

    def __post_init__(self):
        if self.delta < 1 or self.delta % 2 == 0:
            raise ValueError(f"delta needs to be odd and positive, got {self.delta}")

    def clamp(self, shorter: int) -> int:
        return clamp_delta(self.delta, shorter)


def clamp_delta(delta: int, shorter: int) -> int:
    """Effective delta of a cycle: 1 if the shorter list has a single record,
    otherwise at most the largest odd number <= length of the shorter list.
    """
    if shorter <= 1:
        return 1
    largest_odd = shorter if shorter % 2 else shorter - 1
    return min(delta, largest_odd)


@typechecked
def possible_merge_count(n1: int, n2: int) -> int:
    """Number of order preserving interleavings of two sorted lists.

    Args:
        n1 (int): size of the longer list
        n2 (int): size of the shorter list

    Raises:
        ValueError: if n2 is 0 or n1 < n2

    Returns:
        int: sum over i of C(n1 + 1, i + 1) * C(n2 - 1, i)
    """
    if n2 < 1:
        raise ValueError("the shorter list needs at least one element")
    if n1 < n2:
        raise ValueError(f"n1={n1} needs to be greater or equal n2={n2}")
    return sum(comb(n1 + 1, i + 1) * comb(n2 - 1, i) for i in range(n2))


@dataclass
class MergeRecord:
    """What the proxies learn during one merge_pair."""

    longer: int
    shorter: int
    delta: int
    effective_deltas: List[int] = field(default_factory=list)
    selection_bits: List[int] = field(default_factory=list)

    @property
    def shuffles(self) -> int:
        return len(self.effective_deltas)

    def to_dict(self) -> Dict:
        return {
            "sizes": [self.longer, self.shorter],
            "delta": self.delta,
            "effective_deltas": list(self.effective_deltas),
            "shuffles": self.shuffles,
            "selections": len(self.selection_bits),
            "revealed_selection_bits": list(self.selection_bits),
            "possible_merge_count": possible_merge_count(self.longer, self.shorter),
        }


@dataclass
class LeakageReport:
    """Structured record of the information, which the merges reveal."""

    merges: List[MergeRecord] = field(default_factory=list)
    notes: List[str] = field(
        default_factory=lambda: [
            "list sizes are public to the servers",
            "the helper observes the batch size of every invocation",
        ]
    )

    def to_dict(self) -> Dict:
        return {
            "merges": [merge.to_dict() for merge in self.merges],
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        buffer = io.StringIO()
        pyaml.dump(self.to_dict(), buffer)
        return buffer.getvalue()

    def write(self, path: str):
        with open(path, "w", encoding="utf-8") as output:
            output.write(self.dumps())


# no typechecked, because function is performance critical
def shuffle_step(
    party: Party, list1: ShareList, list2: ShareList
) -> Tuple[ShareList, ShareList]:
    """Move the larger record of each aligned pair to list1 and the smaller one to
    list2. Confidence and label are moved together with one batched multiplexer.

    Args:
        party (Party): S0 or S1
        list1 (ShareList): longer list
        list2 (ShareList): shorter, non empty list

    Raises:
        ValueError: if list2 is empty or longer than list1

    Returns:
        Tuple[ShareList, ShareList]: the shuffled lists
    """
    size = len(list2)
    if size == 0:
        raise ValueError("shuffle needs a non empty second list")
    if len(list1) < size:
        raise ValueError("the first list needs to be the longer one")
    con1, label1 = list1.con[:size], list1.label[:size]
    swap = compare(party, con1, list2.con)
    moved = mux(
        party,
        np.concatenate((con1, label1, list2.con, list2.label)),
        np.concatenate((list2.con, list2.label, con1, label1)),
        np.tile(swap, 4),
    )
    larger_con, larger_label, smaller_con, smaller_label = np.split(moved, 4)
    return (
        ShareList(
            np.concatenate((larger_con, list1.con[size:])),
            np.concatenate((larger_label, list1.label[size:])),
        ),
        ShareList(smaller_con, smaller_label),
    )


def merge_pair(
    party: Party,
    list1: ShareList,
    list2: ShareList,
    delta: Union[int, DeltaParam] = 1,
    report: Optional[LeakageReport] = None,
) -> ShareList:
    """Merge two descending sorted share lists into one descending list.

    Args:
        party (Party): S0 or S1
        list1 (ShareList): first list
        list2 (ShareList): second list
        delta (Union[int, DeltaParam], optional): records per cycle. Defaults to 1.
        report (Optional[LeakageReport], optional): collects the revealed information

    Returns:
        ShareList: merged list
    """
    delta = delta if isinstance(delta, DeltaParam) else DeltaParam(delta)
    if len(list2) > len(list1):
        list1, list2 = list2, list1
    if len(list2) == 0:
        return list1

    record = MergeRecord(len(list1), len(list2), delta.delta)
    output: List[ShareList] = []
    while len(list1) and len(list2):
        if len(list2) > len(list1):
            list1, list2 = list2, list1
        effective = delta.clamp(len(list2))
        record.effective_deltas.append(effective)

        list1, list2 = shuffle_step(party, list1, list2)
        output.append(list1.head(1))
        list1 = list1.drop(1)

        for _ in range(effective - 1):
            if not len(list1) or not len(list2):
                break
            selection = open_shares(party, compare(party, list1.con[:1], list2.con[:1]))
            bit = int(selection[0])
            record.selection_bits.append(bit)
            if bit == 0:
                output.append(list1.head(1))
                list1 = list1.drop(1)
            else:
                output.append(list2.head(1))
                list2 = list2.drop(1)

    output.extend((list1, list2))
    if report is not None:
        report.merges.append(record)
    log.debug(
        "merged %d and %d records in %d cycles",
        record.longer,
        record.shorter,
        record.shuffles,
    )
    return ShareList.concat(output)


def merge_many(
    party: Party,
    lists: Sequence[ShareList],
    delta: Union[int, DeltaParam] = 1,
    report: Optional[LeakageReport] = None,
) -> ShareList:
    """Merge sorted lists pairwise along a binary tree until one list remains.

    Raises:
        ValueError: if no list is given
    """
    if not lists:
        raise ValueError("merge needs at least one list")
    level = list(lists)
    while len(level) > 1:
        merged = [
            merge_pair(party, level[index], level[index + 1], delta, report)
            for index in range(0, len(level) - 1, 2)
        ]
        if len(level) % 2:
            merged.append(level[-1])
        level = merged
    return level[0]
