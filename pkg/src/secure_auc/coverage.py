"""Sparse matrix of session parameters for acceptance runs.

Running every combination of metric, delta, owner count and tie planting is
expensive. The all-pairs generator returns a small set of sessions, in which
every pair of parameter values appears at least once.
"""

import io
import random
from typing import Callable, Dict, List, Optional, Union

from allpairspy import AllPairs
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.util import is_in_row, reason, row_value


def session_filter_typed(
    row: List, output: Optional[Union[io.StringIO, io.TextIOWrapper]] = None
) -> bool:
    """Type checked version of session_filter(). Type checking has a big performance cost, which
    is why the non type checked version is used for the pairwise generator.
    """
    return typechecked(session_filter)(row, output)


# no typechecked, because function is performance critical
def session_filter(
    row: List, output: Optional[Union[io.StringIO, io.TextIOWrapper]] = None
) -> bool:
    """Remove sessions, which can not produce a comparable result. The row can be
    incomplete, missing parameters are not checked.

    Rules:
        - the auroc engine evaluates tied samples in input order, therefore it is
          only combined with tie free data
        - every owner needs at least one sample
        - delta needs to be odd

    Args:
        row (List): session parameters
        output (Optional[Union[io.StringIO, io.TextIOWrapper]], optional): receives
        the reason, if the row is removed

    Returns:
        bool: True, if the row is kept
    """
    if is_in_row(row, METRIC) and is_in_row(row, TIED):
        if row_value(row, METRIC) == AUROC and row_value(row, TIED):
            reason(output, "the auroc engine requires tie free samples")
            return False

    if is_in_row(row, OWNERS) and is_in_row(row, SAMPLES):
        if row_value(row, OWNERS) > row_value(row, SAMPLES):
            reason(output, "more owners than samples")
            return False

    if is_in_row(row, DELTA) and row_value(row, DELTA) % 2 == 0:
        reason(output, "delta needs to be odd")
        return False

    return True


@typechecked
def create_session_matrix(
    parameters: Dict[str, List],
    pair_size: int = 2,
    post_filter: Callable[[List], bool] = lambda row: True,
) -> List[Dict]:
    """Create a sparse session list from the parameter values.

    Args:
        parameters (Dict[str, List]): values per parameter, the keys are METRIC,
        DELTA, OWNERS, TIED and SAMPLES; any subset can be used
        pair_size (int, optional): every combination of values of pair_size
        parameters is part of at least one session. Defaults to 2.
        post_filter (Callable[[List], bool], optional): executed after the
        session_filter. Defaults is a lambda which returns true.

    Returns:
        List[Dict]: one dict of parameter values per session
    """
    # Fill up the param_map.
    # For documentation see the module documentation of util.py.
    param_map.clear()
    for index, key in enumerate(parameters):
        param_map[key] = index

    cover_matrix = AllPairs(
        parameters=[list(values) for values in parameters.values()],
        n=pair_size,
        filter_func=lambda row: session_filter(row) and post_filter(row),
    )

    return [dict(zip(parameters.keys(), row)) for row in cover_matrix]


@typechecked
def shuffle_session_matrix(session_matrix: List[Dict], seed: int = 42):
    """Shuffle ordering of the session_matrix in place.

    Args:
        session_matrix (List[Dict]): the session matrix
        seed (int, optional): Seed of the shuffle function. Defaults to 42.
    """
    random.Random(seed).shuffle(session_matrix)
