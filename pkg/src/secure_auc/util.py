"""Different support functions.

The row type: the session matrix in coverage.py is generated by the pairwise
library. A row is a list of parameter values, where only the position of a value
decides which parameter it represents. The global variable `param_map` implements
the indirection between parameter name and position. The `param_map` is filled by
`create_session_matrix()`.

Example for a row:
    ["auroc-tie", 3, 4, True]
"""

import io, re, sys
from typing import Any, List, Optional, Union
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import


def is_in_row(row: List, name: str) -> bool:
    """Check if paramater is in the row.

    Args:
        row (List): Row with parameters.
        name (str): The searched parameter.

    Returns:
        bool: Return True, if parameter is in row.
    """
    return name in param_map and param_map[name] < len(row)


# no typechecked, because function is performance critical
def row_value(row: List, name: str) -> Any:
    """Returns the value of the parameter in the row.

    Args:
        row (List): Row with parameters.
        name (str): Name of the parameter.

    Raises:
        KeyError: Raise error, if the parameter is not part of the row.

    Returns:
        Any: value of the parameter
    """
    if not is_in_row(row, name):
        raise KeyError(f"{name} is not part of the row")
    return row[param_map[name]]


@typechecked
def natural_key(name: str) -> List[Union[int, str]]:
    """Sort key, which orders embedded numbers by value. For example owner2 is
    sorted before owner10.

    Args:
        name (str): name to sort

    Returns:
        List[Union[int, str]]: sort key
    """
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


@typechecked
def cs(text: str, color: str) -> str:
    """Returns colored text for the command line. The text printed after
       the colored text has the default color of the command line.

    Args:
        text (str): text to be colored
        color (str): Name of the color. If color is unknown or empty use default color
        of the command line.

    Returns:
        str: colored text
    """
    output = ""
    if color == "Red":
        output += "\033[0;31m"
    elif color == "Green":
        output += "\033[0;32m"
    elif color == "Yellow":
        output += "\033[1;33m"
    else:
        return text

    return output + text + "\033[0m"


@typechecked
def exit_error(text: str):
    """Prints error message and exits application with error code 1.

    Args:
        text (str): Error message.
    """
    print(cs("ERROR: " + text, "Red"))
    sys.exit(1)


def reason(output: Optional[Union[io.StringIO, io.TextIOWrapper]], msg: str):
    """Write the message to output if it is not None. This function is used
    in filter functions to print additional information about filter decisions.

    Args:
        output (Optional[Union[io.StringIO, io.TextIOWrapper]]): IO object.
        Can be io.StringIO, sys.stdout sys.stderr
        msg (str): the message
    """
    if output:
        print(
            msg,
            file=output,
            end="",
        )
