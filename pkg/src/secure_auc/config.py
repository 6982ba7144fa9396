"""Session configuration of a party."""

from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Tuple

import yaml
from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import

Address = Tuple[str, int]


@typechecked
def parse_address(text: str) -> Address:
    """Parse "host:port".

    Raises:
        ValueError: if the port is missing or not a number
    """
    host, separator, port = text.rpartition(":")
    if not separator or not host or not port.isdigit():
        raise ValueError(f"expected HOST:PORT, got {text!r}")
    return host, int(port)


@typechecked
def parse_peer(text: str) -> Tuple[str, Address]:
    """Parse "name@host:port".

    Raises:
        ValueError: if @ is missing or the address is malformed
    """
    if "@" not in text:
        raise ValueError(f"@ is missing in {text}")
    name, address = text.split("@", 1)
    return name, parse_address(address)


@dataclass
class SessionConfig:
    """Parameters of a session, which every party needs to agree on, plus the
    local settings of one party.
    """

    role: str = OWNER
    metric: str = AUROC_TIE
    delta: int = 1
    scale: int = DEFAULT_SCALE
    owners: int = 1
    owner_id: int = 0
    listen: Optional[Address] = None
    connect: Dict[str, Address] = field(default_factory=dict)
    seed: Optional[bytes] = None
    input: Optional[str] = None
    output: Optional[str] = None
    leakage_report: Optional[str] = None
    session: str = "default"
    recall_axis: str = RECALL
    timeout: float = 120.0

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role}, known roles: {ROLES}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric}, known metrics: {METRICS}")
        if self.delta < 1 or self.delta % 2 == 0:
            raise ValueError(f"delta needs to be odd and positive, got {self.delta}")
        if self.scale < 10:
            raise ValueError(f"precision needs to be at least 10, got {self.scale}")
        if self.owners < 1:
            raise ValueError("a session needs at least one owner")
        if self.recall_axis not in RECALL_AXES:
            raise ValueError(f"unknown recall axis {self.recall_axis}")
        if self.role == OWNER and self.seed is not None:
            raise ValueError(
                "an owner must not use a master seed, it makes the sharing masks "
                "reproducible for everyone who knows the seed"
            )

    @property
    def name(self) -> str:
        """Party name, the role for servers and owner<id> for owners."""
        return f"{OWNER}{self.owner_id}" if self.role == OWNER else self.role

    def agreed(self) -> Dict:
        """Parameters, which all parties of a session need to share."""
        return {
            "metric": self.metric,
            "delta": self.delta,
            "scale": self.scale,
            "session": self.session,
            "recall_axis": self.recall_axis,
        }

    @staticmethod
    @typechecked
    def from_yaml(path: str, **overrides) -> "SessionConfig":
        """Load a configuration file. Keys are the field names; `listen` is
        "host:port", `connect` maps peer names to "host:port" and `seed` is hex.
        Values in `overrides`, which are not None, replace file values.

        Raises:
            ValueError: on unknown keys or malformed values
        """
        with open(path, "r", encoding="utf-8") as config_file:
            values = yaml.safe_load(config_file) or {}
        if not isinstance(values, dict):
            raise ValueError(f"{path} needs to contain a mapping")
        known = {config_field.name for config_field in fields(SessionConfig)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown keys in {path}: {sorted(unknown)}")
        if isinstance(values.get("listen"), str):
            values["listen"] = parse_address(values["listen"])
        if isinstance(values.get("connect"), dict):
            values["connect"] = {
                name: parse_address(str(address))
                for name, address in values["connect"].items()
            }
        if isinstance(values.get("seed"), str):
            values["seed"] = bytes.fromhex(values["seed"])
        values.update({key: value for key, value in overrides.items() if value is not None})
        return SessionConfig(**values)
