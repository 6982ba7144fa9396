#!/usr/bin/env python3

import argparse
import json
import logging
from typing import Dict, List, Optional

from typeguard import typechecked

from secure_auc.globals import *  # pylint: disable=wildcard-import,unused-wildcard-import
from secure_auc.config import SessionConfig, parse_address, parse_peer
from secure_auc.private_sort import LeakageReport
from secure_auc.session import SessionMismatchError, run_tcp_party
from secure_auc.transport import LinkClosedError, ProtocolDesyncError
from secure_auc.util import cs, exit_error

__all__ = ["SessionConfig", "build_parser", "build_config", "main"]

log = logging.getLogger(__name__)


@typechecked
class DeltaAction(argparse.Action):
    # check if delta is odd and positive
    def __call__(self, parser, namespace, values, option_string):
        if values < 1 or values % 2 == 0:
            print(cs(f"ERROR: {option_string} needs to be odd and positive", "Red"))
            raise argparse.ArgumentError(self, f"{values} is not odd and positive")
        setattr(namespace, self.dest, values)


@typechecked
class AddressAction(argparse.Action):
    # check if argument has the shape HOST:PORT
    def __call__(self, parser, namespace, values, option_string):
        try:
            setattr(namespace, self.dest, parse_address(values))
        except ValueError as e:
            print(cs(f"ERROR: wrong address for {option_string}", "Red"))
            raise argparse.ArgumentError(self, str(e)) from e


@typechecked
class PeerAction(argparse.Action):
    # collect arguments of the shape NAME@HOST:PORT
    def __call__(self, parser, namespace, values, option_string):
        try:
            name, address = parse_peer(values)
        except ValueError as e:
            print(cs(f"ERROR: wrong peer for {option_string}", "Red"))
            raise argparse.ArgumentError(self, str(e)) from e
        if name not in SERVERS:
            raise argparse.ArgumentError(self, f"unknown server {name}, known: {SERVERS}")
        peers = dict(getattr(namespace, self.dest) or {})
        peers[name] = address
        setattr(namespace, self.dest, peers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Compute AUROC or AUPR on test samples of several data owners "
        "with three non-colluding servers."
    )

    parser.add_argument("--role", type=str, choices=ROLES, help="Role of this process.")
    parser.add_argument("--metric", type=str, choices=METRICS, help="Metric to compute.")
    parser.add_argument(
        "--delta",
        type=int,
        action=DeltaAction,
        help="Records per merge cycle. Needs to be odd. Values greater than 1 reveal "
        "selection bits to the proxies.",
    )
    parser.add_argument("--precision", type=int, help="Fixed-point scale, e.g. 10000.")
    parser.add_argument("--input", type=str, help="CSV file with lines pcv,label (owner).")
    parser.add_argument(
        "--listen", type=str, action=AddressAction, help="Listen address HOST:PORT."
    )
    parser.add_argument(
        "--connect",
        type=str,
        action=PeerAction,
        help="Address of a server. Shape needs to be name@host:port. "
        "For example s0@127.0.0.1:9000. Can be repeated.",
    )
    parser.add_argument(
        "--seed",
        type=str,
        help="Hex master seed for a reproducible run of the servers (testing only). "
        "Owners refuse it.",
    )
    parser.add_argument(
        "--leakage-report", type=str, help="Write the YAML leakage report (s0, s1)."
    )
    parser.add_argument("--owners", type=int, help="Number of data owners.")
    parser.add_argument("--owner-id", type=int, help="Number of this owner.")
    parser.add_argument("--output", type=str, help="Write the JSON result (owner).")
    parser.add_argument("--session", type=str, help="Session label.")
    parser.add_argument(
        "--recall-axis", type=str, choices=RECALL_AXES, help="x axis of the aupr engine."
    )
    parser.add_argument("--timeout", type=float, help="Link timeout in seconds.")
    parser.add_argument("--config", type=str, help="YAML file with default values.")
    parser.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Level of the log output.",
    )
    return parser


@typechecked
def build_config(args: argparse.Namespace) -> SessionConfig:
    """Merge the command line arguments into the optional configuration file.

    Raises:
        ValueError: on invalid values
    """
    seed = None
    if args.seed is not None:
        seed = bytes.fromhex(args.seed)
    values = {
        "role": args.role,
        "metric": args.metric,
        "delta": args.delta,
        "scale": args.precision,
        "owners": args.owners,
        "owner_id": args.owner_id,
        "listen": args.listen,
        "connect": args.connect,
        "seed": seed,
        "input": args.input,
        "output": args.output,
        "leakage_report": args.leakage_report,
        "session": args.session,
        "recall_axis": args.recall_axis,
        "timeout": args.timeout,
    }
    if args.config:
        return SessionConfig.from_yaml(args.config, **values)
    return SessionConfig(**{key: value for key, value in values.items() if value is not None})


@typechecked
def result_document(config: SessionConfig, value: str) -> Dict:
    return {
        "metric": config.metric,
        "value": value,
        "scale": config.scale,
        "leakage_report": config.leakage_report,
    }


def main(argv: Optional[List[str]] = None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

    try:
        config = build_config(args)
    except (ValueError, OSError) as e:
        exit_error(str(e))

    report = LeakageReport() if config.role in PROXIES else None
    try:
        output = run_tcp_party(config, report)
    except SessionMismatchError as e:
        exit_error(f"session mismatch: {e}")
    except (LinkClosedError, ProtocolDesyncError) as e:
        exit_error(f"connection failed: {e}")
    except ValueError as e:
        exit_error(str(e))

    if report is not None and config.leakage_report:
        report.write(config.leakage_report)
        print(cs(f"leakage report written to {config.leakage_report}", "Green"))

    if config.role == OWNER:
        document = json.dumps(result_document(config, output))
        if config.output:
            with open(config.output, "w", encoding="utf-8") as output_file:
                output_file.write(document + "\n")
        print(document)
    elif config.role == S2:
        print(cs(f"served {output} invocations", "Green"))
    else:
        print(cs(f"{config.name} finished {config.metric}", "Green"))


if __name__ == "__main__":
    main()
