import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout

from secure_auc.globals import *
from secure_auc.cli import build_config, build_parser, main, result_document
from secure_auc.config import SessionConfig, parse_address, parse_peer


def parse(*argv: str):
    # argparse prints the error message to stderr, the actions print to stdout
    with redirect_stdout(io.StringIO()):
        return build_parser().parse_args(list(argv))


class TestAddresses(unittest.TestCase):
    def test_parse_address(self):
        self.assertEqual(parse_address("127.0.0.1:9000"), ("127.0.0.1", 9000))
        self.assertEqual(parse_address("localhost:1"), ("localhost", 1))
        for text in ("127.0.0.1", ":9000", "host:port", "host:"):
            self.assertRaises(ValueError, parse_address, text)

    def test_parse_peer(self):
        self.assertEqual(parse_peer("s1@10.0.0.2:9001"), ("s1", ("10.0.0.2", 9001)))
        self.assertRaises(ValueError, parse_peer, "10.0.0.2:9001")


class TestParser(unittest.TestCase):
    def test_defaults(self):
        args = parse("--role", "owner")
        self.assertEqual(args.role, OWNER)
        self.assertIsNone(args.delta)
        self.assertEqual(args.log_level, "WARNING")

    def test_even_delta(self):
        with self.assertRaises(SystemExit):
            parse("--delta", "2")
        with self.assertRaises(SystemExit):
            parse("--delta", "-1")
        self.assertEqual(parse("--delta", "5").delta, 5)

    def test_connect(self):
        args = parse("--connect", "s0@127.0.0.1:9000", "--connect", "s1@127.0.0.1:9001")
        self.assertEqual(args.connect, {S0: ("127.0.0.1", 9000), S1: ("127.0.0.1", 9001)})
        with self.assertRaises(SystemExit):
            parse("--connect", "owner3@127.0.0.1:9000")
        with self.assertRaises(SystemExit):
            parse("--connect", "s0:9000")

    def test_listen(self):
        self.assertEqual(parse("--listen", "0.0.0.0:9000").listen, ("0.0.0.0", 9000))
        with self.assertRaises(SystemExit):
            parse("--listen", "9000")

    def test_unknown_metric(self):
        with self.assertRaises(SystemExit):
            parse("--metric", "roc")


class TestBuildConfig(unittest.TestCase):
    def test_without_file(self):
        config = build_config(
            parse("--role", "s1", "--metric", "aupr", "--precision", "100000", "--seed", "00ff")
        )
        self.assertEqual(config.role, S1)
        self.assertEqual(config.metric, AUPR)
        self.assertEqual(config.scale, 10**5)
        self.assertEqual(config.seed, b"\x00\xff")
        self.assertEqual(config.delta, 1)

    def test_file_with_overrides(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "session.yaml")
            with open(path, "w", encoding="utf-8") as config_file:
                config_file.write(
                    "role: s2\n"
                    "metric: auroc\n"
                    "delta: 3\n"
                    "connect:\n"
                    "  s0: 127.0.0.1:9000\n"
                    "  s1: 127.0.0.1:9001\n"
                    "seed: 0a0b\n"
                )
            config = build_config(parse("--config", path, "--delta", "5"))
        self.assertEqual(config.role, S2)
        self.assertEqual(config.metric, AUROC)
        self.assertEqual(config.delta, 5)
        self.assertEqual(config.connect[S1], ("127.0.0.1", 9001))
        self.assertEqual(config.seed, b"\x0a\x0b")

    def test_unknown_key(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "session.yaml")
            with open(path, "w", encoding="utf-8") as config_file:
                config_file.write("role: s0\ncolour: red\n")
            self.assertRaises(ValueError, SessionConfig.from_yaml, path)

    def test_invalid_values(self):
        self.assertRaises(ValueError, SessionConfig, role="observer")
        self.assertRaises(ValueError, SessionConfig, delta=4)
        self.assertRaises(ValueError, SessionConfig, scale=1)
        self.assertRaises(ValueError, SessionConfig, owners=0)
        self.assertRaises(ValueError, SessionConfig, recall_axis="fpr")

    def test_owner_refuses_seed(self):
        self.assertRaises(ValueError, SessionConfig, seed=b"\x00\xff")
        self.assertRaises(ValueError, build_config, parse("--seed", "00ff"))
        self.assertEqual(SessionConfig(role=S0, seed=b"\x00\xff").seed, b"\x00\xff")

    def test_names(self):
        self.assertEqual(SessionConfig(owner_id=4).name, "owner4")
        self.assertEqual(SessionConfig(role=S2, owner_id=4).name, S2)

    def test_result_document(self):
        document = result_document(SessionConfig(metric=AUPR), "0.8440")
        self.assertEqual(
            json.loads(json.dumps(document)),
            {"metric": AUPR, "value": "0.8440", "scale": 10**4, "leakage_report": None},
        )


class TestMain(unittest.TestCase):
    def test_owner_without_addresses(self):
        with redirect_stdout(io.StringIO()) as output:
            with self.assertRaises(SystemExit) as context:
                main(["--role", "owner", "--input", "owner.csv"])
        self.assertEqual(context.exception.code, 1)
        self.assertIn("needs the addresses", output.getvalue())

    def test_invalid_config(self):
        with redirect_stdout(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                main(["--role", "s0", "--precision", "5"])
        self.assertEqual(context.exception.code, 1)


if __name__ == "__main__":
    unittest.main()
