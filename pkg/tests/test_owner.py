import os
import tempfile
import unittest

import numpy as np

from secure_auc.globals import *
from secure_auc.owner import (
    OwnerDataset,
    decode_payload,
    decode_result,
    encode_payload,
    encode_pcv,
    ingest_csv,
    join_prediction_files,
    outsource,
)
from secure_auc.primitives import make_shares, reconstruct_vector
from secure_auc.ring_core import RingElement
from utils import dealer


class TempFiles(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def write(self, name: str, content: str) -> str:
        path = os.path.join(self.directory.name, name)
        with open(path, "w", encoding="utf-8") as file:
            file.write(content)
        return path


class TestIngest(TempFiles):
    def test_with_header(self):
        path = self.write("owner.csv", "pcv,label\n0.9,1\n\n0.25,0\n")
        dataset = ingest_csv(path, 3)
        self.assertEqual(dataset.samples, [("0.9", 1), ("0.25", 0)])
        self.assertEqual(dataset.owner_id, 3)
        self.assertEqual(dataset.positives(), 1)

    def test_without_header(self):
        dataset = ingest_csv(self.write("owner.csv", "1,1\n0,0\n"))
        self.assertEqual(len(dataset), 2)

    def test_malformed_lines(self):
        cases = {
            "fields.csv": "0.5,1\n0.4,0,7\n",
            "range.csv": "0.5,1\n1.5,0\n",
            "label.csv": "0.5,1\n0.4,2\n",
            "number.csv": "0.5,1\nabc,0\n",
        }
        for name, content in cases.items():
            path = self.write(name, content)
            with self.assertRaises(ValueError) as context:
                ingest_csv(path)
            self.assertIn(f"{path}:2:", str(context.exception))

    def test_empty_file(self):
        self.assertRaises(ValueError, ingest_csv, self.write("empty.csv", "pcv,label\n"))


class TestJoin(TempFiles):
    def test_join(self):
        submission = self.write("submission.csv", "id,pcv\nb,0.3\na,0.8\n")
        truth = self.write("truth.csv", "id,label\na,yes\nb,no\n")
        dataset = join_prediction_files(submission, truth, "id", "pcv", "label", "yes")
        self.assertEqual(dataset.samples, [("0.3", 0), ("0.8", 1)])

    def test_missing_truth(self):
        submission = self.write("submission.csv", "id,pcv\nc,0.3\n")
        truth = self.write("truth.csv", "id,label\na,1\n")
        self.assertRaises(
            ValueError, join_prediction_files, submission, truth, "id", "pcv", "label", "1"
        )


class TestEncoding(unittest.TestCase):
    def test_encode_pcv(self):
        self.assertEqual(encode_pcv("0.6931"), 6931)
        self.assertEqual(encode_pcv("0.00005"), 1)
        self.assertEqual(encode_pcv("0.00004"), 0)
        self.assertEqual(encode_pcv("1"), 10**4)
        self.assertEqual(encode_pcv("0.123456", 10**6), 123456)

    def test_invalid_dataset(self):
        self.assertRaises(ValueError, OwnerDataset, [])
        self.assertRaises(ValueError, OwnerDataset, [("0.5", 3)])
        self.assertRaises(ValueError, OwnerDataset, [("-0.1", 1)])


class TestOutsource(unittest.TestCase):
    def test_sorted_shares(self):
        dataset = OwnerDataset([("0.2", 0), ("0.9", 1), ("0.5", 1), ("0.5", 0)])
        shares0, shares1 = outsource(dataset, DEFAULT_SCALE, dealer())
        self.assertEqual(
            reconstruct_vector(shares0.con, shares1.con).tolist(), [9000, 5000, 5000, 2000]
        )
        # equal confidences keep their input order
        self.assertEqual(reconstruct_vector(shares0.label, shares1.label).tolist(), [1, 1, 0, 0])

    def test_degenerate_datasets(self):
        positives = OwnerDataset([("0.2", 1), ("0.9", 1)])
        negatives = OwnerDataset([("0.2", 0)])
        self.assertRaises(ValueError, outsource, positives, DEFAULT_SCALE, dealer(), AUROC)
        self.assertRaises(ValueError, outsource, negatives, DEFAULT_SCALE, dealer(), AUROC_TIE)
        self.assertRaises(ValueError, outsource, negatives, DEFAULT_SCALE, dealer(), AUPR)
        outsource(positives, DEFAULT_SCALE, dealer(), AUPR)
        outsource(negatives, DEFAULT_SCALE, dealer())


class TestPayload(unittest.TestCase):
    def test_decode(self):
        dataset = OwnerDataset([("0.2", 0), ("0.9", 1)])
        shares, _ = outsource(dataset, DEFAULT_SCALE, dealer())
        payload = encode_payload(shares)
        self.assertEqual(len(payload), 8 * 5)
        decoded = decode_payload(payload)
        self.assertEqual(decoded.con.tolist(), shares.con.tolist())
        self.assertEqual(decoded.label.tolist(), shares.label.tolist())

    def test_malformed(self):
        words = np.array([3, 1, 2], dtype=np.uint64).astype("<u8").tobytes()
        self.assertRaises(ValueError, decode_payload, words)
        self.assertRaises(ValueError, decode_payload, b"")
        self.assertRaises(ValueError, decode_payload, b"\x01\x00")


class TestDecodeResult(unittest.TestCase):
    def test_render(self):
        share0, share1 = make_shares(RingElement(6930, L), dealer())
        self.assertEqual(decode_result(share0, share1), "0.6930")

    def test_corrupted(self):
        share0, share1 = make_shares(RingElement(2**64 - 3, L), dealer())
        self.assertRaises(ValueError, decode_result, share0, share1)


if __name__ == "__main__":
    unittest.main()
