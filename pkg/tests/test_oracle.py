import unittest
from fractions import Fraction

from secure_auc.globals import *
from secure_auc.oracle import (
    PlainSample,
    plain_aupr,
    plain_auroc_no_tie,
    plain_auroc_ordered,
    plain_auroc_tie,
    plain_samples,
    possible_interleavings,
    scaled,
)
from secure_auc.owner import OwnerDataset


def samples(*pairs):
    return [PlainSample(Fraction(pcv), label) for pcv, label in pairs]


TOY = samples(("0.9", 1), ("0.8", 0), ("0.7", 1), ("0.6", 0))


class TestAuroc(unittest.TestCase):
    def test_toy(self):
        self.assertEqual(plain_auroc_no_tie(TOY), Fraction(3, 4))
        self.assertEqual(plain_auroc_tie(TOY), Fraction(3, 4))
        self.assertEqual(plain_auroc_ordered(TOY), Fraction(3, 4))

    def test_perfect_separation(self):
        data = samples(("0.9", 1), ("0.8", 1), ("0.2", 0), ("0.1", 0))
        self.assertEqual(plain_auroc_no_tie(data), 1)
        reversed_data = samples(("0.9", 0), ("0.8", 0), ("0.2", 1), ("0.1", 1))
        self.assertEqual(plain_auroc_no_tie(reversed_data), 0)

    def test_ties_are_rejected(self):
        data = samples(("0.5", 1), ("0.5", 0))
        self.assertRaises(ValueError, plain_auroc_no_tie, data)

    def test_all_tied(self):
        positives_first = samples(*([("0.5", 1)] * 5 + [("0.5", 0)] * 5))
        negatives_first = samples(*([("0.5", 0)] * 5 + [("0.5", 1)] * 5))
        self.assertEqual(plain_auroc_tie(positives_first), Fraction(1, 2))
        self.assertEqual(plain_auroc_tie(negatives_first), Fraction(1, 2))
        self.assertEqual(plain_auroc_ordered(positives_first), 1)
        self.assertEqual(plain_auroc_ordered(negatives_first), 0)

    def test_tie_value_is_bracketed_by_orders(self):
        data = [("0.9", 1), ("0.8", 0), ("0.8", 1), ("0.8", 0), ("0.1", 0)]
        optimistic = samples(*sorted(data, key=lambda pair: (pair[0], pair[1]), reverse=True))
        pessimistic = samples(*sorted(data, key=lambda pair: (pair[0], -pair[1]), reverse=True))
        tie = plain_auroc_tie(samples(*data))
        self.assertEqual(tie, Fraction(5, 6))
        self.assertLessEqual(plain_auroc_ordered(pessimistic), tie)
        self.assertLessEqual(tie, plain_auroc_ordered(optimistic))

    def test_single_class(self):
        self.assertRaises(ValueError, plain_auroc_tie, samples(("0.4", 1), ("0.3", 1)))
        self.assertRaises(ValueError, plain_auroc_ordered, samples(("0.4", 0)))


class TestAupr(unittest.TestCase):
    def test_toy(self):
        self.assertEqual(plain_aupr(TOY), Fraction(19, 24))

    def test_all_positive(self):
        self.assertEqual(plain_aupr(samples(("0.9", 1), ("0.4", 1), ("0.4", 1))), 1)

    def test_without_positives(self):
        self.assertRaises(ValueError, plain_aupr, samples(("0.9", 0)))


class TestHelpers(unittest.TestCase):
    def test_scaled(self):
        self.assertEqual(scaled(Fraction(2, 3)), 6666)
        self.assertEqual(scaled(Fraction(19, 24)), 7916)
        self.assertEqual(scaled(Fraction(1), 10**5), 10**5)

    def test_interleavings(self):
        self.assertEqual(possible_interleavings(3, 2), 10)
        self.assertEqual(possible_interleavings(4, 3), 35)

    def test_invalid_sample(self):
        self.assertRaises(ValueError, PlainSample, Fraction(3, 2), 1)
        self.assertRaises(ValueError, PlainSample, Fraction(1, 2), 2)

    def test_plain_samples(self):
        dataset = OwnerDataset([("0.25", 1), ("1", 0)])
        self.assertEqual(
            plain_samples(dataset), [PlainSample(Fraction(1, 4), 1), PlainSample(Fraction(1), 0)]
        )


if __name__ == "__main__":
    unittest.main()
