import random
import time
import unittest

from secure_auc.globals import *
from secure_auc.experiments import (
    auc_stability,
    benchmark_session,
    oracle_value,
    random_samples,
    reduced,
    run_session_matrix,
    scalability_settings,
    split_by_sizes,
)
from secure_auc.oracle import plain_samples
from secure_auc.owner import OwnerDataset

TOY = [("0.9", 1), ("0.8", 0), ("0.7", 1), ("0.6", 0)]


class TestDatasets(unittest.TestCase):
    def test_random_samples(self):
        samples = random_samples(random.Random(1), 50, tie_free=True)
        self.assertEqual(len(samples), 50)
        self.assertEqual(len({pcv for pcv, _ in samples}), 50)
        self.assertEqual({label for _, label in samples}, {0, 1})
        self.assertRaises(ValueError, random_samples, random.Random(1), 1)

    def test_split_by_sizes(self):
        samples = random_samples(random.Random(2), 10)
        datasets = split_by_sizes(samples, [1, 3, 6])
        self.assertEqual([len(dataset) for dataset in datasets], [1, 3, 6])
        self.assertEqual([dataset.owner_id for dataset in datasets], [0, 1, 2])
        self.assertEqual(sum((dataset.samples for dataset in datasets), []), samples)
        self.assertRaises(ValueError, split_by_sizes, samples, [5, 6])

    def test_oracle_value(self):
        self.assertEqual(oracle_value(AUROC, TOY), 7500)
        self.assertEqual(oracle_value(AUROC_TIE, TOY, 10**5), 75000)
        self.assertEqual(oracle_value(AUPR, TOY), 7916)
        self.assertEqual(oracle_value(AUPR, TOY, recall_axis=RANK), 7291)
        self.assertRaises(ValueError, oracle_value, "roc", TOY)


class TestSessionMatrix(unittest.TestCase):
    def test_small_matrix(self):
        parameters = {METRIC: [AUROC_TIE, AUPR], OWNERS: [1, 3], SAMPLES: [12]}
        results = run_session_matrix(parameters, 4, seed=3)
        self.assertEqual(len(results), 4)
        self.assertTrue(all(result["passed"] for result in results), results)
        self.assertEqual({result[METRIC] for result in results}, {AUROC_TIE, AUPR})

    def test_samples_required(self):
        self.assertRaises(KeyError, run_session_matrix, {METRIC: [AUPR]}, 1)


class TestScalabilitySettings(unittest.TestCase):
    def test_samples(self):
        settings = scalability_settings(SAMPLES)
        self.assertEqual([name for name, _, _ in settings][0], "16x64")
        self.assertEqual([sizes[0] for _, sizes, _ in settings], SAMPLES_SWEEP)
        self.assertTrue(all(len(sizes) == 16 for _, sizes, _ in settings))

    def test_owners(self):
        settings = scalability_settings(OWNERS, reduction=10)
        self.assertEqual([len(sizes) for _, sizes, _ in settings], OWNERS_SWEEP)
        self.assertTrue(all(sizes[0] == 100 for _, sizes, _ in settings))

    def test_delta(self):
        settings = scalability_settings(DELTA)
        self.assertEqual([delta for _, _, delta in settings], DELTA_SWEEP)
        self.assertTrue(all(sizes == [1000] * 8 for _, sizes, _ in settings))

    def test_unbalanced(self):
        (balanced_name, balanced, _), (name, sizes, delta) = scalability_settings(
            UNBALANCED, reduction=10
        )
        self.assertEqual(balanced_name, "8x250")
        self.assertEqual(balanced, [25] * 8)
        self.assertEqual(name, "8xUNB")
        self.assertEqual(sizes, [1, 1, 3, 5, 10, 25, 50, 100])
        self.assertEqual(delta, 1)

    def test_unknown(self):
        self.assertRaises(ValueError, scalability_settings, "parties")
        self.assertEqual(reduced(5, 10), 1)


class TestSmokeBenchmark(unittest.TestCase):
    def test_sixteen_owners(self):
        # 16 owners with 64 samples each finish in-process within five minutes
        start = time.monotonic()
        run = benchmark_session([64] * 16, AUROC_TIE, seed=5, setting="16x64")
        self.assertLess(time.monotonic() - start, 300)
        self.assertEqual(run.setting, "16x64")
        self.assertEqual(run.sizes, [64] * 16)
        expected = oracle_value(AUROC_TIE, random_samples(random.Random(5), 1024))
        self.assertLessEqual(abs(round(float(run.value) * 10**4) - expected), 1)
        self.assertGreater(run.megabytes[S2], 0)
        self.assertGreaterEqual(
            run.megabytes["total"], run.megabytes[S0] + run.megabytes[S1] + run.megabytes[S2]
        )
        self.assertEqual(run.to_dict()["metric"], AUROC_TIE)

    def test_unbalanced_owners(self):
        _, sizes, delta = scalability_settings(UNBALANCED, reduction=10)[1]
        run = benchmark_session(sizes, AUPR, delta, seed=6)
        expected = oracle_value(AUPR, random_samples(random.Random(6), sum(sizes)))
        self.assertLessEqual(abs(round(float(run.value) * 10**4) - expected), 10)


class TestAucStability(unittest.TestCase):
    def setUp(self):
        samples = random_samples(random.Random(7), 191)
        self.pool = plain_samples(OwnerDataset(samples))

    def test_spread_shrinks(self):
        statistics = auc_stability(self.pool, (5, 160), repetitions=200, seed=1)
        self.assertEqual(sorted(statistics), [5, 160])
        self.assertGreater(statistics[5]["std"], statistics[160]["std"])
        for entry in statistics.values():
            self.assertLessEqual(0.0, entry["min"])
            self.assertLessEqual(entry["min"], entry["q05"])
            self.assertLessEqual(entry["q05"], entry["q95"])
            self.assertLessEqual(entry["q95"], entry["max"])
            self.assertLessEqual(entry["max"], 1.0)

    def test_invalid_sizes(self):
        self.assertRaises(ValueError, auc_stability, self.pool, (1,), 5)
        self.assertRaises(ValueError, auc_stability, self.pool, (192,), 5)
        single = plain_samples(OwnerDataset([("0.5", 1), ("0.4", 1)]))
        self.assertRaises(ValueError, auc_stability, single, (2,), 5)


if __name__ == "__main__":
    unittest.main()
