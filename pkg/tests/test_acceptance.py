import os
import random
import unittest

from secure_auc.globals import *
from secure_auc.config import SessionConfig
from secure_auc.experiments import run_session_matrix
from secure_auc.owner import OwnerDataset, join_prediction_files
from secure_auc.session import run_in_process
from utils import full_run, random_samples

# set SECURE_AUC_FULL=1 for 100 datasets with up to 200 samples
DATASETS = 100 if full_run() else 12
PARAMETERS = {
    METRIC: METRICS,
    DELTA: [1, 3, 5],
    OWNERS: [1, 2, 5, 8],
    TIED: [False, True],
    SAMPLES: [16, 64, 200] if full_run() else [10, 24],
}


class TestOracleEquivalence(unittest.TestCase):
    def test_session_matrix(self):
        results = run_session_matrix(PARAMETERS, DATASETS, seed=2024)
        self.assertEqual(len(results), DATASETS)
        for result in results:
            self.assertLessEqual(result["error"], TOLERANCE[result[METRIC]], result)
            self.assertTrue(result["passed"], result)


class TestTieInsensitivity(unittest.TestCase):
    def test_order_inside_ties(self):
        rng = random.Random(5)
        samples = random_samples(rng, 30, tie_runs=4)
        for metric in (AUROC_TIE, AUPR):
            forward = run_in_process([OwnerDataset(samples)], SessionConfig(metric=metric))
            backward = run_in_process(
                [OwnerDataset(list(reversed(samples)))], SessionConfig(metric=metric)
            )
            self.assertEqual(forward.value, backward.value, metric)


@unittest.skipUnless(
    os.environ.get("SECURE_AUC_DREAM_DIR"),
    "set SECURE_AUC_DREAM_DIR to the directory with submission.csv and truth.csv",
)
class TestChallengeSubmission(unittest.TestCase):
    def setUp(self):
        directory = os.environ["SECURE_AUC_DREAM_DIR"]
        self.dataset = join_prediction_files(
            os.path.join(directory, "submission.csv"),
            os.path.join(directory, "truth.csv"),
            "id",
            "pcv",
            "label",
            "1",
        )

    def test_auroc(self):
        outcome = run_in_process([self.dataset], SessionConfig(metric=AUROC_TIE))
        self.assertEqual(outcome.value, "0.6930")

    def test_aupr(self):
        outcome = run_in_process([self.dataset], SessionConfig(metric=AUPR))
        self.assertEqual(outcome.value, "0.8440")


if __name__ == "__main__":
    unittest.main()
