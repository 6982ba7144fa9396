import io
import itertools
import unittest

from secure_auc.coverage import (
    create_session_matrix,
    session_filter_typed,
    shuffle_session_matrix,
)
from secure_auc.globals import *

PARAMETERS = {
    METRIC: METRICS,
    DELTA: [1, 3, 5],
    OWNERS: [1, 2, 8],
    TIED: [False, True],
    SAMPLES: [8, 40, 200],
}


class TestSessionFilter(unittest.TestCase):
    def setUp(self):
        global param_map
        param_map.clear()
        param_map[METRIC] = 0
        param_map[DELTA] = 1
        param_map[OWNERS] = 2
        param_map[TIED] = 3
        param_map[SAMPLES] = 4

    def tearDown(self):
        param_map.clear()

    def test_auroc_with_ties(self):
        output = io.StringIO()
        self.assertFalse(session_filter_typed([AUROC, 1, 2, True, 40], output))
        self.assertEqual(output.getvalue(), "the auroc engine requires tie free samples")
        self.assertTrue(session_filter_typed([AUROC, 1, 2, False, 40]))
        self.assertTrue(session_filter_typed([AUROC_TIE, 1, 2, True, 40]))

    def test_owners_and_samples(self):
        output = io.StringIO()
        self.assertFalse(session_filter_typed([AUPR, 1, 8, True, 4], output))
        self.assertEqual(output.getvalue(), "more owners than samples")
        self.assertTrue(session_filter_typed([AUPR, 1, 8, True, 8]))

    def test_even_delta(self):
        self.assertFalse(session_filter_typed([AUPR, 2, 1, True, 8]))

    def test_incomplete_row(self):
        # only the first parameters are known while the generator builds a row
        self.assertTrue(session_filter_typed([AUROC]))
        self.assertTrue(session_filter_typed([AUROC, 3, 2]))
        self.assertFalse(session_filter_typed([AUROC, 3, 2, True]))


class TestSessionMatrix(unittest.TestCase):
    def tearDown(self):
        param_map.clear()

    def test_rows_are_valid(self):
        matrix = create_session_matrix(PARAMETERS)
        self.assertGreater(len(matrix), 0)
        for session in matrix:
            self.assertEqual(set(session), set(PARAMETERS))
            self.assertFalse(session[METRIC] == AUROC and session[TIED])
            self.assertEqual(session[DELTA] % 2, 1)

    def test_pair_coverage(self):
        matrix = create_session_matrix(PARAMETERS)
        for first, second in itertools.combinations(PARAMETERS, 2):
            for value1, value2 in itertools.product(PARAMETERS[first], PARAMETERS[second]):
                if {first, second} == {METRIC, TIED} and (
                    AUROC in (value1, value2) and True in (value1, value2)
                ):
                    continue
                self.assertTrue(
                    any(
                        session[first] == value1 and session[second] == value2
                        for session in matrix
                    ),
                    f"{first}={value1}, {second}={value2}",
                )

    def test_post_filter(self):
        matrix = create_session_matrix(
            PARAMETERS,
            post_filter=lambda row: not (
                len(row) > param_map[OWNERS] and row[param_map[OWNERS]] == 8
            ),
        )
        self.assertTrue(all(session[OWNERS] != 8 for session in matrix))

    def test_shuffle_is_deterministic(self):
        matrix = create_session_matrix(PARAMETERS)
        first, second = list(matrix), list(matrix)
        shuffle_session_matrix(first)
        shuffle_session_matrix(second)
        self.assertEqual(first, second)
        self.assertEqual(sorted(map(str, first)), sorted(map(str, matrix)))


if __name__ == "__main__":
    unittest.main()
