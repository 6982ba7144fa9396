import unittest

import numpy as np

from secure_auc.globals import *
from secure_auc.primitives import (
    BeaverTriple,
    BitFieldShares,
    Share,
    deal_triples,
    make_shares,
    mul,
    open_shares,
    private_compare,
    reconstruct,
    reconstruct_vector,
    share_bits,
    share_vector,
)
from secure_auc.ring_core import RingElement, decompose_bits
from secure_auc.transport import round_count
from utils import dealer, run_proxies, secure_call


class TestSharing(unittest.TestCase):
    def test_make_shares(self):
        rng = dealer()
        for modulus in MODULI:
            for value in (0, 1, modulus - 1):
                s0, s1 = make_shares(RingElement(value, modulus), rng)
                self.assertEqual((s0.owner, s1.owner), (S0, S1))
                self.assertEqual(reconstruct(s0, s1).value, value)

    def test_zero_shares_are_negatives(self):
        s0, s1 = make_shares(RingElement(0, L), dealer())
        self.assertEqual(s1.element.value, (-s0.element.value) % L)

    def test_reconstruct_errors(self):
        s0, s1 = make_shares(RingElement(5, L), dealer())
        self.assertRaises(ValueError, reconstruct, s0, s0)
        other = Share(RingElement(1, K), S1)
        self.assertRaises(TypeError, reconstruct, s0, other)
        self.assertRaises(ValueError, Share, RingElement(1, L), S2)

    def test_vectors(self):
        values = np.array([0, 1, 2**64 - 1, 12345], dtype=np.uint64)
        s0, s1 = share_vector(values, dealer())
        self.assertEqual(reconstruct_vector(s0, s1).tolist(), values.tolist())
        values = np.array([0, 3, 66], dtype=np.int64)
        s0, s1 = share_vector(values, dealer(), P)
        self.assertEqual(reconstruct_vector(s0, s1, P).tolist(), [0, 3, 66])
        bits = np.array([0, 1, 1, 0], dtype=np.uint64)
        b0, b1 = share_bits(bits, dealer())
        self.assertEqual((b0 ^ b1).tolist(), bits.tolist())

    def test_bit_field_shares_validation(self):
        self.assertRaises(ValueError, BitFieldShares, np.zeros(3, dtype=np.int64), S0)
        self.assertRaises(ValueError, BitFieldShares, np.full((1, 8), P, dtype=np.int64), S0)
        self.assertRaises(ValueError, BitFieldShares, np.zeros((1, 8), dtype=np.int64), S2)

    def test_triples(self):
        triple0, triple1 = deal_triples(dealer(), 50)
        a = triple0.a + triple1.a
        b = triple0.b + triple1.b
        self.assertEqual((triple0.c + triple1.c).tolist(), (a * b).tolist())
        words = triple0.words()
        self.assertEqual(words.size, 150)
        self.assertEqual(BeaverTriple.from_words(words, S0).c.tolist(), triple0.c.tolist())


class TestMul(unittest.TestCase):
    def test_random_products(self):
        generator = np.random.default_rng(3)
        x = generator.integers(0, 2**64, 10**4, dtype=np.uint64)
        y = generator.integers(0, 2**64, 10**4, dtype=np.uint64)
        product, run = secure_call(mul, x, y)
        self.assertEqual(product.tolist(), (x * y).tolist())
        self.assertEqual(round_count(run.parties[S0].endpoint, MUL), 1)
        self.assertEqual(round_count(run.parties[S1].endpoint, MUL), 1)

    def test_small_products(self):
        x = np.array([0, 1, 3, 2**32], dtype=np.uint64)
        y = np.array([5, 1, 7, 2**32], dtype=np.uint64)
        product, _ = secure_call(mul, x, y)
        self.assertEqual(product.tolist(), [0, 1, 21, 0])

    def test_open(self):
        values = np.array([42, 0, 2**63], dtype=np.uint64)
        opened, run = secure_call(open_shares, values)
        # both proxies learn the value, the reconstruction doubles it
        self.assertEqual(run[S0].tolist(), values.tolist())
        self.assertEqual(run[S1].tolist(), values.tolist())
        self.assertEqual(round_count(run.parties[S0].endpoint, OPEN), 1)
        self.assertNotIn(OPEN, run.parties[S2].endpoint.transcript.rounds)
        self.assertEqual(opened.tolist(), (values * np.uint64(2)).tolist())


def run_private_compare(r: np.ndarray, y: np.ndarray, n: np.ndarray, bits: int, seed: int = 0):
    rng = dealer(seed)
    bits0, bits1 = share_vector(decompose_bits(r, bits).ravel(), rng, P)

    def program(party, bit_shares):
        shares = BitFieldShares(bit_shares.reshape(-1, bits), party.role)
        return private_compare(party, shares, y, n, bits)

    run = run_proxies(program, [bits0], [bits1], seed=seed.to_bytes(8, "little"))
    return run[S0] ^ run[S1], run


class TestPrivateCompare(unittest.TestCase):
    def test_exhaustive_eight_bits(self):
        grid = np.arange(256, dtype=np.uint64)
        r = np.tile(np.repeat(grid, 256), 2)
        y = np.tile(np.tile(grid, 256), 2)
        n = np.repeat(np.array([0, 1], dtype=np.uint64), 256 * 256)
        result, run = run_private_compare(r, y, n, 8)
        expected = n ^ (r > y).astype(np.uint64)
        self.assertEqual(int(np.count_nonzero(result != expected)), 0)
        self.assertEqual(round_count(run.parties[S0].endpoint, PC), 2)

    def test_full_width(self):
        generator = np.random.default_rng(4)
        r = generator.integers(0, 2**64, 2000, dtype=np.uint64)
        y = generator.integers(0, 2**64, 2000, dtype=np.uint64)
        n = generator.integers(0, 2, 2000, dtype=np.uint64)
        # equal values and the largest public value
        y[:10] = r[:10]
        y[10:20] = np.uint64(2**64 - 1)
        n[10:20] = 1
        result, _ = run_private_compare(r, y, n, ELL, seed=1)
        self.assertEqual(result.tolist(), (n ^ (r > y).astype(np.uint64)).tolist())

    def test_shape_mismatch(self):
        r = np.arange(4, dtype=np.uint64)
        rng = dealer()
        bits0, bits1 = share_vector(decompose_bits(r, 8).ravel(), rng, P)
        y = np.arange(3, dtype=np.uint64)
        n = np.zeros(3, dtype=np.uint64)

        def program(party, bit_shares):
            bits = BitFieldShares(bit_shares.reshape(-1, 8), party.role)
            return private_compare(party, bits, y, n, 8)

        self.assertRaises(ValueError, run_proxies, program, [bits0], [bits1])


if __name__ == "__main__":
    unittest.main()
