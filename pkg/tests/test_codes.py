"""
Tests for generator-matrix codes and nested towers.
"""

import itertools

import pytest

import numpy as np

from codes.linear import (
    LinearCode, encode, hamming_code, is_information_set, min_distance, ml_decode,
    parity_code, random_code, repetition_code, shortened, code_from_parity_check,
)
from codes.tower import NestedTower, build_tower, direct_sum_split
from errors import CodeConstructionError, EnumerationBudgetError, TowerSearchError


class TestLinearCode:
    """Test LinearCode basics."""

    def test_encode_zero_message(self, binary):
        """Test the zero message maps to the zero word."""
        code = hamming_code(3)
        assert not encode(code, np.zeros(code.k, dtype=np.int64)).any()

    def test_rank_deficient_generator_rejected(self, binary):
        """Test a generator with dependent rows raises."""
        with pytest.raises(CodeConstructionError, match="rank"):
            LinearCode(binary, [[1, 1, 0], [1, 1, 0]])

    def test_message_length_checked(self, binary):
        """Test wrong message length raises ValueError."""
        code = parity_code(binary, 4)
        with pytest.raises(ValueError, match="message length"):
            code.encode([1, 0])

    def test_families(self, binary, gf8):
        """Test parameters of the standard families."""
        assert min_distance(repetition_code(binary, 5)) == 5
        assert min_distance(parity_code(binary, 5)) == 2
        assert min_distance(hamming_code(3)) == 3
        assert hamming_code(4, 10).k == 6
        assert min_distance(hamming_code(4, 10)) == 3
        assert repetition_code(gf8, 3).size == 8

    def test_shortened_matches_hamming_length(self):
        """Test shortening the [7,4] Hamming code on its last position gives hamming_code(3, 6)."""
        short = shortened(hamming_code(3), [6])
        assert (short.n, short.k) == (6, 3)
        np.testing.assert_array_equal(short.sorted_codewords(), hamming_code(3, 6).sorted_codewords())

    def test_shortened_rejects_bad_positions(self, binary):
        """Test out-of-range positions and shortening away every codeword."""
        with pytest.raises(ValueError, match="outside"):
            shortened(hamming_code(3), [7])
        with pytest.raises(CodeConstructionError, match="no codeword"):
            shortened(repetition_code(binary, 4), [0])

    def test_code_from_parity_check(self, binary):
        """Test the code defined by H is annihilated by H."""
        H = np.array([[1, 1, 1, 0], [0, 1, 1, 1]])
        code = code_from_parity_check(binary, H)
        assert code.k == 2
        assert not binary.matmul(code.codewords(), H.T).any()

    def test_weight_distribution_hamming(self):
        """Test the [7,4] Hamming weight enumerator 1 + 7z^3 + 7z^4 + z^7."""
        counts = hamming_code(3).weight_distribution()
        np.testing.assert_array_equal(counts, [1, 0, 0, 7, 7, 0, 0, 1])

    def test_codewords_in_message_order(self, gf8):
        """Test row i of the codebook encodes message i."""
        code = LinearCode(gf8, [[1, 1, 1], [0, 1, 2]])
        book = code.codewords()
        for i in (0, 5, 17, 63):
            np.testing.assert_array_equal(book[i], code.encode(code.messages(i, i + 1)[0]))

    def test_enumeration_budget(self, binary, rng):
        """Test enumeration beyond the budget raises."""
        code = random_code(binary, 12, 8, rng)
        with pytest.raises(EnumerationBudgetError) as info:
            code.min_distance(budget=100)
        assert info.value.required == 256

    def test_configured_budget_is_the_default(self, binary, rng, monkeypatch):
        """Test ENUMERATION_BUDGET from the active configuration caps enumeration without an explicit budget."""
        import config
        monkeypatch.setattr(config.TestingConfig, 'ENUMERATION_BUDGET', 100)
        code = random_code(binary, 12, 8, rng)
        with pytest.raises(EnumerationBudgetError) as info:
            code.min_distance()
        assert info.value.budget == 100
        assert code.min_distance(budget=256) >= 1

    def test_binary_image_distance(self, gf8):
        """Test the binary image of a GF(8) repetition code."""
        code = repetition_code(gf8, 3)
        image = code.binary_image()
        assert image.n == 9 and image.k == 3
        assert image.min_distance() == 3


class TestMLDecoding:
    """Test nearest-codeword decoding."""

    def test_corrects_single_errors_hamming(self):
        """Test every single-bit error on every [7,4] codeword is corrected."""
        code = hamming_code(3)
        for word in code.codewords():
            for i in range(7):
                received = word.copy()
                received[i] ^= 1
                np.testing.assert_array_equal(ml_decode(code, received), word)

    def test_tie_break_smallest_message(self, binary):
        """Test equidistant candidates resolve to the smallest message."""
        code = repetition_code(binary, 2)
        decision = code.ml_decision([1, 0])
        np.testing.assert_array_equal(decision.message, [0])
        assert decision.distance == 1 and decision.runner_up == 1
        assert decision.gap == 0

    def test_ml_search_against_brute_force(self, gf8, rng):
        """Test batched search against a direct scan."""
        code = random_code(gf8, 6, 2, rng)
        words = rng.integers(0, 8, size=(20, 6))
        idx, best, second = code.ml_search(words)
        book = code.codewords()
        for w, i, b, s in zip(words, idx, best, second):
            d = np.count_nonzero(book != w, axis=1)
            assert b == d.min()
            assert i == int(np.argmin(d))
            assert s == np.sort(d)[1]

    def test_decode_erasures_bounded(self, binary):
        """Test 2e + s < d decoding and refusal beyond it."""
        code = repetition_code(binary, 5)
        word = np.array([1, 1, 1, 1, 1])
        received = np.array([0, 0, 1, 1, 1])
        np.testing.assert_array_equal(code.decode_erasures(received, [0]), word)
        assert code.decode_erasures(received, [4]) is None


class TestStructure:
    """Test information sets, systematic form and membership."""

    def test_parity_check_and_contains(self):
        """Test contains agrees with the codebook."""
        code = hamming_code(3)
        book = {tuple(c) for c in code.codewords()}
        for bits in itertools.product((0, 1), repeat=7):
            assert code.contains(np.array(bits)) == (bits in book)

    def test_information_set(self, binary):
        """Test information-set detection on the [6,3,3] code."""
        code = LinearCode(binary, [[1, 0, 0, 0, 1, 1], [0, 1, 0, 1, 0, 1], [0, 0, 1, 1, 1, 0]])
        assert is_information_set(code, [0, 1, 2])
        assert is_information_set(code, [0, 1, 3])
        assert not is_information_set(code, [3, 4, 5])

    def test_information_set_wrong_size(self, binary):
        """Test the coordinate count must equal k."""
        with pytest.raises(ValueError, match="information set"):
            parity_code(binary, 4).is_information_set([0, 1])

    def test_systematic_form(self, gf8, rng):
        """Test systematic generator is the identity on the chosen coordinates."""
        code = random_code(gf8, 6, 3, rng)
        coords = [int(c) for c in code.information_set()[0]]
        sys_code = code.systematic(coords)
        np.testing.assert_array_equal(sys_code.generator[:, coords], np.eye(3))
        assert {tuple(c) for c in sys_code.codewords()} == {tuple(c) for c in code.codewords()}

    def test_unencode_inverts_encode(self, gf8, rng):
        """Test message recovery through the information set."""
        code = random_code(gf8, 7, 3, rng)
        messages = rng.integers(0, 8, size=(10, 3))
        np.testing.assert_array_equal(code.unencode(code.encode(messages)), messages)


class TestTower:
    """Test nested towers and the direct-sum decomposition."""

    def test_nesting_and_rates(self, binary):
        """Test A_1 contains A_2 and rates follow the block sizes."""
        tower = NestedTower(binary, [[[1, 0, 0, 0]], [[0, 1, 0, 1], [1, 1, 1, 1]]])
        assert tower.dimension(1) == 3 and tower.dimension(2) == 2
        assert tower.rate(1) == 0.75 and tower.rate(3) == 0.0
        outer = tower.code(1)
        assert all(outer.contains(c) for c in tower.code(2).codewords())

    def test_dependent_blocks_rejected(self, binary):
        """Test blocks whose stack is rank deficient raise."""
        with pytest.raises(CodeConstructionError):
            NestedTower(binary, [[[1, 1, 0]], [[1, 1, 0]]])

    def test_direct_sum_split_round_trip(self, binary):
        """Test split then compose on every codeword of a [10,6] tower."""
        G = hamming_code(4, 10).generator
        tower = NestedTower(binary, [G[:2], G[2:4], G[4:]])
        for c in tower.code(1).codewords():
            parts = direct_sum_split(tower, c)
            assert [p.shape[0] for p in parts] == [2, 2, 2]
            np.testing.assert_array_equal(tower.compose(parts), c)

    def test_split_at_inner_level(self, binary):
        """Test splitting a codeword of A_2 yields only levels 2..m."""
        G = hamming_code(4, 10).generator
        tower = NestedTower(binary, [G[:3], G[3:]])
        c = tower.compose([np.array([1, 0, 1])], level=2)
        parts = tower.split(c, level=2)
        assert len(parts) == 1
        np.testing.assert_array_equal(parts[0], [1, 0, 1])

    def test_split_rejects_non_codeword(self, binary):
        """Test words outside A_level raise."""
        tower = NestedTower(binary, [[[1, 1, 0]]])
        with pytest.raises(ValueError, match="not a codeword"):
            tower.split([1, 0, 0])

    def test_build_tower_meets_targets(self, binary):
        """Test the random search reaches the requested nested distances."""
        tower = build_tower(binary, 10, [3, 3], [3, 4], trials=500, seed=3)
        distances = tower.distances()
        assert distances[0] >= 3 and distances[1] >= 4
        assert tower.level_dims == [3, 3]

    def test_build_tower_impossible_target(self, binary):
        """Test an unreachable target reports the best distances."""
        with pytest.raises(TowerSearchError) as info:
            build_tower(binary, 6, [3], [6], trials=20, seed=1)
        assert info.value.best_distances[0] < 6


class TestReedSolomon:
    """Test the algebraic RS decoder and GMD."""

    @pytest.mark.parametrize('n,k', [(7, 3), (7, 5), (6, 2), (5, 4)])
    def test_distance_is_mds(self, gf8, n, k):
        """Test brute-force distance equals n - k + 1."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, n, k)
        assert LinearCode(gf8, rs.generator).min_distance() == n - k + 1

    def test_all_ones_first_row(self, gf8):
        """Test message (1, 0, 0) encodes to the all-ones word."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, 7, 3)
        np.testing.assert_array_equal(rs.encode([1, 0, 0]), np.ones(7))

    def test_invalid_parameters(self, gf8):
        """Test n beyond q - 1 raises."""
        from codes.reed_solomon import ReedSolomonCode
        with pytest.raises(CodeConstructionError):
            ReedSolomonCode(gf8, 8, 3)

    def test_syndromes_vanish_on_codewords(self, gf8, rng):
        """Test codewords have zero syndromes."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, 7, 3)
        for _ in range(10):
            assert not any(rs.syndromes(rs.encode(rng.integers(0, 8, size=3))))

    def test_corrects_every_double_error(self, gf8, rng):
        """Test every error pattern of weight <= 2 on RS[7,3]."""
        from codes.reed_solomon import ReedSolomonCode, rs_decode_ee
        rs = ReedSolomonCode(gf8, 7, 3)
        word = rs.encode(rng.integers(0, 8, size=3))
        for i, j in itertools.combinations(range(7), 2):
            for a in range(1, 8):
                for b in range(8):
                    received = word.copy()
                    received[i] ^= a
                    received[j] ^= b
                    np.testing.assert_array_equal(rs_decode_ee(rs, received, []), word)

    def test_errors_and_erasures(self, gf8, rng):
        """Test one error plus two erasures on RS[7,3]."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, 7, 3)
        word = rs.encode([3, 1, 6])
        received = word.copy()
        received[0] ^= 5
        received[[2, 4]] = 0
        np.testing.assert_array_equal(rs.decode_erasures(received, [2, 4]), word)

    def test_too_many_erasures(self, gf8):
        """Test s > n - k refuses."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, 7, 3)
        assert rs.decode_erasures(np.zeros(7, dtype=np.int64), [0, 1, 2, 3, 4]) is None

    def test_agrees_with_enumeration(self, gf8, rng):
        """Test RS errors-and-erasures against the brute-force decoder."""
        from codes.reed_solomon import ReedSolomonCode
        rs = ReedSolomonCode(gf8, 7, 3)
        plain = LinearCode(gf8, rs.generator)
        for _ in range(60):
            received = rng.integers(0, 8, size=7)
            erasures = list(rng.choice(7, size=int(rng.integers(0, 5)), replace=False))
            expected = plain.decode_erasures(received, erasures)
            actual = rs.decode_erasures(received, erasures)
            if expected is None:
                assert actual is None
            else:
                np.testing.assert_array_equal(actual, expected)

    def test_gmd_matches_enumeration_oracle(self, gf8, rng):
        """Test GMD with the RS decoder equals GMD with the enumeration decoder."""
        from codes.reed_solomon import ReedSolomonCode, gmd_decode
        rs = ReedSolomonCode(gf8, 7, 3)
        plain = LinearCode(gf8, rs.generator)
        for _ in range(40):
            received = rng.integers(0, 8, size=7)
            weights = rng.integers(0, 4, size=7)
            fast = gmd_decode(rs, received, weights)
            slow = gmd_decode(plain, received, weights)
            assert fast.success == slow.success
            if fast.success:
                np.testing.assert_array_equal(fast.codeword, slow.codeword)
                assert fast.erasures == slow.erasures

    def test_gmd_uses_reliabilities(self, gf8):
        """Test three unreliable errors on RS[7,3] are corrected by erasing them."""
        from codes.reed_solomon import ReedSolomonCode, gmd_criterion, gmd_decode
        rs = ReedSolomonCode(gf8, 7, 3)
        word = rs.encode([1, 2, 3])
        received = word.copy()
        received[[1, 3, 5]] ^= 4
        weights = np.ones(7)
        weights[[1, 3, 5]] = 0.1
        result = gmd_decode(rs, received, weights)
        np.testing.assert_array_equal(result.codeword, word)
        assert result.erasures in (2, 4)
        assert result.discrepancy == pytest.approx(0.3)
        assert gmd_criterion(rs, received, weights, word)

    def test_gmd_validates_reliabilities(self, gf8):
        """Test negative or misshaped reliabilities raise."""
        from codes.reed_solomon import ReedSolomonCode, gmd_decode
        rs = ReedSolomonCode(gf8, 7, 3)
        with pytest.raises(ValueError, match="reliabilities"):
            gmd_decode(rs, np.zeros(7), np.ones(6))
        with pytest.raises(ValueError, match="nonnegative"):
            gmd_decode(rs, np.zeros(7), -np.ones(7))
