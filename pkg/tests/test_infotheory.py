import itertools
import math

import numpy as np
import pytest

from hyperharmonic import (
    EntropyOracle,
    GaussianModel,
    MeasureKind,
    ValidationError,
    dual_total_correlation,
    enumerate_simplices,
    interaction_information,
    mutual_information,
    o_information,
    s_information,
    signal_sweep,
    total_correlation,
)
from hyperharmonic.infotheory import sweep_to_csv, sweep_to_json

import bruteforce as bf
from conftest import (
    bit_copy,
    correlated_pair,
    independent_bits,
    product_distribution,
    random_pmf,
    xor_triple,
)


class TestOracle:
    def test_empty_subset_is_zero(self):
        dist, _ = xor_triple()
        assert EntropyOracle(dist).entropy(()) == 0.0

    def test_subset_order_irrelevant(self):
        dist, _ = xor_triple()
        oracle = EntropyOracle(dist)
        assert oracle.entropy((2, 0)) == oracle.entropy((0, 2))

    def test_monotone_under_inclusion(self):
        dist, _ = random_pmf(np.random.default_rng(0), (2, 3, 2))
        oracle = EntropyOracle(dist)
        for small, large in [((0,), (0, 1)), ((1,), (0, 1, 2)), ((0, 2), (0, 1, 2))]:
            assert oracle.entropy(small) <= oracle.entropy(large) + 1e-10

    def test_cache_is_bounded_by_subset_count(self):
        dist, _ = xor_triple()
        oracle = EntropyOracle(dist)
        for size in (1, 2, 3):
            for s in itertools.combinations(range(3), size):
                oracle.entropy(s)
                oracle.entropy(s)
        assert len(oracle._cache) == 7

    def test_rejects_duplicates(self):
        dist, _ = xor_triple()
        with pytest.raises(ValidationError):
            EntropyOracle(dist).entropy((0, 0))

    def test_gaussian_backend(self):
        model = GaussianModel(correlation_matrix=np.eye(3))
        oracle = EntropyOracle(model)
        single = 0.5 * math.log2(2 * math.pi * math.e)
        assert oracle.entropy((0, 1, 2)) == pytest.approx(3 * single, abs=1e-9)

    def test_degenerate_gaussian_flags_regularized_subsets(self):
        R = np.array([
            [1.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ])
        oracle = EntropyOracle(GaussianModel(correlation_matrix=R))
        value = oracle.entropy((0, 1))
        assert np.isfinite(value)
        assert (0, 1) in oracle.regularized_subsets
        oracle.entropy((0, 2))
        assert (0, 2) not in oracle.regularized_subsets

    def test_concurrent_queries_match_serial(self):
        import concurrent.futures

        dist, _ = random_pmf(np.random.default_rng(55), (2, 2, 2, 2))
        serial_oracle = EntropyOracle(dist)
        serial = signal_sweep(serial_oracle, 3, 2, MeasureKind.S_INFORMATION)
        shared = EntropyOracle(dist)
        with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
            futures = [
                pool.submit(signal_sweep, shared, 3, 2, MeasureKind.S_INFORMATION)
                for _ in range(8)
            ]
            results = [f.result() for f in futures]
        for got in results:
            assert np.array_equal(got, serial)


class TestPinnedValues:
    def test_xor(self):
        dist, _ = xor_triple()
        oracle = EntropyOracle(dist)
        assert mutual_information(oracle, 0, 1) == 0.0
        assert mutual_information(oracle, 0, 2) == 0.0
        assert total_correlation(oracle, (0, 1, 2)) == 1.0
        assert dual_total_correlation(oracle, (0, 1, 2)) == 2.0
        assert o_information(oracle, (0, 1, 2)) == -1.0
        assert s_information(oracle, (0, 1, 2)) == 3.0
        assert interaction_information(oracle, (0, 1, 2)) == -1.0

    def test_three_bit_copy(self):
        dist, _ = bit_copy(3)
        oracle = EntropyOracle(dist)
        assert total_correlation(oracle, (0, 1, 2)) == 2.0
        assert dual_total_correlation(oracle, (0, 1, 2)) == 1.0
        assert o_information(oracle, (0, 1, 2)) == 1.0
        assert s_information(oracle, (0, 1, 2)) == 3.0

    def test_copied_coin_mi(self):
        dist, _ = bit_copy(2)
        assert mutual_information(EntropyOracle(dist), 0, 1) == 1.0

    def test_independent_bits_all_zero(self):
        dist, _ = independent_bits(3)
        oracle = EntropyOracle(dist)
        assert mutual_information(oracle, 0, 1) == 0.0
        assert total_correlation(oracle, (0, 1, 2)) == 0.0
        assert dual_total_correlation(oracle, (0, 1, 2)) == 0.0
        assert s_information(oracle, (0, 1, 2)) == 0.0
        assert interaction_information(oracle, (0, 1, 2)) == 0.0

    def test_two_variable_interaction_equals_mi(self):
        dist, _ = random_pmf(np.random.default_rng(7), (3, 2))
        oracle = EntropyOracle(dist)
        assert interaction_information(oracle, (0, 1)) == pytest.approx(
            mutual_information(oracle, 0, 1), abs=1e-12
        )

    def test_mi_rejects_equal_indices(self):
        dist, _ = xor_triple()
        with pytest.raises(ValidationError):
            mutual_information(EntropyOracle(dist), 1, 1)

    def test_minimum_subset_sizes(self):
        dist, _ = xor_triple()
        oracle = EntropyOracle(dist)
        with pytest.raises(ValidationError):
            total_correlation(oracle, (0,))
        with pytest.raises(ValidationError):
            o_information(oracle, (0, 1))


MEASURE_PAIRS = [
    (total_correlation, bf.tc_bits, 2),
    (dual_total_correlation, bf.dtc_bits, 2),
    (o_information, bf.o_information_bits, 3),
    (s_information, bf.s_information_bits, 2),
    (interaction_information, bf.interaction_information_bits, 2),
]


def assert_matches_bruteforce(dist, dense):
    oracle = EntropyOracle(dist)
    k = dense.ndim
    for fn, ref, min_size in MEASURE_PAIRS:
        for size in range(min_size, k + 1):
            for subset in itertools.combinations(range(k), size):
                assert fn(oracle, subset) == pytest.approx(
                    ref(dense, subset), abs=1e-10
                ), f"{fn.__name__} on {subset}"


class TestBruteForceEquivalence:
    def test_xor(self):
        assert_matches_bruteforce(*xor_triple())

    def test_copies(self):
        assert_matches_bruteforce(*bit_copy(3))
        assert_matches_bruteforce(*bit_copy(4))

    def test_independent(self):
        assert_matches_bruteforce(*independent_bits(4))

    def test_pair_product(self):
        assert_matches_bruteforce(
            *product_distribution(correlated_pair(), correlated_pair(0.3, 0.2, 0.2, 0.3))
        )

    def test_random_pmfs(self):
        rng = np.random.default_rng(123)
        for trial in range(20):
            shape = (2,) * int(rng.integers(3, 5))
            dist, dense = random_pmf(rng, shape)
            assert_matches_bruteforce(dist, dense)


class TestAxioms:
    def test_permutation_symmetry(self):
        dist, dense = random_pmf(np.random.default_rng(9), (2, 2, 2, 2))
        oracle = EntropyOracle(dist)
        reference = o_information(oracle, (0, 1, 3))
        assert o_information(oracle, (3, 0, 1)) == reference
        assert o_information(oracle, (1, 3, 0)) == reference

    def test_o_information_bounded_by_s(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            dist, _ = random_pmf(rng, (2, 2, 2))
            oracle = EntropyOracle(dist)
            assert abs(o_information(oracle, (0, 1, 2))) <= s_information(
                oracle, (0, 1, 2)
            ) + 1e-10

    def test_additive_over_products(self):
        xor_dense = xor_triple()[1]
        copy_dense = bit_copy(3)[1]
        dist, _ = product_distribution(xor_dense, copy_dense)
        oracle = EntropyOracle(dist)
        combined = o_information(oracle, tuple(range(6)))
        xor_alone = o_information(EntropyOracle(xor_triple()[0]), (0, 1, 2))
        copy_alone = o_information(EntropyOracle(bit_copy(3)[0]), (0, 1, 2))
        assert combined == pytest.approx(xor_alone + copy_alone, abs=1e-10)

    def test_pairwise_factorised_nullity(self):
        pair = correlated_pair()
        two_pairs, _ = product_distribution(pair, correlated_pair(0.25, 0.25, 0.1, 0.4))
        assert o_information(EntropyOracle(two_pairs), (0, 1, 2, 3)) == pytest.approx(
            0.0, abs=1e-10
        )
        three_pairs, _ = product_distribution(pair, pair, correlated_pair(0.5, 0.1, 0.1, 0.3))
        assert o_information(
            EntropyOracle(three_pairs), tuple(range(6))
        ) == pytest.approx(0.0, abs=1e-10)

    def test_chain_rule_for_s_information(self):
        dist, _ = random_pmf(np.random.default_rng(31), (2, 2, 2, 2))
        oracle = EntropyOracle(dist)
        subset = (0, 1, 2, 3)
        total = s_information(oracle, subset)
        chain = 0.0
        for i in subset:
            rest = tuple(j for j in subset if j != i)
            chain += oracle.entropy((i,)) + oracle.entropy(rest) - oracle.entropy(subset)
        assert total == pytest.approx(chain, abs=1e-10)


class TestSignalSweep:
    def test_single_subset(self):
        dist, _ = xor_triple()
        values = signal_sweep(EntropyOracle(dist), 2, 2, MeasureKind.O_INFORMATION)
        assert values.shape == (1,)
        assert values[0] == -1.0

    def test_independent_gives_zero_vector(self):
        dist, _ = independent_bits(4)
        values = signal_sweep(EntropyOracle(dist), 3, 2, MeasureKind.TC)
        assert values.shape == (4,)
        assert np.max(np.abs(values)) <= 1e-10

    def test_order_matches_simplex_enumeration(self):
        dist, dense = random_pmf(np.random.default_rng(2), (2, 2, 2, 2))
        oracle = EntropyOracle(dist)
        values = signal_sweep(oracle, 3, 2, MeasureKind.S_INFORMATION)
        subsets = enumerate_simplices(3, 2)
        assert subsets == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        for subset, value in zip(subsets, values):
            assert value == pytest.approx(s_information(oracle, subset), abs=1e-12)

    def test_rejects_low_dimension_for_o_information(self):
        dist, _ = xor_triple()
        with pytest.raises(ValidationError):
            signal_sweep(EntropyOracle(dist), 2, 1, MeasureKind.O_INFORMATION)

    def test_exports(self, tmp_path):
        dist, _ = xor_triple()
        oracle = EntropyOracle(dist)
        values = signal_sweep(oracle, 2, 1, MeasureKind.TC)
        csv_path = tmp_path / "sweep.csv"
        json_path = tmp_path / "sweep.json"
        sweep_to_csv(csv_path, 2, 1, values)
        sweep_to_json(json_path, 2, 1, MeasureKind.TC, values)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "simplex,value"
        assert lines[1].startswith("0-1,")
        assert '"measure": "tc"' in json_path.read_text()
