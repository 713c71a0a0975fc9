"""Generator family structure and invariant checks."""
from __future__ import annotations

import numpy as np
import pytest

from concbound.errors import DimensionTooSmallError, InvalidSplitError, ParameterRangeError
from concbound.generators import (
    Bipartition,
    bipartite_generators,
    canonical_triple,
    example_operators,
    so_generators,
    tripartite_generators,
)
from concbound.states import random_pure


def random_product_vector(rng, dims):
    parts = []
    for d in dims:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        parts.append(v / np.linalg.norm(v))
    vec = parts[0]
    for v in parts[1:]:
        vec = np.kron(vec, v)
    return vec


class TestBipartition:
    def test_label(self):
        assert Bipartition.single(1, 3).label == "2|13"
        assert Bipartition((0,), (1,)).label == "1|2"

    def test_rejects_bad_partitions(self):
        with pytest.raises(InvalidSplitError):
            Bipartition((0,), ())
        with pytest.raises(InvalidSplitError):
            Bipartition((0, 1), (1, 2))
        with pytest.raises(InvalidSplitError):
            Bipartition((0,), (2,))


class TestSoGenerators:
    def test_minimal_dimension(self):
        gens = so_generators(2)
        assert len(gens) == 1
        assert np.array_equal(gens[0], [[0.0, 1.0], [-1.0, 0.0]])

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_count_and_antisymmetry(self, d):
        gens = so_generators(d)
        assert len(gens) == d * (d - 1) // 2
        for g in gens:
            assert np.array_equal(g, -g.T)

    def test_rejects_trivial_dimension(self):
        with pytest.raises(DimensionTooSmallError):
            so_generators(1)


class TestBipartiteGenerators:
    @pytest.mark.parametrize(
        "m,n,count", [(2, 2, 1), (3, 3, 9), (2, 3, 3), (3, 4, 18)]
    )
    def test_counts(self, m, n, count):
        gens = bipartite_generators(m, n)
        assert gens.count == count == m * n * (m - 1) * (n - 1) // 4

    def test_symmetry_is_exact(self):
        for op in bipartite_generators(3, 3).operators:
            assert np.array_equal(op, op.T)

    def test_trace_orthogonality(self):
        ops = bipartite_generators(2, 3).operators
        for s in range(len(ops)):
            for t in range(len(ops)):
                inner = np.trace(ops[s].conj().T @ ops[t])
                assert abs(inner - (4.0 if s == t else 0.0)) < 1e-14

    def test_index_map_matches_operators(self):
        gens = bipartite_generators(3, 2)
        for op, ((i, j), (k, l)) in zip(gens.operators, gens.index_map):
            left = np.zeros((3, 3))
            left[i, j], left[j, i] = 1.0, -1.0
            right = np.zeros((2, 2))
            right[k, l], right[l, k] = 1.0, -1.0
            assert np.array_equal(op, np.kron(left, right))

    @pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 3)])
    def test_product_states_have_null_expectation(self, dims):
        rng = np.random.default_rng(101)
        gens = bipartite_generators(*dims)
        for _ in range(20):
            vec = random_product_vector(rng, dims)
            conj = vec.conj()
            for op in gens.operators:
                assert abs(conj @ (op @ conj)) < 1e-12


class TestTripartiteGenerators:
    def test_qubit_count(self):
        for s in range(3):
            assert tripartite_generators(2, s).count == 6

    def test_split_labels(self):
        assert tripartite_generators(2, 0).split == "1|23"
        assert tripartite_generators(2, 1).split == "2|13"
        assert tripartite_generators(2, 2).split == "3|12"

    def test_accepts_bipartition(self):
        gens = tripartite_generators(2, Bipartition.single(2, 3))
        assert gens.split == "3|12"

    def test_rejects_bad_splits(self):
        with pytest.raises(InvalidSplitError):
            tripartite_generators(2, 3)
        with pytest.raises(InvalidSplitError):
            tripartite_generators(2, Bipartition((0, 1), (2,)))
        with pytest.raises(DimensionTooSmallError):
            tripartite_generators(1, 0)

    def test_middle_split_orders_pair_ascending(self):
        # For split 2|13 the pair space carries parties (1, 3) in that
        # order: the generator |00><01| - ... on the pair couples basis
        # kets via the third party, never the first.
        gens = tripartite_generators(2, 1)
        # single generator on party 1 is fixed; pair generator (0, 1)
        # acts between pair kets |x0 x2> = |00> and |01>, i.e. full kets
        # differing in the third party only.
        op = gens.operators[0]  # ((0,1) on single, (0,1) on pair)
        # <000|J|010>: single flips party 1 (0->1 amplitude 1), pair
        # maps |x0 x2>=|00> -> |00>? no: pair (0,1) generator sends
        # |01> -> |00>; so <0 1 0|J|0 0 1> should be nonzero.
        idx = lambda a, b, c: 4 * a + 2 * b + c
        assert op[idx(0, 1, 0), idx(0, 0, 1)] != 0.0
        # and nothing couples through the first party for this operator
        assert op[idx(1, 1, 0), idx(0, 0, 1)] == 0.0

    def test_symmetry_and_product_nullity(self):
        rng = np.random.default_rng(211)
        for s in range(3):
            gens = tripartite_generators(2, s)
            for op in gens.operators:
                assert np.array_equal(op, op.T)
            for _ in range(10):
                vec = random_product_vector(rng, (2, 2, 2))
                conj = vec.conj()
                for op in gens.operators:
                    assert abs(conj @ (op @ conj)) < 1e-12


class TestExampleOperators:
    def test_family_validation(self):
        with pytest.raises(ParameterRangeError):
            example_operators("cluster")

    def test_counts_and_symmetry(self):
        for fam in ("ghz", "w"):
            triple = example_operators(fam)
            assert triple.count == 1
            assert triple.source == fam
            for ops in triple.operators:
                assert np.array_equal(ops[0], ops[0].T)

    def test_w_operators_annihilate_topmost_ket(self):
        triple = example_operators("w")
        top = np.zeros(8)
        top[7] = 1.0
        for ops in triple.operators:
            assert np.max(np.abs(ops[0] @ top)) == 0.0

    def test_ghz_first_split_matrix_elements(self):
        # S x L with S on party 1 and L = |00><11| - |11><00| on (2,3):
        # couples |0 x y> with |1 x' y'> where (x,y),(x',y') in {00,11}.
        op = example_operators("ghz").operators[0][0]
        idx = lambda a, b, c: 4 * a + 2 * b + c
        assert op[idx(0, 0, 0), idx(1, 1, 1)] == 1.0
        assert op[idx(1, 1, 1), idx(0, 0, 0)] == 1.0
        assert op[idx(0, 1, 1), idx(1, 0, 0)] == -1.0

    def test_product_nullity(self):
        rng = np.random.default_rng(307)
        for fam in ("ghz", "w"):
            triple = example_operators(fam)
            for _ in range(10):
                vec = random_product_vector(rng, (2, 2, 2))
                conj = vec.conj()
                for ops in triple.operators:
                    assert abs(conj @ (ops[0] @ conj)) < 1e-12


class TestCanonicalTriple:
    def test_alignment(self):
        triple = canonical_triple(2)
        assert triple.count == 6
        assert triple.source == "canonical"
        assert len(triple.operators) == 3
