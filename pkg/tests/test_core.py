import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipartite_sampler import (
    BipartiteNetwork,
    DegreeSequencePair,
    InvalidInputError,
    canonical_key,
    degree_sequences,
    distance,
    enumerate_universe,
    is_realizable,
)
from bipartite_sampler.errors import UniverseTooLargeError


def matrices(max_rows=5, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: st.lists(
            st.lists(st.integers(0, 1), min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0]
        )
    )


def brute_force_distance(a, b):
    ma, mb = a.to_matrix(), b.to_matrix()
    diff = sum(int(ma[i, j] != mb[i, j]) for i in range(a.top_count) for j in range(a.bottom_count))
    return Fraction(diff, a.top_count * a.bottom_count)


class TestDistance:
    def test_identity(self, network_b):
        assert distance(network_b, network_b.copy()) == 0

    def test_reference_a(self, network_b, network_a):
        assert distance(network_b, network_a) == Fraction(4, 9)

    def test_reference_c(self, network_b, network_c):
        assert distance(network_b, network_c) == Fraction(6, 9)

    def test_complete_disagreement(self):
        full = BipartiteNetwork(3, 3, [[0, 1, 2]] * 3)
        empty = BipartiteNetwork(3, 3)
        assert distance(full, empty) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            distance(BipartiteNetwork(2, 3), BipartiteNetwork(3, 2))

    @given(matrices(), st.data())
    def test_matches_cellwise_count(self, m, data):
        m2 = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=len(m[0]), max_size=len(m[0])),
                                min_size=len(m), max_size=len(m)))
        a, b = BipartiteNetwork.from_matrix(m), BipartiteNetwork.from_matrix(m2)
        assert distance(a, b) == brute_force_distance(a, b)

    @given(matrices(4, 4), st.data())
    def test_metric_axioms(self, m, data):
        shape = (len(m), len(m[0]))
        other = st.lists(st.lists(st.integers(0, 1), min_size=shape[1], max_size=shape[1]),
                         min_size=shape[0], max_size=shape[0])
        a = BipartiteNetwork.from_matrix(m)
        b = BipartiteNetwork.from_matrix(data.draw(other))
        c = BipartiteNetwork.from_matrix(data.draw(other))
        assert distance(a, a) == 0
        assert distance(a, b) == distance(b, a)
        assert distance(a, c) <= distance(a, b) + distance(b, c)
        assert (distance(a, b) == 0) == (a == b)


def test_equal_margin_differences_are_even():
    pair = DegreeSequencePair([2, 2, 3], [1, 1, 1, 2, 2])
    members = enumerate_universe(pair).members
    for a, b in itertools.combinations(members, 2):
        cells = distance(a, b) * 15
        assert cells.denominator == 1 and cells.numerator % 2 == 0


class TestCanonicalKey:
    def test_empty(self):
        key = canonical_key(BipartiteNetwork(2, 2))
        assert key.bitstring() == "0000"

    def test_diagonal(self):
        assert canonical_key(BipartiteNetwork(2, 2, [[0], [1]])).bitstring() == "1001"

    def test_copy_has_same_key(self, network_b):
        assert canonical_key(network_b) == canonical_key(network_b.copy())
        assert hash(canonical_key(network_b)) == hash(canonical_key(network_b.copy()))

    @given(matrices(), matrices())
    def test_equal_iff_same_matrix(self, m1, m2):
        a, b = BipartiteNetwork.from_matrix(m1), BipartiteNetwork.from_matrix(m2)
        same = np.array_equal(np.array(m1), np.array(m2))
        assert (canonical_key(a) == canonical_key(b)) == same


class TestDegreeSequences:
    def test_small(self):
        pair = degree_sequences(BipartiteNetwork(2, 3, [[0, 1], [1]]))
        assert pair.top == (2, 1)
        assert pair.bottom == (1, 2, 0)

    def test_small_exact_width(self):
        pair = degree_sequences(BipartiteNetwork(2, 2, [[0, 1], [1]]))
        assert (pair.top, pair.bottom) == ((2, 1), (1, 2))

    def test_reference_network_b(self, network_b):
        pair = degree_sequences(network_b)
        assert (pair.top, pair.bottom) == ((1, 2, 1), (1, 2, 1))

    def test_empty(self):
        pair = degree_sequences(BipartiteNetwork(3, 2))
        assert (pair.top, pair.bottom) == ((0, 0, 0), (0, 0))

    @given(matrices(), st.randoms())
    def test_neighbor_order_irrelevant(self, m, rnd):
        net = BipartiteNetwork.from_matrix(m)
        shuffled = [list(n) for n in net.neighbors]
        for n in shuffled:
            rnd.shuffle(n)
        assert degree_sequences(BipartiteNetwork(net.top_count, net.bottom_count, shuffled)) == degree_sequences(net)


class TestNetworkValidation:
    def test_rejects_duplicates(self):
        with pytest.raises(InvalidInputError):
            BipartiteNetwork(1, 3, [[1, 1]])

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            BipartiteNetwork(1, 2, [[2]])

    def test_sorts_neighbors(self):
        assert BipartiteNetwork(1, 4, [[3, 0, 2]]).neighbors == [[0, 2, 3]]

    def test_negative_degree_rejected(self):
        with pytest.raises(InvalidInputError):
            DegreeSequencePair([-1], [1])

    def test_parse_pair(self):
        assert DegreeSequencePair.parse("1,1,2;1,1,2") == DegreeSequencePair([1, 1, 2], [1, 1, 2])
        with pytest.raises(InvalidInputError):
            DegreeSequencePair.parse("1,2")


class TestRealizable:
    def test_toy(self):
        assert is_realizable(DegreeSequencePair([1, 1, 2], [1, 1, 2]))

    def test_sum_mismatch(self):
        assert not is_realizable(DegreeSequencePair([2], [1]))

    def test_degree_exceeds_other_side(self):
        assert not is_realizable(DegreeSequencePair([3], [1, 1]))

    def test_empty_margins(self):
        assert is_realizable(DegreeSequencePair([0, 0], [0]))

    @settings(max_examples=300)
    @given(
        st.lists(st.integers(0, 4), min_size=1, max_size=4),
        st.lists(st.integers(0, 4), min_size=1, max_size=4),
    )
    def test_agrees_with_enumeration(self, top, bottom):
        pair = DegreeSequencePair(top, bottom)
        try:
            found = enumerate_universe(pair, cap=1).cardinality >= 1
        except UniverseTooLargeError:
            found = True
        assert is_realizable(pair) == found
