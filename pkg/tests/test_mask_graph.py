import numpy as np
import pytest

import r1complete as r1
from r1complete.errors import InputError

from conftest import brute_components, partition_sets, random_connected_mask

K22 = r1.Mask(2, 2, ((0, 0), (0, 1), (1, 0), (1, 1)))


class TestMask:
    def test_out_of_range_rejected(self):
        with pytest.raises(InputError):
            r1.Mask(2, 2, ((0, 2),))
        with pytest.raises(InputError):
            r1.Mask(2, 2, ((-1, 0),))

    def test_duplicates_rejected(self):
        with pytest.raises(InputError):
            r1.Mask(2, 2, ((0, 0), (0, 0)))

    def test_nonpositive_shape_rejected(self):
        with pytest.raises(InputError):
            r1.Mask(0, 3)

    def test_known_normalized_row_major(self):
        mask = r1.Mask(3, 3, ((2, 1), (0, 2), (0, 1)))
        assert mask.known == ((0, 1), (0, 2), (2, 1))

    def test_dense_roundtrip(self):
        mask = r1.Mask(2, 3, ((0, 1), (1, 2)))
        assert r1.Mask.from_dense(mask.to_dense()) == mask
        assert (0, 1) in mask and (1, 1) not in mask


class TestBuildGraph:
    def test_full_2x2_is_connected(self):
        g = r1.build_graph(K22)
        assert g.num_edges == 4
        assert g.num_components == 1

    def test_single_edge_three_components(self):
        g = r1.build_graph(r1.Mask(2, 2, ((0, 0),)))
        assert g.num_components == 3
        comp = g.component_id
        assert comp[0] == comp[2]            # row 0 with column 0
        assert len({int(c) for c in comp}) == 3

    def test_paper_scale_mask(self):
        mask = r1.sample_mask(50, 50, 200, seed=3)
        g = r1.build_graph(mask)
        assert g.num_vertices == 100
        assert g.num_edges == 200

    def test_empty_mask_edgeless(self):
        g = r1.build_graph(r1.Mask(3, 4))
        assert g.num_edges == 0
        assert g.num_components == 7

    def test_components_match_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
            k = int(rng.integers(0, m * n + 1))
            mask = r1.sample_mask(m, n, k, int(rng.integers(2 ** 31)))
            g = r1.build_graph(mask)
            oracle = brute_components(m, n, mask.known)
            assert partition_sets(g.component_id) == partition_sets(
                [oracle[v] for v in range(m + n)])

    def test_rebuild_gives_same_partition(self):
        mask = r1.sample_mask(10, 8, 25, seed=5)
        a = r1.build_graph(mask).component_id
        b = r1.build_graph(mask).component_id
        assert partition_sets(a) == partition_sets(b)

    def test_edge_order_is_row_major(self):
        mask = r1.Mask(3, 3, ((2, 0), (0, 1), (1, 2)))
        g = r1.build_graph(mask)
        assert [tuple(e) for e in g.edges] == [(0, 1), (1, 2), (2, 0)]
        assert g.edge_id(1, 2) == 1
        assert g.edge_id(1, 1) is None


class TestIsReconstructible:
    def test_closing_entry_of_a_cycle(self):
        g = r1.build_graph(r1.Mask(2, 2, ((0, 0), (0, 1), (1, 0))))
        assert r1.is_reconstructible(g, (1, 1))

    def test_disconnected_entry(self):
        g = r1.build_graph(r1.Mask(2, 2, ((0, 0),)))
        assert not r1.is_reconstructible(g, (1, 1))

    def test_diagonal_mask_stays_disjoint(self):
        known = ((0, 0), (1, 1), (2, 2))
        g = r1.build_graph(r1.Mask(3, 3, known))
        oracle = brute_components(3, 3, known)
        assert oracle[0] != oracle[3 + 1]
        assert not r1.is_reconstructible(g, (0, 1))

    def test_out_of_range_raises(self):
        g = r1.build_graph(K22)
        with pytest.raises(InputError):
            r1.is_reconstructible(g, (2, 0))


class TestReconstructibleSet:
    def test_connected_gives_all_pairs(self):
        rng = np.random.default_rng(2)
        mask = random_connected_mask(rng, 4, 5)
        g = r1.build_graph(mask)
        assert r1.reconstructible_set(g) == {(i, j)
                                             for i in range(4)
                                             for j in range(5)}

    def test_component_product_count(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m, n = int(rng.integers(2, 8)), int(rng.integers(2, 8))
            k = int(rng.integers(0, m * n))
            mask = r1.sample_mask(m, n, k, int(rng.integers(2 ** 31)))
            g = r1.build_graph(mask)
            oracle = brute_components(m, n, mask.known)
            expected = set()
            for i in range(m):
                for j in range(n):
                    if oracle[i] == oracle[m + j]:
                        expected.add((i, j))
            got = r1.reconstructible_set(g)
            assert got == expected
            assert got >= set(mask.known)
            for i in range(m):
                for j in range(n):
                    assert r1.is_reconstructible(g, (i, j)) == ((i, j) in got)

    def test_edgeless_graph_empty(self):
        g = r1.build_graph(r1.Mask(3, 3))
        assert r1.reconstructible_set(g) == set()
