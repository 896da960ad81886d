import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from myocoach.tilecoding import TileCoderConfig, build_tilecoder, sparse_dot

from .oracles import brute_force_tile_count

PAPER_CONFIG = TileCoderConfig(num_tilings=5, resolutions=(3, 5, 8),
                               state_dims=2, include_baseline=True)


class TestConstruction:
    def test_paper_config_feature_count(self):
        coder = build_tilecoder(PAPER_CONFIG)
        assert coder.total_dim == 491
        assert coder.num_active == 16

    def test_degenerate_single_tile(self):
        coder = build_tilecoder(TileCoderConfig(num_tilings=1, resolutions=(1,),
                                                state_dims=2, include_baseline=False))
        assert coder.total_dim == 1

    def test_small_config_count(self):
        coder = build_tilecoder(TileCoderConfig(num_tilings=2, resolutions=(2,),
                                                state_dims=2, include_baseline=True))
        assert coder.total_dim == 2 * 4 + 1 == 9

    @given(num_tilings=st.integers(1, 6), resolutions=st.lists(st.integers(1, 9), min_size=1, max_size=3),
           dims=st.integers(1, 3), baseline=st.booleans())
    def test_count_matches_enumeration(self, num_tilings, resolutions, dims, baseline):
        coder = build_tilecoder(TileCoderConfig(num_tilings, tuple(resolutions), dims, baseline))
        assert coder.total_dim == brute_force_tile_count(num_tilings, resolutions, dims, baseline)

    @pytest.mark.parametrize("kwargs", [
        dict(num_tilings=0), dict(resolutions=()), dict(resolutions=(3, 0)),
        dict(state_dims=0),
    ])
    def test_invalid_config_rejected(self, kwargs):
        with pytest.raises(ValueError):
            TileCoderConfig(**kwargs)


class TestEncode:
    def test_constant_cardinality_random_states(self):
        coder = build_tilecoder(PAPER_CONFIG)
        rng = np.random.default_rng(0)
        for _ in range(2000):
            f = coder.encode(rng.random(2))
            assert len(f.active_indices) == 16
            assert len(set(f.active_indices)) == 16
            assert all(0 <= i < 491 for i in f.active_indices)

    def test_origin_hits_corner_tiles(self):
        coder = build_tilecoder(PAPER_CONFIG)
        f = coder.encode((0.0, 0.0))
        # every tiling grid extends below the origin, so all corner tiles fire
        block_starts = [offset for offset, _ in coder._block_offsets]
        assert list(f.active_indices) == block_starts + [490]
        assert coder.baseline_index == 490

    def test_quadrant_membership(self):
        coder = build_tilecoder(TileCoderConfig(num_tilings=1, resolutions=(2,),
                                                state_dims=2, include_baseline=False))
        f = coder.encode((0.9, 0.9))
        assert f.active_indices == (3,)  # tile (1, 1) of the 2x2 grid, row-major

    def test_encode_is_pure(self):
        coder = build_tilecoder(PAPER_CONFIG)
        assert coder.encode((0.37, 0.62)) == coder.encode((0.37, 0.62))

    def test_out_of_range_inputs_clamped(self):
        coder = build_tilecoder(PAPER_CONFIG)
        assert coder.encode((-0.3, 1.7)) == coder.encode((0.0, 1.0))
        # 1.0 lands in the last tile, not out of range
        top = coder.encode((1.0, 1.0))
        assert all(0 <= i < 491 for i in top.active_indices)

    def test_wrong_dimensionality_rejected(self):
        coder = build_tilecoder(PAPER_CONFIG)
        with pytest.raises(ValueError):
            coder.encode((0.5, 0.5, 0.5))

    def test_full_coverage_on_grid(self):
        # every tiling at every resolution contributes exactly one index, for
        # a dense grid of states
        coder = build_tilecoder(PAPER_CONFIG)
        blocks = coder._block_offsets
        sizes = [res ** 2 for _, res in blocks]
        for u in np.linspace(0.0, 1.0, 101):
            for w in np.linspace(0.0, 1.0, 101):
                f = coder.encode((u, w))
                owners = []
                for idx in f.active_indices[:-1]:
                    owner = next(b for b, (off, _) in enumerate(blocks)
                                 if off <= idx < off + sizes[b])
                    owners.append(owner)
                assert owners == list(range(len(blocks)))

    @given(st.floats(0, 1), st.floats(0, 1),
           st.floats(-0.13, 0.13), st.floats(-0.13, 0.13))
    @settings(max_examples=200)
    def test_nearby_states_share_coarse_feature(self, u, w, du, dw):
        # pairs closer than 2/5 of a coarse tile width per dimension always
        # share a tile in at least one coarse tiling (offsets are 1/15 apart,
        # so at most 4 of the 5 tilings can separate such a pair)
        coder = build_tilecoder(PAPER_CONFIG)
        other = (min(1.0, max(0.0, u + du)), min(1.0, max(0.0, w + dw)))
        coarse = coder.config.num_tilings  # first block: resolution 3
        a = coder.encode((u, w)).active_indices[:coarse]
        b = coder.encode(other).active_indices[:coarse]
        assert set(a) & set(b)


class TestSparseDot:
    def setup_method(self):
        self.coder = build_tilecoder(PAPER_CONFIG)
        self.features = self.coder.encode((0.25, 0.75))

    def test_zero_weights(self):
        assert sparse_dot(np.zeros(491), self.features) == 0.0

    def test_all_ones_counts_active(self):
        assert sparse_dot(np.ones(491), self.features) == 16.0

    def test_unit_vector_selects(self):
        weights = np.zeros(491)
        weights[self.features.active_indices[3]] = 1.0
        assert sparse_dot(weights, self.features) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sparse_dot(np.zeros(100), self.features)

    def test_plain_list_weights(self):
        assert sparse_dot([0.5] * 491, self.features) == pytest.approx(8.0)
