"""Multi-resolution tile coding over the unit square.

Overlays several offset grids at each configured resolution on the normalized
state and returns the indices of the active tiles as a sparse binary feature
vector. One tile fires per tiling per resolution, plus an always-on baseline
unit, so the number of active features is constant.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class TileCoderConfig:
    """Grid layout for the coder.

    num_tilings: offset tilings per resolution level
    resolutions: tiles per dimension at each level, e.g. [3, 5, 8]
    state_dims: dimensionality of the input state
    include_baseline: append a single always-active unit
    """
    num_tilings: int = 5
    resolutions: tuple = (3, 5, 8)
    state_dims: int = 2
    include_baseline: bool = True

    def __post_init__(self):
        object.__setattr__(self, "resolutions", tuple(self.resolutions))
        if self.num_tilings < 1:
            raise ValueError(f"num_tilings must be >= 1, got {self.num_tilings}")
        if self.state_dims < 1:
            raise ValueError(f"state_dims must be >= 1, got {self.state_dims}")
        if not self.resolutions or any(r < 1 for r in self.resolutions):
            raise ValueError(f"resolutions must all be >= 1, got {self.resolutions}")


@dataclass(frozen=True)
class SparseFeatures:
    """Active tile indices of an encoded state, all unique, in [0, total_dim)."""
    active_indices: tuple
    total_dim: int

    def __len__(self):
        return len(self.active_indices)


class TileCoder:
    """Deterministic tile coder with a fixed index layout.

    Index blocks are ordered: resolutions in config order, tilings 0..N-1
    within a resolution, tiles row-major within a tiling, baseline last.
    Tiling i at resolution R is displaced by -i/(num_tilings*R) in every
    dimension, with the edge tiles extended so each displaced grid still
    covers the unit cube; inputs are clamped to [0, 1] before lookup.
    """

    def __init__(self, config: TileCoderConfig):
        self.config = config
        self._block_offsets = []
        offset = 0
        for res in config.resolutions:
            per_tiling = res ** config.state_dims
            for _ in range(config.num_tilings):
                self._block_offsets.append((offset, res))
                offset += per_tiling
        self.baseline_index = offset if config.include_baseline else None
        self.total_dim = offset + (1 if config.include_baseline else 0)
        self.num_active = (config.num_tilings * len(config.resolutions)
                           + (1 if config.include_baseline else 0))

    def encode(self, s_norm) -> SparseFeatures:
        """Map a normalized state to its active feature indices."""
        cfg = self.config
        if len(s_norm) != cfg.state_dims:
            raise ValueError(f"expected {cfg.state_dims}-dim state, got {len(s_norm)}")
        z = [min(1.0, max(0.0, float(c))) for c in s_norm]
        indices = []
        block = 0
        for res in cfg.resolutions:
            for tiling in range(cfg.num_tilings):
                shift = tiling / cfg.num_tilings
                flat = 0
                for c in z:
                    coord = int(c * res + shift)
                    if coord > res - 1:
                        coord = res - 1
                    flat = flat * res + coord
                offset, _ = self._block_offsets[block]
                indices.append(offset + flat)
                block += 1
        if self.baseline_index is not None:
            indices.append(self.baseline_index)
        return SparseFeatures(tuple(indices), self.total_dim)


def build_tilecoder(config: TileCoderConfig) -> TileCoder:
    return TileCoder(config)


def sparse_dot(weights, features: SparseFeatures) -> float:
    """Dot product of a dense weight vector with a binary sparse feature vector."""
    if len(weights) != features.total_dim:
        raise ValueError(
            f"weight vector has length {len(weights)}, features expect {features.total_dim}")
    return float(sum(weights[i] for i in features.active_indices))
