"""
Tests for the NodeBatcher functionality.
"""

import numpy as np
import pytest

from bonnet.batcher import DEFAULT_BATCH_SIZE, NodeBatch, NodeBatcher
from bonnet.errors import ContractViolation


def _nodes(count: int):
    points = np.arange(2 * count, dtype=float).reshape(count, 2)
    weights = np.linspace(0.0, 1.0, count)
    return points, weights


class TestNodeBatcher:
    """Test cases for NodeBatcher."""

    def test_batcher_initialization(self):
        """Test batcher initialization."""
        batcher = NodeBatcher(batch_size=10)
        assert batcher.batch_size == 10
        assert NodeBatcher().batch_size == DEFAULT_BATCH_SIZE

    def test_invalid_batch_size(self):
        with pytest.raises(ContractViolation):
            NodeBatcher(batch_size=0)

    def test_create_batches_empty(self):
        """Test creating batches with no nodes."""
        batches = NodeBatcher().create_batches(np.zeros((0, 2)), np.zeros(0))
        assert len(batches) == 0

    def test_create_batches_small(self):
        """Fewer nodes than the batch size give one batch."""
        points, weights = _nodes(7)
        batches = NodeBatcher(batch_size=10).create_batches(points, weights, chart_index=2)

        assert len(batches) == 1
        assert batches[0].size == 7
        assert batches[0].batch_id == 1
        assert batches[0].chart_index == 2

    def test_create_batches_large(self):
        """Test creating batches with many nodes."""
        points, weights = _nodes(25)
        batches = NodeBatcher(batch_size=10).create_batches(points, weights)

        assert len(batches) == 3
        assert [batch.size for batch in batches] == [10, 10, 5]
        assert all(batch.total_batches == 3 for batch in batches)
        assert batches[2].start == 20
        assert batches[2].stop == 25

    def test_batches_cover_nodes_in_order(self):
        """Concatenating the batches reproduces the nodes."""
        points, weights = _nodes(33)
        batches = NodeBatcher(batch_size=8).create_batches(points, weights)
        np.testing.assert_array_equal(np.concatenate([b.points for b in batches]), points)
        np.testing.assert_array_equal(np.concatenate([b.weights for b in batches]), weights)

    def test_mismatched_weights(self):
        points, _ = _nodes(5)
        with pytest.raises(ContractViolation):
            NodeBatcher().create_batches(points, np.ones(4))

    def test_get_batch_summary(self):
        """Test batch summary generation."""
        points, weights = _nodes(12)
        batcher = NodeBatcher(batch_size=5)
        batch = batcher.create_batches(points, weights, chart_index=1)[1]

        summary = batcher.get_batch_summary(batch)
        assert "Chart 1" in summary
        assert "batch 2/3" in summary
        assert "nodes 5..9" in summary
        assert "(5 nodes)" in summary

    def test_validate_batch(self):
        """Test batch validation."""
        points, weights = _nodes(12)
        batcher = NodeBatcher(batch_size=5)
        for batch in batcher.create_batches(points, weights):
            assert batcher.validate_batch(batch)

        oversized = NodeBatch(chart_index=0, batch_id=1, total_batches=1, start=0, stop=12,
                              points=points, weights=weights)
        assert not batcher.validate_batch(oversized)

        inconsistent = NodeBatch(chart_index=0, batch_id=1, total_batches=1, start=0, stop=4,
                                 points=points[:3], weights=weights[:4])
        assert not batcher.validate_batch(inconsistent)

    def test_validate_batches(self):
        """Batches of a chart must tile its nodes in order."""
        points, weights = _nodes(12)
        batcher = NodeBatcher(batch_size=5)
        batches = batcher.create_batches(points, weights)
        assert batcher.validate_batches(batches, 12)
        assert batcher.validate_batches([], 0)
        assert not batcher.validate_batches(batches[:-1], 12)
        assert not batcher.validate_batches([batches[0], batches[2]], 12)
        assert not batcher.validate_batches(batches + [batches[-1]], 12)
