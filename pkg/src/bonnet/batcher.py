"""
Node batching for chunked quadrature.

Batch boundaries depend only on the grid size and the batch size, never on
the number of worker threads, so per-node arrays are always assembled in
the same order.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import numpy.typing as npt

from .errors import ContractViolation

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 8192


@dataclass
class NodeBatch:
    """A contiguous slice of quadrature nodes of one chart."""
    chart_index: int
    batch_id: int
    total_batches: int
    start: int
    stop: int
    points: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]

    @property
    def size(self) -> int:
        return self.stop - self.start


class NodeBatcher:
    """
    Splits the nodes of a quadrature grid into fixed-size batches.
    """

    def __init__(self, batch_size: int = DEFAULT_BATCH_SIZE):
        """
        Initialize the batcher.

        Args:
            batch_size: Maximum number of nodes per batch
        """
        if batch_size < 1:
            raise ContractViolation(f"Batch size must be positive, got {batch_size}")
        self.batch_size = batch_size

        logger.info(f"Initialized batcher: batch_size={batch_size}")

    def create_batches(self, points: npt.NDArray[np.float64], weights: npt.NDArray[np.float64],
                       chart_index: int = 0) -> List[NodeBatch]:
        """
        Create batches from the nodes of one chart.

        Args:
            points: Node coordinates, shape (N, n)
            weights: Node weights, shape (N,)
            chart_index: Chart the nodes belong to

        Returns:
            List of NodeBatch objects covering the nodes in order
        """
        count = points.shape[0]
        if weights.shape[0] != count:
            raise ContractViolation(f"{count} nodes but {weights.shape[0]} weights")
        if count == 0:
            logger.info("No nodes to batch")
            return []

        total = -(-count // self.batch_size)
        batches = []
        for batch_id, start in enumerate(range(0, count, self.batch_size), start=1):
            stop = min(start + self.batch_size, count)
            batches.append(NodeBatch(
                chart_index=chart_index,
                batch_id=batch_id,
                total_batches=total,
                start=start,
                stop=stop,
                points=points[start:stop],
                weights=weights[start:stop],
            ))

        logger.debug(f"Created {len(batches)} batches from {count} nodes of chart {chart_index}")
        return batches

    def get_batch_summary(self, batch: NodeBatch) -> str:
        """
        Get a summary of batch contents for logging/debugging.

        Args:
            batch: Batch to summarize

        Returns:
            Summary string
        """
        return (f"Chart {batch.chart_index} batch {batch.batch_id}/{batch.total_batches}: "
                f"nodes {batch.start}..{batch.stop - 1} ({batch.size} nodes)")

    def validate_batch(self, batch: NodeBatch) -> bool:
        """
        Validate that a batch is within limits.

        Args:
            batch: Batch to validate

        Returns:
            True if batch is valid
        """
        if batch.size > self.batch_size:
            logger.warning(f"Batch {batch.batch_id} exceeds size limit: {batch.size} > {self.batch_size}")
            return False
        if batch.points.shape[0] != batch.size or batch.weights.shape[0] != batch.size:
            logger.warning(f"Batch {batch.batch_id} arrays do not match its node range")
            return False
        return True

    def validate_batches(self, batches: List[NodeBatch], count: int) -> bool:
        """
        Validate that the batches of one chart tile its nodes in order.

        Args:
            batches: Batches of one chart, in creation order
            count: Number of nodes of the chart

        Returns:
            True if every batch is valid and together they cover 0..count-1 once
        """
        position = 0
        for batch in batches:
            if not self.validate_batch(batch):
                return False
            if batch.start != position or batch.stop <= batch.start:
                logger.warning(f"Batch {batch.batch_id} starts at node {batch.start}, expected {position}")
                return False
            position = batch.stop
        if position != count:
            logger.warning(f"Batches cover {position} of {count} nodes")
            return False
        return True
