"""
Tensor-product quadrature over chart domains.

Non-periodic axes use Gauss-Legendre nodes (strictly interior, so polar
singularities are never evaluated), periodic axes use the equispaced
trapezoid rule. Surface integrals carry the volume density and the chart's
partition-of-unity weight; every estimate comes with |I(N) - I(N/2)| as a
quadrature error proxy.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .batcher import DEFAULT_BATCH_SIZE, NodeBatch, NodeBatcher
from .errors import BudgetError, ContractViolation, EvaluationError
from .geometry import PointGeometry, point_curvatures, point_geometry
from .jets import Chart, eval_jet2
from .shapes import Shape
from .utils import resolve_threads

logger = logging.getLogger(__name__)

DEFAULT_NODES = {2: 96, 3: 40, 4: 24}
FALLBACK_NODES = 16
DEFAULT_MAX_POINTS = 10 ** 7


class QuadratureRule(str, Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    TRAPEZOID_PERIODIC = "trapezoid_periodic"


@dataclass
class QuadratureGrid:
    """Tensor-product nodes and weights over one chart domain."""
    nodes_per_axis: Tuple[int, ...]
    rules: Tuple[QuadratureRule, ...]
    points: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]

    @property
    def size(self) -> int:
        return self.points.shape[0]


def default_nodes(n: int) -> int:
    """Default nodes per axis for an n-dimensional hypersurface."""
    return DEFAULT_NODES.get(n, FALLBACK_NODES)


def axis_rule(lower: float, upper: float, count: int, periodic: bool):
    """
    One-dimensional rule on [lower, upper].

    Returns:
        Tuple of (nodes, weights, rule)
    """
    if count < 2:
        raise ContractViolation(f"Need at least 2 nodes per axis, got {count}")
    width = upper - lower
    if periodic:
        step = width / count
        return lower + step * np.arange(count), np.full(count, step), QuadratureRule.TRAPEZOID_PERIODIC
    x, w = np.polynomial.legendre.leggauss(count)
    return lower + 0.5 * width * (x + 1.0), 0.5 * width * w, QuadratureRule.GAUSS_LEGENDRE


def build_grid(chart: Chart, nodes_per_axis, max_points: int = DEFAULT_MAX_POINTS) -> QuadratureGrid:
    """
    Build the tensor-product grid of a chart.

    Args:
        chart: Chart whose domain is covered
        nodes_per_axis: One count for every axis, or a single count for all
        max_points: Node cap

    Returns:
        QuadratureGrid with points in C order (last axis fastest)
    """
    counts = _expand_counts(nodes_per_axis, chart.n)
    total = int(np.prod(counts, dtype=np.int64))
    if total > max_points:
        raise BudgetError(f"Grid of {'x'.join(map(str, counts))} = {total} nodes exceeds the cap of {max_points}")

    axes = [axis_rule(lo, hi, c, p) for lo, hi, c, p in zip(chart.lower, chart.upper, counts, chart.periodic)]
    mesh = np.meshgrid(*(a[0] for a in axes), indexing="ij")
    wmesh = np.meshgrid(*(a[1] for a in axes), indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    weights = np.prod(np.stack([w.reshape(-1) for w in wmesh], axis=-1), axis=-1)
    return QuadratureGrid(
        nodes_per_axis=counts,
        rules=tuple(a[2] for a in axes),
        points=np.ascontiguousarray(points),
        weights=np.ascontiguousarray(weights),
    )


def _expand_counts(nodes_per_axis, n: int) -> Tuple[int, ...]:
    if isinstance(nodes_per_axis, (int, np.integer)):
        counts = (int(nodes_per_axis),) * n
    else:
        counts = tuple(int(c) for c in nodes_per_axis)
    if len(counts) != n:
        raise ContractViolation(f"Expected {n} node counts, got {len(counts)}")
    for c in counts:
        if c < 2:
            raise ContractViolation(f"Need at least 2 nodes per axis, got {c}")
    return counts


def coarse_counts(counts: Sequence[int]) -> Tuple[int, ...]:
    """Node counts of the half-resolution grid used for the error proxy."""
    return tuple(max(2, c // 2) for c in counts)


@dataclass
class SurfaceSample:
    """
    Everything the identity integrands need at every quadrature node of a shape.

    Attributes:
        nodes: Nodes per axis the sample was taken with
        chart_index: Chart of every node
        points: Parameter point of every node
        weights: Quadrature weight times density times chart weight
        x: Position
        normal: Unit normal
        K: Mean curvatures K_0..K_n
    """
    nodes: Tuple[int, ...]
    chart_index: npt.NDArray[np.int64]
    points: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]
    x: npt.NDArray[np.float64]
    normal: npt.NDArray[np.float64]
    K: npt.NDArray[np.float64]

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def integrate(self, values: npt.ArrayLike):
        """
        Weighted sum of per-node values, scalar (N,) or vector (N, m).

        Raises EvaluationError naming the first node with a non-finite value.
        """
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.size:
            raise ContractViolation(f"Got {values.shape[0]} values for {self.size} nodes")
        finite = np.isfinite(values).reshape(self.size, -1).all(axis=1)
        if not finite.all():
            index = int(np.argmin(finite))
            raise EvaluationError(
                f"Integrand is not finite at chart {int(self.chart_index[index])}, "
                f"node {index} (u = {self.points[index].tolist()})"
            )
        if values.ndim == 1:
            return float(np.sum(self.weights * values))
        return np.sum(self.weights[:, None] * values, axis=0)


@dataclass
class IntegralEstimate:
    """
    A surface integral with its error proxy.

    Vector integrands give arrays for value, error_proxy and magnitude.

    Attributes:
        value: Integral at full resolution
        error_proxy: |I(N) - I(N/2)|
        magnitude: Integral of the absolute integrand
        nodes: Nodes per axis at full resolution
    """
    value: object
    error_proxy: object
    magnitude: object
    nodes: Tuple[int, ...]


class SurfaceIntegrator:
    """
    Evaluates surface integrals over a shape, batch by batch and in parallel.
    """

    def __init__(self, shape: Shape, nodes_per_axis=None, threads: Optional[int] = None,
                 batch_size: int = DEFAULT_BATCH_SIZE, max_points: int = DEFAULT_MAX_POINTS):
        """
        Initialize the integrator.

        Args:
            shape: Shape to integrate over
            nodes_per_axis: Single count or per-axis counts (default by dimension)
            threads: Worker threads (default from BONNET_THREADS or min(4, cpu_count))
            batch_size: Nodes per batch
            max_points: Node cap per chart
        """
        self.shape = shape
        if nodes_per_axis is None:
            nodes_per_axis = default_nodes(shape.n)
        self.nodes = _expand_counts(nodes_per_axis, shape.n)
        self.threads = resolve_threads(threads)
        self.batcher = NodeBatcher(batch_size)
        self.max_points = max_points
        self._samples: Dict[Tuple[int, ...], SurfaceSample] = {}

        logger.info(f"Initialized integrator for {shape.describe()}: nodes={self.nodes}, threads={self.threads}")

    def _batches(self, nodes: Tuple[int, ...]) -> List[NodeBatch]:
        batches = []
        for index, chart in enumerate(self.shape.charts):
            grid = build_grid(chart, nodes, self.max_points)
            chart_batches = self.batcher.create_batches(grid.points, grid.weights, chart_index=index)
            if not self.batcher.validate_batches(chart_batches, grid.size):
                raise ContractViolation(f"Batches of chart {index} do not cover its {grid.size} nodes in order")
            batches.extend(chart_batches)
        return batches

    def _geometry(self, batch: NodeBatch) -> PointGeometry:
        chart = self.shape.charts[batch.chart_index]
        jet = eval_jet2(chart, batch.points)
        return point_geometry(jet, self.shape.form, self.shape.orientation, chart.hint_at(batch.points))

    def _run(self, work: Callable[[NodeBatch], object], batches: List[NodeBatch]) -> list:
        if self.threads == 1 or len(batches) == 1:
            return [work(batch) for batch in batches]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(work, batches))

    def sample(self, nodes: Optional[Sequence[int]] = None) -> SurfaceSample:
        """
        Positions, normals, mean curvatures and dv weights at every node (cached per node count).
        """
        nodes = self.nodes if nodes is None else _expand_counts(nodes, self.shape.n)
        if nodes in self._samples:
            return self._samples[nodes]

        def work(batch: NodeBatch):
            logger.debug(self.batcher.get_batch_summary(batch))
            pt = self._geometry(batch)
            pack = point_curvatures(pt)
            chart = self.shape.charts[batch.chart_index]
            weights = batch.weights * pt.density * chart.weights_at(batch.points)
            return weights, pt.jet.x, pt.normal, pack.K

        batches = self._batches(nodes)
        parts = self._run(work, batches)
        sample = SurfaceSample(
            nodes=nodes,
            chart_index=np.concatenate([np.full(b.size, b.chart_index) for b in batches]),
            points=np.concatenate([b.points for b in batches]),
            weights=np.ascontiguousarray(np.concatenate([p[0] for p in parts])),
            x=np.concatenate([p[1] for p in parts]),
            normal=np.concatenate([p[2] for p in parts]),
            K=np.concatenate([p[3] for p in parts]),
        )
        self._samples[nodes] = sample
        logger.debug(f"Sampled {sample.size} nodes at {nodes}")
        return sample

    def coarse_sample(self) -> SurfaceSample:
        return self.sample(coarse_counts(self.nodes))

    def estimate(self, values_of: Callable[[SurfaceSample], npt.ArrayLike]) -> IntegralEstimate:
        """
        Integrate a function of the node sample at full and half resolution.

        Args:
            values_of: Maps a SurfaceSample to per-node values (N,) or (N, m)

        Returns:
            IntegralEstimate with the full-resolution value
        """
        fine = self.sample()
        coarse = self.coarse_sample()
        values = np.asarray(values_of(fine), dtype=float)
        value = fine.integrate(values)
        coarse_value = coarse.integrate(values_of(coarse))
        return IntegralEstimate(
            value=value,
            error_proxy=np.abs(value - coarse_value) if values.ndim > 1 else abs(value - coarse_value),
            magnitude=fine.integrate(np.abs(values)),
            nodes=self.nodes,
        )

    def integrate(self, integrand: Callable[[PointGeometry], npt.ArrayLike],
                  nodes: Optional[Sequence[int]] = None) -> float:
        """
        Integrate a function of the point geometry over the shape.

        Args:
            integrand: Maps a batched PointGeometry to per-node values
            nodes: Nodes per axis (defaults to the integrator's)

        Returns:
            Sum over charts and nodes of weight * chart weight * integrand * density
        """
        nodes = self.nodes if nodes is None else _expand_counts(nodes, self.shape.n)

        def work(batch: NodeBatch):
            pt = self._geometry(batch)
            chart = self.shape.charts[batch.chart_index]
            values = np.broadcast_to(np.asarray(integrand(pt), dtype=float), (batch.size,))
            return batch.weights * pt.density * chart.weights_at(batch.points), values

        batches = self._batches(nodes)
        parts = self._run(work, batches)
        sample_weights = np.ascontiguousarray(np.concatenate([p[0] for p in parts]))
        values = np.concatenate([p[1] for p in parts])
        finite = np.isfinite(values)
        if not finite.all():
            index = int(np.argmin(finite))
            chart_index = np.concatenate([np.full(b.size, b.chart_index) for b in batches])[index]
            u = np.concatenate([b.points for b in batches])[index]
            raise EvaluationError(f"Integrand is not finite at chart {chart_index}, node {index} (u = {u.tolist()})")
        return float(np.sum(sample_weights * values))


def integrate(shape: Shape, integrand: Callable[[PointGeometry], npt.ArrayLike], nodes=None,
              threads: Optional[int] = None) -> float:
    """Integrate a function of the point geometry over a shape."""
    return SurfaceIntegrator(shape, nodes, threads=threads).integrate(integrand)
