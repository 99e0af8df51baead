"""
Pointwise residual scans: structure equations and Newton-tensor identities
at random interior points of a shape.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .ambient import inner_product
from .curvature import newton_residuals
from .errors import ContractViolation
from .geometry import (check_gauss_formula, check_reilly_position, check_weingarten, frame_residuals,
                       orthonormal_second_form, point_curvatures, point_geometry)
from .jets import Chart, eval_jet2
from .shapes import Shape

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 200
# residual thresholds by hypersurface dimension
DEFAULT_THRESHOLDS = {2: 1e-8}
FALLBACK_THRESHOLD = 1e-6


@dataclass
class ScanResult:
    """Worst pointwise residuals found on one shape."""
    shape: str
    shape_params: Dict[str, object]
    samples: int
    seed: int
    threshold: float
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst <= self.threshold

    def to_dict(self) -> dict:
        return {
            "kind": "scan",
            "shape": self.shape,
            "shape_params": self.shape_params,
            "samples": self.samples,
            "seed": self.seed,
            "threshold": self.threshold,
            "residuals": dict(self.residuals),
            "worst": self.worst,
            "pass": self.passed,
        }


class PointwiseScanner:
    """
    Samples random interior chart points and records the worst residuals.

    Points keep a margin of a few percent of each non-periodic axis away
    from the chart boundary, where polar charts degenerate.
    """

    DEFAULT_MARGIN = 0.02

    def __init__(self, samples: int = DEFAULT_SAMPLES, seed: int = 0, margin: float = DEFAULT_MARGIN,
                 threshold: Optional[float] = None):
        """
        Initialize the scanner.

        Args:
            samples: Random points per chart
            seed: Seed of the point generator
            margin: Fraction of each non-periodic axis kept clear at both ends
            threshold: Residual threshold (default by dimension)
        """
        if samples < 1:
            raise ContractViolation(f"Need at least one sample, got {samples}")
        if not 0 <= margin < 0.5:
            raise ContractViolation(f"Margin must lie in [0, 0.5), got {margin}")
        self.samples = samples
        self.seed = seed
        self.margin = margin
        self.threshold = threshold

        logger.info(f"Initialized scanner: samples={samples}, seed={seed}, margin={margin}")

    def sample_points(self, chart: Chart, rng: np.random.Generator) -> np.ndarray:
        """Uniform random points inside the chart, away from non-periodic boundaries."""
        lower = np.asarray(chart.lower, dtype=float)
        widths = chart.widths
        margins = np.where(chart.periodic, 0.0, self.margin * widths)
        return lower + margins + (widths - 2.0 * margins) * rng.random((self.samples, chart.n))

    def scan(self, shape: Shape) -> ScanResult:
        """
        Scan a shape.

        Args:
            shape: Shape to scan

        Returns:
            ScanResult with the worst residual of every check over all charts
        """
        rng = np.random.default_rng(self.seed)
        n = shape.n
        threshold = self.threshold if self.threshold is not None else DEFAULT_THRESHOLDS.get(n, FALLBACK_THRESHOLD)
        worst: Dict[str, float] = {}

        def record(name: str, value):
            worst[name] = max(worst.get(name, 0.0), float(np.max(value)))

        for index, chart in enumerate(shape.charts):
            u = self.sample_points(chart, rng)
            jet = eval_jet2(chart, u)
            pt = point_geometry(jet, shape.form, shape.orientation, chart.hint_at(u))
            pack = point_curvatures(pt)

            if shape.k != 0:
                record("embedding", np.abs(inner_product(jet.x, jet.x, shape.form.signature) - 1.0 / shape.k))
            for name, value in frame_residuals(pt).items():
                record(f"normal_{name}", value)
            record("gauss_formula", check_gauss_formula(pt))
            record("weingarten", check_weingarten(pt))
            for r in range(n):
                record("reilly_position", check_reilly_position(pt, r, pack=pack))
            newton = newton_residuals(orthonormal_second_form(pt))
            record("newton_trace", newton.trace)
            record("newton_trace_bt", newton.trace_bt)
            record("newton_top_vanishes", newton.top_vanishes)
            record("newton_cayley_hamilton", newton.cayley_hamilton)
            logger.debug(f"Scanned chart {index} of {shape.name}: {self.samples} points")

        result = ScanResult(
            shape=shape.name,
            shape_params=dict(shape.params, orientation=shape.orientation),
            samples=self.samples,
            seed=self.seed,
            threshold=threshold,
            residuals=worst,
        )
        logger.info(f"Scan of {shape.describe()} completed: worst residual {result.worst:.3e} "
                    f"({'pass' if result.passed else 'FAIL'})")
        return result
