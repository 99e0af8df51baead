"""
Run configuration: the CLI flags of one command, the constants file and
direction parsing.
"""

import json
import logging
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .ambient import AmbientVector, Signature, normalize_direction, parse_direction, random_direction
from .errors import ConfigurationError, ContractViolation
from .identities import IDENTITY_DESCRIPTIONS, IdentityId, GaussBonnetConstants
from .shapes import CATALOG, SHAPE_ALIASES

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "calibrate", "scan", "list")
RANDOM_PATTERN = re.compile(r"^random-seed:(-?\d+)$")

# moment orders checked when --m is not given
DEFAULT_M_VALUES = {
    IdentityId.MOMENT: [1, 2, 3, 4],
    IdentityId.VECTOR: [0, 1],
    IdentityId.RECURSION: [2, 3, 4],
    IdentityId.CLOSED_FORM: [1, 2, 3, 4],
}

# lowest order each identity is defined for
MIN_M_VALUES = {
    IdentityId.MOMENT: 1,
    IdentityId.VECTOR: 0,
    IdentityId.RECURSION: 2,
    IdentityId.CLOSED_FORM: 1,
}


@dataclass
class RunConfig:
    """
    Everything one CLI command was asked to do, echoed into its report.

    Attributes:
        command: verify, calibrate, scan or list
        shape: Catalog shape name
        shape_params: Builder parameters given on the command line
        identities: Identity ids to check
        a: Direction spec, "x0,x1,..." or "random-seed:<int>"
        timelike: Draw or accept timelike directions
        m: Moment orders (None for per-identity defaults)
        nodes: Quadrature nodes per axis (None for the dimension default)
        tol: Relative tolerance
        output: Report file
        constants: Constants file for the Gauss-Bonnet constants
        samples: Points per chart for scans
        seed: Seed for scans
        n: Dimension for calibration
        k: Curvature for calibration
        radii: Radii for calibration
    """
    command: str
    shape: Optional[str] = None
    shape_params: Dict[str, object] = field(default_factory=dict)
    identities: List[str] = field(default_factory=list)
    a: Optional[str] = None
    timelike: bool = False
    m: Optional[List[int]] = None
    nodes: Optional[int] = None
    tol: float = 1e-6
    output: Optional[Path] = None
    constants: Optional[Path] = None
    samples: int = 200
    seed: int = 0
    n: Optional[int] = None
    k: Optional[float] = None
    radii: Optional[List[float]] = None

    def validate(self):
        """Reject unknown names and invalid numbers (usage errors)."""
        if self.command not in COMMANDS:
            raise ContractViolation(f"Unknown command '{self.command}'")
        if not self.tol > 0:
            raise ContractViolation(f"Tolerance must be positive, got {self.tol}")
        if self.shape is not None and SHAPE_ALIASES.get(self.shape, self.shape) not in CATALOG:
            raise ContractViolation(f"Unknown shape '{self.shape}'; available: {', '.join(CATALOG)}")
        known = {identity.value for identity in IDENTITY_DESCRIPTIONS}
        for identity in self.identities:
            if identity not in known:
                raise ContractViolation(f"Unknown identity '{identity}'; available: {', '.join(sorted(known))}")
        if self.nodes is not None and self.nodes < 2:
            raise ContractViolation(f"Need at least 2 nodes per axis, got {self.nodes}")
        if self.m is not None and any(value < 0 for value in self.m):
            raise ContractViolation(f"Moment orders must be non-negative, got {self.m}")
        if self.samples < 1:
            raise ContractViolation(f"Need at least one sample, got {self.samples}")

    def m_values(self, identity: IdentityId) -> List[Optional[int]]:
        """Moment orders to run for an identity ([None] when it has none); orders it cannot take are dropped."""
        if identity not in DEFAULT_M_VALUES:
            return [None]
        if not self.m:
            return list(DEFAULT_M_VALUES[identity])
        lowest = MIN_M_VALUES[identity]
        dropped = [value for value in self.m if value < lowest]
        if dropped:
            logger.warning(f"Skipping {identity.value} at m = {dropped}: it needs m >= {lowest}")
        return [value for value in self.m if value >= lowest]

    def to_dict(self) -> dict:
        record = asdict(self)
        for key in ("output", "constants"):
            if record[key] is not None:
                record[key] = str(record[key])
        return record


def load_constants(path: Optional[Path]) -> Optional[GaussBonnetConstants]:
    """
    Read a constants file.

    Args:
        path: JSON file {"n": 4, "k-independent": true, "c": [c1, c2]} or None

    Returns:
        GaussBonnetConstants, or None when no path is given
    """
    if path is None:
        return None
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Constants file does not exist: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Constants file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Constants file {path} must hold a JSON object")
    constants = GaussBonnetConstants.from_dict(data)
    logger.info(f"Loaded n={constants.n} constants {constants.c} from {path}")
    return constants


def resolve_direction(spec: Optional[str], sig: Signature, timelike: bool = False) -> Tuple[AmbientVector, float]:
    """
    Turn a direction spec into a normalized direction.

    Args:
        spec: "x0,x1,...", "random-seed:<int>" or None (last coordinate axis)
        sig: Ambient signature
        timelike: Draw timelike directions / accept a timelike given one

    Returns:
        Tuple of (direction with |<a,a>| = 1, <a,a>)
    """
    if spec is None:
        a = np.zeros(sig.dim)
        a[-1] = 1.0
        return normalize_direction(a, sig)
    match = RANDOM_PATTERN.match(spec.strip())
    if match:
        rng = np.random.default_rng(int(match.group(1)))
        return random_direction(sig, rng, timelike=timelike)
    try:
        coords = [float(part) for part in spec.split(",")]
    except ValueError as e:
        raise ContractViolation(f"Direction must be 'x0,x1,...' or 'random-seed:<int>', got '{spec}'") from e
    return normalize_direction(parse_direction(coords, sig), sig, allow_timelike=timelike)


def collect_shape_params(shape: str, **values) -> Dict[str, object]:
    """
    Keep the flag values the shape builder takes.

    Flags the builder does not take are rejected, except --k 0 on a
    Euclidean shape, which only restates where the shape lives.

    Args:
        shape: Catalog name or alias
        **values: Flag values by builder parameter name (None when not given)

    Returns:
        Builder keyword arguments
    """
    name = SHAPE_ALIASES.get(shape, shape)
    if name not in CATALOG:
        raise ContractViolation(f"Unknown shape '{shape}'; available: {', '.join(CATALOG)}")
    accepted = set(CATALOG[name].defaults) | {"orientation"}
    params = {}
    for key, value in values.items():
        if value is None:
            continue
        if key in accepted:
            params[key] = value
        elif key == "k" and value == 0:
            continue
        else:
            raise ContractViolation(f"Shape '{name}' does not take --{key}")
    return params


def default_identities(n: int, k: float, has_constants: bool) -> List[str]:
    """Identities that apply to a shape of dimension n in curvature k."""
    identities = [IdentityId.MOMENT, IdentityId.VECTOR, IdentityId.BIVENS, IdentityId.THEOREM2_FREE,
                  IdentityId.RECURSION]
    if n == 2:
        identities.insert(0, IdentityId.COROLLARY2)
        if k == 0:
            identities.insert(0, IdentityId.GROTEMEYER)
    if n % 2 == 0 and (k == 0 or has_constants):
        identities += [IdentityId.THEOREM2, IdentityId.GAUSS_BONNET, IdentityId.FRAME_SUM, IdentityId.CLOSED_FORM]
    return [identity.value for identity in identities]
