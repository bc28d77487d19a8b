"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Verification records and the JSON/CSV report writer
"""
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src import __version__
from src.montecarlo.engine import MCEstimate, compare
from src.utils import ensure_directory

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_FIELDS = [
    "check_id", "params", "mean", "std_err", "n", "target", "z_score",
    "passed", "kappa_selected", "wall_time_s", "seed", "details",
]


def _clean(value):
    """JSON-safe copy: numpy scalars become Python scalars, non-finite floats become null."""
    if isinstance(value, (np.generic, np.ndarray)):
        return _clean(value.tolist())
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class CheckRecord:
    """One line of a verification report."""
    check_id: str
    params: Dict[str, Any]
    mean: Optional[float]
    std_err: Optional[float]
    n: int
    target: Optional[float] = None
    z_score: Optional[float] = None
    passed: bool = True
    kappa_selected: Optional[float] = None
    wall_time_s: float = 0.0
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_estimate(cls, check_id: str, params: Dict[str, Any], estimate: MCEstimate,
                      seed: Optional[int], threshold: float = 3.0, wall_time_s: float = 0.0,
                      **details) -> 'CheckRecord':
        """Record an estimate against its closed-form target."""
        return cls(
            check_id=check_id,
            params=dict(params),
            mean=estimate.mean,
            std_err=estimate.std_err,
            n=estimate.n,
            target=estimate.target,
            z_score=estimate.z_score,
            passed=estimate.within(threshold),
            wall_time_s=wall_time_s,
            seed=seed,
            details=dict(details, ess=estimate.ess),
        )

    @classmethod
    def from_comparison(cls, check_id: str, params: Dict[str, Any], left: MCEstimate,
                        right: MCEstimate, seed: Optional[int], threshold: float = 3.0,
                        wall_time_s: float = 0.0, **details) -> 'CheckRecord':
        """
        Record a two-sided comparison.

        mean is the left side, target the right side and z_score the
        combined z-score of their difference.
        """
        z = compare(left, right)
        return cls(
            check_id=check_id,
            params=dict(params),
            mean=left.mean,
            std_err=math.hypot(left.std_err, right.std_err),
            n=left.n + right.n,
            target=right.mean,
            z_score=z,
            passed=abs(z) <= threshold,
            wall_time_s=wall_time_s,
            seed=seed,
            details=dict(details, left=left.to_dict(), right=right.to_dict()),
        )

    def to_dict(self) -> Dict[str, Any]:
        return _clean(asdict(self))


def report_passed(records: Sequence[CheckRecord]) -> bool:
    return all(r.passed for r in records)


def write_report(
    records: Sequence[CheckRecord],
    output_dir,
    seed: Optional[int] = None,
    settings: Optional[Dict[str, Any]] = None,
    fmt: str = "json",
    schema_version: int = SCHEMA_VERSION,
) -> List[Path]:
    """
    Write report.json (and report.csv for fmt='csv').

    Everything except wall_time_s is a function of the inputs, so equal
    runs produce byte-identical files up to that field.

    Args:
        records: Check records in execution order
        output_dir: Destination directory (created if missing)
        seed: Root seed of the run
        settings: Effective configuration to embed
        fmt: 'json' or 'csv'
        schema_version: Report schema version

    Returns:
        Paths of the written files
    """
    output_dir = Path(ensure_directory(output_dir))
    payload = {
        "schema_version": schema_version,
        "version": __version__,
        "seed": seed,
        "passed": report_passed(records),
        "settings": _clean(settings or {}),
        "checks": [r.to_dict() for r in records],
    }
    json_path = output_dir / "report.json"
    with open(json_path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    written = [json_path]
    logger.info(f"Wrote {len(records)} check records to {json_path}")

    if fmt == "csv":
        csv_path = output_dir / "report.csv"
        with open(csv_path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for record in records:
                row = record.to_dict()
                row["params"] = json.dumps(row["params"], sort_keys=True)
                row["details"] = json.dumps(row["details"], sort_keys=True)
                writer.writerow(row)
        written.append(csv_path)
        logger.info(f"Wrote {csv_path}")

    return written
