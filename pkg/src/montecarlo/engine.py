"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Chunked Monte Carlo execution and estimate summaries

Samples are split into fixed-size chunks; chunk k always draws from
RngStream(seed, stream_base + k), so the concatenated samples, and
therefore every estimate, do not depend on the number of workers.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DegenerateWeights
from src.paths.sampling import RngStream

logger = logging.getLogger(__name__)

# A chunk sampler maps (generator, chunk size) to (contributions, weights).
# contributions has shape (m,) or (k, m); weights has shape (m,).
ChunkSampler = Callable[[np.random.Generator, int], Tuple[np.ndarray, np.ndarray]]

EXACT_TOLERANCE = 1e-12


def z_score(mean: float, target: float, std_err: float) -> float:
    """(mean - target)/std_err; deterministic estimates compare exactly."""
    diff = mean - target
    if std_err > 0:
        return diff / std_err
    if abs(diff) <= EXACT_TOLERANCE * max(1.0, abs(target)):
        return 0.0
    return math.copysign(math.inf, diff)


@dataclass
class MCEstimate:
    """Monte Carlo estimate with its standard error and optional target."""
    mean: float
    std_err: float
    n: int
    target: Optional[float] = None
    z_score: Optional[float] = None
    ess: Optional[float] = None

    def __post_init__(self):
        if self.target is not None and self.z_score is None:
            self.z_score = z_score(self.mean, self.target, self.std_err)

    def within(self, threshold: float = 3.0) -> bool:
        """True if there is no target or |z_score| <= threshold."""
        return self.z_score is None or abs(self.z_score) <= threshold

    def to_dict(self) -> dict:
        return asdict(self)


def effective_sample_size(weights) -> float:
    """Kish effective sample size (sum w)^2 / sum w^2."""
    w = np.asarray(weights, dtype=float)
    total_sq = float(np.sum(w * w))
    if total_sq == 0.0:
        return 0.0
    return float(np.sum(w)) ** 2 / total_sq


def summarize(
    contributions,
    weights=None,
    target: Optional[float] = None,
    min_ess_fraction: Optional[float] = None,
    label: str = "estimate",
) -> MCEstimate:
    """
    Reduce independent per-sample contributions to an MCEstimate.

    Args:
        contributions: Per-sample values, shape (n,)
        weights: Importance weights used for the ESS diagnostic
        target: Closed-form value, if any
        min_ess_fraction: Raise when ESS falls below this fraction of n
        label: Name used in log messages

    Returns:
        MCEstimate

    Raises:
        DegenerateWeights: ESS below min_ess_fraction * n
    """
    values = np.asarray(contributions, dtype=float)
    n = values.size
    if n < 2:
        raise ValueError(f"{label}: need at least 2 samples, got {n}")
    mean = float(np.mean(values))
    std_err = float(np.std(values, ddof=1) / math.sqrt(n))

    ess = None
    if weights is not None:
        ess = effective_sample_size(weights)
        if min_ess_fraction is not None and ess < min_ess_fraction * n:
            raise DegenerateWeights(
                f"{label}: effective sample size {ess:.1f} is below "
                f"{min_ess_fraction:.1%} of {n} samples"
            )

    estimate = MCEstimate(mean, std_err, n, target=target, ess=ess)
    logger.debug(f"{label}: {mean:.6g} +/- {std_err:.2g} (n={n}, z={estimate.z_score})")
    return estimate


def compare(first: MCEstimate, second: MCEstimate) -> float:
    """Combined z-score (m1 - m2)/sqrt(se1^2 + se2^2)."""
    return z_score(first.mean, second.mean, math.hypot(first.std_err, second.std_err))


def chunk_sizes(n_samples: int, chunk_size: int) -> List[int]:
    """Sizes of the fixed chunks covering n_samples; the last may be short."""
    if n_samples < 1 or chunk_size < 1:
        raise ValueError(f"n_samples and chunk_size must be positive, got {n_samples}, {chunk_size}")
    full, rest = divmod(n_samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_chunks(
    sampler: ChunkSampler,
    n_samples: int,
    seed: int,
    chunk_size: int = 4096,
    workers: int = 1,
    stream_base: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Run sampler over pre-assigned random streams.

    Args:
        sampler: Chunk sampler
        n_samples: Total number of samples
        seed: Root seed
        chunk_size: Samples per stream
        workers: Thread count; numpy releases the GIL in the heavy kernels
        stream_base: Offset of the first stream id

    Returns:
        (contributions, weights) concatenated in chunk order
    """
    sizes = chunk_sizes(n_samples, chunk_size)

    def run_one(k: int):
        gen = RngStream(seed, stream_base + k).generator()
        return sampler(gen, sizes[k])

    if workers <= 1 or len(sizes) == 1:
        results = [run_one(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_one, range(len(sizes))))

    contributions = np.concatenate([np.asarray(r[0], dtype=float) for r in results], axis=-1)
    weights = np.concatenate([np.asarray(r[1], dtype=float) for r in results])
    return contributions, weights


def se_slope(sample_sizes: Sequence[int], std_errs: Sequence[float]) -> float:
    """Least-squares slope of log(std_err) against log(n); -0.5 for independent draws."""
    slope, _ = np.polyfit(np.log(np.asarray(sample_sizes, dtype=float)),
                          np.log(np.asarray(std_errs, dtype=float)), 1)
    return float(slope)
