"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Importance-sampling proposals for the start point q0 and the radius rho
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy import stats

from src.errors import DomainError, ProposalMismatch

logger = logging.getLogger(__name__)

POSITIVE_KINDS = ("halfnormal", "halfcauchy", "lognormal", "rayleigh")
KINDS = POSITIVE_KINDS + ("normal",)


@dataclass(frozen=True)
class Proposal:
    """
    One-dimensional proposal density backed by scipy.stats.

    Attributes:
        kind: halfnormal, halfcauchy, lognormal, rayleigh or normal
        scale: Scale parameter (the median for lognormal)
        shape: Log-scale spread of the lognormal kind
    """
    kind: str
    scale: float = 1.0
    shape: float = 0.6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"Unknown proposal kind '{self.kind}', expected one of {KINDS}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise DomainError(f"Proposal scale must be positive, got {self.scale}")
        if self.kind == "lognormal" and not self.shape > 0:
            raise DomainError(f"Lognormal shape must be positive, got {self.shape}")

    @property
    def distribution(self):
        if self.kind == "halfnormal":
            return stats.halfnorm(scale=self.scale)
        if self.kind == "halfcauchy":
            return stats.halfcauchy(scale=self.scale)
        if self.kind == "lognormal":
            return stats.lognorm(s=self.shape, scale=self.scale)
        if self.kind == "rayleigh":
            return stats.rayleigh(scale=self.scale)
        return stats.norm(scale=self.scale)

    @property
    def positive_support(self) -> bool:
        return self.kind in POSITIVE_KINDS

    def require_positive_support(self, role: str = "proposal"):
        """
        Raises:
            ProposalMismatch: If the density vanishes somewhere on (0, inf)
        """
        if not self.positive_support:
            raise ProposalMismatch(f"{role} '{self.kind}' does not have support (0, inf)")

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.distribution.rvs(size=size, random_state=gen), dtype=float)

    def logpdf(self, x) -> np.ndarray:
        return self.distribution.logpdf(x)

    def with_scale(self, scale: float) -> 'Proposal':
        return Proposal(self.kind, float(scale), self.shape)

    @classmethod
    def from_settings(cls, settings: Optional[Dict[str, Any]], scale: float,
                      default_kind: str = "halfnormal") -> 'Proposal':
        """
        Build a proposal from a config mapping.

        The scale is supplied by the caller (it follows the damping of the
        estimand); a 'scale_factor' entry multiplies it.

        Args:
            settings: Mapping with 'kind', optional 'shape' and 'scale_factor'
            scale: Natural scale of the estimand
            default_kind: Kind used when settings is empty

        Returns:
            Proposal
        """
        settings = settings or {}
        factor = float(settings.get("scale_factor", 1.0))
        return cls(
            kind=settings.get("kind", default_kind),
            scale=scale * factor,
            shape=float(settings.get("shape", 0.6)),
        )
