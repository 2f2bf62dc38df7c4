from dataclasses import dataclass
import math

import numpy as np

from ..errors import InvalidParameters

#: exponents closer to 1 than this are rejected; every formula carries 1/(m-1)
M_MIN_GAP = 1e-6


@dataclass(frozen=True)
class ModelParams:
    """Porous-medium exponent ``m`` and advection coefficient ``alpha``."""

    m: float
    alpha: float = 0.0

    def __post_init__(self):
        m = float(self.m)
        alpha = float(self.alpha)
        if not math.isfinite(m) or m <= 1.0 + M_MIN_GAP:
            raise InvalidParameters(f"porous-medium exponent must satisfy m > 1, got m={self.m!r}")
        if not math.isfinite(alpha):
            raise InvalidParameters(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "alpha", alpha)

    @property
    def q_max(self) -> float:
        """Pressure of the invaded state u = 1, ``m/(m-1)``."""
        return self.m / (self.m - 1.0)

    def with_alpha(self, alpha: float) -> "ModelParams":
        return ModelParams(self.m, alpha)


def reaction(params: ModelParams, q):
    """Pressure-form reaction ``f(q) = (m-1) q [1 - ((m-1) q / m)^(1/(m-1))]``."""
    m = params.m
    q = np.asarray(q, dtype=float)
    return (m - 1.0) * q * (1.0 - ((m - 1.0) * q / m) ** (1.0 / (m - 1.0)))


def pressure_to_density(params: ModelParams, phi):
    m = params.m
    phi = np.clip(np.asarray(phi, dtype=float), 0.0, None)
    return ((m - 1.0) * phi / m) ** (1.0 / (m - 1.0))


def density_to_pressure(params: ModelParams, u):
    m = params.m
    u = np.clip(np.asarray(u, dtype=float), 0.0, None)
    return m / (m - 1.0) * u ** (m - 1.0)
