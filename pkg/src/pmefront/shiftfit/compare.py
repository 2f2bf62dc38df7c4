"""Distance between a simulated density and the shifted sharp front."""

from dataclasses import dataclass
import math

import numpy as np

from ..errors import FrontTooClose, InvalidParameters
from ..pmesim.sim import SimState, locate_front


@dataclass(frozen=True)
class ProfileComparison:
    t: float
    shift: float
    sup_error: float


def shift_model(t: float, c_star: float, cstar: float, dim: int) -> float:
    """Expected front position without offset: ``c_* t - (N-1) c* log t``."""
    return c_star * t - (dim - 1) * cstar * math.log(t)


def compare_profile(
    snapshot: SimState,
    profile,
    k_shift: float,
    scan=(-10.0, 10.0),
    resolution: float = 1e-3,
    xi_range=(-20.0, 5.0),
    margin: float = 5.0,
    chunk: int = 512,
) -> ProfileComparison:
    """Best offset ``r0`` and the sup distance ``max |u(r) - Phi(r - k_shift - r0)|``.

    The sup is taken over grid nodes with ``xi = r - k_shift`` in ``xi_range``
    and ``r >= 0``; offsets are scanned on a uniform grid.
    """
    r = snapshot.r
    r_max = float(r[-1])
    h = locate_front(snapshot)
    if h > r_max - margin:
        raise FrontTooClose(f"front at {h:g} is within {margin:g} of r_max={r_max:g}")
    if not resolution > 0.0:
        raise InvalidParameters("resolution must be positive")
    xi = r - k_shift
    sel = (xi >= xi_range[0]) & (xi <= xi_range[1])
    if not sel.any():
        raise InvalidParameters("no grid nodes inside the comparison window")
    xi, u = xi[sel], snapshot.u[sel]
    n = int(round((scan[1] - scan[0]) / resolution)) + 1
    offsets = scan[0] + resolution * np.arange(n)
    errs = np.empty(n)
    for s in range(0, n, chunk):
        off = offsets[s : s + chunk]
        model = profile.density_at((xi[None, :] - off[:, None]).ravel()).reshape(off.size, xi.size)
        errs[s : s + chunk] = np.max(np.abs(model - u[None, :]), axis=1)
    k = int(np.argmin(errs))
    return ProfileComparison(float(snapshot.t), float(offsets[k]), float(errs[k]))
