"""Least-squares fit of ``h(t) = c t - B log t + r0``."""

from dataclasses import asdict, dataclass
import math

import numpy as np

from ..errors import IllConditioned, InvalidParameters

MIN_ROWS = 50
MAX_COND = 1e12


@dataclass(frozen=True)
class ShiftFit:
    window: tuple
    c_hat: float
    B_hat: float
    r0_hat: float
    rms_residual: float
    rows: int
    cond: float

    def report(self, predicted_B: float | None = None) -> dict:
        """JSON-ready summary; ``ratio`` is ``B_hat / predicted_B``."""
        ratio = None
        if predicted_B is not None and predicted_B != 0.0:
            ratio = self.B_hat / predicted_B
        return {
            "c_hat": self.c_hat,
            "B_hat": self.B_hat,
            "r0_hat": self.r0_hat,
            "rms": self.rms_residual,
            "predicted_B": predicted_B,
            "ratio": ratio,
            "window": list(self.window),
        }

    def as_dict(self) -> dict:
        return asdict(self)


def _columns(series):
    if hasattr(series, "t") and hasattr(series, "h"):
        return np.asarray(series.t, dtype=float), np.asarray(series.h, dtype=float)
    t, h = series
    return np.asarray(t, dtype=float), np.asarray(h, dtype=float)


def _select(series, window):
    t, h = _columns(series)
    if window is None:
        window = (t[-1] / 4.0, t[-1]) if t.size else (0.0, 0.0)
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise InvalidParameters(f"window must satisfy lo < hi, got {window!r}")
    if lo <= 0.0:
        raise InvalidParameters("window must lie in t > 0 (log t basis)")
    sel = (t >= lo) & (t <= hi) & np.isfinite(h)
    if sel.sum() < MIN_ROWS:
        raise IllConditioned(f"window {lo:g}..{hi:g} holds {int(sel.sum())} rows; need {MIN_ROWS}")
    return t[sel], h[sel], (lo, hi)


def _solve(A, y):
    cond = float(np.linalg.cond(A.T @ A))
    if not cond < MAX_COND:
        raise IllConditioned(f"normal-equations condition number {cond:.3g} exceeds {MAX_COND:g}")
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    rms = float(math.sqrt(np.mean((A @ coef - y) ** 2)))
    return coef, rms, cond


def fit_shift(series, window=None) -> ShiftFit:
    """Fit ``c_hat``, ``B_hat`` and ``r0_hat`` jointly on rows inside ``window``.

    ``series`` is an InterfaceSeries or a ``(t, h)`` pair; the default window
    is the last three quarters of the run.
    """
    t, h, window = _select(series, window)
    A = np.column_stack([t, -np.log(t), np.ones_like(t)])
    (c, B, r0), rms, cond = _solve(A, h)
    return ShiftFit(window, float(c), float(B), float(r0), rms, int(t.size), cond)


def fit_shift_pinned(series, c: float, window=None) -> ShiftFit:
    """Same model with the linear speed held at ``c``."""
    t, h, window = _select(series, window)
    A = np.column_stack([-np.log(t), np.ones_like(t)])
    (B, r0), rms, cond = _solve(A, h - c * t)
    return ShiftFit(window, float(c), float(B), float(r0), rms, int(t.size), cond)


def delta_B(series_hi, series_lo, window=None) -> float:
    """``B_hat(series_hi) - B_hat(series_lo)`` on one window."""
    return fit_shift(series_hi, window).B_hat - fit_shift(series_lo, window).B_hat
