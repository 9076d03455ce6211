"""Log-log ladder records and slope estimators.

A ladder is a geometric sequence of scales with one positive value per
scale.  Dimension-type quantities are slopes of log(value) against
log(scale); because a finite ladder cannot distinguish a limit from a
limsup/liminf, three slope modes are exposed:

  least_squares   ordinary fit over the whole ladder
  upper           max two-point chord slope over the asymptotic half
  lower           min two-point chord slope over the asymptotic half

The "asymptotic half" is the half of the ladder closest to the limit the
estimand refers to (smallest radii / largest frequencies); orientation is
controlled by which end of the stored arrays that is, see `asymptotic`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MODES = ("least_squares", "upper", "lower")


def _chord_slopes(lx: np.ndarray, ly: np.ndarray) -> np.ndarray:
    """All pairwise chord slopes of (lx, ly)."""
    i, j = np.triu_indices(len(lx), k=1)
    return (ly[j] - ly[i]) / (lx[j] - lx[i])


def slope_estimates(log_x: np.ndarray, log_y: np.ndarray,
                    asymptotic: str = "tail") -> dict:
    """Slope of log_y against log_x in all modes.

    asymptotic: 'tail' if the limit end of the ladder is the last entries,
    'head' if it is the first.  Envelope modes use chords among points in
    that half (at least two points).
    """
    log_x = np.asarray(log_x, dtype=float)
    log_y = np.asarray(log_y, dtype=float)
    if log_x.size < 2:
        raise ValueError("need at least two ladder points")
    ls, intercept = np.polyfit(log_x, log_y, 1)
    half = max(2, (log_x.size + 1) // 2)
    sl = slice(log_x.size - half, None) if asymptotic == "tail" else slice(0, half)
    chords = _chord_slopes(log_x[sl], log_y[sl])
    resid = log_y - (ls * log_x + intercept)
    return {
        "least_squares": float(ls),
        "upper": float(chords.max()),
        "lower": float(chords.min()),
        "intercept": float(intercept),
        "max_residual": float(np.abs(resid).max()),
    }


@dataclass
class LadderEstimate:
    """A log-log regression record of values over a geometric scale ladder.

    `slope` is the estimate in the requested `mode`; the other modes are
    kept alongside so reports can show the envelope spread.  Recomputing
    from the stored (scales, values) reproduces `slope` exactly.
    """

    scales: np.ndarray
    values: np.ndarray
    mode: str
    slope: float
    intercept: float
    max_residual: float
    all_slopes: dict = field(default_factory=dict)

    @classmethod
    def fit(cls, scales, values, mode: str = "least_squares",
            x_transform=np.log, y_transform=np.log,
            asymptotic: str = "tail") -> "LadderEstimate":
        if mode not in MODES:
            raise ValueError(f"unknown slope mode {mode!r}")
        scales = np.asarray(scales, dtype=float)
        values = np.asarray(values, dtype=float)
        if scales.size != values.size:
            raise ValueError("scales and values length mismatch")
        d = np.diff(scales)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("scales must be strictly monotone")
        est = slope_estimates(x_transform(scales), y_transform(values),
                              asymptotic=asymptotic)
        out = cls(scales=scales, values=values, mode=mode,
                  slope=est[mode], intercept=est["intercept"],
                  max_residual=est["max_residual"],
                  all_slopes={m: est[m] for m in MODES})
        out._x_transform = x_transform
        out._y_transform = y_transform
        out._asymptotic = asymptotic
        return out

    def recompute_slope(self) -> float:
        """Re-derive the slope from the stored points (invariant check)."""
        est = slope_estimates(self._x_transform(self.scales),
                              self._y_transform(self.values),
                              asymptotic=getattr(self, "_asymptotic", "tail"))
        return est[self.mode]

    def to_dict(self) -> dict:
        return {
            "scales": [float(s) for s in self.scales],
            "values": [float(v) for v in self.values],
            "mode": self.mode,
            "slope": self.slope,
            "intercept": self.intercept,
            "max_residual": self.max_residual,
            "all_slopes": dict(sorted(self.all_slopes.items())),
        }
