"""Dimension profiles from minimum-energy ladders and exponent indices.

A profile estimate is the log-log slope of the minimum kernel energy
Z(scale) over a geometric scale ladder:

  box profile          slope of log Z(eps) vs log eps, eps -> 0
  subordinator profile slope of -log Z(lam) vs log lam, lam -> inf,
                       kernel exp(-|t-s| Phi(lam))
  Laplace indices      slopes of log Phi(lam) vs log lam
  theta index          lower-envelope slope of log int_1^lam dx/Phi(x^{1/s})

Limits are realized as envelope slopes over the asymptotic half of the
ladder; which envelope each identity needs is pinned by its caller (the
upper envelope is the default for limsup-type quantities, the lower for
liminf-type).  The mesh of the net is coupled to the scale (delta = eps /
mesh_ratio, or Phi(lam) * delta <= 0.1) so discretization bias stays well
below slope tolerances and largely cancels between rungs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import NonConvergedQuadrature
from .energy_min import DEFAULT_MAX_ITER, build_kernel, min_energy
from .ladders import LadderEstimate
from .process_models import KernelFamily, LaplaceExponent
from .set_models import CompactSet, discretize
from .utils import parallel_map

MESH_RATIO = 10.0             # delta(eps) = eps / MESH_RATIO
SUBEXP_MESH_PRODUCT = 0.1     # Phi(lam) * delta <= this
SANITY_WINDOW = (0.0, 2.0)    # plausible profile estimates for 1-d sets


@dataclass
class ProfileReport:
    """A dimension-profile estimate with its ladder provenance."""

    set_label: str
    family_tag: str
    param: dict
    estimate: float
    mode: str
    ladder: LadderEstimate
    mesh_per_scale: list = field(default_factory=list)
    self_cover: bool = False
    flagged_nonconvex: bool = False
    sanity_window: tuple = SANITY_WINDOW

    @property
    def in_window(self) -> bool:
        lo, hi = self.sanity_window
        return lo - 1e-9 <= self.estimate <= hi + 1e-9

    def to_json_dict(self) -> dict:
        return {
            "set": self.set_label,
            "family": self.family_tag,
            "param": dict(sorted(self.param.items())),
            "estimate": self.estimate,
            "mode": self.mode,
            "in_window": self.in_window,
            "self_cover_certificate": self.self_cover,
            "flagged_nonconvex": self.flagged_nonconvex,
            "mesh_per_scale": [float(m) for m in self.mesh_per_scale],
            "ladder": self.ladder.to_dict(),
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["set", "family", "s_or_phi", "scale", "Z_or_value"])
            ptag = ";".join(f"{k}={v}" for k, v in sorted(self.param.items()))
            for s, v in zip(self.ladder.scales, self.ladder.values):
                writer.writerow([self.set_label, self.family_tag, ptag,
                                 repr(float(s)), repr(float(v))])


# ---------------------------------------------------------------------------
# energy ladders
# ---------------------------------------------------------------------------

def _energy_ladder(cset: CompactSet, family: KernelFamily, scales,
                   mesh_for_scale, tol: float, restarts: int, seed: int,
                   max_iter: int):
    """Z(scale) over a ladder; one independent job per rung."""
    scales = np.asarray(scales, dtype=float)

    def job(k_scale):
        k, scale = k_scale
        delta = mesh_for_scale(scale)
        net = discretize(cset, delta)
        K = build_kernel(family, scale, net)
        res = min_energy(K, tol=tol, restarts=restarts, seed=seed + k,
                         max_iter=max_iter)
        return delta, res

    out = parallel_map(job, list(enumerate(scales)))
    meshes = [o[0] for o in out]
    results = [o[1] for o in out]
    zs = np.array([r.value for r in results])
    flagged = any(r.flagged_nonconvex for r in results)
    return meshes, zs, flagged


def box_profile(cset: CompactSet, family: KernelFamily, eps_ladder,
                tol: float = 1e-6, mode: str = "upper",
                mesh_ratio: float = MESH_RATIO, restarts: int = 4,
                seed: int = 0, max_iter: int = DEFAULT_MAX_ITER) -> ProfileReport:
    """Box-dimension profile: envelope slope of log Z(eps) against log eps.

    eps_ladder must decrease geometrically; the per-rung net mesh is
    eps/mesh_ratio.  Both envelopes and the least-squares slope are kept
    in the report's ladder record.
    """
    eps = np.sort(np.asarray(eps_ladder, dtype=float))[::-1]
    if eps.size < 2 or eps[-1] <= 0:
        raise ValueError("need a decreasing positive eps ladder")
    meshes, zs, flagged = _energy_ladder(
        cset, family, eps, lambda e: e / mesh_ratio, tol, restarts, seed,
        max_iter)
    if np.all(zs == zs[0]):
        ladder = LadderEstimate(scales=eps, values=zs, mode=mode, slope=0.0,
                                intercept=float(np.log(zs[0])), max_residual=0.0,
                                all_slopes={m: 0.0 for m in ("least_squares", "upper", "lower")})
        ladder._x_transform = np.log
        ladder._y_transform = np.log
        ladder._asymptotic = "tail"
    else:
        ladder = LadderEstimate.fit(eps, zs, mode=mode, asymptotic="tail")
    return ProfileReport(set_label=cset.label, family_tag=family.tag,
                         param={k: float(v) for k, v in family.params.items()},
                         estimate=ladder.slope, mode=mode, ladder=ladder,
                         mesh_per_scale=meshes,
                         self_cover=cset.self_cover_certificate,
                         flagged_nonconvex=flagged)


def fh_profile(cset: CompactSet, s: float, eps_ladder, **kw) -> ProfileReport:
    """Power-law (Falconer-Howroyd) profile of parameter s > 0."""
    return box_profile(cset, KernelFamily.fh(s), eps_ladder, **kw)


def stable_profile_via_fh(cset: CompactSet, alpha: float, d: int,
                          eps_ladder, **kw) -> ProfileReport:
    """Profile of a stable model through its power-law reduction.

    The stable kernel is bracketed by min(1, eps/t^{1/alpha})^d, so its
    profile equals alpha times the power-law profile at s = d/alpha; this
    evaluates the right side, which is far cheaper than exact kernels.
    """
    rep = fh_profile(cset, d / alpha, eps_ladder, **kw)
    ladder = rep.ladder
    return ProfileReport(set_label=rep.set_label, family_tag="stable_via_fh",
                         param={"alpha": float(alpha), "d": int(d)},
                         estimate=alpha * rep.estimate, mode=rep.mode,
                         ladder=ladder, mesh_per_scale=rep.mesh_per_scale,
                         self_cover=rep.self_cover,
                         flagged_nonconvex=rep.flagged_nonconvex)


def subordinator_box_dim(phi: LaplaceExponent, cset: CompactSet, lam_ladder,
                         tol: float = 1e-6, mode: str = "upper",
                         restarts: int = 2, seed: int = 0,
                         max_iter: int = DEFAULT_MAX_ITER) -> ProfileReport:
    """Growth exponent of 1 / Z(lam) for the kernel exp(-|t-s| Phi(lam)).

    lam_ladder must increase geometrically.  The mesh rule keeps
    Phi(lam) * delta <= 0.1 (and at least a handful of net points even
    when Phi(lam) is tiny).  The kernel is a covariance, so each rung is
    a certified convex solve.
    """
    lam = np.sort(np.asarray(lam_ladder, dtype=float))
    if lam.size < 2 or lam[0] <= 0:
        raise ValueError("need an increasing positive lam ladder")
    diam = max(cset.diameter, 1e-12)

    def mesh(l):
        p = float(phi(l))
        guard = diam / 8.0                       # resolve the set even at tiny Phi
        return min(SUBEXP_MESH_PRODUCT / p, guard) if p > 0 else guard

    family = KernelFamily.subordinator_exp(phi)
    meshes, zs, flagged = _energy_ladder(cset, family, lam, mesh, tol,
                                         restarts, seed, max_iter)
    ladder = LadderEstimate.fit(lam, zs, mode=mode,
                                y_transform=lambda v: -np.log(v),
                                asymptotic="tail")
    return ProfileReport(set_label=cset.label, family_tag="subexp",
                         param={"phi": phi.family}, estimate=ladder.slope,
                         mode=mode, ladder=ladder, mesh_per_scale=meshes,
                         self_cover=cset.self_cover_certificate,
                         flagged_nonconvex=flagged)


# ---------------------------------------------------------------------------
# Laplace-exponent indices
# ---------------------------------------------------------------------------

def phi_index(phi: LaplaceExponent, lam_ladder, which: str = "upper") -> float:
    """Envelope slope of log Phi(lam) against log lam.

    `which` = "upper" estimates the limsup (a packing-type index), "lower"
    the liminf (a Hausdorff-type index).  The ladder must span at least 8
    decades so slow corrections such as logarithms can settle.
    """
    if which not in ("upper", "lower"):
        raise ValueError("which must be 'upper' or 'lower'")
    lam = np.sort(np.asarray(lam_ladder, dtype=float))
    if lam[0] <= 0 or np.log10(lam[-1] / lam[0]) < 8 - 1e-9:
        raise ValueError("ladder must be positive and span at least 8 decades")
    vals = np.asarray(phi(lam), dtype=float)
    if np.any(vals <= 0):
        raise ValueError("Phi must be positive on the ladder")
    est = LadderEstimate.fit(lam, vals, mode=which, asymptotic="tail")
    return float(est.slope)


def theta_index(phi: LaplaceExponent, s: float, lam_max: float = 1e8,
                quad_tol: float = 1e-9, rungs_per_decade: float = 2.0) -> float:
    """Lower-envelope slope of log int_1^lam dx / Phi(x^{1/s}) vs log lam.

    The cumulative integral is built segment by segment on a geometric
    grid up to lam_max (log-substituted quadrature keeps wide segments
    well conditioned); the slope is clamped to [0, 1].  Requires s >= 1/2;
    smaller s is outside the validity of the downstream identity and is
    rejected rather than extrapolated.
    """
    if s < 0.5:
        raise ValueError("s must be >= 1/2")
    if lam_max <= 10.0:
        raise ValueError("lam_max too small for a slope estimate")
    decades = np.log10(lam_max)
    n_seg = max(8, int(np.ceil(decades * rungs_per_decade)))
    grid = np.logspace(0.0, np.log10(lam_max), n_seg + 1)

    def integrand_log(y):
        x = np.exp(y)
        return x / float(phi(np.array(x ** (1.0 / s))))

    total = 0.0
    cum = []
    for a, b in zip(grid[:-1], grid[1:]):
        with np.errstate(over="ignore", divide="ignore"):
            val, err = integrate.quad(integrand_log, np.log(a), np.log(b),
                                      limit=200, epsabs=0.0, epsrel=quad_tol)
        if not np.isfinite(val) or (val > 0 and err > 1e-6 * val):
            raise NonConvergedQuadrature(
                f"theta integrand on [{a:g}, {b:g}]: error {err:.2e}")
        total += val
        cum.append(total)
    lam = grid[1:]
    cum = np.asarray(cum)
    est = LadderEstimate.fit(lam, cum, mode="lower", asymptotic="tail")
    return float(min(1.0, max(0.0, est.slope)))


def fh_subordinator_predicted(phi: LaplaceExponent, s: float,
                              lam_max: float = 1e8, **kw) -> float:
    """Predicted power-law profile of the range of a subordinator on a
    unit time window: s * (1 - theta_index(phi, s))."""
    return s * (1.0 - theta_index(phi, s, lam_max=lam_max, **kw))
