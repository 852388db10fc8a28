"""Closed-form leakage predictions and fitting routines.

Sudden-limit formulas follow from the overlap of quasiparticle wavefunctions
before and after an instantaneous change of the chemical potential; the
near-adiabatic formulas from half Landau-Zener transition amplitudes with the
dynamic phase E_gap * mu_fin / v setting the oscillation frequency.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.optimize import least_squares

from .errors import FitConvergenceError, InvalidParameterError
from .model import ChainParams, ModeBasis, band_gap, bulk_energy, resolved_basis


@dataclass(frozen=True)
class FitResult:
    """Named parameters plus residual diagnostics of a least-squares fit."""

    parameters: Dict[str, float]
    residual_norm: float
    r_squared: float
    domain: Tuple[float, float]

    def __getitem__(self, key: str) -> float:
        return self.parameters[key]


@dataclass(frozen=True)
class SuddenPrediction:
    """Sudden-quench leakage estimates and the MZM overlaps behind them."""

    l_even_tilde: float
    l_odd_tilde: float
    overlaps: Tuple[float, float, float, float]


def sudden_even_prediction(n_sites: int, mu_fin: float, w: float = 0.5) -> float:
    """Bulk-pair leakage after a quench from mu=0: (N - 2) mu_fin^2 / 8.

    Specialization to pairing equal to hopping w = 1/2 with the quench
    starting at mu = 0; the two boundary sites are excluded from the bulk
    count.
    """
    if w != 0.5:
        warnings.warn("closed form assumes hopping = pairing = 1/2", stacklevel=2)
    return (n_sites - 2) * mu_fin ** 2 / 8.0


def sudden_even_integral(n_sites: int, mu_in: float, mu_fin: float,
                         w: float, delta: float) -> float:
    """Brillouin-zone integral behind the sudden even-sector leakage.

    The mode-mixing amplitude for momentum k under a small sudden change of
    mu is beta_k = -delta_k (mu_fin - mu_in) / (2 E_bulk(k)^2) with
    delta_k = 2 Delta sin k; the leakage is the bulk-count prefactor
    (N - 2)/(2 pi) times the integral of |beta_k|^2 over the zone.
    """
    dmu = mu_fin - mu_in

    def integrand(k):
        e = bulk_energy(k, mu_in, w, delta)
        beta = -2.0 * delta * np.sin(k) * dmu / (2.0 * e ** 2)
        return beta ** 2

    val, err = integrate.quad(integrand, -np.pi, np.pi, epsabs=1e-12, epsrel=1e-10, limit=200)
    if err > 1e-8 * max(abs(val), 1.0):
        raise FitConvergenceError("quadrature did not converge: estimate %g" % err)
    return (n_sites - 2) / (2.0 * np.pi) * val


def mzm_overlaps(basis_in: ModeBasis, basis_fin: ModeBasis) -> Tuple[float, ...]:
    """Overlap of corresponding localized MZM vectors in two bases."""
    vin = basis_in.mzm_vectors
    vfin = basis_fin.mzm_vectors
    if len(vin) != len(vfin):
        raise InvalidParameterError("bases have different numbers of MZMs")
    out = []
    for a, b in zip(vin, vfin):
        out.append(float((a.conj() @ b).real))
    return tuple(out)


def sudden_odd_prediction(basis_in: ModeBasis, basis_fin: ModeBasis) -> float:
    """Parity-sector leakage after a quench: (1 - prod of MZM overlaps) / 2."""
    alphas = mzm_overlaps(basis_in, basis_fin)
    prod = 1.0
    for a in alphas:
        if abs(a) < 0.5:
            raise InvalidParameterError(
                "MZM overlap %g < 0.5: quench too large for pairing by position" % a
            )
        prod *= a
    return 0.5 * (1.0 - prod)


def sudden_prediction(params: ChainParams, mu_in: float, mu_fin: float) -> SuddenPrediction:
    """Convenience bundle of both sudden-limit estimates for one quench."""
    basis_in = resolved_basis(params, mu_in)
    basis_fin = resolved_basis(params, mu_fin, previous=basis_in)
    alphas = mzm_overlaps(basis_in, basis_fin)
    prod = float(np.prod(alphas))
    return SuddenPrediction(
        l_even_tilde=sudden_even_integral(params.n_sites, mu_in, mu_fin,
                                          params.hopping, params.pairing),
        l_odd_tilde=0.5 * (1.0 - prod),
        overlaps=tuple(alphas),
    )


def near_adiabatic_even_envelope(n_sites: int, v: float) -> float:
    """Crest of the even-sector leakage oscillation at slow ramps: N v^2 / 8."""
    return n_sites * v * v / 8.0


def dynamic_phase_frequency(mu_fin: float, gap: Optional[float] = None,
                            w: float = 0.5) -> float:
    """Oscillation frequency (coefficient of 1/v) of the slow-ramp leakage.

    The accumulated dynamic phase of a singly excited level over the ramp is
    gap * mu_fin / v, so the parity-sector leakage oscillates at
    omega = gap * mu_fin; the even sector runs at twice this frequency.
    The default gap is evaluated at mid-ramp, mu = mu_fin / 2.
    """
    if gap is None:
        gap = band_gap(mu_fin / 2.0, w)
    return gap * mu_fin


def _ols(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def half_lz_model(v: np.ndarray, k1: float, m1: float, k2: float, m2: float,
                  omega: float) -> np.ndarray:
    """Leakage-versus-rate law in the near-adiabatic window."""
    v = np.asarray(v, dtype=float)
    return k1 * v ** m1 + k2 * v ** m2 * np.cos(omega / v)


def fit_half_lz(samples: Sequence[Tuple[float, float]],
                omega_max: float = 0.2,
                omega_step: float = 1e-4) -> FitResult:
    """Fit L(v) = k1 v^m1 + k2 v^m2 cos(omega/v) on a near-adiabatic window.

    Stage one scans omega on a uniform grid with m1 = m2 = 2 fixed and the
    amplitudes solved linearly; stage two refines all five parameters from
    the best grid point.  Both stages are deterministic.
    """
    data = np.asarray(samples, dtype=float)
    if data.shape[0] < 20:
        raise FitConvergenceError("need at least 20 samples, got %d" % data.shape[0])
    v = data[:, 0]
    ell = data[:, 1]
    v2 = v ** 2
    inv_v = 1.0 / v

    best = None
    for omega in np.arange(0.0, omega_max + omega_step / 2, omega_step):
        design = np.column_stack([v2, v2 * np.cos(omega * inv_v)])
        coef, *_ = np.linalg.lstsq(design, ell, rcond=None)
        resid = float(np.sum((design @ coef - ell) ** 2))
        if best is None or resid < best[0]:
            best = (resid, omega, coef)
    _, omega0, (k1_0, k2_0) = best

    if omega0 > 0 and (inv_v.max() - inv_v.min()) * omega0 < 2.0 * np.pi:
        raise FitConvergenceError("window does not resolve one oscillation period")

    def residuals(p):
        return half_lz_model(v, *p) - ell

    sol = least_squares(residuals, x0=[k1_0, 2.0, k2_0, 2.0, omega0],
                        ftol=1e-12, xtol=1e-12, gtol=1e-12, max_nfev=20000)
    if not sol.success:
        raise FitConvergenceError("refinement failed: %s" % sol.message)
    k1, m1, k2, m2, omega = (float(x) for x in sol.x)
    # cos is even in omega and k2 can absorb a sign; report the canonical branch
    omega = abs(omega)
    ss_res = float(np.sum(sol.fun ** 2))
    ss_tot = float(np.sum((ell - ell.mean()) ** 2))
    return FitResult(
        parameters={"k1": k1, "m1": m1, "k2": k2, "m2": m2, "omega": omega},
        residual_norm=float(np.sqrt(ss_res)),
        r_squared=1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0,
        domain=(float(v.min()), float(v.max())),
    )


def fit_power_approach(samples: Sequence[Tuple[float, float]], l_inf: float) -> FitResult:
    """Log-log slope of the approach L(v) = L(inf) - k / v^|m| at high rates."""
    data = np.asarray(samples, dtype=float)
    v = data[:, 0]
    ell = data[:, 1]
    diff = l_inf - ell
    keep = diff > 0
    if np.count_nonzero(~keep) > 0.2 * len(diff):
        raise FitConvergenceError(
            "%d of %d samples sit above the asymptote" % (np.count_nonzero(~keep), len(diff))
        )
    if np.count_nonzero(keep) < 2:
        raise FitConvergenceError("not enough usable samples")
    x = np.log(v[keep])
    y = np.log(diff[keep])
    slope, intercept, r2 = _ols(x, y)
    return FitResult(
        parameters={"slope": slope, "intercept": intercept, "k": float(np.exp(intercept))},
        residual_norm=float(np.sqrt(np.sum((slope * x + intercept - y) ** 2))),
        r_squared=r2,
        domain=(float(v.min()), float(v.max())),
    )


def fit_linear_in_n(samples: Sequence[Tuple[float, float]]) -> FitResult:
    """Ordinary least squares of leakage against chain length."""
    data = np.asarray(samples, dtype=float)
    if data.shape[0] < 5:
        raise FitConvergenceError("need at least 5 lengths, got %d" % data.shape[0])
    n = data[:, 0]
    ell = data[:, 1]
    slope, intercept, r2 = _ols(n, ell)
    return FitResult(
        parameters={"slope": slope, "intercept": intercept},
        residual_norm=float(np.sqrt(np.sum((slope * n + intercept - ell) ** 2))),
        r_squared=r2,
        domain=(float(n.min()), float(n.max())),
    )
