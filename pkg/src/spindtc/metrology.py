"""Quantum Fisher information for joint (lambda, g) estimation.

Two finite-difference estimators are computed side by side: the overlap
form built from forward-shifted trajectories,

    F_ab = 4 Re[ (<psi_a|psi_b> - <psi_a|psi_0><psi_b|psi_0>) / (da db) ],

and the standard pure-state expression with central-difference derivative
states, 4 Re[<d_a psi|d_b psi> - <d_a psi|psi><psi|d_b psi>]. The two agree
up to second-order boundary terms; any element disagreeing beyond 1%
relative is flagged rather than hidden. The kick angle g shifts g_s and g_c
together (one shared parameter).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, StepSizeError, DegenerateInformationError
from .hilbert import SystemShape, PureState, x_polarized_state, inner
from .floquet import DriveParams, precompute, evolve

DEFAULT_DELTA = 1e-4
_CANCELLATION_FLOOR = 1e-12
_ZERO_FLOOR = 1e-14
_DISAGREEMENT_RTOL = 0.01


@dataclass(frozen=True)
class QfiMatrix:
    """2x2 Fisher matrix elements, both estimators, and the Eq.-style G."""

    f_ll: float
    f_gg: float
    f_lg: float
    g_scalar: float          # (f_ll + f_gg) / det, nan when det <= 0
    n_periods: int
    delta: float
    f_ll_crosscheck: float
    f_gg_crosscheck: float
    f_lg_crosscheck: float
    estimators_disagree: bool

    @property
    def determinant(self) -> float:
        return self.f_ll * self.f_gg - self.f_lg ** 2


def _evolved(shape: SystemShape, lam: float, g: float, n_periods: int,
             global_phase: float) -> PureState:
    state = x_polarized_state(shape)
    tables = precompute(shape, DriveParams.symmetric(lam, g))
    evolve(state, tables, n_periods)
    if global_phase != 0.0:
        state.amplitudes *= np.exp(1j * global_phase)
    return state


def _overlap_element(psi_a: PureState, psi_b: PureState, psi_0: PureState,
                     da: float, db: float, diagonal: bool = False) -> float:
    num = inner(psi_a, psi_b) - inner(psi_a, psi_0) * inner(psi_b, psi_0)
    mag = abs(num)
    if diagonal and _ZERO_FLOOR < mag < _CANCELLATION_FLOOR:
        # the shifted trajectory is barely distinguishable from the base one;
        # the quotient would be numerical noise (off-diagonal elements may be
        # legitimately tiny, so only the diagonals guard)
        raise StepSizeError(
            f"overlap difference {mag:.3e} below {_CANCELLATION_FLOOR}; "
            f"increase delta")
    if mag <= _ZERO_FLOOR:
        # parameter-independent state (e.g. zero periods), a true zero
        return 0.0
    return 4.0 * num.real / (da * db)


def _derivative_element(d_a: np.ndarray, d_b: np.ndarray,
                        psi_0: np.ndarray) -> float:
    val = np.vdot(d_a, d_b) - np.vdot(d_a, psi_0) * np.vdot(psi_0, d_b)
    return 4.0 * float(val.real)


def qfi_matrix(shape: SystemShape, params: DriveParams, n_periods: int,
               delta: float = DEFAULT_DELTA,
               global_phase: float = 0.0) -> QfiMatrix:
    """Fisher matrix at (lambda, g) from forward- and central-shifted runs.

    global_phase multiplies every evolved state; the elements are invariant
    under it (exposed so the invariance is testable).
    """
    if delta <= 0:
        raise StepSizeError(f"delta must be positive, got {delta}")
    if n_periods < 0:
        raise ShapeError(f"n_periods must be >= 0, got {n_periods}")
    if params.g_s != params.g_c:
        raise ShapeError("g is a single shared parameter; need g_s == g_c")
    lam, g = params.lam, params.g_s

    psi_0 = _evolved(shape, lam, g, n_periods, global_phase)
    psi_lp = _evolved(shape, lam + delta, g, n_periods, global_phase)
    psi_gp = _evolved(shape, lam, g + delta, n_periods, global_phase)

    f_ll = _overlap_element(psi_lp, psi_lp, psi_0, delta, delta, diagonal=True)
    f_gg = _overlap_element(psi_gp, psi_gp, psi_0, delta, delta, diagonal=True)
    f_lg = _overlap_element(psi_lp, psi_gp, psi_0, delta, delta)

    psi_lm = _evolved(shape, lam - delta, g, n_periods, global_phase)
    psi_gm = _evolved(shape, lam, g - delta, n_periods, global_phase)
    d_l = (psi_lp.amplitudes - psi_lm.amplitudes) / (2.0 * delta)
    d_g = (psi_gp.amplitudes - psi_gm.amplitudes) / (2.0 * delta)
    cc_ll = _derivative_element(d_l, d_l, psi_0.amplitudes)
    cc_gg = _derivative_element(d_g, d_g, psi_0.amplitudes)
    cc_lg = _derivative_element(d_l, d_g, psi_0.amplitudes)

    disagree = False
    for a, b in ((f_ll, cc_ll), (f_gg, cc_gg), (f_lg, cc_lg)):
        scale = max(abs(a), abs(b))
        if scale > _CANCELLATION_FLOOR and abs(a - b) > _DISAGREEMENT_RTOL * scale:
            disagree = True

    det = f_ll * f_gg - f_lg ** 2
    g_scalar = (f_ll + f_gg) / det if det > 0 else float("nan")
    return QfiMatrix(f_ll=f_ll, f_gg=f_gg, f_lg=f_lg, g_scalar=g_scalar,
                     n_periods=n_periods, delta=delta,
                     f_ll_crosscheck=cc_ll, f_gg_crosscheck=cc_gg,
                     f_lg_crosscheck=cc_lg, estimators_disagree=disagree)


def weighted_uncertainty(q: QfiMatrix) -> float:
    """G = (f_ll + f_gg) / (f_ll f_gg - f_lg^2), the equally-weighted
    two-parameter uncertainty combination: delta_lambda^2 + delta_g^2 >= G.
    Small G means both parameters are simultaneously well resolved.
    """
    det = q.determinant
    if det <= 0:
        raise DegenerateInformationError(
            f"Fisher determinant {det:.3e} is not positive")
    return (q.f_ll + q.f_gg) / det


def sensing_gain(q: QfiMatrix, crosscheck: bool = False) -> float:
    """det(F)/tr(F), the inverse of weighted_uncertainty.

    This is the figure of merit whose growth tracks simultaneous two-parameter
    sensitivity (larger is better); scaling exponents are fit on it.
    """
    if crosscheck:
        f_ll, f_gg, f_lg = q.f_ll_crosscheck, q.f_gg_crosscheck, q.f_lg_crosscheck
    else:
        f_ll, f_gg, f_lg = q.f_ll, q.f_gg, q.f_lg
    det = f_ll * f_gg - f_lg ** 2
    tr = f_ll + f_gg
    if det <= 0 or tr <= 0:
        raise DegenerateInformationError(
            f"Fisher matrix degenerate (det={det:.3e}, tr={tr:.3e})")
    return det / tr


def fit_power_law(points) -> tuple[float, float]:
    """Least-squares slope of ln y vs ln x and its r squared."""
    pts = list(points)
    if len(pts) < 3:
        raise ShapeError(f"need at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ShapeError("power-law fit needs strictly positive x and y")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return float(slope), r2
