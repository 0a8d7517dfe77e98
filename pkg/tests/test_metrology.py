import numpy as np
import pytest

from spindtc.errors import (ShapeError, StepSizeError,
                            DegenerateInformationError)
from spindtc.hilbert import SystemShape
from spindtc.floquet import DriveParams
from spindtc.metrology import (QfiMatrix, qfi_matrix, weighted_uncertainty,
                               sensing_gain, fit_power_law)

SPECIAL = DriveParams.symmetric(np.pi, np.pi / 2)


def _matrix(f_ll, f_gg, f_lg):
    det = f_ll * f_gg - f_lg ** 2
    g = (f_ll + f_gg) / det if det > 0 else float("nan")
    return QfiMatrix(f_ll, f_gg, f_lg, g, 1, 1e-4, f_ll, f_gg, f_lg, False)


def test_zero_periods_gives_zero_matrix():
    q = qfi_matrix(SystemShape(3, 1), SPECIAL, 0)
    assert q.f_ll == 0.0 and q.f_gg == 0.0 and q.f_lg == 0.0


def test_validation():
    sh = SystemShape(3, 1)
    with pytest.raises(StepSizeError):
        qfi_matrix(sh, SPECIAL, 4, delta=0.0)
    with pytest.raises(ShapeError):
        qfi_matrix(sh, SPECIAL, -1)
    with pytest.raises(ShapeError):
        qfi_matrix(sh, DriveParams(np.pi, 0.3, 0.4), 4)


def test_diagonal_elements_nonnegative():
    for n in (4, 12, 20):
        q = qfi_matrix(SystemShape(4, 2), DriveParams.symmetric(1.3, 0.7), n)
        assert q.f_ll >= -1e-6
        assert q.f_gg >= -1e-6


def test_global_phase_invariance():
    sh = SystemShape(4, 1)
    a = qfi_matrix(sh, SPECIAL, 16)
    b = qfi_matrix(sh, SPECIAL, 16, global_phase=1.7)
    assert a.f_ll == pytest.approx(b.f_ll, rel=1e-6)
    assert a.f_gg == pytest.approx(b.f_gg, rel=1e-6)
    assert a.f_lg == pytest.approx(b.f_lg, rel=1e-6, abs=1e-6)


def test_step_halving_convergence():
    # halving delta moves every element by under 0.1% of the matrix scale
    # (the literal off-diagonal carries an O(delta) boundary term, so a tiny
    # f_lg cannot converge relative to itself; the cross-check one does)
    sh = SystemShape(5, 1)
    a = qfi_matrix(sh, SPECIAL, 32, delta=1e-4)
    b = qfi_matrix(sh, SPECIAL, 32, delta=5e-5)
    scale = max(abs(a.f_ll), abs(a.f_gg), abs(a.f_lg), 1.0)
    for x, y in ((a.f_ll, b.f_ll), (a.f_gg, b.f_gg), (a.f_lg, b.f_lg)):
        assert abs(x - y) <= 1e-3 * scale
    assert abs(a.f_lg_crosscheck - b.f_lg_crosscheck) <= 1e-3 * scale


def test_time_quadratic_growth_f_ll():
    pts = []
    for n in range(8, 97, 8):
        q = qfi_matrix(SystemShape(5, 1), SPECIAL, n)
        pts.append((n, q.f_ll))
    slope, r2 = fit_power_law(pts)
    assert slope == pytest.approx(2.0, abs=0.1)


def test_weighted_uncertainty_diagonal():
    assert weighted_uncertainty(_matrix(3.0, 3.0, 0.0)) == pytest.approx(2 / 3)


def test_weighted_uncertainty_degenerate():
    with pytest.raises(DegenerateInformationError):
        weighted_uncertainty(_matrix(2.0, 2.0, 2.0))
    with pytest.raises(DegenerateInformationError):
        sensing_gain(_matrix(2.0, 2.0, 2.0))


def test_sensing_gain_is_inverse_of_g():
    q = _matrix(5.0, 3.0, 1.0)
    assert sensing_gain(q) == pytest.approx(1.0 / weighted_uncertainty(q))


def test_fit_power_law_exact():
    slope, r2 = fit_power_law([(x, 7 * x ** 2) for x in range(1, 11)])
    assert slope == pytest.approx(2.0, abs=1e-10)
    assert r2 == pytest.approx(1.0, abs=1e-12)
    slope, _ = fit_power_law([(x, 0.3 * x) for x in range(1, 8)])
    assert slope == pytest.approx(1.0, abs=1e-10)


def test_fit_power_law_validation():
    with pytest.raises(ShapeError):
        fit_power_law([(1, 1), (2, 4)])
    with pytest.raises(ShapeError):
        fit_power_law([(1, 1), (2, 4), (-3, 9)])
    with pytest.raises(ShapeError):
        fit_power_law([(1, 1), (2, 0), (3, 9)])


def test_beta_classification_verified_subset():
    # size-scaling exponents of the sensing gain at n = 50, fitted inside one
    # congruence class of N_sat at a time; only the desk-scale-verified rows
    # are asserted (tolerance 0.25)
    cases = [
        (4, [4, 8], 1.0, 0.25),       # s=2, N=4j
        (4, [2, 6], 1.0, 0.25),       # s=2, N=4j+2
        (2, [4, 8], 0.0, 0.3),        # s=1, N=4j: suppressed scaling
        (2, [5, 9], 1.0, 0.25),       # s=1, N=4j+1
        (2, [3, 7], 1.0, 0.25),       # s=1, N=4j+3
        (1, [4, 8], 1.0, 0.25),       # s=1/2, N=4j
    ]
    for two_s, sizes, expect, tol in cases:
        pts = []
        for n_sat in sizes:
            q = qfi_matrix(SystemShape(n_sat, two_s), SPECIAL, 50)
            pts.append((n_sat, sensing_gain(q)))
        slope = np.log(pts[1][1] / pts[0][1]) / np.log(pts[1][0] / pts[0][0])
        assert slope == pytest.approx(expect, abs=tol), (two_s, sizes, slope)
