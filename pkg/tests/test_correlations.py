import math

import pytest

from latgas.correlations import (bound_rhs, calibrate_constants, decay_fit,
                                 pair_rows, torus_distance)
from latgas.model import LatticeSpec, PotentialSpec
from latgas.oracle import exact_correlations

POT = PotentialSpec("standard", 1.0)


def test_bound_rhs_structure():
    beta, n, vol = 0.3, 4, 20
    rho = n / vol
    same = bound_rhs(0.0, n, vol, beta, 1.0, 2.0, 3.0)
    assert same == pytest.approx(rho ** 2 * (1 + 1 / n + 2.0) + 3.0 / vol)
    near = bound_rhs(1.0, n, vol, beta, 1.0, 2.0, 3.0)
    e4b = math.expm1(4 * beta)
    assert near == pytest.approx(
        rho ** 2 * (e4b * (1 + 1 / n) + 2.0 * math.exp(-1)) + 3.0 / vol)
    far = bound_rhs(5.0, n, vol, beta, 1.0, 0.0, 0.0)
    assert far == 0.0


def test_bound_monotone_in_constants():
    base = bound_rhs(2.0, 3, 12, 0.2, 1.0, 0.5, 0.5)
    assert bound_rhs(2.0, 3, 12, 0.2, 1.0, 1.0, 0.5) >= base
    assert bound_rhs(2.0, 3, 12, 0.2, 1.0, 0.5, 1.0) >= base


def test_free_case_feasible_with_zero_c():
    table = exact_correlations(LatticeSpec(1, 12, "periodic"), POT, 0.0, 3)
    cal = calibrate_constants([table])
    assert cal.feasible and cal.c_min == 0.0
    rep = pair_rows(table, cal.c_min, cal.c1_min)
    assert rep.all_feasible


def test_family_calibration_feasible():
    tables = [exact_correlations(LatticeSpec(1, 12, "periodic"), POT, b, n)
              for b in (0.1, 0.2) for n in (2, 3)]
    cal = calibrate_constants(tables)
    assert cal.feasible and math.isfinite(cal.c1_min)
    for t in tables:
        assert pair_rows(t, cal.c_min, cal.c1_min).all_feasible
    # enlarging the constants keeps feasibility
    for t in tables:
        assert pair_rows(t, cal.c_min + 1.0, cal.c1_min + 1.0).all_feasible


def test_calibration_reports_binding_case():
    tables = [exact_correlations(LatticeSpec(1, 10, "periodic"), POT, 0.2, 3)]
    cal = calibrate_constants(tables)
    assert cal.binding_case


def test_torus_distance():
    lat = LatticeSpec(1, 10, "periodic")
    assert torus_distance(lat, (0,), (9,)) == 1.0
    assert torus_distance(lat, (0,), (5,)) == 5.0
    lat2 = LatticeSpec(2, 4, "periodic")
    assert torus_distance(lat2, (0, 0), (3, 3)) == pytest.approx(math.sqrt(2))


def test_decay_fit_positive_rate():
    fit = decay_fit(LatticeSpec(1, 14, "periodic"), POT, 0.2, 5)
    assert fit.rate > 0 and not fit.flagged_flat
    assert fit.n_points >= 2


def test_decay_fit_flags_flat_cases():
    # beta = 0: no distance dependence beyond exchangeability
    fit0 = decay_fit(LatticeSpec(1, 12, "periodic"), POT, 0.0, 5)
    assert fit0.flagged_flat
    # N = 2: no third particle to mediate correlations past contact
    fit2 = decay_fit(LatticeSpec(1, 12, "periodic"), POT, 0.2, 2)
    assert fit2.flagged_flat


def test_decay_length_grows_with_beta():
    # stronger coupling decays more slowly: the fitted rate decreases
    rates = [decay_fit(LatticeSpec(1, 14, "periodic"), POT, b, 5).rate
             for b in (0.1, 0.2, 0.4)]
    assert rates[0] > rates[1] > rates[2] > 0


def test_csv_rows_schema():
    table = exact_correlations(LatticeSpec(1, 10, "periodic"), POT, 0.1, 2)
    rep = pair_rows(table, 0.5, 0.5)
    rows = rep.csv_rows()
    assert rows[0] == ("q1", "q2", "dist", "u2_exact", "rhs", "feasible")
    assert len(rows) == 1 + 100
