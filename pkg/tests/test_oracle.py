import math
from math import comb

import numpy as np
import pytest

from latgas.model import GuardError, LatticeSpec, PotentialSpec, mu_from_field
from latgas.oracle import (exact_canonical_table, exact_correlations,
                           grand_canonical_eval, ising_gas_consistency,
                           ising_grand_partition, transfer_matrix_table)

POT = PotentialSpec("standard", 1.0)


def test_two_site_chain_table():
    beta = 0.3
    t = exact_canonical_table(LatticeSpec(1, 2, "zero"), POT, beta)
    assert t.log_z_of(0) == pytest.approx(0.0)
    assert t.log_z_of(1) == pytest.approx(math.log(2))
    assert t.log_z_of(2) == pytest.approx(4 * beta)  # single adjacent pair
    assert t.log_z_of(3) == -math.inf  # hard core beyond |Lambda|


def test_single_particle_counts_sites():
    for lat in (LatticeSpec(1, 5, "zero"), LatticeSpec(2, 3, "periodic")):
        t = exact_canonical_table(lat, POT, 0.7)
        assert t.log_z_of(1) == pytest.approx(math.log(lat.n_sites))


def test_transfer_matrix_two_sites():
    beta = 0.25
    t = transfer_matrix_table(2, POT, beta, "zero")
    assert np.allclose(np.exp(t.log_z), [1.0, 2.0, math.exp(4 * beta)])


def test_transfer_matrix_free_counting():
    t = transfer_matrix_table(10, POT, 0.0, "zero")
    assert np.allclose(np.exp(t.log_z), [comb(10, n) for n in range(11)])


@pytest.mark.parametrize("boundary", ["zero", "periodic"])
@pytest.mark.parametrize("side", [5, 10, 14])
def test_cross_oracle_agreement(boundary, side):
    beta = 0.35
    tm = transfer_matrix_table(side, POT, beta, boundary)
    en = exact_canonical_table(LatticeSpec(1, side, boundary), POT, beta)
    for n in range(side + 1):
        a, b = tm.log_z_of(n), en.log_z_of(n)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_kac_transfer_matrix_matches_enumeration():
    kac = PotentialSpec("kac", 1.0, 2)
    beta = 0.2
    tm = transfer_matrix_table(9, kac, beta, "zero")
    en = exact_canonical_table(LatticeSpec(1, 9, "zero"), kac, beta)
    assert np.allclose(tm.log_z, en.log_z, atol=1e-12)


def test_transfer_matrix_guards():
    with pytest.raises(GuardError):
        transfer_matrix_table(5000, POT, 0.1, "zero")
    with pytest.raises(GuardError):
        transfer_matrix_table(10, PotentialSpec("kac", 1.0, 2), 0.1, "periodic")


def test_enumeration_guard():
    with pytest.raises(GuardError):
        exact_canonical_table(LatticeSpec(1, 25, "zero"), POT, 0.1)


def test_grand_canonical_normalization_and_limits():
    t = exact_canonical_table(LatticeSpec(1, 8, "zero"), POT, 0.3)
    g = grand_canonical_eval(t, -0.5)
    assert abs(g.probs.sum() - 1.0) <= 1e-12
    assert g.log_xi >= 0.0  # Xi >= 1 (N=0 term)
    g_far = grand_canonical_eval(t, -80.0)
    assert g_far.probs[0] == pytest.approx(1.0, abs=1e-9)


def test_two_site_occupation_probability():
    beta, mu = 0.3, -1.0
    t = exact_canonical_table(LatticeSpec(1, 2, "zero"), POT, beta)
    g = grand_canonical_eval(t, mu)
    z = math.exp(beta * mu)
    xi = 1 + 2 * z + math.exp(4 * beta) * z * z
    assert g.probs[1] == pytest.approx(2 * z / xi)


def test_pressure_monotone_convex_in_mu():
    t = exact_canonical_table(LatticeSpec(1, 10, "periodic"), POT, 0.4)
    mus = np.linspace(-6.0, 2.0, 51)
    vals = [grand_canonical_eval(t, float(m)).log_xi for m in mus]
    diffs = np.diff(vals)
    assert np.all(diffs > 0)
    assert np.all(np.diff(diffs) > -1e-10)


def test_mean_is_pressure_derivative():
    t = exact_canonical_table(LatticeSpec(1, 10, "zero"), POT, 0.3)
    mu, h = -1.5, 1e-4
    g = grand_canonical_eval(t, mu)
    fd = (grand_canonical_eval(t, mu + h).pressure
          - grand_canonical_eval(t, mu - h).pressure) / (2 * h)
    assert g.mean_particles() / t.n_sites == pytest.approx(fd, abs=1e-6)


def test_correlation_sum_rules():
    lat = LatticeSpec(1, 10, "periodic")
    t = exact_correlations(lat, POT, 0.25, 3)
    assert t.rho1.sum() == pytest.approx(3.0)
    assert t.rho2.sum() == pytest.approx(6.0)
    assert np.allclose(t.rho2.sum(axis=1), 2 * t.rho1)
    assert np.allclose(t.u2, t.u2.T)
    assert np.allclose(t.rho1, 0.3)  # torus translation invariance
    # coincident pins: rho2 = 0, u2 = -rho1^2
    assert t.rho2[0, 0] == 0.0
    assert t.u2[0, 0] == pytest.approx(-0.09)


def test_correlations_free_case():
    lat = LatticeSpec(1, 10, "periodic")
    t = exact_correlations(lat, POT, 0.0, 3)
    assert t.rho2[0, 4] == pytest.approx(3 * 2 / (10 * 9))
    assert t.u2[0, 4] == pytest.approx(6 / 90 - 0.09)
    assert t.u2[0, 4] < 0  # sampling without replacement anticorrelates


def test_ising_gas_consistency():
    # m = -1: both sides reduce to the empty-gas prefactor
    lat = LatticeSpec(1, 4, "zero")
    lhs, rhs = ising_gas_consistency(lat, POT, 0.5, -1.0)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    lhs, rhs = ising_gas_consistency(lat, POT, 0.5, -0.5)
    assert lhs == pytest.approx(rhs, rel=1e-10)
    lat2 = LatticeSpec(2, 3, "zero")
    lhs, rhs = ising_gas_consistency(lat2, POT, 0.3, -7.0 / 9.0)
    assert lhs == pytest.approx(rhs, rel=1e-10)
    # denser magnetizations exercise real pair interactions on both sides
    for lattice, m in ((lat, 0.0), (LatticeSpec(1, 5, "zero"), 0.2),
                       (lat2, 8.0 / 9.0 - 1.0)):
        lhs, rhs = ising_gas_consistency(lattice, POT, 0.45, m)
        assert lhs == pytest.approx(rhs, rel=1e-12)
    with pytest.raises(ValueError):
        ising_gas_consistency(lat, POT, 0.5, -0.4)  # non-integral N


def test_grand_canonical_ising_gas_identity():
    # Xi_ising^-(h) = exp(-beta |Lambda| [h - J |E|/|Lambda|]) Xi_gas(mu(h))
    beta = 0.35
    for d, L in ((1, 4), (2, 2)):
        lat = LatticeSpec(d, L, "fixed")  # empty gamma = uniform -1 walls
        h = -1.2
        log_ising = ising_grand_partition(lat, POT, beta, h)
        mu = mu_from_field(h, lat, POT)
        gas = grand_canonical_eval(exact_canonical_table(lat, POT, beta), mu)
        expected = (-beta * (h * lat.n_sites - POT.coupling * lat.edge_count())
                    + gas.log_xi)
        assert log_ising == pytest.approx(expected, abs=1e-10)


def test_table_csv_rows():
    t = exact_canonical_table(LatticeSpec(1, 2, "zero"), POT, 0.3)
    rows = t.csv_rows()
    assert rows[0] == ("N", "logZ")
    assert len(rows) == 4
    g = grand_canonical_eval(t, -1.0)
    prows = g.csv_rows()
    assert prows[0] == ("N", "prob")
    assert float(prows[1][1]) == pytest.approx(g.probs[0])


def test_fixed_boundary_table_via_boundary_weights():
    # Z^gamma(N) = sum over N-subsets of exp(-beta H^0) prod_i nu(x_i|gamma)
    import itertools

    from latgas.model import boundary_weight, lattice_gas_hamiltonian

    beta = 0.4
    lat = LatticeSpec(2, 3, "fixed", gamma=((-1, 0), (0, -1), (3, 2)))
    open_box = LatticeSpec(2, 3, "zero")
    table = exact_canonical_table(lat, POT, beta)
    for n in (1, 2, 3):
        acc = 0.0
        for sub in itertools.combinations(lat.sites(), n):
            h0 = lattice_gas_hamiltonian(list(sub), open_box, POT)
            w = 0.0 if math.isinf(h0) else math.exp(-beta * h0)
            for x in sub:
                w *= boundary_weight(x, lat, POT, beta)
            acc += w
        assert math.exp(table.log_z_of(n)) == pytest.approx(acc, rel=1e-10)
