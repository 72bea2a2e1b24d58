"""Closed-form convergence thresholds and the shared 1-D maximization.

All five bounds are explicit functions of (d, J or R, beta):

* canonical radius   R_C     = F(e^{-beta B}) / (e^{beta B} C-bar)
* Penrose variant    R-bar_C = F(e^{2 beta B}) / (e^{2 beta B} C)
* contour threshold  h_IS    = -(2d + 1 + 2 log(2d) + log 2)/(2 beta),
                     M_IS    = 2 h_IS - 4 d J
* fugacity threshold M_LG    = -(1/beta) log(e^{beta B + 1} C-bar)
* virial radius      R_V     = 1 / (2 e^{1 + beta(B + 4J)} C-bar)

with F(u) = max_{a>0} ln(1 + u(1-e^{-a})) / (e^a (1 + u(1-e^{-a}))).
The maximizer collapses like (e-1)/u for large u, far below any linear
grid, so the pre-scan is geometric in a before golden-section refinement.
At beta = 0 the two threshold chemical potentials are reported as explicit
-inf sentinels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PotentialSpec, model_constants

A_MIN = 1e-60
A_MAX = 20.0
PRESCAN_POINTS = 120_001


def _g_of_a(a: np.ndarray, u: float) -> np.ndarray:
    t = u * (-np.expm1(-a))
    return np.log1p(t) / (np.exp(a) * (1.0 + t))


def maximize_big_f(u: float) -> tuple[float, float]:
    """argmax and value of F(u); tolerance ~1e-12 (absolute and relative) in a."""
    if u <= 0:
        raise ValueError("u must be positive")
    grid = np.geomspace(A_MIN, A_MAX, PRESCAN_POINTS)
    vals = _g_of_a(grid, u)
    k = int(np.argmax(vals))
    best = vals[k]
    # multimodality guard: a second local-max region near the global one
    interior = (vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:])
    peaks = np.nonzero(interior & (vals[1:-1] > best * (1.0 - 1e-6)))[0] + 1
    candidates = [k] if len(peaks) <= 1 else sorted(set(peaks) | {k})

    best_a, best_v = grid[k], best
    for c in candidates:
        lo = math.log(grid[max(c - 1, 0)])
        hi = math.log(grid[min(c + 1, len(grid) - 1)])
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        x1 = hi - phi * (hi - lo)
        x2 = lo + phi * (hi - lo)
        f1 = float(_g_of_a(np.array([math.exp(x1)]), u)[0])
        f2 = float(_g_of_a(np.array([math.exp(x2)]), u)[0])
        for _ in range(300):
            # 5e-14 log-space width: <= 1e-12 absolute in a over the whole domain
            if hi - lo < 5e-14:
                break
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + phi * (hi - lo)
                f2 = float(_g_of_a(np.array([math.exp(x2)]), u)[0])
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - phi * (hi - lo)
                f1 = float(_g_of_a(np.array([math.exp(x1)]), u)[0])
        a = math.exp((lo + hi) / 2.0)
        v = float(_g_of_a(np.array([a]), u)[0])
        if v > best_v:
            best_a, best_v = a, v
    return best_a, best_v


def _ising_coupling(pot: PotentialSpec) -> float:
    return pot.coupling if pot.kind == "standard" else 1.0


def radius_canonical(d: int, pot: PotentialSpec, beta: float) -> tuple[float, float]:
    """(R_C, a*) from the refined tree-graph route."""
    c = model_constants(d, pot, beta)
    a_star, f_val = maximize_big_f(math.exp(-beta * c.stability_B))
    return f_val / (math.exp(beta * c.stability_B) * c.tree_C_bar), a_star


def radius_canonical_penrose(d: int, pot: PotentialSpec, beta: float) -> tuple[float, float]:
    """(R-bar_C, a*) from the classical Penrose tree-graph route."""
    c = model_constants(d, pot, beta)
    a_star, f_val = maximize_big_f(math.exp(2.0 * beta * c.stability_B))
    return f_val / (math.exp(2.0 * beta * c.stability_B) * c.regularity_C), a_star


def contour_threshold(d: int, pot: PotentialSpec, beta: float) -> tuple[float, float]:
    """(h_IS, M_IS); -inf sentinels at beta = 0."""
    if beta == 0.0:
        return -math.inf, -math.inf
    J = _ising_coupling(pot)
    h_is = -(2 * d + 1 + 2 * math.log(2 * d) + math.log(2.0)) / (2.0 * beta)
    return h_is, 2.0 * h_is - 4.0 * d * J


def lattice_gas_threshold(d: int, pot: PotentialSpec, beta: float) -> float:
    """M_LG; -inf sentinel at beta = 0."""
    if beta == 0.0:
        return -math.inf
    c = model_constants(d, pot, beta)
    return -(beta * c.stability_B + 1.0 + math.log(c.tree_C_bar)) / beta


def radius_virial(d: int, pot: PotentialSpec, beta: float) -> float:
    """R_V; the exponent beta(B + B*) equals 4 beta J(2d+1) for range 1."""
    c = model_constants(d, pot, beta)
    b_star = 4.0 * _ising_coupling(pot)
    return 1.0 / (2.0 * math.exp(1.0 + beta * (c.stability_B + b_star)) * c.tree_C_bar)


@dataclass(frozen=True)
class RadiusReport:
    dimension: int
    pot: PotentialSpec
    beta: float
    r_c: float
    a_star_rc: float
    r_c_bar: float
    a_star_rcbar: float
    h_is: float
    m_is: float
    m_lg: float
    r_v: float

    def csv_row(self) -> tuple[str, ...]:
        vals = (self.beta, self.r_c, self.r_c_bar, self.m_is, self.m_lg,
                self.r_v, self.a_star_rc, self.a_star_rcbar)
        return tuple(format(v, ".17g") for v in vals)


CSV_HEADER = ("beta", "R_C", "R_C_bar", "M_IS", "M_LG", "R_V",
              "a_star_RC", "a_star_RCbar")


def radius_report(d: int, pot: PotentialSpec, beta: float) -> RadiusReport:
    r_c, a_rc = radius_canonical(d, pot, beta)
    r_cb, a_rcb = radius_canonical_penrose(d, pot, beta)
    h_is, m_is = contour_threshold(d, pot, beta)
    return RadiusReport(dimension=d, pot=pot, beta=beta,
                        r_c=r_c, a_star_rc=a_rc,
                        r_c_bar=r_cb, a_star_rcbar=a_rcb,
                        h_is=h_is, m_is=m_is,
                        m_lg=lattice_gas_threshold(d, pot, beta),
                        r_v=radius_virial(d, pot, beta))


def sweep_radii(d: int, pot: PotentialSpec, betas) -> list[RadiusReport]:
    return [radius_report(d, pot, float(b)) for b in betas]


def sign_change_count(values) -> int:
    """Sign flips along a sequence, ignoring zeros and non-finite entries."""
    arr = np.asarray([v for v in values if math.isfinite(v)], dtype=float)
    if len(arr) == 0:
        return 0
    scale = np.max(np.abs(arr))
    signs = [int(np.sign(v)) for v in arr if abs(v) > 1e-13 * max(scale, 1e-300)]
    flips = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            flips += 1
    return flips


def cluster_sum_margin(n_particles: int, volume: int, d: int,
                       pot: PotentialSpec, beta: float,
                       order_cap: int = 5) -> tuple[float, float, float]:
    """Partial polymer-sum bound versus the e^a - 1 budget at the reported a*.

    Assembles sum_{V ni i} |zeta(V)| e^{a|V|} from the per-size bounds
    |zeta_n| <= n^{n-2} e^{beta B n} C-bar^{n-1} / |Lambda|^{n-1} with
    n <= order_cap, at a = a*(R_C); returns (partial bound, budget, a*).
    """
    c = model_constants(d, pot, beta)
    _r_c, a_star = radius_canonical(d, pot, beta)
    a_star_used = a_star
    total = 0.0
    for n in range(2, min(n_particles, order_cap) + 1):
        log_term = (beta * c.stability_B + a_star_used
                    + (n - 2) * math.log(n)
                    + (n - 1) * (beta * c.stability_B + a_star_used
                                 + math.log(c.tree_C_bar) - math.log(volume)))
        log_term += math.lgamma(n_particles) - math.lgamma(n) - math.lgamma(n_particles - n + 1)
        total += math.exp(log_term)
    return total, math.expm1(a_star_used), a_star_used
