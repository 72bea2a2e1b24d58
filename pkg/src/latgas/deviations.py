"""Deviation probabilities: N*, tilted potentials, rate function, variance
formulas and their comparison against exact oracle probabilities.

All pressures and the rate function use exact finite-volume grand-canonical
values; the free-energy derivatives entering the variance and error terms
come from a ``CanonicalFreeEnergy`` (extracted or thermodynamic source), as
those are the quantities the asymptotic formulas reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import GuardError
from .oracle import CanonicalTable, grand_canonical_eval
from .series import MAX_DERIVATIVE_ORDER, CanonicalFreeEnergy

DENSITY_HARD_CAP = 0.4


def mean_occupation(table: CanonicalTable, mu0: float) -> tuple[float, int]:
    """(rho_bar, N_bar): exact mean density and its floor particle count."""
    gc = grand_canonical_eval(table, mu0)
    rho = gc.mean_particles() / table.n_sites
    return rho, int(math.floor(rho * table.n_sites))


def find_n_star(table: CanonicalTable, mu0: float) -> int:
    """argmax_N of beta*mu0*N + log Z(N); ties resolved to the smaller N."""
    best_n = 0
    best_v = table.log_z_of(0)
    for n in range(1, len(table.log_z)):
        v = table.beta * mu0 * n + table.log_z_of(n)
        if v > best_v + 1e-12 * max(1.0, abs(best_v)):
            best_n, best_v = n, v
    return best_n


def tilted_potential(table: CanonicalTable, n_tilde: float,
                     tol: float = 1e-12) -> float:
    """mu with E_mu[N] = n_tilde, by bisection on the strictly increasing map.

    Boundary targets (n_tilde <= 0 or >= |Lambda|) have no finite solution
    and return signed infinity sentinels.
    """
    volume = table.n_sites
    if n_tilde <= 0.0:
        return -math.inf
    if n_tilde >= volume:
        return math.inf

    def mean(mu: float) -> float:
        return grand_canonical_eval(table, mu).mean_particles()

    lo, hi = -1.0, 1.0
    span = 1.0
    while mean(lo) > n_tilde:
        lo -= span
        span *= 2.0
    span = 1.0
    while mean(hi) < n_tilde:
        hi += span
        span *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mean(mid) < n_tilde:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rate_function(table: CanonicalTable, mu0: float, n_tilde: float) -> float:
    """I^GC(rho_tilde; rho_bar) from exact finite-volume pressures.

    Collapses to beta*rho_tilde*(mu_tilde - mu0) - (log Xi(mu_tilde)
    - log Xi(mu0))/|Lambda|; the rho_bar terms cancel identically.
    """
    volume = table.n_sites
    rho_tilde = n_tilde / volume
    mu_tilde = tilted_potential(table, n_tilde)
    if not math.isfinite(mu_tilde):
        raise ValueError("rate function needs an interior target density")
    gc0 = grand_canonical_eval(table, mu0)
    gct = grand_canonical_eval(table, mu_tilde)
    return (table.beta * rho_tilde * (mu_tilde - mu0)
            - (gct.log_xi - gc0.log_xi) / volume)


def m_of_alpha(alpha) -> int:
    """min{m in N : m(1-alpha) - 1 > 0}, decided in exact rational arithmetic."""
    frac = Fraction(alpha)
    if frac >= 1:
        raise ValueError("m(alpha) is defined for alpha < 1")
    m = 1
    while m * (1 - frac) - 1 <= 0:
        m += 1
    return m


@dataclass(frozen=True)
class VarianceTerms:
    d_plain: float
    d_alpha: float
    d_alpha_plus: float
    m_alpha: int
    error_term: float


def variance_terms(fe: CanonicalFreeEnergy, rho_star: float, alpha, u_prime: float,
                   volume: int, beta: float, mu0: float) -> VarianceTerms:
    """D, D^alpha, D^{alpha,+}, m(alpha) and the error envelope E.

    Derivatives above the order-6 cap fail loudly; the error series' tail
    beyond the cap is bounded by a geometric envelope (ratio from the
    dominant ideal part) and added to E as certified slack.
    """
    m_alpha = m_of_alpha(alpha)
    if m_alpha > MAX_DERIVATIVE_ORDER:
        raise GuardError(f"m(alpha) = {m_alpha} exceeds the derivative cap "
                         f"{MAX_DERIVATIVE_ORDER}")
    alpha = float(alpha)
    bf = {m: fe.derivative(rho_star, m) for m in range(1, MAX_DERIVATIVE_ORDER + 1)}
    d_plain = 1.0 / bf[2]

    acc = bf[2]
    acc_plus = bf[2]
    for m in range(3, m_alpha):
        term = 2.0 * u_prime ** (m - 2) * bf[m] / (
            math.factorial(m) * volume ** ((m - 2) * (1.0 - alpha)))
        acc += term
        acc_plus += abs(term)
    d_alpha = 1.0 / acc
    d_alpha_plus = 1.0 / acc_plus

    lead = u_prime ** m_alpha * bf[m_alpha] / math.factorial(m_alpha)
    tilt = (u_prime * (beta * mu0 - bf[1])
            / volume ** (1.0 - m_alpha * (1.0 - alpha) - alpha))
    tail = 0.0
    last = 0.0
    for m in range(m_alpha + 1, MAX_DERIVATIVE_ORDER + 1):
        last = (u_prime ** m * bf[m]
                / (math.factorial(m) * volume ** ((m - m_alpha) * (1.0 - alpha))))
        tail += last
    # geometric envelope for the dropped m > cap terms (ideal part dominates)
    cap = MAX_DERIVATIVE_ORDER
    ratio = u_prime * (cap - 1) / ((cap + 1) * rho_star * volume ** (1.0 - alpha))
    slack = abs(last) * ratio / (1.0 - ratio) if 0.0 < ratio < 1.0 else (
        0.0 if last == 0.0 or u_prime == 0.0 else math.inf)
    error = (abs(lead + tilt + tail) + slack) / volume ** (m_alpha * (1.0 - alpha) - 1.0)
    return VarianceTerms(d_plain=d_plain, d_alpha=d_alpha,
                         d_alpha_plus=d_alpha_plus, m_alpha=m_alpha,
                         error_term=error)


@dataclass(frozen=True)
class DeviationReport:
    volume: int
    mu0: float
    alpha: float
    u: float
    u_prime: float
    n_bar: int
    n_star: int
    n_tilde: int
    mu_tilde: float
    rate: float
    d_plain: float
    d_alpha: float
    d_alpha_plus: float
    m_alpha: int
    error_term: float
    p_exact: float
    p_formula: float

    @property
    def gap(self) -> float:
        return abs(self.p_exact - self.p_formula)

    @property
    def relative_gap(self) -> float:
        return self.gap / self.p_exact if self.p_exact > 0 else math.inf

    def csv_row(self) -> tuple[str, ...]:
        vals = (self.volume, self.mu0, self.alpha, self.u, self.n_bar,
                self.n_star, self.n_tilde, self.mu_tilde, self.rate,
                self.d_plain, self.d_alpha, self.d_alpha_plus, self.m_alpha,
                self.error_term, self.p_exact, self.p_formula, self.gap)
        return tuple(format(float(v), ".17g") if not isinstance(v, int)
                     else str(v) for v in vals)


CSV_HEADER = ("L", "mu0", "alpha", "u", "N_bar", "N_star", "N_tilde",
              "mu_tilde", "I_GC", "D", "D_alpha", "D_alpha_plus", "m_alpha",
              "E", "p_exact", "p_formula", "gap")


def formula_probability(table: CanonicalTable, mu0: float, alpha, u: float,
                        fe: CanonicalFreeEnergy) -> DeviationReport:
    """Exact P(A_N-tilde) versus the regime's asymptotic formula.

    alpha = 1 gives the precise-large-deviation form; alpha in [1/2, 1)
    the moderate/local-CLT form.  N-tilde is made integral as
    N* + round(u'|Lambda|^alpha), after which u' is recomputed so the
    deviation identity is exact for the reported u'.
    """
    alpha_f = float(alpha)
    if not 0.5 <= alpha_f <= 1.0:
        raise ValueError("alpha must lie in [1/2, 1]")
    volume = table.n_sites
    beta = table.beta
    rho_bar, n_bar = mean_occupation(table, mu0)
    n_star = find_n_star(table, mu0)
    # center on N* with u as the seed deviation (u' ~ u), then make u'
    # exact for the integral target
    n_tilde = n_star + round(u * volume ** alpha_f)
    if not 0 < n_tilde < volume:
        raise ValueError("deviation target outside the open particle range")
    u_prime = (n_tilde - n_star) / volume ** alpha_f
    if n_tilde / volume > DENSITY_HARD_CAP:
        raise GuardError("deviation target density beyond the validated cap")

    gc0 = grand_canonical_eval(table, mu0)
    p_exact = float(gc0.probs[n_tilde])
    mu_tilde = tilted_potential(table, n_tilde)

    if alpha_f == 1.0:
        rate = rate_function(table, mu0, n_tilde)
        n_tilde_star = find_n_star(table, mu_tilde)
        rho_ts = n_tilde_star / volume
        d_plain = 1.0 / fe.derivative(rho_ts, 2)
        p_formula = math.exp(-volume * rate) / math.sqrt(
            2.0 * math.pi * d_plain * volume)
        return DeviationReport(volume=volume, mu0=mu0, alpha=1.0, u=u,
                               u_prime=u_prime, n_bar=n_bar, n_star=n_star,
                               n_tilde=n_tilde, mu_tilde=mu_tilde, rate=rate,
                               d_plain=d_plain, d_alpha=d_plain,
                               d_alpha_plus=d_plain, m_alpha=0,
                               error_term=math.nan, p_exact=p_exact,
                               p_formula=p_formula)

    rho_star = n_star / volume
    vt = variance_terms(fe, rho_star, alpha, u_prime, volume, beta, mu0)
    exponent = u_prime ** 2 * volume ** (2.0 * alpha_f - 1.0) / (2.0 * vt.d_alpha)
    p_formula = math.exp(-exponent) / math.sqrt(
        2.0 * math.pi * vt.d_alpha_plus * volume)
    rate = rate_function(table, mu0, n_tilde)
    return DeviationReport(volume=volume, mu0=mu0, alpha=alpha_f, u=u,
                           u_prime=u_prime, n_bar=n_bar, n_star=n_star,
                           n_tilde=n_tilde, mu_tilde=mu_tilde, rate=rate,
                           d_plain=vt.d_plain, d_alpha=vt.d_alpha,
                           d_alpha_plus=vt.d_alpha_plus, m_alpha=vt.m_alpha,
                           error_term=vt.error_term, p_exact=p_exact,
                           p_formula=p_formula)


def appendix_ratio(table: CanonicalTable, mu: float, n: int, n_ref: int) -> float:
    """J^C_mu(N, N') = e^{beta mu (N - N')} Z(N)/Z(N'); +inf when Z(N') = 0."""
    log_num = table.beta * mu * n + table.log_z_of(n)
    log_den = table.beta * mu * n_ref + table.log_z_of(n_ref)
    if log_den == -math.inf:
        return math.inf
    if log_num == -math.inf:
        return 0.0
    return math.exp(log_num - log_den)


def appendix_normalization(table: CanonicalTable, mu: float, n_ref: int) -> float:
    """K(mu, N') = e^{beta mu N'} Z(N') / Xi(mu); 0 when Z(N') = 0."""
    gc = grand_canonical_eval(table, mu)
    log_num = table.beta * mu * n_ref + table.log_z_of(n_ref)
    if log_num == -math.inf:
        return 0.0
    return math.exp(log_num - gc.log_xi)
