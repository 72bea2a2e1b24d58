"""Mayer coefficients, canonical-expansion extraction, and free energies.

Conventions
-----------
* ``connected_coefficient`` b_n pins x_1 = 0 (per-volume normalization);
  the unpinned sum over (Z^d)^n diverges by translation invariance.
* ``irreducible_coefficient`` beta_n sums 2-connected graphs on n+1
  vertices with x_1 = 0.
* Lattice sums run over the exact support region of the pinned cluster:
  the l1 ball of radius (n-1) for the range-1 potential, the l-infinity
  box of radius (n-1)R for the Kac kernel.  Both are exact truncations
  because the Mayer function has finite support and the graphs are
  connected.
* Finite-volume coefficients B_Lambda(n) are extracted from an exact
  oracle table by solving the triangular system
      log Z(N) - log(|Lambda|^N / N!) = N * sum_n P_{N,|Lambda|}(n) B(n)/(n+1),
  which truncates at n = N-1 since P vanishes for n >= N.  The solve is
  repeated in 50-digit arithmetic for |Lambda| >= 100.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphs import enumerate_biconnected, enumerate_connected, enumerate_trees
from .model import GuardError, LatticeSpec, PotentialSpec, model_constants
from .oracle import CanonicalTable
from .powerseries import ps_compose, ps_exp, ps_mul, ps_revert

MAX_B_ORDER = 5
MAX_BETA_IRR_ORDER = 4
MAX_TREE_CHECK_ORDER = 5
MAX_DERIVATIVE_ORDER = 6
EXTENDED_PRECISION_SITES = 100

_CHUNK = 200_000


# ---------------------------------------------------------------------------
# Mayer weights

def mayer_values(pot: PotentialSpec, beta: float) -> np.ndarray:
    """f by pair category: index 0 = out of range, 1 = in range, 2 = coincident."""
    return np.array([0.0, math.expm1(-beta * pot.bond_energy), -1.0])


def tree_weight_values(pot: PotentialSpec, beta: float) -> np.ndarray:
    """1 - exp(-beta|V|) by pair category (hard core gives exactly 1)."""
    return np.array([0.0, -math.expm1(-beta * abs(pot.bond_energy)), 1.0])


# ---------------------------------------------------------------------------
# Pinned-cluster configuration sweeps (vectorized, chunked)

def _support_points(d: int, reach: int, shape: str) -> np.ndarray:
    pts = []
    for p in itertools.product(range(-reach, reach + 1), repeat=d):
        if shape == "l1" and sum(abs(c) for c in p) > reach:
            continue
        pts.append(p)
    return np.array(pts, dtype=np.int64)


def _config_blocks(n_points: int, d: int, pot: PotentialSpec, chunk: int = _CHUNK):
    """Coordinate arrays (m, n_points, d) with x_1 = 0, rest in the support region."""
    reach = (n_points - 1) * pot.support_radius
    shape = "l1" if pot.kind == "standard" else "linf"
    ball = _support_points(d, reach, shape)
    K = len(ball)
    total = K ** (n_points - 1)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coords = np.zeros((len(idx), n_points, d), dtype=np.int64)
        rem = idx.copy()
        for p in range(n_points - 1, 0, -1):
            coords[:, p, :] = ball[rem % K]
            rem //= K
        yield coords


def _pair_categories(coords: np.ndarray, pot: PotentialSpec) -> np.ndarray:
    """(m, n(n-1)/2) int8 categories for all vertex pairs, pair index (i<j)."""
    m, n, _d = coords.shape
    R2 = pot.support_radius ** 2
    cats = np.zeros((m, n * (n - 1) // 2), dtype=np.int8)
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            diff = coords[:, i, :] - coords[:, j, :]
            r2 = np.einsum("md,md->m", diff, diff)
            cats[:, p] = np.where(r2 == 0, 2, np.where(r2 <= R2, 1, 0))
            p += 1
    return cats


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            idx[(i, j)] = p
            p += 1
    return idx


def _graph_product_sum(fvals: np.ndarray, graphs: list[list[int]]) -> np.ndarray:
    """sum over graphs of the product of f over each graph's pair indices."""
    total = np.zeros(fvals.shape[0])
    for edges in graphs:
        prod = np.ones(fvals.shape[0])
        for e in edges:
            prod = prod * fvals[:, e]
        total += prod
    return total


def _support_connected(cats: np.ndarray, n: int) -> np.ndarray:
    """True where the in-range/coincidence support graph spans all n points.

    A connected-graph sum vanishes identically on disconnected supports;
    masking with this keeps those zeros exact instead of leaving rounding
    residue from the partition recursion.
    """
    m = cats.shape[0]
    adj = np.zeros((m, n, n), dtype=bool)
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            hit = cats[:, p] > 0
            adj[:, i, j] = hit
            adj[:, j, i] = hit
            p += 1
    reach = np.zeros((m, n), dtype=bool)
    reach[:, 0] = True
    for _ in range(n - 1):
        reach = reach | np.einsum("mu,muv->mv", reach, adj)
    return reach.all(axis=1)


def _connected_sum_partition(fvals: np.ndarray, n: int) -> np.ndarray:
    """sum over connected spanning graphs of prod f, per configuration.

    Uses the partition recursion C(S) = A(S) - sum_{T < S, T ni v} C(T) A(S\\T)
    with A(S) the unconstrained product of (1+f) over pairs inside S; fully
    equivalent to the explicit graph sum (asserted in tests) but O(3^n).
    """
    m = fvals.shape[0]
    pidx = _pair_index(n)
    one_plus = 1.0 + fvals
    full = (1 << n) - 1
    A: list[np.ndarray | None] = [None] * (full + 1)
    A[0] = np.ones(m)
    for S in range(1, full + 1):
        v = (S & -S).bit_length() - 1
        rest = S & ~(1 << v)
        acc = A[rest].copy()
        u = rest
        while u:
            w = (u & -u).bit_length() - 1
            key = (v, w) if v < w else (w, v)
            acc *= one_plus[:, pidx[key]]
            u &= u - 1
        A[S] = acc
    C: list[np.ndarray | None] = [None] * (full + 1)
    for S in range(1, full + 1):
        v = (S & -S).bit_length() - 1
        acc = A[S].copy()
        # proper submasks of S containing v
        rest = S & ~(1 << v)
        T = rest
        while True:
            T = (T - 1) & rest
            sub = T | (1 << v)
            if sub == S:
                if T == 0:
                    break
                continue
            acc -= C[sub] * A[S & ~sub]
            if T == 0:
                break
        C[S] = acc
    return C[full]


# ---------------------------------------------------------------------------
# Coefficients

def connected_coefficient(n: int, d: int, pot: PotentialSpec, beta: float) -> float:
    """b_n = (1/n!) sum_{g in C_n} sum_{x_2..x_n} prod f, with x_1 = 0."""
    if not 1 <= n <= MAX_B_ORDER:
        raise GuardError(f"connected coefficients guarded to n <= {MAX_B_ORDER}")
    if n == 1:
        return 1.0
    lut = mayer_values(pot, beta)
    pidx = _pair_index(n)
    use_partition = n >= 5
    graphs = None
    if not use_partition:
        graphs = [[pidx[e] for e in g.edge_list()] for g in enumerate_connected(n)]
    total = 0.0
    for coords in _config_blocks(n, d, pot):
        cats = _pair_categories(coords, pot)
        fvals = lut[cats]
        if use_partition:
            vals = _connected_sum_partition(fvals, n) * _support_connected(cats, n)
            total += float(np.sum(vals))
        else:
            total += float(np.sum(_graph_product_sum(fvals, graphs)))
    return total / math.factorial(n)


def irreducible_coefficient(n: int, d: int, pot: PotentialSpec, beta: float) -> float:
    """beta_n = (1/n!) sum over 2-connected graphs on n+1 vertices, x_1 = 0."""
    if not 1 <= n <= MAX_BETA_IRR_ORDER:
        raise GuardError(f"irreducible coefficients guarded to n <= {MAX_BETA_IRR_ORDER}")
    points = n + 1
    pidx = _pair_index(points)
    graphs = [[pidx[e] for e in g.edge_list()] for g in enumerate_biconnected(points)]
    lut = mayer_values(pot, beta)
    total = 0.0
    for coords in _config_blocks(points, d, pot):
        fvals = lut[_pair_categories(coords, pot)]
        total += float(np.sum(_graph_product_sum(fvals, graphs)))
    return total / math.factorial(n)


def beta1_closed_form(d: int, pot: PotentialSpec, beta: float) -> float:
    """beta_1 = 2d(e^{-beta*v1} - 1) - 1 with v1 the bond energy.

    For the Kac kernel the 2d neighbour count becomes the in-range count;
    exact in d = 1 (2dR sites within range R).
    """
    f1 = math.expm1(-beta * pot.bond_energy)
    if pot.kind == "standard":
        nbrs = 2 * d
    else:
        R = pot.support_radius
        nbrs = 2 * d * R if d == 1 else None
        if nbrs is None:
            raise ValueError("Kac closed form implemented for d = 1 only")
    return nbrs * f1 - 1.0


# ---------------------------------------------------------------------------
# Theorem-1 coefficient structure

def falling_p(n_particles: int, volume: int, n: int) -> float:
    """P_{N,|Lambda|}(n) = (N-1)...(N-n)/|Lambda|^n for n < N, else 0."""
    if n >= n_particles:
        return 0.0
    num = 1.0
    for k in range(1, n + 1):
        num *= (n_particles - k) / volume
    return num


def density_poly(rho: float, volume: int, n: int) -> float:
    """P_{n+1,|Lambda|}(rho) = rho(rho - 1/|Lambda|)...(rho - n/|Lambda|), cut
    off to 0 when rho < n/|Lambda|."""
    if rho < n / volume:
        return 0.0
    out = 1.0
    for k in range(n + 1):
        out *= rho - k / volume
    return out


def f_coefficient(n_particles: int, volume: int, n: int, b_lambda_n: float) -> float:
    """F_{beta,N,Lambda}(n) = P_{N,|Lambda|}(n) * B_Lambda(n) / (n+1)."""
    return falling_p(n_particles, volume, n) * b_lambda_n / (n + 1)


def _log_z_ideal(n_particles: int, volume: int) -> float:
    return n_particles * math.log(volume) - math.lgamma(n_particles + 1)


@dataclass(frozen=True)
class SeriesCoefficients:
    """Finite-volume coefficients B_Lambda(n), n = 1..n_max (index 0 unused)."""

    b_lambda: np.ndarray
    volume: int
    provenance: str

    @property
    def n_max(self) -> int:
        return len(self.b_lambda) - 1

    def value(self, n: int) -> float:
        return float(self.b_lambda[n])


def extract_b_lambda(table: CanonicalTable, n_max: int) -> SeriesCoefficients:
    """Solve the triangular Theorem-1 system for B_Lambda(1..n_max).

    Row N (= 2..n_max+1) reads
        log Z^int(N) = sum_{n=1}^{N-1} N P_{N,|Lambda|}(n) B(n) / (n+1),
    so each new row determines one new coefficient.  |Lambda| >= 100
    switches the solve to 50-digit arithmetic.
    """
    volume = table.n_sites
    if n_max + 1 >= len(table.log_z):
        raise GuardError("oracle table too shallow for the requested order")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    for n_particles in range(2, n_max + 2):
        if not math.isfinite(table.log_z_of(n_particles)):
            raise GuardError(f"table has no particles at N = {n_particles}")

    use_mp = volume >= EXTENDED_PRECISION_SITES
    if use_mp:
        import mpmath as mp
        with mp.workdps(50):
            b = [mp.mpf(0)] * (n_max + 1)
            for n_particles in range(2, n_max + 2):
                log_int = (mp.mpf(table.log_z_of(n_particles))
                           - n_particles * mp.log(volume)
                           + mp.log(mp.factorial(n_particles)))
                acc = log_int
                for n in range(1, n_particles - 1):
                    p = mp.mpf(1)
                    for k in range(1, n + 1):
                        p *= mp.mpf(n_particles - k) / volume
                    acc -= n_particles * p * b[n] / (n + 1)
                n = n_particles - 1
                p = mp.mpf(1)
                for k in range(1, n + 1):
                    p *= mp.mpf(n_particles - k) / volume
                b[n] = acc * (n + 1) / (n_particles * p)
            vals = np.array([0.0] + [float(x) for x in b[1:]])
    else:
        vals = np.zeros(n_max + 1)
        for n_particles in range(2, n_max + 2):
            log_int = table.log_z_of(n_particles) - _log_z_ideal(n_particles, volume)
            acc = log_int
            for n in range(1, n_particles - 1):
                acc -= n_particles * f_coefficient(n_particles, volume, n, vals[n])
            n = n_particles - 1
            vals[n] = acc * (n + 1) / (n_particles * falling_p(n_particles, volume, n))
    return SeriesCoefficients(b_lambda=vals, volume=volume, provenance="extracted")


def reconstruct_log_z(coeffs: SeriesCoefficients, n_particles: int) -> float:
    """Rebuild log Z(N) from B_Lambda via the Theorem-1 identity."""
    if n_particles - 1 > coeffs.n_max:
        raise GuardError("not enough coefficients to reconstruct this N")
    volume = coeffs.volume
    acc = _log_z_ideal(n_particles, volume)
    for n in range(1, n_particles):
        acc += n_particles * f_coefficient(n_particles, volume, n, coeffs.value(n))
    return acc


def b_lambda_1_direct(lattice: LatticeSpec, pot: PotentialSpec, beta: float) -> float:
    """Direct polymer-route value B_Lambda(1) = |Lambda| log(1 + zeta({1,2})).

    zeta({1,2}) = |Lambda|^{-2} sum over ordered site pairs of f; the
    multi-index sum over repeated copies of the single polymer {1,2}
    resums to the logarithm.
    """
    sites = lattice.sites()
    volume = lattice.n_sites
    acc = 0.0
    for x in sites:
        for y in sites:
            acc += pot.mayer_f(lattice.wrap_diff(x, y), beta)
    return volume * math.log1p(acc / volume ** 2)


# ---------------------------------------------------------------------------
# Canonical free energy and Stirling remainder

@dataclass(frozen=True)
class CanonicalFreeEnergy:
    """beta * F(rho) = rho(log rho - 1) - sum_n P_{n+1,|Lambda|}(rho) B(n)/(n+1).

    ``volume = None`` selects the thermodynamic series (powers rho^{n+1}
    with coefficients beta_n).  ``derivative`` returns d^m(beta F)/d rho^m,
    analytic for the ideal part and exact polynomial calculus for the
    interaction part; orders above 6 fail loudly.
    """

    coeffs: np.ndarray
    volume: int | None = None
    source: str = "extracted"

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def _interaction_poly(self, n: int) -> np.ndarray:
        """Ascending coefficients of the degree-(n+1) factor for order n."""
        if self.volume is None:
            c = np.zeros(n + 2)
            c[n + 1] = 1.0
            return c
        roots = np.array([k / self.volume for k in range(n + 1)])
        return np.polynomial.polynomial.polyfromroots(roots).real

    def derivative(self, rho: float, order: int = 0) -> float:
        if not 0 < rho < 1:
            raise ValueError("density must lie in (0, 1)")
        if order < 0 or order > MAX_DERIVATIVE_ORDER:
            raise ValueError(f"derivative order {order} outside 0..{MAX_DERIVATIVE_ORDER}")
        if order == 0:
            ideal = rho * (math.log(rho) - 1.0)
        elif order == 1:
            ideal = math.log(rho)
        else:
            ideal = (-1.0) ** order * math.factorial(order - 2) * rho ** (1 - order)
        inter = 0.0
        for n in range(1, self.n_max + 1):
            if self.volume is not None and rho < n / self.volume:
                continue
            poly = self._interaction_poly(n)
            der = np.polynomial.polynomial.polyder(poly, order) if order else poly
            inter += float(np.polynomial.polynomial.polyval(rho, der)) * self.coeffs[n] / (n + 1)
        return ideal - inter

    def value(self, rho: float) -> float:
        return self.derivative(rho, 0)


def free_energy_from_extraction(coeffs: SeriesCoefficients) -> CanonicalFreeEnergy:
    return CanonicalFreeEnergy(coeffs=coeffs.b_lambda.copy(), volume=coeffs.volume,
                               source="extracted")


def free_energy_thermodynamic(beta_irr: np.ndarray) -> CanonicalFreeEnergy:
    """TFE series: beta f(rho) = rho(log rho - 1) - sum beta_n rho^{n+1}/(n+1)."""
    return CanonicalFreeEnergy(coeffs=np.asarray(beta_irr, dtype=float),
                               volume=None, source="thermodynamic")


def stirling_remainder(n_particles: int, volume: int) -> float:
    """beta * S_{|Lambda|}(rho) = -rho(log rho - 1) - (1/|Lambda|) log(|Lambda|^N/N!).

    Defined so that the finite-volume free energy satisfies
    f = F + S exactly when F carries extracted coefficients; decays like
    log(sqrt(|Lambda|))/|Lambda|.
    """
    if not 1 <= n_particles <= volume:
        raise ValueError("need 1 <= N <= |Lambda|")
    rho = n_particles / volume
    return -rho * (math.log(rho) - 1.0) - _log_z_ideal(n_particles, volume) / volume


# ---------------------------------------------------------------------------
# Virial inversion

@dataclass(frozen=True)
class VirialSeries:
    """Density expansions built from the irreducible coefficients.

    mu_minus_log(): coefficients of beta*mu(rho) - log(rho) (powers rho^1..)
    pressure_rho(): coefficients of beta*p as a series in rho
    pressure_fugacity(): coefficients of beta*p as a series in z, obtained
    by composing through the numerically inverted rho(z).
    """

    beta_irr: np.ndarray
    order: int

    def mu_minus_log(self) -> np.ndarray:
        c = np.zeros(self.order + 1)
        for n in range(1, min(len(self.beta_irr), self.order + 1)):
            c[n] = -self.beta_irr[n]
        return c

    def pressure_rho(self) -> np.ndarray:
        """beta*p(rho) = rho - sum n beta_n rho^{n+1}/(n+1).

        The minus sign is forced by the Legendre pairing with the free
        energy and mu series (and by matching the fugacity expansion's
        connected coefficients); a repulsive gas then has positive virial
        corrections, as it must.
        """
        c = np.zeros(self.order + 1)
        c[1] = 1.0
        for n in range(1, len(self.beta_irr)):
            if n + 1 <= self.order:
                c[n + 1] = -n * self.beta_irr[n] / (n + 1)
        return c

    def z_of_rho(self) -> np.ndarray:
        return ps_mul(_x_series(self.order), ps_exp(self.mu_minus_log(), self.order),
                      self.order)

    def rho_of_z(self) -> np.ndarray:
        return ps_revert(self.z_of_rho(), self.order)

    def pressure_fugacity(self) -> np.ndarray:
        return ps_compose(self.pressure_rho(), self.rho_of_z(), self.order)

    def rho_of_z_numeric(self, z: float, tol: float = 1e-14, max_iter: int = 500) -> float:
        """Fixed point rho = z * exp(sum beta_n rho^n) for small |z|."""
        rho = z
        for _ in range(max_iter):
            s = sum(self.beta_irr[n] * rho ** n for n in range(1, len(self.beta_irr)))
            new = z * math.exp(s)
            if abs(new - rho) <= tol * max(1.0, abs(new)):
                return new
            rho = new
        raise RuntimeError("fugacity fixed point did not converge")


def _x_series(order: int) -> np.ndarray:
    c = np.zeros(order + 1)
    c[1] = 1.0
    return c


def virial_series(beta_irr: np.ndarray, order: int) -> VirialSeries:
    if order > MAX_B_ORDER:
        raise GuardError(f"virial series guarded to order <= {MAX_B_ORDER}")
    return VirialSeries(beta_irr=np.asarray(beta_irr, dtype=float), order=order)


def legendre_sides(beta_irr: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient arrays (powers rho^2..) of both sides of the free-energy /
    pressure Legendre identity; they must agree term by term.

    Left: -sum beta_n rho^{n+1}/(n+1).  Right: rho*(-sum beta_n rho^n)
    + sum n beta_n rho^{n+1}/(n+1).  (The shared ideal part cancels.)
    """
    lhs = np.zeros(order + 2)
    rhs = np.zeros(order + 2)
    for n in range(1, min(len(beta_irr), order + 1)):
        lhs[n + 1] = -beta_irr[n] / (n + 1)
        rhs[n + 1] = -beta_irr[n] + n * beta_irr[n] / (n + 1)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Tree-graph inequality

@dataclass(frozen=True)
class TreeGraphReport:
    order: int
    dimension: int
    beta: float
    lhs_total: float
    rhs_total: float
    violations: int
    n_configs: int

    @property
    def holds(self) -> bool:
        return self.violations == 0 and self.lhs_total <= self.rhs_total * (1 + 1e-12)


def tree_graph_check(n: int, d: int, pot: PotentialSpec, beta: float) -> TreeGraphReport:
    """Check |sum over connected graphs of prod f| <= e^{beta B n} * tree sum.

    Exhaustive over the exact support region of pinned configurations;
    both the per-configuration inequality and the aggregate are verified.
    """
    if not 2 <= n <= MAX_TREE_CHECK_ORDER:
        raise GuardError(f"tree-graph check guarded to 2 <= n <= {MAX_TREE_CHECK_ORDER}")
    consts = model_constants(d, pot, beta)
    stability = math.exp(beta * consts.stability_B * n)
    pidx = _pair_index(n)
    trees = [[pidx[e] for e in t.edge_list()] for t in enumerate_trees(n)]
    f_lut = mayer_values(pot, beta)
    w_lut = tree_weight_values(pot, beta)

    lhs_total = 0.0
    rhs_total = 0.0
    violations = 0
    n_configs = 0
    for coords in _config_blocks(n, d, pot):
        cats = _pair_categories(coords, pot)
        fvals = f_lut[cats]
        wvals = w_lut[cats]
        lhs = np.abs(_connected_sum_partition(fvals, n))
        lhs *= _support_connected(cats, n)
        rhs = stability * _graph_product_sum(wvals, trees)
        violations += int(np.sum(lhs > rhs * (1 + 1e-12) + 1e-300))
        lhs_total += float(np.sum(lhs))
        rhs_total += float(np.sum(rhs))
        n_configs += coords.shape[0]
    return TreeGraphReport(order=n, dimension=d, beta=beta, lhs_total=lhs_total,
                           rhs_total=rhs_total, violations=violations,
                           n_configs=n_configs)
