"""Exact finite-volume oracles.

Two independent routes to the canonical partition function Z(N):

* occupancy-subset enumeration over all 2^|Lambda| configurations (any
  dimension, |Lambda| <= 24), vectorized over bitmasks;
* a d = 1 transfer matrix whose payload is the fugacity polynomial
  Xi(z) = sum_N Z(N) z^N, carried in log-domain (all coefficients are
  nonnegative, so log-sum-exp accumulation keeps the relative error near
  machine precision through the L <= 4096 guard).

Everything downstream (grand-canonical probabilities, correlation
functions, deviation checks) is derived from these tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .model import (GuardError, LatticeSpec, PotentialSpec,
                    ising_energy_minus_walls, ising_hamiltonian)

ENUMERATION_MAX_SITES = 24
TRANSFER_MAX_SIDE = 4096
CORRELATION_MAX_SITES = 20

LOG_ZERO = -math.inf


@dataclass(frozen=True)
class CanonicalTable:
    """Exact log Z(N) for N = 0..|Lambda| (log-0 sentinel for excluded N)."""

    lattice: LatticeSpec
    beta: float
    pot: PotentialSpec
    log_z: np.ndarray
    method: str

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites

    def log_z_of(self, n: int) -> float:
        if n < 0:
            raise ValueError("negative particle number")
        if n >= len(self.log_z):
            return LOG_ZERO
        return float(self.log_z[n])

    def csv_rows(self) -> list[tuple[str, ...]]:
        rows = [("N", "logZ")]
        for n, v in enumerate(self.log_z):
            rows.append((str(n), format(float(v), ".17g")))
        return rows


@dataclass(frozen=True)
class GrandCanonicalEval:
    """Grand-canonical layer built on a canonical table at one mu."""

    table: CanonicalTable
    mu: float
    log_xi: float
    probs: np.ndarray

    @property
    def beta_pressure(self) -> float:
        """beta * p_{Lambda,beta}(mu) = log Xi / |Lambda|."""
        return self.log_xi / self.table.n_sites

    @property
    def pressure(self) -> float:
        return self.log_xi / (self.table.beta * self.table.n_sites)

    def mean_particles(self) -> float:
        ns = np.arange(len(self.probs))
        return float(np.dot(ns, self.probs))

    def variance_particles(self) -> float:
        ns = np.arange(len(self.probs))
        m = self.mean_particles()
        return float(np.dot((ns - m) ** 2, self.probs))

    def csv_rows(self) -> list[tuple[str, ...]]:
        rows = [("N", "prob")]
        for n, p in enumerate(self.probs):
            rows.append((str(n), format(float(p), ".17g")))
        return rows


def _popcount(masks: np.ndarray) -> np.ndarray:
    v = masks.copy()
    v = v - ((v >> 1) & 0x55555555)
    v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
    v = (v + (v >> 4)) & 0x0F0F0F0F
    return (v * 0x01010101) >> 24


def _interaction_pairs(lattice: LatticeSpec, pot: PotentialSpec) -> list[tuple[int, int]]:
    """In-range site-index pairs, with torus multiplicity where it applies.

    For range 1 these are the nearest-neighbour bonds (one per direction on
    the torus, so L = 2 pairs appear twice).  For longer ranges every
    unordered pair within Euclidean distance R contributes once; periodic
    boxes then need L > 2R so minimum images are unambiguous.
    """
    R = pot.support_radius
    if R == 1:
        return [tuple(sorted((lattice.site_index(x), lattice.site_index(y))))
                for x, y in lattice.interior_bonds()]
    if lattice.boundary == "periodic" and lattice.side <= 2 * R:
        raise GuardError("periodic box too small for the interaction range")
    sites = lattice.sites()
    pairs = []
    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            diff = lattice.wrap_diff(sites[a], sites[b])
            if sum(c * c for c in diff) <= R * R:
                pairs.append((a, b))
    return pairs


def _gamma_contacts(lattice: LatticeSpec, pot: PotentialSpec) -> np.ndarray:
    """Per-site count of in-range occupied wall sites (fixed boundary)."""
    sites = lattice.sites()
    counts = np.zeros(len(sites), dtype=np.int64)
    if lattice.boundary != "fixed":
        return counts
    R = pot.support_radius
    for a, x in enumerate(sites):
        for g in lattice.gamma:
            r2 = sum((p - q) ** 2 for p, q in zip(x, g))
            if 0 < r2 <= R * R:
                counts[a] += 1
    return counts


def exact_canonical_table(lattice: LatticeSpec, pot: PotentialSpec,
                          beta: float) -> CanonicalTable:
    """Z(N) for every N by direct enumeration of occupancy subsets.

    Z(N) = sum over N-site subsets of exp(-beta * H); the 1/N! of the
    ordered sum cancels against the N! orderings of each subset, and
    coincident particles carry weight 0 (hard core).
    """
    S = lattice.n_sites
    if S > ENUMERATION_MAX_SITES:
        raise GuardError(f"enumeration guarded to |Lambda| <= {ENUMERATION_MAX_SITES}")
    pairs = _interaction_pairs(lattice, pot)
    contacts = _gamma_contacts(lattice, pot)

    # int32 holds both the masks (S <= 24) and the bond counts; at the size
    # guard this keeps the working set near 200 MB
    masks = np.arange(1 << S, dtype=np.int32)
    pop = _popcount(masks.astype(np.uint32)).astype(np.int32)
    bond_count = np.zeros(len(masks), dtype=np.int32)
    for i, j in pairs:
        bond_count += (masks >> i) & (masks >> j) & 1
    for i in np.nonzero(contacts)[0]:
        bond_count += ((masks >> int(i)) & 1) * np.int32(contacts[i])
    log_weight = -beta * pot.bond_energy * bond_count.astype(np.float64)

    log_z = np.full(S + 1, LOG_ZERO)
    for n in range(S + 1):
        sel = pop == n
        if np.any(sel):
            log_z[n] = logsumexp(log_weight[sel])
    return CanonicalTable(lattice=lattice, beta=beta, pot=pot,
                          log_z=log_z, method="enumeration")


def _shift_up(coeffs: np.ndarray) -> np.ndarray:
    out = np.full_like(coeffs, LOG_ZERO)
    out[1:] = coeffs[:-1]
    return out


def transfer_matrix_table(side: int, pot: PotentialSpec, beta: float,
                          boundary: str = "zero") -> CanonicalTable:
    """d = 1 fugacity-polynomial transfer matrix; exact Z(N) for large L.

    The state is the occupancy history of the last R sites; each step
    multiplies by z^s and by one Boltzmann factor per in-range occupied
    pair.  Periodic chains are supported for range-1 potentials (L >= 3).
    """
    if side > TRANSFER_MAX_SIDE:
        raise GuardError(f"transfer matrix guarded to L <= {TRANSFER_MAX_SIDE}")
    if boundary not in ("zero", "periodic"):
        raise ValueError("transfer matrix supports zero or periodic walls")
    R = pot.support_radius
    if boundary == "periodic" and R != 1:
        raise GuardError("periodic transfer matrix supports range-1 potentials")
    if boundary == "periodic" and side < 3:
        raise GuardError("periodic transfer matrix needs L >= 3")
    if side <= R:
        raise GuardError("side must exceed the interaction range")
    log_b = -beta * pot.bond_energy  # log of one occupied-pair factor

    lattice = LatticeSpec(dimension=1, side=side, boundary=boundary)
    size = side + 1

    def run_chain(first: int | None) -> dict[tuple[int, ...], np.ndarray]:
        """Coefficient vectors per history after placing sites 1..L."""
        states: dict[tuple[int, ...], np.ndarray] = {}
        empty = (0,) * R
        if first is None:
            choices = (0, 1)
        else:
            choices = (first,)
        for s in choices:
            v = np.full(size, LOG_ZERO)
            v[s] = 0.0
            states[empty[1:] + (s,)] = v
        for _ in range(side - 1):
            nxt: dict[tuple[int, ...], np.ndarray] = {}
            for hist, v in states.items():
                for s in (0, 1):
                    w = v
                    if s == 1:
                        w = _shift_up(v) + log_b * sum(hist)
                    key = hist[1:] + (s,)
                    if key in nxt:
                        nxt[key] = np.logaddexp(nxt[key], w)
                    else:
                        nxt[key] = w.copy()
            states = nxt
        return states

    if boundary == "zero":
        states = run_chain(None)
        log_z = np.full(size, LOG_ZERO)
        for v in states.values():
            log_z = np.logaddexp(log_z, v)
    else:
        log_z = np.full(size, LOG_ZERO)
        for first in (0, 1):
            states = run_chain(first)
            for hist, v in states.items():
                last = hist[-1]
                closing = log_b * (first * last)
                log_z = np.logaddexp(log_z, v + closing)
    return CanonicalTable(lattice=lattice, beta=beta, pot=pot,
                          log_z=log_z, method="transfer-matrix")


def grand_canonical_eval(table: CanonicalTable, mu: float) -> GrandCanonicalEval:
    """log Xi and the particle-number distribution at chemical potential mu."""
    beta = table.beta
    ns = np.arange(len(table.log_z))
    terms = beta * mu * ns + table.log_z
    log_xi = float(logsumexp(terms))
    probs = np.exp(terms - log_xi)
    return GrandCanonicalEval(table=table, mu=mu, log_xi=log_xi, probs=probs)


@dataclass(frozen=True)
class CorrelationTable:
    """rho1, rho2 and the truncated pair function on a periodic box at fixed N."""

    lattice: LatticeSpec
    beta: float
    pot: PotentialSpec
    n_particles: int
    rho1: np.ndarray
    rho2: np.ndarray

    @property
    def u2(self) -> np.ndarray:
        return self.rho2 - np.outer(self.rho1, self.rho1)

    def u2_at(self, q1, q2) -> float:
        i, j = self.lattice.site_index(tuple(q1)), self.lattice.site_index(tuple(q2))
        return float(self.u2[i, j])


def exact_correlations(lattice: LatticeSpec, pot: PotentialSpec, beta: float,
                       n_particles: int) -> CorrelationTable:
    """One- and two-point functions by enumerating N-subsets on the torus."""
    if lattice.boundary != "periodic":
        raise ValueError("correlation oracle assumes periodic walls")
    S = lattice.n_sites
    if S > CORRELATION_MAX_SITES:
        raise GuardError(f"correlations guarded to |Lambda| <= {CORRELATION_MAX_SITES}")
    if not 2 <= n_particles <= S:
        raise ValueError("need 2 <= N <= |Lambda|")
    pairs = _interaction_pairs(lattice, pot)
    pair_count = {}
    for i, j in pairs:
        pair_count[(i, j)] = pair_count.get((i, j), 0) + 1

    z_total = 0.0
    rho1 = np.zeros(S)
    rho2 = np.zeros((S, S))
    log_b = -beta * pot.bond_energy
    for subset in itertools.combinations(range(S), n_particles):
        bonds = 0
        for a in range(n_particles):
            for b in range(a + 1, n_particles):
                key = (subset[a], subset[b])
                bonds += pair_count.get(key, 0)
        w = math.exp(log_b * bonds)
        z_total += w
        for a in subset:
            rho1[a] += w
        for a in subset:
            for b in subset:
                if a != b:
                    rho2[a, b] += w
    rho1 /= z_total
    rho2 /= z_total
    return CorrelationTable(lattice=lattice, beta=beta, pot=pot,
                            n_particles=n_particles, rho1=rho1, rho2=rho2)


def _subsets_energy_sum(lattice: LatticeSpec, pot: PotentialSpec, beta: float,
                        n_particles: int) -> float:
    """sum over N-subsets of exp(-beta H) via the canonical table."""
    table = exact_canonical_table(lattice, pot, beta)
    return math.exp(table.log_z_of(n_particles))


def ising_gas_consistency(lattice: LatticeSpec, pot: PotentialSpec, beta: float,
                          m: float) -> tuple[float, float]:
    """Fixed-magnetization Ising sum versus its lattice-gas factorization.

    Left: sum of exp(-beta H) over spin configurations at magnetization m,
    with uniform -1 walls.  Right: exp(-beta(4JdN - J|E|)) * Z(N) with the
    zero-boundary gas partition function, N = (m+1)/2 * |Lambda| and |E|
    counting interior plus wall bonds.  The two agree exactly.
    """
    if lattice.boundary == "periodic":
        raise ValueError("consistency check uses -1 walls on an open box")
    S = lattice.n_sites
    if S > 16:
        raise GuardError("spin enumeration guarded to |Lambda| <= 16")
    n_float = (m + 1.0) / 2.0 * S
    n_particles = round(n_float)
    if abs(n_float - n_particles) > 1e-9:
        raise ValueError(f"magnetization {m} gives non-integral particle number")

    sites = lattice.sites()
    lhs = 0.0
    for subset in itertools.combinations(range(S), n_particles):
        occ = set(subset)
        spins = {x: (1 if i in occ else -1) for i, x in enumerate(sites)}
        lhs += math.exp(-beta * ising_energy_minus_walls(spins, lattice, pot))

    open_box = LatticeSpec(lattice.dimension, lattice.side, "zero")
    z_gas = _subsets_energy_sum(open_box, pot, beta, n_particles)
    J = pot.coupling
    edges = len(lattice.interior_bonds()) + len(lattice.wall_bonds())
    prefactor = math.exp(-beta * (4.0 * J * lattice.dimension * n_particles - J * edges))
    return lhs, prefactor * z_gas


def ising_grand_partition(lattice: LatticeSpec, pot: PotentialSpec, beta: float,
                          h: float) -> float:
    """log of the Ising grand sum with field h (walls per the lattice spec)."""
    S = lattice.n_sites
    if S > 16:
        raise GuardError("spin enumeration guarded to |Lambda| <= 16")
    sites = lattice.sites()
    logs = []
    for bits in range(1 << S):
        spins = {x: (1 if bits >> i & 1 else -1) for i, x in enumerate(sites)}
        mag = sum(spins.values())
        logs.append(beta * h * mag - beta * ising_hamiltonian(spins, lattice, pot))
    return float(logsumexp(np.array(logs)))
