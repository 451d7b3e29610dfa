"""Laplacian spectra, the Moore-Penrose inverse, pairwise variances and optimality criteria.

All variances are reported in units of the per-unit error variance.  The A-, D-
and E-values are "bigger is better" (harmonic mean, geometric mean and minimum
of the non-trivial eigenvalues); ``phi_p`` is "smaller is better".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import exp, log
from typing import Optional

import numpy as np

from blockopt.design import BlockDesign, DesignError
from blockopt.graphs import Multigraph, components, concurrence_graph, is_connected, laplacian

PSD_TOL = 1e-9
TIE_RTOL = 1e-9


def contrast_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n x n-1) of the vectors summing to zero (Helmert columns)."""
    q = np.zeros((n, n - 1))
    for j in range(1, n):
        q[:j, j - 1] = 1.0
        q[j, j - 1] = -j
        q[:, j - 1] /= np.sqrt(j * (j + 1))
    return q


@dataclass(frozen=True)
class Spectrum:
    nontrivial: np.ndarray
    trivial_multiplicity: int

    @property
    def theta1(self) -> float:
        return float(self.nontrivial[0])


def spectrum(lap: np.ndarray) -> Spectrum:
    """Non-trivial eigenvalues, with the all-ones direction removed before diagonalising."""
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    q = contrast_basis(n)
    restricted = q.T @ lap @ q
    vals = np.linalg.eigvalsh((restricted + restricted.T) / 2)
    vals.sort()
    return Spectrum(vals, len(components(graph_of(lap))))


def graph_of(lap: np.ndarray) -> Multigraph:
    """Recover the multigraph whose Laplacian is ``lap``."""
    off = -np.rint(np.asarray(lap, dtype=float)).astype(np.int64)
    np.fill_diagonal(off, 0)
    return Multigraph(off)


def moore_penrose(lap: np.ndarray) -> np.ndarray:
    """``(L + P0)^{-1} - P0`` for a connected Laplacian."""
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    if not is_connected(graph_of(lap)):
        raise DesignError("Moore-Penrose inverse via L + P0 needs a connected graph")
    p0 = np.full((n, n), 1.0 / n)
    return np.linalg.inv(lap + p0) - p0


def pairwise_variances(lap: np.ndarray, k: int) -> np.ndarray:
    """Matrix of ``V_ij / sigma^2 = k (L-_ii + L-_jj - 2 L-_ij)``."""
    lm = moore_penrose(lap)
    d = np.diag(lm)
    return k * (d[:, None] + d[None, :] - 2 * lm)


def contrast_variance(lap: np.ndarray, k: int, x) -> float:
    """Variance (units of sigma^2) of the best estimator of the contrast ``sum x_i tau_i``."""
    x = np.asarray(x, dtype=float)
    if abs(x.sum()) > 1e-9:
        raise ValueError("contrast coefficients must sum to zero")
    return float(k * x @ moore_penrose(lap) @ x)


def phi_p(thetas, p: float) -> float:
    """``((sum theta^-p) / (v-1))^(1/p)`` evaluated in log space."""
    t = np.asarray(thetas, dtype=float)
    if p <= 0:
        raise ValueError("p must be positive; use the D criterion for the p -> 0 limit")
    logs = -p * np.log(t)
    top = logs.max()
    lse = top + np.log(np.exp(logs - top).sum())
    return float(exp((lse - log(len(t))) / p))


class Kind(Enum):
    A = "A"
    D = "D"
    E = "E"
    PHI = "Phi"


@dataclass(frozen=True)
class Criterion:
    """One of A, D, E or Phi_p; ``key`` sorts better designs first."""

    kind: Kind
    p: Optional[float] = None

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        t = text.strip()
        if t.upper() in ("A", "D", "E"):
            return cls(Kind(t.upper()))
        if t.lower().startswith("phi"):
            return cls(Kind.PHI, float(t[3:].lstrip(":=")))
        raise ValueError(f"unknown criterion {text!r}")

    def value(self, report: "CriteriaReport") -> float:
        if self.kind is Kind.A:
            return report.A_value
        if self.kind is Kind.D:
            return report.D_value
        if self.kind is Kind.E:
            return report.E_value
        return report.phi_p(self.p)

    def key(self, report: "CriteriaReport") -> float:
        val = self.value(report)
        return val if self.kind is Kind.PHI else -val

    def __str__(self) -> str:
        return f"Phi{self.p:g}" if self.kind is Kind.PHI else self.kind.value


A = Criterion(Kind.A)
D = Criterion(Kind.D)
E = Criterion(Kind.E)


def Phi(p: float) -> Criterion:
    return Criterion(Kind.PHI, float(p))


@dataclass(frozen=True)
class CriteriaReport:
    v: int
    b: int
    k: int
    spectrum: Spectrum
    A_value: float
    D_value: float
    E_value: float
    Vbar: float
    V: np.ndarray
    tree_count_from_spectrum: int

    @property
    def theta_max(self) -> float:
        return float(self.spectrum.nontrivial[-1])

    def phi_p(self, p: float) -> float:
        return phi_p(self.spectrum.nontrivial, p)

    CSV_HEADER = "v,b,k,A,D,E,theta_min,theta_max,Vbar,tree_count"

    def csv_row(self) -> str:
        f = _fmt
        return ",".join([str(self.v), str(self.b), str(self.k), f(self.A_value), f(self.D_value),
                         f(self.E_value), f(self.E_value), f(self.theta_max), f(self.Vbar),
                         str(self.tree_count_from_spectrum)])


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def criteria_from_laplacian(lap: np.ndarray, k: int, b: int = 0) -> CriteriaReport:
    lap = np.asarray(lap)
    v = lap.shape[0]
    spec = spectrum(lap)
    if spec.trivial_multiplicity > 1:
        raise DesignError("design is disconnected: criteria need a connected concurrence graph")
    th = spec.nontrivial
    harmonic = len(th) / float(np.sum(1.0 / th))
    geometric = float(np.exp(np.mean(np.log(th))))
    V = pairwise_variances(lap, k)
    vbar = 2.0 * k * float(np.trace(moore_penrose(lap))) / (v - 1)
    trees = int(round(float(np.exp(np.sum(np.log(th)) - np.log(v)))))
    return CriteriaReport(v, b, k, spec, harmonic, geometric, float(th[0]), vbar, V, trees)


def criteria(d: BlockDesign) -> CriteriaReport:
    g = concurrence_graph(d)
    if not is_connected(g):
        raise DesignError("design is disconnected: criteria need a connected concurrence graph")
    return criteria_from_laplacian(laplacian(g), d.k, d.b)


class Dominance(Enum):
    BOTH = "both"          # L1 == L2 in the PSD order
    SECOND = "second"      # L2 - L1 is PSD: the second design is at least as good
    FIRST = "first"        # L1 - L2 is PSD
    NEITHER = "neither"


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    return bool(np.linalg.eigvalsh((m + m.T) / 2).min() >= -tol)


def dominates(l1: np.ndarray, l2: np.ndarray) -> Dominance:
    l1 = np.asarray(l1)
    l2 = np.asarray(l2)
    if l1.shape != l2.shape:
        raise ValueError(f"dimension mismatch: {l1.shape} vs {l2.shape}")
    fwd = is_psd(l2 - l1)
    back = is_psd(l1 - l2)
    if fwd and back:
        return Dominance.BOTH
    if fwd:
        return Dominance.SECOND
    if back:
        return Dominance.FIRST
    return Dominance.NEITHER


def phi_crossover(r1: CriteriaReport, r2: CriteriaReport, p_lo: float = 0.1,
                  p_hi: float = 100.0, width: float = 1e-3) -> Optional[tuple[float, float]]:
    """Bracket ``[lo, hi]`` of width <= ``width`` where the Phi_p ranking of two designs flips.

    Bisection runs on ``log p``.  Returns ``None`` when the sign of
    ``Phi_p(r1) - Phi_p(r2)`` agrees at both ends of ``[p_lo, p_hi]``.
    """
    def diff(p):
        return r1.phi_p(p) - r2.phi_p(p)

    lo, hi = p_lo, p_hi
    f_lo = diff(lo)
    if f_lo == 0:
        return (lo, lo)
    if f_lo * diff(hi) > 0:
        return None
    while hi - lo > width:
        mid = exp((log(lo) + log(hi)) / 2)
        f_mid = diff(mid)
        if f_mid == 0:
            return (mid, mid)
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return (lo, hi)
