"""Containment thresholds, limiting distributions, and common-subgraph location.

Everything here is a pure closed-form or implicitly defined quantity: the
sharp-threshold location for induced containment of a random pattern, the
parameters of the two limiting copy-count distributions, the per-pair cost
family whose log-envelope governs the maximum common induced subgraph, and
the max-min optimization that locates its concentration point.

All logarithms are natural internally; logs to other bases are taken as
ratios of natural logs so there is a single rounding model throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .graphs import ProbPair

__all__ = [
    "ContainmentForecast",
    "CostFamily",
    "McisLocationReport",
    "ThresholdReport",
    "classify_region",
    "common_density",
    "containment_base",
    "containment_limit",
    "cost_family",
    "critical_size",
    "critical_size_asymptotic",
    "edge_asymmetry_slope",
    "edge_deviation",
    "envelope_minimizer",
    "joint_critical_size",
    "log_expected_copies",
    "mcis_location",
    "poisson_copy_mean",
    "predict_fixed_pattern_containment",
    "squashed_normal_cdf",
    "threshold_location",
    "threshold_offset",
    "threshold_report",
    "threshold_window",
    "two_point_interval",
]

_LN_4_OVER_E = math.log(4.0) - 1.0
_LN_2_OVER_E = math.log(2.0) - 1.0


class ContainmentForecast(Enum):
    """Three-way verdict on whether a fixed pattern appears in the target."""

    ONE_WHP = "OneWHP"
    ZERO_WHP = "ZeroWHP"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ThresholdReport:
    """Sharp-threshold summary; field names are the serialization contract."""

    a: float
    n_star: float
    sigma2: float
    psi: float
    eps_N: float


@dataclass(frozen=True)
class McisLocationReport:
    """Location of the common-subgraph size concentration point.

    region tags which cost branch is active at the optimum; p_opt is the
    maximizer of the min-envelope of the three candidate sizes, p0 the
    minimizer of the log-cost envelope; x0/x1/x2 are the candidates at p_opt.
    """

    region: str
    p_opt: float
    p0: float
    x0: float
    x1: float
    x2: float
    n_N: float
    interval_lo: int
    interval_hi: int
    eps_N: float
    ambiguous: bool = False


def _log_base(pp: ProbPair) -> float:
    # -log(p2^p1 * (1-p2)^(1-p1)); strictly positive on (0,1)^2
    return -(pp.p1 * math.log(pp.p2) + (1.0 - pp.p1) * math.log(1.0 - pp.p2))


def containment_base(pp: ProbPair) -> float:
    """Exponential base of the containment first moment, always > 1."""
    return math.exp(_log_base(pp))


def threshold_location(pp: ProbPair, N: int) -> float:
    """Pattern size at which induced containment flips from likely to unlikely."""
    if N < 2:
        raise DomainError(f"target size must be at least 2, got {N}")
    return 2.0 * math.log(N) / _log_base(pp) + 1.0


def _window(N) -> float:
    ln_n = math.log(N)
    t = math.log(ln_n)
    return t * t / ln_n


def threshold_window(N: int) -> float:
    """Half-width of the indeterminate band around the threshold location."""
    if N < 16:
        raise DomainError(f"window needs target size >= 16, got {N}")
    return _window(N)


def limit_variance(pp: ProbPair) -> float:
    """Variance of the limiting containment profile; zero iff p2 = 1/2."""
    ratio = 1.0 / pp.p2 - 1.0
    slope = math.log(ratio) / _log_base(pp)
    return 2.0 * pp.p1 * (1.0 - pp.p1) * slope * slope


def edge_asymmetry_slope(pp: ProbPair) -> float:
    """Per-edge log-cost asymmetry; zero iff p2 = 1/2."""
    return math.log(pp.p2 / (1.0 - pp.p2)) / _log_base(pp)


def edge_deviation(n: int, m: int, p1: float) -> float:
    """Normalized surplus of a pattern's edge count over its mean."""
    if n < 1:
        raise DomainError(f"pattern size must be positive, got {n}")
    pairs = math.comb(n, 2)
    if not 0 <= m <= pairs:
        raise DomainError(f"edge count must be in [0, {pairs}], got {m}")
    return (m - pairs * p1) / (n / 2.0)


def threshold_offset(n: int, pp: ProbPair, N: int) -> float:
    """Signed distance of the pattern size above the threshold location."""
    return n - threshold_location(pp, N)


def predict_fixed_pattern_containment(
    n: int, m: int, N: int, pp: ProbPair
) -> ContainmentForecast:
    """Classify containment odds of a size-n, m-edge pattern in a size-N target.

    The decision statistic is the edge-deviation term minus the threshold
    offset, compared against the indeterminate window.
    """
    if N < 3:
        raise DomainError(f"target size must be at least 3, got {N}")
    s = edge_asymmetry_slope(pp) * edge_deviation(n, m, pp.p1) - threshold_offset(
        n, pp, N
    )
    eps = _window(N)
    if s >= eps:
        return ContainmentForecast.ONE_WHP
    if s <= -eps:
        return ContainmentForecast.ZERO_WHP
    return ContainmentForecast.INDETERMINATE


def _phi(z: float) -> float:
    # Standard normal CDF via the C library's erfc (SunPro/fdlibm rational
    # minimax kernels); absolute error is ~1 ulp, far below the 1e-12 budget.
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def containment_limit(pp: ProbPair, c: float) -> float:
    """Limiting containment probability at signed threshold offset c."""
    s2 = limit_variance(pp)
    if s2 == 0.0:
        raise DomainError(
            "limit profile is a step at p2 = 1/2; containment is decided by the "
            "sign of the offset alone"
        )
    return 0.5 * math.erfc(c / math.sqrt(2.0 * s2))


def squashed_normal_cdf(x: float, mu: float, sigma2: float) -> float:
    """CDF of a normal law with its negative part collapsed into an atom at 0."""
    if sigma2 <= 0.0:
        raise DomainError(f"variance must be positive, got {sigma2}")
    if x < 0.0:
        return 0.0
    return _phi((x - mu) / math.sqrt(sigma2))


def poisson_copy_mean(N: int, n: int) -> float:
    """Mean of the limiting copy-count law at target density 1/2.

    Falling factorial of N of order n, scaled by 2^-(pairs). Exact rational
    arithmetic below n = 13, log-space above.
    """
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")
    pairs = math.comb(n, 2)
    if n <= 12:
        ff = 1
        for k in range(n):
            ff *= N - k
        try:
            return float(Fraction(ff, 1 << pairs))
        except OverflowError:
            return math.inf
    log_mu = math.lgamma(N + 1) - math.lgamma(N - n + 1) - pairs * math.log(2.0)
    try:
        return math.exp(log_mu)
    except OverflowError:
        return math.inf


def log_expected_copies(N: int, n: int, m: int, p: float, aut: int) -> float:
    """Natural log of the expected number of induced copies of a fixed pattern.

    Pattern: n vertices, m edges, automorphism count aut; target: N vertices
    with independent edge probability p. Stays in log-space throughout.
    """
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")
    pairs = math.comb(n, 2)
    if not 0 <= m <= pairs:
        raise DomainError(f"edge count must be in [0, {pairs}], got {m}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"edge probability must be in (0, 1), got {p}")
    if aut < 1:
        raise DomainError(f"automorphism count must be positive, got {aut}")
    log_ff = math.lgamma(N + 1) - math.lgamma(N - n + 1)
    return log_ff + m * math.log(p) + (pairs - m) * math.log(1.0 - p) - math.log(aut)


def common_density(pp: ProbPair) -> float:
    """Edge density at which the joint per-pair cost is smallest."""
    both = pp.p1 * pp.p2
    neither = (1.0 - pp.p1) * (1.0 - pp.p2)
    return both / (both + neither)


def _log_cost(p: float, alpha: float, beta: float) -> float:
    # p*log(p/alpha) + (1-p)*log((1-p)/beta), with 0*log 0 = 0 at the endpoints
    t = 0.0
    if p > 0.0:
        t += p * (math.log(p) - math.log(alpha))
    if p < 1.0:
        q = 1.0 - p
        t += q * (math.log(q) - math.log(beta))
    return t


def _log_cost_vec(p: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    q = 1.0 - p
    safe_p = np.where(p > 0.0, p, 1.0)
    safe_q = np.where(q > 0.0, q, 1.0)
    t1 = p * (np.log(safe_p) - math.log(alpha))
    t2 = q * (np.log(safe_q) - math.log(beta))
    return t1 + t2


class CostFamily:
    """Per-pair cost bases of a density-p pattern against a graph pair.

    joint(p) prices a vertex pair that must look right in both graphs at
    once; first(p) and second(p) price it in one graph alone. The boundary
    conventions 0^0 = 1 and 0*log 0 = 0 apply at p in {0, 1}. log_envelope
    is max(log joint, 2 log first, 2 log second) and is strictly convex with
    a unique interior minimizer.
    """

    def __init__(self, pp: ProbPair):
        self.pp = pp
        self._joint_alpha = pp.p1 * pp.p2
        self._joint_beta = (1.0 - pp.p1) * (1.0 - pp.p2)

    @property
    def common_density(self) -> float:
        return self._joint_alpha / (self._joint_alpha + self._joint_beta)

    def log_joint(self, p: float) -> float:
        return _log_cost(p, self._joint_alpha, self._joint_beta)

    def log_first(self, p: float) -> float:
        return _log_cost(p, self.pp.p1, 1.0 - self.pp.p1)

    def log_second(self, p: float) -> float:
        return _log_cost(p, self.pp.p2, 1.0 - self.pp.p2)

    def joint(self, p: float) -> float:
        return math.exp(self.log_joint(p))

    def first(self, p: float) -> float:
        return math.exp(self.log_first(p))

    def second(self, p: float) -> float:
        return math.exp(self.log_second(p))

    def log_envelope(self, p: float) -> float:
        return max(self.log_joint(p), 2.0 * self.log_first(p), 2.0 * self.log_second(p))


def cost_family(pp: ProbPair) -> CostFamily:
    """Evaluators for the three cost bases and their log-envelope."""
    return CostFamily(pp)


def envelope_minimizer(pp: ProbPair) -> float:
    """Golden-section minimizer of the convex log-cost envelope on [0, 1]."""
    fam = CostFamily(pp)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, 1.0
    a = hi - inv_phi * (hi - lo)
    b = lo + inv_phi * (hi - lo)
    fa, fb = fam.log_envelope(a), fam.log_envelope(b)
    while hi - lo > 1e-10:
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - inv_phi * (hi - lo)
            fa = fam.log_envelope(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + inv_phi * (hi - lo)
            fb = fam.log_envelope(b)
    return 0.5 * (lo + hi)


def critical_size(b: float, N) -> float:
    """Unique x >= 1 with x * b^((x-1)/2) = e*N, by monotone bisection.

    b = 1 degenerates to x = e*N exactly. The bracket doubles until the
    shortfall changes sign, then bisects to a relative residual well under
    1e-9.
    """
    if b < 1.0:
        raise DomainError(f"base must be at least 1, got {b}")
    if N < 1:
        raise DomainError(f"target size must be at least 1, got {N}")
    cap = math.e * N
    if b == 1.0:
        return cap
    target = 1.0 + math.log(N)
    half_log_b = 0.5 * math.log(b)

    def shortfall(x: float) -> float:
        return math.log(x) + (x - 1.0) * half_log_b - target

    lo, hi = 1.0, min(2.0, cap)
    while hi < cap and shortfall(hi) < 0.0:
        lo = hi
        hi = min(hi * 2.0, cap)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if shortfall(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, mid):
            break
    return 0.5 * (lo + hi)


def critical_size_asymptotic(b: float, N) -> float:
    """Second-order closed form for critical_size, for cross-validation only."""
    if b <= 1.0:
        raise DomainError(f"base must exceed 1, got {b}")
    if N <= 1:
        raise DomainError(f"target size must exceed 1, got {N}")
    log_b = math.log(b)
    big = math.log(N) / log_b
    if big <= 1.0:
        raise DomainError("target too small for this base")
    return 2.0 * big - 2.0 * math.log(big) / log_b - 2.0 * _LN_2_OVER_E / log_b + 1.0


def joint_critical_size(pp: ProbPair, p: float, N) -> float:
    """Closed-form candidate size from the joint cost at pattern density p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"density must be in [0, 1], got {p}")
    if N <= 1:
        raise DomainError(f"target size must exceed 1, got {N}")
    log_b0 = CostFamily(pp).log_joint(p)
    big = math.log(N) / log_b0
    if big <= 1.0:
        raise DomainError("joint cost too large for this target size")
    return 4.0 * big - 2.0 * math.log(big) / log_b0 - 2.0 * _LN_4_OVER_E / log_b0 + 1.0


def _joint_size_vec(log_b0: np.ndarray, N: float) -> np.ndarray:
    # Same formula with the inner log clamped so the envelope stays defined at
    # extreme p; clamped points are far below the max and never win it.
    big = math.log(N) / log_b0
    safe = np.maximum(big, 1.0)
    return 4.0 * big - 2.0 * np.log(safe) / log_b0 - 2.0 * _LN_4_OVER_E / log_b0 + 1.0


def _critical_size_vec(log_b: np.ndarray, N: float) -> np.ndarray:
    target = 1.0 + math.log(N)
    cap = math.e * N
    half = 0.5 * log_b
    lo = np.ones_like(log_b)
    hi = np.full_like(log_b, cap)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        below = np.log(mid) + (mid - 1.0) * half < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return np.where(log_b <= 0.0, cap, 0.5 * (lo + hi))


def _envelope_root(fam: CostFamily, side_log, p_side: float) -> float:
    # Root of 2*log_side - log_joint between the joint minimizer and the side
    # minimizer; the difference is convex with opposite signs at the ends.
    ph = fam.common_density

    def h(p: float) -> float:
        return 2.0 * side_log(p) - fam.log_joint(p)

    if h(ph) == 0.0:
        return ph
    # h >= 0 at the joint minimizer, h < 0 at the side minimizer
    pos, neg = ph, p_side
    for _ in range(200):
        mid = 0.5 * (pos + neg)
        if h(mid) >= 0.0:
            pos = mid
        else:
            neg = mid
        if abs(pos - neg) <= 1e-12:
            break
    return 0.5 * (pos + neg)


def classify_region(pp: ProbPair) -> tuple[str, float, bool]:
    """Which cost branch binds at the joint minimizer: (region, p0, ambiguous).

    Region A means the joint cost dominates at its own minimizer, which is
    then the envelope minimizer p0. Otherwise the binding side's doubled
    log-cost crosses the joint log-cost at p0. If both sides bind, the root
    with the smaller envelope value wins and the verdict is flagged.
    """
    fam = CostFamily(pp)
    ph = fam.common_density
    l0 = fam.log_joint(ph)
    c1 = 2.0 * fam.log_first(ph)
    c2 = 2.0 * fam.log_second(ph)
    if l0 > c1 and l0 > c2:
        return "A", ph, False
    bind1 = c1 >= l0
    bind2 = c2 >= l0
    if bind1 and bind2:
        r1 = _envelope_root(fam, fam.log_first, pp.p1)
        r2 = _envelope_root(fam, fam.log_second, pp.p2)
        if fam.log_envelope(r1) <= fam.log_envelope(r2):
            return "B1", r1, True
        return "B2", r2, True
    if bind1:
        return "B1", _envelope_root(fam, fam.log_first, pp.p1), False
    return "B2", _envelope_root(fam, fam.log_second, pp.p2), False


def _min_candidates(fam: CostFamily, p: float, N: float) -> tuple[float, float, float]:
    log_b0 = fam.log_joint(p)
    big = math.log(N) / log_b0
    safe = max(big, 1.0)
    x0 = 4.0 * big - 2.0 * math.log(safe) / log_b0 - 2.0 * _LN_4_OVER_E / log_b0 + 1.0
    # log-costs are >= 0 mathematically; clamp away -1e-17 rounding fuzz
    x1 = critical_size(math.exp(max(fam.log_first(p), 0.0)), N)
    x2 = critical_size(math.exp(max(fam.log_second(p), 0.0)), N)
    return x0, x1, x2


def mcis_location(pp: ProbPair, N: int) -> McisLocationReport:
    """Locate the concentration point of the common induced subgraph size.

    Maximizes the min-envelope of the three candidate sizes over pattern
    density p: a 10^4-point vectorized grid sweep brackets the max, ternary
    search refines it to 1e-8 in p, and the analytic candidates (the joint
    minimizer and the envelope minimizer) are kept if they do at least as
    well. The two-point interval applies the indeterminate window to the
    resulting size.
    """
    if N < 16:
        raise DomainError(f"location needs target size >= 16, got {N}")
    fam = CostFamily(pp)

    def phi(p: float) -> float:
        return min(_min_candidates(fam, p, N))

    grid = np.linspace(0.0, 1.0, 10001)
    lb0 = _log_cost_vec(grid, fam._joint_alpha, fam._joint_beta)
    lb1 = _log_cost_vec(grid, pp.p1, 1.0 - pp.p1)
    lb2 = _log_cost_vec(grid, pp.p2, 1.0 - pp.p2)
    values = np.minimum(
        _joint_size_vec(lb0, N),
        np.minimum(_critical_size_vec(lb1, N), _critical_size_vec(lb2, N)),
    )
    peak = int(np.argmax(values))
    lo = grid[max(peak - 1, 0)]
    hi = grid[min(peak + 1, grid.size - 1)]
    while hi - lo > 1e-8:
        third = (hi - lo) / 3.0
        a, b = lo + third, hi - third
        if phi(a) < phi(b):
            lo = a
        else:
            hi = b
    p_grid_opt = 0.5 * (lo + hi)

    region, p0, ambiguous = classify_region(pp)
    best_p, best_v = None, -math.inf
    for cand in (fam.common_density, p0, p_grid_opt):
        v = phi(cand)
        if v > best_v + 1e-9:
            best_p, best_v = cand, v
    x0, x1, x2 = _min_candidates(fam, best_p, N)
    n_val = min(x0, x1, x2)
    eps = _window(N)
    return McisLocationReport(
        region=region,
        p_opt=best_p,
        p0=p0,
        x0=x0,
        x1=x1,
        x2=x2,
        n_N=n_val,
        interval_lo=math.floor(n_val - eps),
        interval_hi=math.floor(n_val + eps),
        eps_N=eps,
        ambiguous=ambiguous,
    )


def two_point_interval(pp: ProbPair, N: int) -> tuple[int, int]:
    """The two consecutive candidate values for the common-subgraph size."""
    report = mcis_location(pp, N)
    return report.interval_lo, report.interval_hi


def threshold_report(pp: ProbPair, N: int) -> ThresholdReport:
    """Bundle of the sharp-threshold quantities for one parameter set."""
    if N < 2:
        raise DomainError(f"target size must be at least 2, got {N}")
    return ThresholdReport(
        a=containment_base(pp),
        n_star=threshold_location(pp, N),
        sigma2=limit_variance(pp),
        psi=edge_asymmetry_slope(pp),
        eps_N=_window(N),
    )
