"""Seeded Monte Carlo harness for containment rates and copy-count laws.

Determinism contract: trial t draws its graphs from substreams derived from
(seed, t) alone, and aggregation walks trials in index order, so results are
identical for any worker count. Timed-out trials are never imputed as yes or
no; they are dropped from rate denominators and reported separately.

Distribution distances are computed from the rounded values that get
serialized (9 significant digits), so recomputing a distance from a report's
own serialized histogram reproduces the stored value bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import thresholds
from .errors import BudgetExhausted, DomainError
from .graphs import Graph, ProbPair, gen_gnp
from .rng import Seed
from .solver import (
    Outcome,
    SearchBudget,
    contains_induced,
    count_induced_embeddings,
    mcis_size,
)

__all__ = [
    "DistributionReport",
    "EstimateReport",
    "HeatmapCell",
    "HeatmapReport",
    "McisConcentrationReport",
    "copy_count_distribution",
    "estimate_containment",
    "fixed_pattern_containment",
    "heatmap_containment",
    "log_copy_statistic",
    "mcis_concentration",
    "round9",
    "wilson_interval",
]

_Z95 = 1.959963984540054

# substream roles under one trial index
_PATTERN = 0
_TARGET = 1


def round9(x: float) -> float:
    """Round to 9 significant digits, the serialization precision for reals."""
    return float(f"{x:.9g}")


def wilson_interval(successes: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise DomainError("interval needs at least one observation")
    if not 0 <= successes <= n:
        raise DomainError(f"successes must be in [0, {n}], got {successes}")
    ph = successes / n
    denom = 1.0 + z * z / n
    center = (ph + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom
    # the bound is exactly 0 (or 1) at the boundary counts; rounding in the
    # closed form can land an ulp inside, which would exclude the point rate
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo rate with Wilson 95% bounds over the decided trials."""

    rate: float
    ci_lo: float
    ci_hi: float
    trials: int
    timeouts: int
    seed: Seed


@dataclass(frozen=True)
class DistributionReport:
    """Empirical histogram against a named reference law.

    values are bin locations (integers for counts, rounded reals for log
    statistics), counts the per-bin masses; their sum is trials - timeouts.
    reference_params hold the law's parameters at serialization precision.
    """

    values: tuple[float, ...]
    counts: tuple[int, ...]
    reference: str
    reference_params: dict[str, float]
    distance_kind: str
    distance: float
    trials: int
    timeouts: int
    seed: Seed

    @staticmethod
    def tv_distance(
        values: tuple[float, ...], counts: tuple[int, ...], decided: int, mu: float
    ) -> float:
        """Total variation against Poisson(mu) with the unmatched tail folded in.

        Reference mass beyond the largest observed value counts fully toward
        the distance, so truncation never understates it.
        """
        kmax = int(max(values))
        emp = dict(zip((int(v) for v in values), counts))
        pmf = math.exp(-mu)
        total = 0.0
        matched = 0.0
        for k in range(kmax + 1):
            total += abs(emp.get(k, 0) / decided - pmf)
            matched += pmf
            pmf = pmf * mu / (k + 1)
        total += max(0.0, 1.0 - matched)
        # summation fuzz can land an ulp above the mathematical ceiling of 1
        return min(0.5 * total, 1.0)

    @staticmethod
    def ks_distance(
        values: tuple[float, ...],
        counts: tuple[int, ...],
        decided: int,
        mu: float,
        sigma2: float,
    ) -> float:
        """Kolmogorov-Smirnov statistic against the squashed normal law.

        Both one-sided empirical values are compared at every bin. The
        reference law has an atom at 0, so its left limit there is 0, not
        the value of the right-continuous CDF; everywhere else the law is
        continuous and the two coincide.
        """
        dist = 0.0
        cum = 0
        for v, c in zip(values, counts):
            ref = thresholds.squashed_normal_cdf(v, mu, sigma2)
            ref_left = 0.0 if v <= 0.0 else ref
            dist = max(dist, abs(cum / decided - ref_left))
            cum += c
            dist = max(dist, abs(cum / decided - ref))
        return dist


@dataclass(frozen=True)
class HeatmapCell:
    """One grid cell; rate fields are None when every trial timed out."""

    x: float
    y: float
    rate: float | None
    ci_lo: float | None
    ci_hi: float | None
    timeouts: int


@dataclass(frozen=True)
class HeatmapReport:
    N: int
    n: int
    grid_k: int
    trials: int
    seed: Seed
    cells: tuple[HeatmapCell, ...]


@dataclass(frozen=True)
class McisConcentrationReport:
    """Histogram of exact common-subgraph sizes plus interval hit accounting.

    lower_bounds carry the incumbent sizes of timed-out searches; they are
    excluded from the histogram and the hit rate. Theory fields are None when
    the target is too small for the location formulas.
    """

    values: tuple[int, ...]
    counts: tuple[int, ...]
    lower_bounds: tuple[int, ...]
    trials: int
    timeouts: int
    seed: Seed
    slack: int
    n_N: float | None
    eps_N: float | None
    interval_lo: int | None
    interval_hi: int | None
    hit_rate: float | None


def _map_trials(fn, args: list, workers: int) -> list:
    if workers <= 1:
        return [fn(a) for a in args]
    chunk = max(1, len(args) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args, chunksize=chunk))


def _containment_trial(arg) -> str:
    n, p1, N, p2, seed, budget, t = arg
    pattern = gen_gnp(n, p1, seed.child(t, _PATTERN))
    target = gen_gnp(N, p2, seed.child(t, _TARGET))
    return contains_induced(pattern, target, budget).outcome.value


def _fixed_pattern_trial(arg) -> str:
    pattern, N, p2, seed, budget, t = arg
    target = gen_gnp(N, p2, seed.child(t, _TARGET))
    return contains_induced(pattern, target, budget).outcome.value


def _copy_count_trial(arg) -> int | None:
    n, N, p1, p2, seed, budget, t = arg
    pattern = gen_gnp(n, p1, seed.child(t, _PATTERN))
    target = gen_gnp(N, p2, seed.child(t, _TARGET))
    return count_induced_embeddings(pattern, target, budget).count


def _mcis_trial(arg) -> tuple[int, bool]:
    N, p1, p2, seed, budget, t = arg
    g1 = gen_gnp(N, p1, seed.child(t, _PATTERN))
    g2 = gen_gnp(N, p2, seed.child(t, _TARGET))
    res = mcis_size(g1, g2, budget)
    return res.size, res.exact


def _aggregate_rate(outcomes: list[str]) -> tuple[int, int, int]:
    yes = sum(1 for o in outcomes if o == Outcome.YES.value)
    timeouts = sum(1 for o in outcomes if o == Outcome.TIMEOUT.value)
    return yes, len(outcomes) - timeouts, timeouts


def _estimate_from_outcomes(
    outcomes: list[str], trials: int, seed: Seed
) -> EstimateReport:
    yes, decided, timeouts = _aggregate_rate(outcomes)
    if decided == 0:
        raise BudgetExhausted("every trial timed out; rate is undefined")
    lo, hi = wilson_interval(yes, decided)
    return EstimateReport(yes / decided, lo, hi, trials, timeouts, seed)


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")


def estimate_containment(
    n: int,
    p1: float,
    N: int,
    p2: float,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> EstimateReport:
    """Rate at which a fresh size-n pattern embeds induced in a fresh target."""
    ProbPair(p1, p2)
    _check_trials(trials)
    if not 0 <= n <= N:
        raise DomainError(f"need 0 <= n <= N, got n={n}, N={N}")
    args = [(n, p1, N, p2, seed, budget, t) for t in range(trials)]
    outcomes = _map_trials(_containment_trial, args, workers)
    return _estimate_from_outcomes(outcomes, trials, seed)


def fixed_pattern_containment(
    H: Graph,
    N: int,
    p2: float,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> EstimateReport:
    """Containment rate of one fixed pattern over fresh targets."""
    if not 0.0 < p2 < 1.0:
        raise DomainError(f"edge probability must be in (0, 1), got {p2}")
    _check_trials(trials)
    if H.n > N:
        raise DomainError(f"pattern size {H.n} exceeds target size {N}")
    args = [(H, N, p2, seed, budget, t) for t in range(trials)]
    outcomes = _map_trials(_fixed_pattern_trial, args, workers)
    return _estimate_from_outcomes(outcomes, trials, seed)


def heatmap_containment(
    N: int,
    n: int,
    grid_k: int,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> HeatmapReport:
    """Containment rate over the density grid {1/(k+1), ..., k/(k+1)}^2.

    x is the pattern density, y the target density. A cell whose trials all
    time out keeps None rate fields instead of failing the whole map.
    """
    if grid_k < 2:
        raise DomainError(f"grid needs at least 2 points per axis, got {grid_k}")
    _check_trials(trials)
    if not 0 <= n <= N:
        raise DomainError(f"need 0 <= n <= N, got n={n}, N={N}")
    axis = [(i + 1) / (grid_k + 1) for i in range(grid_k)]
    args = []
    for i, x in enumerate(axis):
        for j, y in enumerate(axis):
            cell_seed = seed.child(i, j)
            for t in range(trials):
                args.append((n, x, N, y, cell_seed, budget, t))
    outcomes = _map_trials(_containment_trial, args, workers)
    cells = []
    pos = 0
    for i, x in enumerate(axis):
        for j, y in enumerate(axis):
            chunk = outcomes[pos : pos + trials]
            pos += trials
            yes, decided, timeouts = _aggregate_rate(chunk)
            if decided == 0:
                cells.append(HeatmapCell(x, y, None, None, None, timeouts))
            else:
                lo, hi = wilson_interval(yes, decided)
                cells.append(HeatmapCell(x, y, yes / decided, lo, hi, timeouts))
    return HeatmapReport(N, n, grid_k, trials, seed, tuple(cells))


def _histogram(samples: list) -> tuple[tuple, tuple[int, ...]]:
    bins: dict = {}
    for s in samples:
        bins[s] = bins.get(s, 0) + 1
    values = tuple(sorted(bins))
    return values, tuple(bins[v] for v in values)


def copy_count_distribution(
    n: int,
    N: int,
    p1: float,
    p2: float,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> DistributionReport:
    """Distribution of induced-copy counts against its limiting Poisson law.

    Counts embeddings of a fresh random pattern per trial; at target density
    1/2 every pattern has the same expected embedding count, which is the
    reference mean.
    """
    ProbPair(p1, p2)
    _check_trials(trials)
    if p2 != 0.5:
        raise DomainError("copy-count reference law requires target density 1/2")
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")
    mu = round9(thresholds.poisson_copy_mean(N, n))
    args = [(n, N, p1, p2, seed, budget, t) for t in range(trials)]
    raw = _map_trials(_copy_count_trial, args, workers)
    decided = [c for c in raw if c is not None]
    timeouts = len(raw) - len(decided)
    if not decided:
        raise BudgetExhausted("every trial timed out; distribution is undefined")
    values, counts = _histogram(decided)
    dist = DistributionReport.tv_distance(values, counts, len(decided), mu)
    return DistributionReport(
        values=values,
        counts=counts,
        reference="poisson",
        reference_params={"mu": mu},
        distance_kind="tv",
        distance=dist,
        trials=trials,
        timeouts=timeouts,
        seed=seed,
    )


def log_copy_statistic(
    n: int,
    N: int,
    p1: float,
    p2: float,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> DistributionReport:
    """Distribution of log(1+X)/log N against the squashed normal law.

    X is the per-trial embedding count of a fresh random pattern. The
    reference is the normal law centered at minus the threshold offset with
    the limiting variance, its negative part collapsed to an atom at 0.
    """
    pp = ProbPair(p1, p2)
    _check_trials(trials)
    if p2 == 0.5:
        raise DomainError(
            "log-statistic reference law degenerates at target density 1/2"
        )
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n={n}, N={N}")
    if N < 2:
        raise DomainError(f"target size must be at least 2, got {N}")
    mu = round9(-thresholds.threshold_offset(n, pp, N))
    sigma2 = round9(thresholds.limit_variance(pp))
    log_n = math.log(N)
    args = [(n, N, p1, p2, seed, budget, t) for t in range(trials)]
    raw = _map_trials(_copy_count_trial, args, workers)
    decided = [c for c in raw if c is not None]
    timeouts = len(raw) - len(decided)
    if not decided:
        raise BudgetExhausted("every trial timed out; distribution is undefined")
    samples = [round9(math.log1p(c) / log_n) for c in decided]
    values, counts = _histogram(samples)
    dist = DistributionReport.ks_distance(values, counts, len(decided), mu, sigma2)
    return DistributionReport(
        values=values,
        counts=counts,
        reference="squashed_normal",
        reference_params={"mu": mu, "sigma2": sigma2},
        distance_kind="ks",
        distance=dist,
        trials=trials,
        timeouts=timeouts,
        seed=seed,
    )


def mcis_concentration(
    N: int,
    p1: float,
    p2: float,
    trials: int,
    seed: Seed,
    budget: SearchBudget | None = None,
    workers: int = 1,
    slack: int = 1,
) -> McisConcentrationReport:
    """Histogram of the common induced subgraph size over independent pairs.

    The hit rate is measured against the predicted two-point interval widened
    by the reported slack; the asymptotic window is not literal at desk-scale
    targets. Timed-out searches contribute incumbent lower bounds only.
    """
    ProbPair(p1, p2)
    _check_trials(trials)
    if N < 1:
        raise DomainError(f"target size must be at least 1, got {N}")
    if slack < 0:
        raise DomainError(f"slack must be non-negative, got {slack}")
    args = [(N, p1, p2, seed, budget, t) for t in range(trials)]
    raw = _map_trials(_mcis_trial, args, workers)
    exact = [size for size, ok in raw if ok]
    lower = tuple(size for size, ok in raw if not ok)
    if not exact:
        raise BudgetExhausted("every trial timed out; histogram is undefined")
    values, counts = _histogram(exact)
    if N >= 16:
        loc = thresholds.mcis_location(ProbPair(p1, p2), N)
        lo = loc.interval_lo - slack
        hi = loc.interval_hi + slack
        hits = sum(1 for s in exact if lo <= s <= hi)
        n_val, eps = loc.n_N, loc.eps_N
        ilo, ihi = loc.interval_lo, loc.interval_hi
        hit_rate = hits / len(exact)
    else:
        n_val = eps = ilo = ihi = hit_rate = None
    return McisConcentrationReport(
        values=values,
        counts=counts,
        lower_bounds=lower,
        trials=trials,
        timeouts=len(lower),
        seed=seed,
        slack=slack,
        n_N=n_val,
        eps_N=eps,
        interval_lo=ilo,
        interval_hi=ihi,
        hit_rate=hit_rate,
    )
