"""Heavy-tail model fitting and sampling.

Degree distributions are fitted with a truncated power law
``P(k) = A k^-alpha exp(-k/beta)`` and weight distributions with a pure
power law ``P(w) = B w^-lambda``.  Both fits act on log-binned data in log
space, comparing each bin's observed density against the model's average
over the integers the bin covers, with bins weighted by mass (the log of
a Poisson count has variance ~1/count).  Point-evaluating the model at a
representative x instead, or weighting bins equally, biases recovered
exponents beyond their standard errors: wide tail bins average over
several cutoff scales and sparse tail bins carry +-1 noise in log space.

The sampler draws exact variates by rejection from a pure power-law
proposal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

# beta is capped at 1/_C_MIN; at the cap the exponential factor is flat
# over any finite support, i.e. a pure power law.
_C_MIN = 1e-12


class FitError(Exception):
    pass


class InsufficientDataError(FitError):
    pass


class FitConvergenceError(FitError):
    def __init__(self, message: str, last_params: dict[str, float]):
        super().__init__(message)
        self.last_params = last_params


@dataclass(frozen=True)
class FitResult:
    model: str  # "truncated_power_law" | "power_law"
    params: dict[str, float]
    stderr: dict[str, float]
    rss: float  # unweighted residual sum of squares in log space
    fit_min: float
    n_points: int

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "params": self.params,
            "stderr": self.stderr,
            "rss": self.rss,
            "range": {"min": self.fit_min},
            "n_points": self.n_points,
        }


@dataclass(frozen=True)
class BinnedDensity:
    """Log-binned histogram over positive integers.

    The data are discrete, so the density of a bin is its mass divided by
    the number of integers the bin covers (its width in counting measure),
    and the representative x is the geometric mean of those integers.
    This keeps single-integer bins exactly on the underlying mass
    function.
    """

    x: np.ndarray
    density: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    mass: np.ndarray
    n_integers: np.ndarray


def _integer_geometric_mean(lo: int, hi: int) -> float:
    """Geometric mean of the integers lo..hi-1."""
    return math.exp((math.lgamma(hi) - math.lgamma(lo)) / (hi - lo))


def log_bin(
    histogram: Mapping[int, float], bin_ratio: float, x_min: int = 1
) -> BinnedDensity:
    """Geometric binning of a histogram over positive integers.

    Bin i covers [x_min*r^i, x_min*r^(i+1)); empty bins are omitted.
    """
    if bin_ratio <= 1:
        raise ValueError("bin_ratio must be > 1")
    if x_min < 1:
        raise ValueError("x_min must be >= 1")
    values = sorted(v for v in histogram if v >= x_min)
    empty = np.empty(0)
    if not values:
        return BinnedDensity(empty, empty, empty, empty, empty, empty)
    n_bins = int(math.log(values[-1] / x_min) / math.log(bin_ratio) + 1e-9) + 1
    edges = x_min * bin_ratio ** np.arange(n_bins + 1)
    mass = np.zeros(n_bins)
    for v in values:
        idx = int(math.log(v / x_min) / math.log(bin_ratio) + 1e-9)
        mass[idx] += histogram[v]
    keep = mass > 0
    lo, hi = edges[:-1][keep], edges[1:][keep]
    first = np.ceil(lo - 1e-9).astype(np.int64)  # smallest integer in the bin
    last = np.ceil(hi - 1e-9).astype(np.int64)  # one past the largest
    counts = last - first
    x = np.array([
        _integer_geometric_mean(int(a), int(b)) for a, b in zip(first, last)
    ])
    return BinnedDensity(
        x=x,
        density=mass[keep] / counts,
        lo=lo,
        hi=hi,
        mass=mass[keep],
        n_integers=counts.astype(float),
    )


def _ols(
    lx: np.ndarray, ly: np.ndarray, weights: np.ndarray | None = None
) -> tuple[float, float]:
    """(Weighted) straight-line fit of ly on lx: slope and intercept."""
    n = len(lx)
    w = np.full(n, 1.0 / n) if weights is None else weights / weights.sum()
    mx, my = float(w @ lx), float(w @ ly)
    sxx = float(w @ (lx - mx) ** 2)
    slope = float(w @ ((lx - mx) * (ly - my))) / sxx
    return slope, my - slope * mx


class _BinnedModel:
    """Per-bin average of A x^-exponent exp(-c x) over the bin's integers."""

    def __init__(self, binned: BinnedDensity, fit_cutoff: bool):
        self.y = np.log(binned.density)
        self.sqrt_w = np.sqrt(binned.mass / binned.mass.sum())
        self.fit_cutoff = fit_cutoff
        first = np.ceil(binned.lo - 1e-9).astype(np.int64)
        last = np.ceil(binned.hi - 1e-9).astype(np.int64)
        self.ks = np.concatenate(
            [np.arange(a, b) for a, b in zip(first, last)]
        ).astype(float)
        self.offsets = np.concatenate([[0], np.cumsum(last - first)[:-1]])
        self.lnks = np.log(self.ks)
        self.n_ints = binned.n_integers
        self.n = len(binned.x)

    def residual_jac(self, theta: np.ndarray):
        """(weighted residual, weighted model Jacobian, unweighted residual).

        theta = (exponent, c, log_amplitude); c is ignored when the cutoff
        is not fitted.
        """
        expo, c = theta[0], theta[1] if self.fit_cutoff else 0.0
        w = np.exp(-expo * self.lnks - c * self.ks)
        s = np.add.reduceat(w, self.offsets)
        mean_lnk = np.add.reduceat(w * self.lnks, self.offsets) / s
        log_mean = np.log(s / self.n_ints)
        plain = self.y - (theta[2] + log_mean)
        if self.fit_cutoff:
            mean_k = np.add.reduceat(w * self.ks, self.offsets) / s
            jac = np.column_stack([-mean_lnk, -mean_k, np.ones(self.n)])
        else:
            jac = np.column_stack(
                [-mean_lnk, np.zeros(self.n), np.ones(self.n)]
            )
        return self.sqrt_w * plain, self.sqrt_w[:, None] * jac, plain


def _lm_minimize(
    model: _BinnedModel,
    theta0: np.ndarray,
    max_iter: int,
    rel_tol: float,
):
    """Damped Gauss-Newton with positivity clamps; deterministic."""
    theta = theta0.copy()
    r, jac, plain = model.residual_jac(theta)
    cost = float(r @ r)
    mu = 1e-3
    free = [0, 1, 2] if model.fit_cutoff else [0, 2]
    for _ in range(max_iter):
        j = jac[:, free]
        jtj = j.T @ j
        damped = jtj + mu * np.diag(np.diag(jtj))
        delta = np.linalg.solve(damped, j.T @ r)
        cand = theta.copy()
        cand[free] += delta
        cand[0] = max(cand[0], 1e-9)
        if model.fit_cutoff:
            cand[1] = max(cand[1], _C_MIN)
        r_cand, jac_cand, plain_cand = model.residual_jac(cand)
        cost_cand = float(r_cand @ r_cand)
        if cost_cand <= cost:
            rel = float(
                np.max(np.abs(cand - theta) / np.maximum(np.abs(theta), 1e-12))
            )
            theta, r, jac, plain, cost = cand, r_cand, jac_cand, plain_cand, cost_cand
            mu = max(mu / 10.0, 1e-14)
            if rel < rel_tol:
                break
        else:
            mu *= 10.0
    else:
        return theta, None, cost, plain  # not converged
    n_free = len(free)
    s2 = cost / (model.n - n_free) if model.n > n_free else 0.0
    jtj = jac[:, free].T @ jac[:, free]
    cov_free = s2 * np.linalg.pinv(jtj)
    cov = np.zeros((3, 3))
    for a, fa in enumerate(free):
        for b, fb in enumerate(free):
            cov[fa, fb] = cov_free[a, b]
    return theta, cov, cost, plain


def fit_power_law(
    histogram: Mapping[int, float],
    w_min: int = 1,
    bin_ratio: float = 2.0,
    max_iter: int = 200,
    rel_tol: float = 1e-8,
) -> FitResult:
    """Fit B w^-lambda to log-binned densities in log space."""
    binned = log_bin(histogram, bin_ratio, x_min=w_min)
    if len(binned.x) < 3:
        raise InsufficientDataError(
            f"need >= 3 nonempty log bins at w >= {w_min}, got {len(binned.x)}"
        )
    model = _BinnedModel(binned, fit_cutoff=False)
    slope0, _ = _ols(np.log(binned.x), model.y, weights=binned.mass)
    lam0 = max(-slope0, 1e-3)
    theta0 = np.array([lam0, 0.0, 0.0])
    _, _, plain0 = model.residual_jac(theta0)
    theta0[2] = float(np.mean(plain0))
    theta, cov, _, plain = _lm_minimize(model, theta0, max_iter, rel_tol)
    lam, logb = float(theta[0]), float(theta[2])
    amplitude = math.exp(logb)
    if cov is None:
        raise FitConvergenceError(
            f"no convergence after {max_iter} iterations",
            {"lambda": lam, "amplitude": amplitude},
        )
    return FitResult(
        model="power_law",
        params={"lambda": lam, "amplitude": amplitude},
        stderr={
            "lambda": math.sqrt(max(cov[0, 0], 0.0)),
            "amplitude": amplitude * math.sqrt(max(cov[2, 2], 0.0)),
        },
        rss=float(plain @ plain),
        fit_min=float(w_min),
        n_points=len(binned.x),
    )


def fit_truncated_power_law(
    histogram: Mapping[int, float],
    k_min: int = 1,
    bin_ratio: float = 2.0,
    max_iter: int = 200,
    rel_tol: float = 1e-8,
) -> FitResult:
    """Fit A k^-alpha exp(-k/beta) to log-binned densities in log space.

    Initialization: alpha from a pure power-law straight-line fit over the
    lower third of the binned range, beta from the largest observed k.
    Iterates damped Gauss-Newton steps on (alpha, 1/beta, log A) until the
    relative parameter change drops below ``rel_tol``; raises
    FitConvergenceError (carrying the last iterate) after ``max_iter``
    iterations.
    """
    binned = log_bin(histogram, bin_ratio, x_min=k_min)
    n = len(binned.x)
    if n < 4:
        raise InsufficientDataError(
            f"need >= 4 nonempty log bins at k >= {k_min}, got {n}"
        )
    model = _BinnedModel(binned, fit_cutoff=True)
    head = max(2, (n + 2) // 3)
    slope0, _ = _ols(np.log(binned.x)[:head], model.y[:head])
    alpha0 = max(-slope0, 1e-3)
    k_max = max(v for v in histogram if v >= k_min)
    c0 = max(1.0 / k_max, _C_MIN)
    theta0 = np.array([alpha0, c0, 0.0])
    _, _, plain0 = model.residual_jac(theta0)
    theta0[2] = float(np.mean(plain0))
    theta, cov, _, plain = _lm_minimize(model, theta0, max_iter, rel_tol)
    alpha, c, loga = float(theta[0]), float(theta[1]), float(theta[2])
    beta = 1.0 / c
    amplitude = math.exp(loga)
    if cov is None:
        raise FitConvergenceError(
            f"no convergence after {max_iter} iterations",
            {"alpha": alpha, "beta": beta, "amplitude": amplitude},
        )
    return FitResult(
        model="truncated_power_law",
        params={"alpha": alpha, "beta": beta, "amplitude": amplitude},
        stderr={
            "alpha": math.sqrt(max(cov[0, 0], 0.0)),
            # delta method through beta = 1/c
            "beta": math.sqrt(max(cov[1, 1], 0.0)) / (c * c),
            "amplitude": amplitude * math.sqrt(max(cov[2, 2], 0.0)),
        },
        rss=float(plain @ plain),
        fit_min=float(k_min),
        n_points=n,
    )


def sample_truncated_power_law(
    alpha: float, beta: float, k_min: int, n: int, seed: int
) -> np.ndarray:
    """Draw n iid integers from P(k) proportional to k^-alpha exp(-k/beta), k >= k_min.

    Exact rejection sampling.  For alpha > 1 the proposal is the pure
    power law (Zipf) conditioned on k >= k_min, thinned by the exponential
    factor; for alpha <= 1 (where the power-law proposal is not
    normalizable) the roles swap: a geometric proposal carries the
    exponential factor and the power-law factor thins.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError(f"alpha and beta must be positive, got {alpha}, {beta}")
    if k_min < 1:
        raise ValueError(f"k_min must be >= 1, got {k_min}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    out = np.empty(n, dtype=np.int64)
    filled = 0
    while filled < n:
        batch = min(max(4096, 2 * (n - filled)), 4_000_000)
        if alpha > 1:
            k = rng.zipf(alpha, size=batch)
            u = rng.random(batch)
            ok = (k >= k_min) & (u < np.exp(-(k - k_min) / beta))
        else:
            p = -math.expm1(-1.0 / beta)
            k = k_min - 1 + rng.geometric(p, size=batch)
            u = rng.random(batch)
            ok = u < (k / k_min) ** (-alpha)
        acc = k[ok]
        take = min(len(acc), n - filled)
        out[filled : filled + take] = acc[:take]
        filled += take
    return out


def truncated_power_law_pmf(
    alpha: float, beta: float, k_min: int = 1, tol: float = 1e-15
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized mass function by direct summation until the tail is negligible."""
    if alpha <= 0 or beta <= 0 or k_min < 1:
        raise ValueError("invalid parameters")
    ks, ws = [], []
    k = k_min
    total = 0.0
    while True:
        w = k**-alpha * math.exp(-k / beta)
        ks.append(k)
        ws.append(w)
        total += w
        # geometric tail bound: terms decay at least by exp(-1/beta)
        ratio = math.exp(-1.0 / beta)
        if k > beta and w * ratio / (1 - ratio) < tol * total:
            break
        k += 1
    ks_arr = np.array(ks, dtype=np.int64)
    ws_arr = np.array(ws)
    return ks_arr, ws_arr / ws_arr.sum()
