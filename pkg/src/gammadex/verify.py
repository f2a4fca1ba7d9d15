"""Monte Carlo and quadrature checks of every closed form in the package.

Each check produces an ``McReport``.  Monte Carlo checks draw gamma
samples in fixed-size replicate blocks, one child stream per block
(``stream_id = anchor + block index``), and reduce block partials with
exact summation, so results are bit-identical regardless of how many
workers execute the blocks.  Quadrature and enumeration checks reuse
the same report shape with ``reps = 0``; quadrature lines carry their
agreement tolerance as a pseudo standard error so the pass rule
``|z_score| <= z_max`` applies uniformly.

``run_verification`` executes the default grid: raw estimator means
against their exact expectations, debiased means against population
values, rate-sweep invariance for the scale-free indices, the
proportion-sum independence correlations, the Dirichlet product moment,
the two beta-integral identities, and the two-point discrete example.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, SizeError
from .gamma_forms import (
    GammaParams,
    debias,
    expectation,
    pop_gini,
    population_value,
)
from .indices import IndexKind, gini
from .quadrature import integrate
from .rng import RngStream
from .sampling import gamma_variates
from .special import digamma, log_beta, log_gamma

__all__ = [
    "McReport",
    "VerifyConfig",
    "VerificationOutcome",
    "mc_expectation",
    "lukacs_independence_check",
    "dirichlet_product_moment_check",
    "beta_ulogu_check",
    "abs_2r_minus_1_check",
    "two_point_remark_check",
    "run_verification",
    "reports_to_json_obj",
    "format_report_table",
]

DEFAULT_SEED = 1729
MIN_REPS = 10_000

# Stream-id spacing between independent checks; blocks within a check use
# consecutive ids above its anchor.
_STREAM_STRIDE = 1 << 32


@dataclass(frozen=True)
class McReport:
    """One verification line: estimate, target, and a z-score verdict."""

    kind: str
    n: int
    reps: int
    mc_mean: float
    mc_stderr: float
    target: float
    z_score: float
    passed: bool
    family: str = ""  # internal grouping for the multiplicity policy

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "reps": self.reps,
            "mc_mean": float(self.mc_mean),
            "mc_stderr": float(self.mc_stderr),
            "target": float(self.target),
            "z_score": float(self.z_score),
            "pass": bool(self.passed),
        }


def _report(kind, n, reps, mean, stderr, target, z_max, family="") -> McReport:
    mean, stderr, target = float(mean), float(stderr), float(target)
    if stderr > 0.0:
        z = (mean - target) / stderr
        ok = abs(z) <= z_max
    else:
        z = 0.0
        ok = abs(mean - target) <= 1e-12
    return McReport(kind, int(n), int(reps), mean, stderr, target, z, ok, family)


def _fmt(v: float) -> str:
    return f"{float(v):g}"


def _require_reps(reps: int) -> int:
    reps = int(reps)
    if reps < MIN_REPS:
        raise SizeError(f"Monte Carlo checks need reps >= {MIN_REPS}, got {reps}")
    return reps


# ---------------------------------------------------------------------------
# Vectorized per-replicate estimators (rows of y are independent samples).
# The test suite pins these against the scalar definitions in indices.py.
# ---------------------------------------------------------------------------


def _batch_values(kind: IndexKind, y: np.ndarray) -> np.ndarray:
    n = y.shape[1]
    if kind is IndexKind.GINI:
        ys = np.sort(y, axis=1)
        weights = 2.0 * np.arange(1, n + 1) - n - 1.0
        return (ys @ weights) / ((n - 1) * y.sum(axis=1))
    if kind is IndexKind.THEIL_T:
        if n == 1:
            return np.zeros(y.shape[0])
        s = y.sum(axis=1)
        return (y * np.log(y)).sum(axis=1) / s - np.log(s / n)
    if kind is IndexKind.ATKINSON:
        if n == 1:
            return np.zeros(y.shape[0])
        s = y.sum(axis=1)
        return -np.expm1(np.log(y).mean(axis=1) - np.log(s / n))
    if kind is IndexKind.VMR:
        mu = y.mean(axis=1)
        dev = y - mu[:, None]
        return np.square(dev).sum(axis=1) / (n - 1) / mu
    raise DomainError(f"unknown index kind {kind!r}")


def _debias_affine(kind: IndexKind, params: GammaParams, n: int) -> tuple[float, float]:
    """(intercept, slope) of the exactly affine debias map for this cell."""
    d0 = debias(kind, params, n, 0.0)
    d1 = debias(kind, params, n, 1.0)
    return d0, d1 - d0


def _run_blocks(n_blocks: int, fn: Callable[[int], tuple], workers: int) -> list[tuple]:
    if workers <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_blocks)))


def _block_sizes(reps: int, block_size: int) -> list[int]:
    n_blocks = (reps + block_size - 1) // block_size
    return [min(block_size, reps - b * block_size) for b in range(n_blocks)]


def _mean_stderr(reps: int, s1: float, s2: float) -> tuple[float, float]:
    mean = s1 / reps
    var = max((s2 - reps * mean * mean) / (reps - 1), 0.0)
    return mean, math.sqrt(var / reps)


def _mc_cell(
    kind: IndexKind,
    params: GammaParams,
    n: int,
    reps: int,
    rng: RngStream,
    workers: int,
    block_size: int,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """(raw (mean, stderr), debiased (mean, stderr)) from one simulation."""
    sizes = _block_sizes(reps, block_size)
    intercept, slope = _debias_affine(kind, params, n)

    def one_block(b: int) -> tuple:
        stream = rng.spawn(b)
        y = gamma_variates(stream, params, sizes[b] * n).reshape(sizes[b], n)
        v = _batch_values(kind, y)
        dv = intercept + slope * v
        return (
            float(v.sum()), float(np.square(v).sum()),
            float(dv.sum()), float(np.square(dv).sum()),
        )

    partials = _run_blocks(len(sizes), one_block, workers)
    s1 = math.fsum(p[0] for p in partials)
    s2 = math.fsum(p[1] for p in partials)
    d1 = math.fsum(p[2] for p in partials)
    d2 = math.fsum(p[3] for p in partials)
    return _mean_stderr(reps, s1, s2), _mean_stderr(reps, d1, d2)


def mc_expectation(
    kind: IndexKind,
    params: GammaParams,
    n: int,
    reps: int,
    rng: RngStream,
    *,
    z_max: float = 4.0,
    debias_values: bool = False,
    workers: int = 1,
    block_size: int = 25_000,
) -> McReport:
    """Mean of the estimator over ``reps`` samples of size n vs its exact target.

    With ``debias_values`` the correction is applied to every replicate and
    the mean is compared against the population value instead of the
    finite-sample expectation.
    """
    reps = _require_reps(reps)
    n = int(n)
    if n < kind.min_n:
        raise SizeError(f"{kind.value} needs n >= {kind.min_n}, got {n}")
    (mean, se), (dmean, dse) = _mc_cell(kind, params, n, reps, rng, workers, block_size)
    cell = f"alpha={_fmt(params.alpha)},lambda={_fmt(params.rate)}"
    if debias_values:
        target = population_value(kind, params)
        return _report(f"{kind.value}_debiased[{cell}]", n, reps, dmean, dse, target,
                       z_max, family=f"debiased:{kind.value}")
    target = expectation(kind, params, n).expectation
    return _report(f"{kind.value}[{cell}]", n, reps, mean, se, target,
                   z_max, family=f"mc:{kind.value}")


def lukacs_independence_check(
    params: GammaParams,
    n: int,
    reps: int,
    rng: RngStream,
    *,
    z_max: float = 4.0,
    workers: int = 1,
    block_size: int = 25_000,
) -> McReport:
    """Correlation between the proportion and the sum of a gamma sample.

    Draws ``reps`` samples of size n, forms S = sum(Y) and R = Y_1/S, and
    computes the Pearson correlations corr(R, S) and corr(|2R-1|, S).
    Both are zero in truth (the proportion is independent of the sum for
    gamma data); the report carries whichever correlation is larger in
    normalized magnitude and passes only if both are within
    ``z_max / sqrt(reps)``.
    """
    reps = _require_reps(reps)
    n = int(n)
    if n < 2:
        raise SizeError(f"independence check needs n >= 2, got {n}")
    sizes = _block_sizes(reps, block_size)

    def one_block(b: int) -> tuple:
        stream = rng.spawn(b)
        y = gamma_variates(stream, params, sizes[b] * n).reshape(sizes[b], n)
        s = y.sum(axis=1)
        r = y[:, 0] / s
        a = np.abs(2.0 * r - 1.0)
        return tuple(
            float(x) for x in (
                r.sum(), np.square(r).sum(), s.sum(), np.square(s).sum(),
                (r * s).sum(), a.sum(), np.square(a).sum(), (a * s).sum(),
            )
        )

    partials = _run_blocks(len(sizes), one_block, workers)
    sr, sr2, ss, ss2, srs, sa, sa2, sas = (
        math.fsum(p[i] for p in partials) for i in range(8)
    )

    def corr(sx, sx2, sxy):
        cov = reps * sxy - sx * ss
        var_x = reps * sx2 - sx * sx
        var_s = reps * ss2 - ss * ss
        return cov / math.sqrt(var_x * var_s)

    corr_rs = corr(sr, sr2, srs)
    corr_as = corr(sa, sa2, sas)
    worst = corr_rs if abs(corr_rs) >= abs(corr_as) else corr_as
    stderr = 1.0 / math.sqrt(reps)
    return _report(
        f"lukacs[alpha={_fmt(params.alpha)},lambda={_fmt(params.rate)}]",
        n, reps, worst, stderr, 0.0, z_max, family="lukacs",
    )


def dirichlet_product_moment_check(
    alpha: float,
    n: int,
    reps: int,
    rng: RngStream,
    *,
    z_max: float = 4.0,
    workers: int = 1,
    block_size: int = 25_000,
) -> McReport:
    """MC mean of prod(Z_i^(1/n)) over symmetric Dirichlet draws vs closed form.

    The target Gamma^n(alpha + 1/n) / (n alpha Gamma^n(alpha)) is the
    product moment of the Dirichlet vector obtained by normalizing n
    i.i.d. gamma variates.
    """
    reps = _require_reps(reps)
    n = int(n)
    if n < 2:
        raise SizeError(f"product moment check needs n >= 2, got {n}")
    params = GammaParams(alpha)
    target = math.exp(
        n * (log_gamma(alpha + 1.0 / n) - log_gamma(alpha)) - math.log(n * alpha)
    )
    sizes = _block_sizes(reps, block_size)

    def one_block(b: int) -> tuple:
        stream = rng.spawn(b)
        g = gamma_variates(stream, params, sizes[b] * n).reshape(sizes[b], n)
        z = g / g.sum(axis=1, keepdims=True)
        p = np.exp(np.log(z).mean(axis=1))
        return float(p.sum()), float(np.square(p).sum())

    partials = _run_blocks(len(sizes), one_block, workers)
    s1 = math.fsum(p[0] for p in partials)
    s2 = math.fsum(p[1] for p in partials)
    mean, se = _mean_stderr(reps, s1, s2)
    return _report(
        f"dirichlet_product_moment[alpha={_fmt(alpha)}]",
        n, reps, mean, se, target, z_max, family="dirichlet",
    )


def beta_ulogu_check(a: float, b: float) -> tuple[float, float]:
    """(closed form, quadrature) for E[U log U], U ~ Beta(a, b).

    Closed form a/(a+b) * (psi(a+1) - psi(a+b+1)); quadrature integrates
    u log(u) against the beta density with adaptive Gauss-Kronrod.
    """
    if a <= 0 or b <= 0:
        raise DomainError(f"beta shapes must be positive, got ({a}, {b})")
    closed = a / (a + b) * (digamma(a + 1.0) - digamma(a + b + 1.0))
    lb = log_beta(a, b)

    def integrand(u: np.ndarray) -> np.ndarray:
        log_u = np.log(u)
        return log_u * np.exp(a * log_u + (b - 1.0) * np.log1p(-u) - lb)

    quad = integrate(integrand, 0.0, 1.0, abs_tol=1e-10, rel_tol=1e-10).value
    return closed, quad


def abs_2r_minus_1_check(alpha: float) -> tuple[float, float]:
    """(closed form, quadrature) for E|2R - 1|, R ~ Beta(alpha, alpha).

    The closed form is the population Gini index under a gamma law with
    this shape; the quadrature integrates |2r - 1| against the symmetric
    beta density, split at the kink.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    closed = pop_gini(GammaParams(alpha))
    lb = log_beta(alpha, alpha)

    def integrand(u: np.ndarray) -> np.ndarray:
        return np.abs(2.0 * u - 1.0) * np.exp(
            (alpha - 1.0) * (np.log(u) + np.log1p(-u)) - lb
        )

    quad = integrate(integrand, 0.0, 1.0, abs_tol=1e-10, rel_tol=1e-10, points=(0.5,)).value
    return closed, quad


def two_point_remark_check(a: float, b: float) -> tuple[float, float]:
    """(E[G_2], population Gini) for the two-point law P(a) = P(b) = 1/2.

    Both sides are exhaustive enumerations over the four equally likely
    ordered pairs, the left using the sample Gini estimator, the right
    the definition |Y1 - Y2| / (2 mu).  They must agree exactly: this is
    the discrete example showing n = 2 unbiasedness is not special to
    the gamma law.
    """
    a, b = float(a), float(b)
    if not (0.0 < a < b) or not math.isfinite(b):
        raise DomainError(f"need 0 < a < b, got ({a}, {b})")
    pairs = [(a, a), (a, b), (b, a), (b, b)]
    enumerated = math.fsum(gini(np.array(pair)) for pair in pairs) / 4.0
    mean_abs_diff = math.fsum(abs(y1 - y2) for y1, y2 in pairs) / 4.0
    mu = (a + b) / 2.0
    population = mean_abs_diff / (2.0 * mu)
    return enumerated, population


# ---------------------------------------------------------------------------
# Default verification suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyConfig:
    alphas: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0)
    lambdas: tuple[float, ...] = (1.0, 3.0)
    ns: tuple[int, ...] = (2, 5, 20)
    reps: int = 200_000
    lukacs_alphas: tuple[float, ...] = (0.5, 1.0, 3.7)
    lukacs_ns: tuple[int, ...] = (2, 5)
    lukacs_reps: int = 100_000
    dirichlet_alphas: tuple[float, ...] = (0.5, 1.0, 2.0)
    dirichlet_ns: tuple[int, ...] = (2, 3, 5)
    dirichlet_reps: int = 200_000
    ulogu_shapes: tuple[float, ...] = (0.5, 1.0, 2.0, 4.5)
    abs2r_alphas: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0)
    two_point_cases: tuple[tuple[float, float], ...] = ((1.0, 3.0), (2.0, 8.0))
    quad_tol: float = 1e-8
    seed: int = DEFAULT_SEED
    z_max: float = 4.0
    workers: int = 1
    block_size: int = 25_000

    def restrict(self, alphas=None, lambdas=None, ns=None) -> "VerifyConfig":
        """Subset the Monte Carlo grids; families with no surviving cells are skipped."""
        cfg = self
        if alphas is not None:
            keep = tuple(a for a in cfg.alphas if a in alphas)
            cfg = replace(
                cfg,
                alphas=keep,
                lukacs_alphas=tuple(a for a in cfg.lukacs_alphas if a in alphas),
                dirichlet_alphas=tuple(a for a in cfg.dirichlet_alphas if a in alphas),
            )
        if lambdas is not None:
            cfg = replace(cfg, lambdas=tuple(v for v in cfg.lambdas if v in lambdas))
        if ns is not None:
            cfg = replace(
                cfg,
                ns=tuple(n for n in cfg.ns if n in ns),
                lukacs_ns=tuple(n for n in cfg.lukacs_ns if n in ns),
                dirichlet_ns=tuple(n for n in cfg.dirichlet_ns if n in ns),
            )
        return cfg


@dataclass(frozen=True)
class VerificationOutcome:
    reports: list[McReport]
    passed: bool
    failed_families: list[str] = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return sum(not r.passed for r in self.reports)


# Families where a single cell beyond z_max is tolerated (multiple-testing
# allowance over the ~24-cell Monte Carlo grids); small subset grids and all
# identity/independence checks are strict.
_ALLOWANCE_PREFIXES = ("mc:", "debiased:", "lambda_sweep")
_ALLOWANCE_MIN_CELLS = 12


def _family_allowance(family: str, size: int) -> int:
    if family.startswith(_ALLOWANCE_PREFIXES) and size >= _ALLOWANCE_MIN_CELLS:
        return 1
    return 0


def run_verification(config: VerifyConfig = VerifyConfig()) -> VerificationOutcome:
    """Run the whole default grid and apply the multiplicity policy.

    The suite passes when every family of checks passes; a Monte Carlo
    family (one estimator's grid) tolerates at most one cell beyond
    ``z_max``, while identity, independence, and enumeration checks must
    all pass individually.
    """
    cfg = config
    reports: list[McReport] = []
    slot = 0

    def anchor() -> RngStream:
        nonlocal slot
        stream = RngStream(cfg.seed, slot * _STREAM_STRIDE)
        slot += 1
        return stream

    mc_kinds = (IndexKind.GINI, IndexKind.THEIL_T, IndexKind.ATKINSON, IndexKind.VMR)
    raw_means: dict[tuple, McReport] = {}
    for kind in mc_kinds:
        for alpha in cfg.alphas:
            for lam in cfg.lambdas:
                for n in cfg.ns:
                    rng = anchor()
                    params = GammaParams(alpha, lam)
                    (mean, se), (dmean, dse) = _mc_cell(
                        kind, params, n, cfg.reps, rng, cfg.workers, cfg.block_size
                    )
                    label = f"{kind.value}[alpha={_fmt(alpha)},lambda={_fmt(lam)}]"
                    target = expectation(kind, params, n).expectation
                    raw = _report(label, n, cfg.reps, mean, se, target,
                                  cfg.z_max, family=f"mc:{kind.value}")
                    reports.append(raw)
                    raw_means[(kind, alpha, lam, n)] = raw
                    if kind is not IndexKind.GINI:
                        dtarget = population_value(kind, params)
                        reports.append(_report(
                            f"{kind.value}_debiased[alpha={_fmt(alpha)},lambda={_fmt(lam)}]",
                            n, cfg.reps, dmean, dse, dtarget,
                            cfg.z_max, family=f"debiased:{kind.value}",
                        ))

    # Rate-sweep invariance of the scale-free indices: means at different
    # rates are independent runs and must agree within combined error.
    if len(cfg.lambdas) >= 2:
        base, *others = cfg.lambdas
        for kind in (IndexKind.GINI, IndexKind.THEIL_T, IndexKind.ATKINSON):
            for alpha in cfg.alphas:
                for lam in others:
                    for n in cfg.ns:
                        r1 = raw_means[(kind, alpha, base, n)]
                        r2 = raw_means[(kind, alpha, lam, n)]
                        se = math.hypot(r1.mc_stderr, r2.mc_stderr)
                        reports.append(_report(
                            f"lambda_sweep:{kind.value}[alpha={_fmt(alpha)},"
                            f"lambda={_fmt(base)}vs{_fmt(lam)}]",
                            n, r1.reps + r2.reps, r2.mc_mean - r1.mc_mean, se,
                            0.0, cfg.z_max, family="lambda_sweep",
                        ))

    for alpha in cfg.lukacs_alphas:
        for n in cfg.lukacs_ns:
            reports.append(lukacs_independence_check(
                GammaParams(alpha), n, cfg.lukacs_reps, anchor(),
                z_max=cfg.z_max, workers=cfg.workers, block_size=cfg.block_size,
            ))

    for alpha in cfg.dirichlet_alphas:
        for n in cfg.dirichlet_ns:
            reports.append(dirichlet_product_moment_check(
                alpha, n, cfg.dirichlet_reps, anchor(),
                z_max=cfg.z_max, workers=cfg.workers, block_size=cfg.block_size,
            ))

    # Identity checks carry the agreement tolerance as a pseudo standard
    # error (tol / z_max), so "pass iff |z| <= z_max" holds for every line.
    quad_se = cfg.quad_tol / cfg.z_max
    for a in cfg.ulogu_shapes:
        for b in cfg.ulogu_shapes:
            closed, quad = beta_ulogu_check(a, b)
            reports.append(_report(
                f"beta_ulogu[a={_fmt(a)},b={_fmt(b)}]", 0, 0, quad, quad_se,
                closed, cfg.z_max, family="quad_identity",
            ))

    for alpha in cfg.abs2r_alphas:
        closed, quad = abs_2r_minus_1_check(alpha)
        reports.append(_report(
            f"abs_2r_minus_1[alpha={_fmt(alpha)}]", 0, 0, quad, quad_se,
            closed, cfg.z_max, family="quad_identity",
        ))

    for a, b in cfg.two_point_cases:
        enumerated, population = two_point_remark_check(a, b)
        reports.append(McReport(
            f"two_point_remark[a={_fmt(a)},b={_fmt(b)}]", 2, 0, enumerated, 0.0,
            population, 0.0, enumerated == population, family="two_point",
        ))

    family_sizes: dict[str, int] = {}
    failures_by_family: dict[str, int] = {}
    for r in reports:
        family_sizes[r.family] = family_sizes.get(r.family, 0) + 1
        if not r.passed:
            failures_by_family[r.family] = failures_by_family.get(r.family, 0) + 1
    failed_families = sorted(
        fam
        for fam, count in failures_by_family.items()
        if count > _family_allowance(fam, family_sizes[fam])
    )
    return VerificationOutcome(reports, not failed_families, failed_families)


def reports_to_json_obj(reports: Sequence[McReport]) -> list[dict]:
    return [r.to_dict() for r in reports]


def format_report_table(reports: Sequence[McReport]) -> str:
    """Aligned plain-text table of reports, values at 7 significant digits."""
    headers = ["kind", "n", "reps", "mc_mean", "mc_stderr", "target", "z_score", "pass"]
    rows = [
        [
            r.kind,
            str(r.n),
            str(r.reps),
            f"{r.mc_mean:.7g}",
            f"{r.mc_stderr:.7g}",
            f"{r.target:.7g}",
            f"{r.z_score:.7g}",
            "pass" if r.passed else "FAIL",
        ]
        for r in reports
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    lines.extend("  ".join(row[i].ljust(widths[i]) for i in range(len(headers))) for row in rows)
    return "\n".join(lines)
