"""Population indices and exact finite-sample expectations under the gamma law.

For observations drawn i.i.d. from a gamma density with shape ``alpha``
and rate ``rate``, every index here has a closed-form population value,
and each sample estimator has a closed-form finite-sample expectation:

==========  =============================  ==========================================
index       population value               E[estimator] at sample size n
==========  =============================  ==========================================
Gini        Gamma(a+1/2)/(sqrt(pi)         identical (the estimator is unbiased)
            * Gamma(a+1))
Theil T     psi(a) + 1/a - log(a)          psi(a) + 1/a + log(n) - psi(na) - 1/(na)
Atkinson    1 - exp(psi(a))/a              1 - Gamma^n(a + 1/n) / (a Gamma^n(a))
VMR         1/rate                         na / ((na + 1) rate)
==========  =============================  ==========================================

Gamma-function ratios are evaluated as differences of ``log_gamma`` and
exponentiated, so powers like Gamma^n never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SizeError
from .indices import IndexKind, Sample, SampleLike, as_sample, vmr as _sample_vmr
from .special import digamma, log_gamma

__all__ = [
    "GammaParams",
    "ExpectationResult",
    "pop_gini",
    "pop_theil",
    "pop_atkinson",
    "pop_vmr",
    "population_value",
    "expect_gini",
    "expect_theil",
    "expect_atkinson",
    "expect_vmr",
    "expectation",
    "debias",
    "alpha_plug_in",
]

_HALF_LOG_PI = 0.5723649429247001  # ln(pi)/2


@dataclass(frozen=True)
class GammaParams:
    """Shape ``alpha`` and rate ``rate`` of a gamma distribution."""

    alpha: float
    rate: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "rate"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"{name} must be a finite positive real, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class ExpectationResult:
    """Exact E[estimator] next to the population value it estimates.

    ``bias`` is always the literal difference ``expectation - population``
    of the two evaluated fields, never a separately coded formula.
    """

    kind: IndexKind
    n: int
    expectation: float
    population: float

    @property
    def bias(self) -> float:
        return self.expectation - self.population


def pop_gini(params: GammaParams) -> float:
    """Population Gini index; depends on the shape only."""
    a = params.alpha
    return math.exp(log_gamma(a + 0.5) - log_gamma(a + 1.0) - _HALF_LOG_PI)


def pop_theil(params: GammaParams) -> float:
    """Population Theil T index; depends on the shape only."""
    a = params.alpha
    return digamma(a) + 1.0 / a - math.log(a)


def pop_atkinson(params: GammaParams) -> float:
    """Population Atkinson index; depends on the shape only."""
    a = params.alpha
    return -math.expm1(digamma(a) - math.log(a))


def pop_vmr(params: GammaParams) -> float:
    """Population variance-to-mean ratio: 1/rate, independent of the shape."""
    return 1.0 / params.rate


_POP_DISPATCH = {
    IndexKind.GINI: pop_gini,
    IndexKind.THEIL_T: pop_theil,
    IndexKind.ATKINSON: pop_atkinson,
    IndexKind.VMR: pop_vmr,
}


def population_value(kind: IndexKind, params: GammaParams) -> float:
    return _POP_DISPATCH[kind](params)


def _require_n(n: int, minimum: int, kind: IndexKind) -> int:
    n = int(n)
    if n < minimum:
        raise SizeError(f"{kind.value} expectation needs n >= {minimum}, got {n}")
    return n


def expect_gini(params: GammaParams, n: int) -> ExpectationResult:
    """E[G_n] for n >= 2; equals the population value (unbiased)."""
    n = _require_n(n, 2, IndexKind.GINI)
    g = pop_gini(params)
    return ExpectationResult(IndexKind.GINI, n, g, g)


def expect_theil(params: GammaParams, n: int) -> ExpectationResult:
    """E[T_n] for n >= 1; exactly zero at n = 1 (the formula telescopes)."""
    n = _require_n(n, 1, IndexKind.THEIL_T)
    a = params.alpha
    if n == 1:
        e = 0.0
    else:
        e = digamma(a) + 1.0 / a + math.log(n) - digamma(n * a) - 1.0 / (n * a)
    return ExpectationResult(IndexKind.THEIL_T, n, e, pop_theil(params))


def expect_atkinson(params: GammaParams, n: int) -> ExpectationResult:
    """E[A_n] for n >= 1; exactly zero at n = 1 (Gamma(a+1) = a Gamma(a))."""
    n = _require_n(n, 1, IndexKind.ATKINSON)
    a = params.alpha
    if n == 1:
        e = 0.0
    else:
        e = -math.expm1(n * (log_gamma(a + 1.0 / n) - log_gamma(a)) - math.log(a))
    return ExpectationResult(IndexKind.ATKINSON, n, e, pop_atkinson(params))


def expect_vmr(params: GammaParams, n: int) -> ExpectationResult:
    """E[VMR_n] for n >= 2; always below 1/rate (downward bias)."""
    n = _require_n(n, 2, IndexKind.VMR)
    na = n * params.alpha
    e = na / ((na + 1.0) * params.rate)
    return ExpectationResult(IndexKind.VMR, n, e, pop_vmr(params))


_EXPECT_DISPATCH = {
    IndexKind.GINI: expect_gini,
    IndexKind.THEIL_T: expect_theil,
    IndexKind.ATKINSON: expect_atkinson,
    IndexKind.VMR: expect_vmr,
}


def expectation(kind: IndexKind, params: GammaParams, n: int) -> ExpectationResult:
    return _EXPECT_DISPATCH[kind](params, n)


def debias(kind: IndexKind, params: GammaParams, n: int, raw: float) -> float:
    """Correct a raw index value so its expectation is the population value.

    Gini is returned unchanged (already unbiased).  Theil subtracts the
    additive bias log(na) - psi(na) - 1/(na).  Atkinson rescales 1 - raw
    by exp(psi(a)) Gamma^n(a) / Gamma^n(a + 1/n).  VMR is multiplied by
    (na + 1)/(na).  All corrections assume the shape is known (or plugged
    in); the rate cancels out of every one of them.
    """
    n = _require_n(n, kind.min_n, kind)
    a = params.alpha
    raw = float(raw)
    if kind is IndexKind.GINI:
        return raw
    if kind is IndexKind.THEIL_T:
        if n == 1:
            return raw
        na = n * a
        return raw - (math.log(na) - digamma(na) - 1.0 / na)
    if kind is IndexKind.ATKINSON:
        if n == 1:
            return raw
        factor = math.exp(digamma(a) + n * (log_gamma(a) - log_gamma(a + 1.0 / n)))
        return 1.0 - (1.0 - raw) * factor
    if kind is IndexKind.VMR:
        na = n * a
        return raw * (na + 1.0) / na
    raise DomainError(f"unknown index kind {kind!r}")


def alpha_plug_in(values: SampleLike) -> float:
    """Method-of-moments shape estimate alpha_hat = mean^2 / variance."""
    s = as_sample(values)
    if s.n < 2:
        raise SizeError(f"plug-in shape estimate needs at least 2 observations, got {s.n}")
    ratio = _sample_vmr(s)
    if ratio == 0.0:
        raise DomainError("cannot estimate the shape from a constant sample")
    return s.mean / ratio
