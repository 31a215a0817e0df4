"""Exchangeable-pair verification and error certificates.

Choosing I from the stationary law and letting I' be one chain step gives
an exchangeable pair (W, W') = (I/(2n), I'/(2n)) by reversibility.  With
lambda = 1/(4n^2) the pair satisfies, exactly,

    (1/lambda)   E[W'-W | W]     = (a+b) (a/(a+b) - W)          (condition 1)
    (1/2 lambda) E[(W'-W)^2 | W] = W(1-W) + S                   (condition 2)

with remainder S = [2(a+b)W^2 - (3a+b)W + a] / (4n).  Both identities are
verified state by state in rational arithmetic.  The exchangeable-pair
framework for Beta targets then bounds the smooth-test (d2) distance by

    C(a,b) E|S| + (C(a+1,b+1) + (a+b) C(a+1,b+1) C(a,b)) E|W'-W|^3 / (6 lambda),

which, after bounding E|S| <= (3a+2b)/(4n) and E|W'-W|^3/lambda <= 1/(2n),
gives the headline K(a,b)/n.  The matching lower bound comes from the test
function h(x) = x(1-x)/2, whose expectation gap has an exact closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .distance import gap_h
from .model import LatticeDistribution, ModelParams, stationary_ratio_product
from .special import log_gamma

__all__ = [
    "SteinReport",
    "BoundCertificate",
    "c_constant",
    "k_constant",
    "lower_bound",
    "verify_condition_1",
    "verify_condition_2",
    "s_remainder",
    "e_abs_s",
    "third_moment_ratio",
    "upper_bound_assembled",
    "bound_certificate",
    "stein_report",
]

_SANDWICH_SLACK = Fraction(1, 10**12)


@dataclass(frozen=True)
class SteinReport:
    """Per-state condition residuals, the remainder S, and proof-level bounds.

    All rational fields are exact; the residual tuples are expected to be
    identically zero (the conditions are identities, not approximations).
    """

    lam: Fraction
    cond1_residuals: tuple[Fraction, ...]
    cond2_residuals: tuple[Fraction, ...]
    s_values: tuple[Fraction, ...]
    e_abs_s_exact: Fraction
    e_abs_s_bound: Fraction
    e_cubed_over_lambda_exact: Fraction
    e_cubed_over_lambda_bound: Fraction

    @property
    def cond1_max_abs(self) -> Fraction:
        return max((abs(r) for r in self.cond1_residuals), default=Fraction(0))

    @property
    def cond2_max_abs(self) -> Fraction:
        return max((abs(r) for r in self.cond2_residuals), default=Fraction(0))

    @property
    def conditions_exact(self) -> bool:
        return self.cond1_max_abs == 0 and self.cond2_max_abs == 0


@dataclass(frozen=True)
class BoundCertificate:
    """lower <= |E h(W) - E h(Z)| <= K(a,b)/n, checked with 1e-12 slack."""

    lower: float
    gap: float
    upper: float
    sandwich_ok: bool


def c_constant(a, b) -> float:
    """The four-branch approximation constant C(a,b) (C(a,a) on the diagonal).

    Diagonal: 4 for 0 < a < 1, else 2a sqrt(pi) Gamma(a)/Gamma(a+1/2).
    Off-diagonal: 2(a+b) times Gamma(a)Gamma(b)/Gamma(a+b), 1/a, 1/b, or
    Gamma(a+b)/(ab Gamma(a)Gamma(b)) according to which shapes exceed 1.
    """
    if a <= 0 or b <= 0:
        raise ValueError(f"c_constant requires positive arguments, got ({a}, {b})")
    af, bf = float(a), float(b)
    if a == b:
        if af < 1.0:
            return 4.0
        return 2.0 * af * math.sqrt(math.pi) * math.exp(
            log_gamma(af) - log_gamma(af + 0.5)
        )
    s = 2.0 * (af + bf)
    if a <= 1 and b <= 1:
        return s * math.exp(log_gamma(af) + log_gamma(bf) - log_gamma(af + bf))
    if a <= 1 < b:
        return s / af
    if b <= 1 < a:
        return s / bf
    return (
        s
        * math.exp(log_gamma(af + bf) - log_gamma(af) - log_gamma(bf))
        / (af * bf)
    )


def k_constant(a, b) -> float:
    """K(a,b) = [(9a+6b)C(a,b) + C(a+1,b+1) + (a+b)C(a+1,b+1)C(a,b)] / 12."""
    cab = c_constant(a, b)
    c11 = c_constant(a + 1, b + 1)
    af, bf = float(a), float(b)
    return ((9.0 * af + 6.0 * bf) * cab + c11 + (af + bf) * c11 * cab) / 12.0


def lower_bound(params: ModelParams) -> Fraction:
    """Certified lower bound ab / (4n(a+b)(1+a+b)^2) on the d2 distance."""
    a, b, n = params.a, params.b, params.n
    s = a + b
    return a * b / (4 * n * s * (1 + s) ** 2)


def verify_condition_1(params: ModelParams) -> tuple[Fraction, ...]:
    """Exact residuals of the linear-regression identity at every state.

    LHS = 4n^2 (1/2n) [p(i,i+1) - p(i,i-1)]; RHS = a - (a+b) i/(2n).
    Both sides are rational, so a correct kernel yields residuals == 0.
    """
    n = params.n
    m = 2 * n
    a, b = params.a, params.b
    out = []
    for i in range(m + 1):
        t = params._triples[i]
        lhs = 2 * n * (t.up - t.down)
        rhs = a - (a + b) * Fraction(i, m)
        out.append(lhs - rhs)
    return tuple(out)


def s_remainder(params: ModelParams, w: Fraction) -> Fraction:
    """The quadratic remainder S(w) = [2(a+b)w^2 - (3a+b)w + a] / (4n)."""
    w = Fraction(w)
    if not 0 <= w <= 1:
        raise ValueError(f"w must lie in [0,1], got {w}")
    a, b = params.a, params.b
    return (2 * (a + b) * w * w - (3 * a + b) * w + a) / (4 * params.n)


def verify_condition_2(params: ModelParams) -> tuple[Fraction, ...]:
    """Exact residuals of the quadratic identity at every state.

    LHS = 2n^2 (1/2n)^2 [p(i,i+1) + p(i,i-1)]; RHS = w(1-w) + S(w).
    """
    m = 2 * params.n
    out = []
    for i in range(m + 1):
        t = params._triples[i]
        lhs = (t.up + t.down) / 2
        w = Fraction(i, m)
        rhs = w * (1 - w) + s_remainder(params, w)
        out.append(lhs - rhs)
    return tuple(out)


def e_abs_s(
    params: ModelParams, pi: LatticeDistribution
) -> tuple[Fraction, Fraction]:
    """Exact E|S| under pi, together with its a-priori bound (3a+2b)/(4n)."""
    probs = pi.require_exact()
    m = 2 * params.n
    value = sum(
        (p * abs(s_remainder(params, Fraction(i, m))) for i, p in enumerate(probs)),
        Fraction(0),
    )
    bound = (3 * params.a + 2 * params.b) / (4 * params.n)
    return value, bound


def third_moment_ratio(params: ModelParams, pi: LatticeDistribution) -> Fraction:
    """Exact E|W'-W|^3 / lambda = (1/2n) sum_i pi(i)[p(i,i+1)+p(i,i-1)].

    One step moves by at most one site, so |W'-W| is either 0 or 1/(2n);
    the ratio is therefore bounded by 1/(2n), which is asserted.
    """
    probs = pi.require_exact()
    move_mass = sum(
        (p * (params._triples[i].up + params._triples[i].down)
         for i, p in enumerate(probs)),
        Fraction(0),
    )
    value = move_mass / (2 * params.n)
    assert value <= Fraction(1, 2 * params.n), "third-moment ratio exceeded 1/(2n)"
    return value


def upper_bound_assembled(params: ModelParams, pi: LatticeDistribution) -> float:
    """The pair bound assembled from exact E|S| and E|W'-W|^3, not their caps.

    Always at most k_constant(a,b)/n, since the caps only loosen it.
    """
    cab = c_constant(params.a, params.b)
    c11 = c_constant(params.a + 1, params.b + 1)
    s_term, _ = e_abs_s(params, pi)
    cubed = third_moment_ratio(params, pi)
    sf = float(params.a + params.b)
    return cab * float(s_term) + (c11 + sf * c11 * cab) * float(cubed) / 6.0


def bound_certificate(params: ModelParams) -> BoundCertificate:
    """Certified sandwich for one parameter point.

    lower and gap are exact rationals compared exactly; the upper bound
    involves Gamma values and is compared in floating point with 1e-12
    slack.
    """
    lo = lower_bound(params)
    gap = gap_h(params)
    upper = k_constant(params.a, params.b) / params.n
    ok = (lo <= gap + _SANDWICH_SLACK) and (float(gap) <= upper + 1e-12)
    return BoundCertificate(
        lower=float(lo), gap=float(gap), upper=upper, sandwich_ok=ok
    )


def stein_report(
    params: ModelParams, pi: LatticeDistribution | None = None
) -> SteinReport:
    """Full exact verification bundle for one parameter point."""
    if pi is None:
        pi = stationary_ratio_product(params)
    m = 2 * params.n
    s_vals = tuple(s_remainder(params, Fraction(i, m)) for i in range(m + 1))
    eabs, ebound = e_abs_s(params, pi)
    return SteinReport(
        lam=params.lam,
        cond1_residuals=verify_condition_1(params),
        cond2_residuals=verify_condition_2(params),
        s_values=s_vals,
        e_abs_s_exact=eabs,
        e_abs_s_bound=ebound,
        e_cubed_over_lambda_exact=third_moment_ratio(params, pi),
        e_cubed_over_lambda_bound=Fraction(1, 2 * params.n),
    )
