"""Record probabilities, expected counts and limit moments, exactly.

The per-index record probabilities are alternating binomial sums that
cancel catastrophically in double precision (visibly wrong near n = 60),
so everything with a closed form is computed in exact rational arithmetic.
The continuous-argument moment function is an alternating series whose
intermediate terms reach ~exp(t); it is evaluated in arbitrary-precision
decimals with the working precision chosen from that a-priori bound.

Resource ceilings (``n_cap``, ``max_digits``) are hard errors, never a
silent fall back to floating point.
"""

from __future__ import annotations

import math
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from functools import lru_cache

import mpmath

DEFAULT_N_CAP = 500
DEFAULT_DIGIT_CEILING = 10_000


class CapExceededError(ValueError):
    """A configured resource cap would be exceeded; refuse rather than degrade."""


def _check_dim(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")


def _check_n(n: int, n_cap: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"index must be a positive integer, got {n!r}")
    if n > n_cap:
        raise CapExceededError(
            f"n={n} exceeds the cap {n_cap}; pass a larger n_cap to allow the "
            f"bigger exact computation"
        )


def mellin(d: int, lam) -> Fraction:
    """Moment E[V^lam] of the height factor V, exactly: (lam+1)**(-d).

    V is the height of a uniform mark, i.e. a product of d independent
    uniforms.  ``lam`` may be any rational except the pole at -1.
    """
    _check_dim(d)
    lam = Fraction(lam)
    if lam == -1:
        raise ValueError("pole at lam = -1")
    return (lam + 1) ** (-d)


def _factorials(n: int) -> list[int]:
    out = [1] * (n + 1)
    for i in range(2, n + 1):
        out[i] = out[i - 1] * i
    return out


def chain_record_prob(d: int, n: int, *, n_cap: int = DEFAULT_N_CAP) -> Fraction:
    """Exact probability that the mark at index n is a chain record."""
    _check_dim(d)
    _check_n(n, n_cap)
    if n == 1:
        return Fraction(1)
    fact = _factorials(n)
    # Accumulate over the common denominator (n!)**d: one gcd at the end
    # instead of one per term.
    acc = 0
    surv = 1  # integer numerator of prod_{j=2}^{k+1} (j**d - 1)
    for k in range(n):
        if k:
            surv *= (k + 1) ** d - 1
        term = math.comb(n - 1, k) * surv * (fact[n] // fact[k + 1]) ** d
        acc = acc - term if k % 2 else acc + term
    return Fraction(acc, fact[n] ** d)


@lru_cache(maxsize=32)
def _chain_prob_table(d: int, n_max: int) -> tuple[Fraction, ...]:
    fact = _factorials(n_max)
    surv = [1] * n_max
    for k in range(1, n_max):
        surv[k] = surv[k - 1] * ((k + 1) ** d - 1)
    out = [Fraction(1)]
    for n in range(2, n_max + 1):
        acc = 0
        for k in range(n):
            term = math.comb(n - 1, k) * surv[k] * (fact[n] // fact[k + 1]) ** d
            acc = acc - term if k % 2 else acc + term
        out.append(Fraction(acc, fact[n] ** d))
    return tuple(out)


def chain_record_prob_table(
    d: int, n_max: int, *, n_cap: int = DEFAULT_N_CAP
) -> tuple[Fraction, ...]:
    """Chain-record probabilities for n = 1..n_max (index i holds n = i+1)."""
    _check_dim(d)
    _check_n(n_max, n_cap)
    return _chain_prob_table(d, n_max)


def strong_record_prob(d: int, n: int) -> Fraction:
    """Exact probability of a strong record at index n: n**(-d)."""
    _check_dim(d)
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"index must be a positive integer, got {n!r}")
    return Fraction(1, n**d)


def weak_record_prob(d: int, n: int, *, n_cap: int = DEFAULT_N_CAP) -> Fraction:
    """Exact probability of a weak record at index n (alternating sum)."""
    _check_dim(d)
    _check_n(n, n_cap)
    fact = _factorials(n)
    acc = 0
    for k in range(n):
        term = math.comb(n - 1, k) * (fact[n] // (k + 1)) ** d
        acc = acc - term if k % 2 else acc + term
    return Fraction(acc, fact[n] ** d)


def expected_strong_count(d: int, n: int) -> Fraction:
    """Exact expected number of strong records among the first n marks."""
    _check_dim(d)
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"index must be a positive integer, got {n!r}")
    return sum(Fraction(1, j**d) for j in range(1, n + 1))


def expected_weak_count(d: int, n: int, *, n_cap: int = DEFAULT_N_CAP) -> Fraction:
    """Exact expected number of weak records among the first n marks.

    The d-fold nested sum over ordered index tuples is evaluated by the
    iterated-harmonic recursion (O(d*n) rational operations); enumerating
    the tuples directly would be exponential in d.
    """
    return expected_weak_count_table(d, n, n_cap=n_cap)[n - 1]


def expected_weak_count_table(
    d: int, n_max: int, *, n_cap: int = DEFAULT_N_CAP
) -> tuple[Fraction, ...]:
    """Expected weak-record counts for n = 1..n_max in one recursion pass."""
    _check_dim(d)
    _check_n(n_max, n_cap)
    level = [Fraction(0)] * (n_max + 1)
    for j in range(1, n_max + 1):
        level[j] = level[j - 1] + Fraction(1, j)
    for _ in range(d - 1):
        nxt = [Fraction(0)] * (n_max + 1)
        for j in range(1, n_max + 1):
            nxt[j] = nxt[j - 1] + level[j] / j
        level = nxt
    return tuple(level[1:])


def expected_chain_count(d: int, n: int, *, n_cap: int = DEFAULT_N_CAP) -> Fraction:
    """Exact expected number of chain records among the first n marks.

    No closed form is available; this is the partial sum of the per-index
    probabilities, exact by linearity of expectation.
    """
    table = chain_record_prob_table(d, n, n_cap=n_cap)
    return sum(table, Fraction(0))


def moment_series(
    d: int,
    beta: int,
    t: float,
    *,
    tolerance: float = 1e-12,
    max_digits: int = DEFAULT_DIGIT_CEILING,
) -> float:
    """Moment of order beta of the continuous-time record-height process.

    Evaluates sum_k (-t)^k/k! * prod_{j<k}(1 - mellin(d, j+beta)) to within
    ``tolerance``.  The value is 1 at t=0 and nonincreasing in t.  Working
    precision grows linearly with t; past ``max_digits`` decimal digits the
    evaluation refuses -- for such t use the large-t asymptotics instead
    (t**beta * m -> limit_moment(d, beta)).
    """
    _check_dim(d)
    if not isinstance(beta, int) or beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta!r}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not 0 < tolerance < 1:
        raise ValueError("tolerance must be in (0, 1)")
    if t == 0:
        return 1.0
    digits = max(30, int(t / math.log(10)) + int(-math.log10(tolerance)) + 21)
    if digits > max_digits:
        raise CapExceededError(
            f"t={t} needs ~{digits} working digits (> ceiling {max_digits}); "
            f"use the asymptotic value t**-beta * limit_moment(d, beta) instead"
        )
    with mpmath.workdps(digits):
        tm = mpmath.mpf(t)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        cut = mpmath.mpf(10) ** (-(digits - 10))
        k = 1
        while True:
            term *= (-tm / k) * (1 - mpmath.mpf(k + beta) ** (-d))
            total += term
            if k >= t and abs(term) < cut:
                break
            k += 1
        return float(total)


def poisson_weighted_chain_prob(
    d: int, t: float, *, tail_tol: float = 1e-12, n_cap: int = DEFAULT_N_CAP
) -> float:
    """Chain-record probability at index 1 + Poisson(t), averaged exactly.

    This is an independent route to ``moment_series(d, 1, t)`` -- the two
    must agree to ~1e-10, which is one of the acceptance cross-checks.
    The Poisson mixture is truncated once its remaining mass drops below
    ``tail_tol``.
    """
    _check_dim(d)
    if t < 0:
        raise ValueError("t must be nonnegative")
    weight = math.exp(-t)
    weights = [weight]
    cum = weight
    n = 0
    while 1.0 - cum > tail_tol:
        n += 1
        if n + 1 > n_cap:
            raise CapExceededError(
                f"Poisson truncation at t={t} needs indices past the cap {n_cap}"
            )
        weight *= t / n
        weights.append(weight)
        cum += weight
    table = chain_record_prob_table(d, n + 1, n_cap=n_cap)
    return float(sum(w * float(p) for w, p in zip(weights, table)))


def limit_moment(d: int, beta: int) -> Fraction:
    """Exact beta-th moment of the scaled record-height limit variable.

    Equals (beta!)^(d+1) / (beta*d) * prod_{r=2}^{beta} 1/(r^d - 1), the
    limit of t**beta * moment_series(d, beta, t) as t grows.
    """
    _check_dim(d)
    if not isinstance(beta, int) or beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta!r}")
    den = beta * d
    for r in range(2, beta + 1):
        den *= r**d - 1
    return Fraction(math.factorial(beta) ** (d + 1), den)


def height_factor_cdf(d: int, s: float) -> float:
    """CDF of the height factor (product of d uniforms) at s in (0, 1]."""
    _check_dim(d)
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")
    x = -math.log(s)
    acc = 0.0
    term = 1.0
    for i in range(d):
        if i:
            term *= x / i
        acc += term
    return s * acc


def height_factor_density(d: int, s: float) -> float:
    """Density (-log s)^(d-1)/(d-1)! of the height factor on (0, 1]."""
    _check_dim(d)
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")
    return (-math.log(s)) ** (d - 1) / math.factorial(d - 1)


def stationary_density(d: int, s: float) -> float:
    """Stationary density of the height stick-breaking chain: CDF(s)/(s*d)."""
    return height_factor_cdf(d, s) / (s * d)


def format_decimal15(value: Fraction) -> str:
    """Decimal form of an exact rational: 15 significant digits, half-even."""
    with localcontext() as ctx:
        ctx.prec = 15
        ctx.rounding = ROUND_HALF_EVEN
        return str(Decimal(value.numerator) / Decimal(value.denominator))
