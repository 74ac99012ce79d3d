"""Zeros, segment extrema, density ratios, and probabilistic bound scans.

Everything here reads immutable tables. The statistics reproduced are the
zero censuses of M and mu, the local extrema between neighbor zeros of M,
the global extrema, the squarefree-density ratios r1 and r2 against
6/pi^2, and threshold scans of M(n) against c * sqrt(n) for several
choices of c.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import erfc, exp, log, pi, sqrt

import numpy as np

from .reference import SIX_OVER_PI_SQUARED
from .tables import MertensTable, MobiusTable


@dataclass(frozen=True)
class ZeroList:
    """All n with M(n) = 0, strictly increasing, over 1..source_limit."""

    indices: np.ndarray
    source_limit: int


@dataclass(frozen=True)
class ExtremumRecord:
    """One extremum of M between two neighbor zeros.

    attained_at lists every n strictly between the zeros where the value
    occurs (a duplicated extremum still yields a single record).
    """

    left_zero: int
    right_zero: int
    value: int
    attained_at: tuple[int, ...]
    kind: str  # "maximum" or "minimum"


@dataclass(frozen=True)
class GlobalExtrema:
    max_value: int
    max_indices: tuple[int, ...]
    min_value: int
    min_indices: tuple[int, ...]


@dataclass(frozen=True)
class RatioSeries:
    """r1(n) = Q(n)/n - |M(n)|/n and r2(n) = Q(n)/n - M(n)/n at sample
    indices, Q counting squarefree integers up to n."""

    indices: np.ndarray
    r1: np.ndarray
    r2: np.ndarray


@dataclass(frozen=True)
class BoundCheckReport:
    """Counts of n in [n_min, N] where M(n) crosses sqrt-scaled bounds.

    Two probabilistic bounds are scanned: the central-limit style bound
    sqrt(6/pi^2) * K * sqrt(n) with K the two-sided normal quantile for the
    requested alpha, and the Chebyshev style bound sqrt(6/pi^2) / sqrt(alpha)
    * sqrt(n). The source inequalities are one-sided (M(n) above the bound),
    so the signed counts are primary and the |M(n)| variants are reported
    alongside. The fixed thresholds 0.5 * sqrt(n) (from n >= 10) and
    0.1333 * sqrt(n) (from n >= 1664) are scanned the same way.
    """

    alpha: float
    k_quantile: float
    n_range: tuple[int, int]
    exceed_count_quantile: int
    exceed_count_quantile_abs: int
    exceed_count_chebyshev: int
    exceed_count_chebyshev_abs: int
    max_ratio: float
    argmax_ratio: int
    max_signed_ratio: float
    argmax_signed_ratio: int
    half_threshold_count: int
    half_threshold_count_abs: int
    deep_threshold_count: int
    deep_threshold_count_abs: int


def find_zeros(t: MertensTable) -> ZeroList:
    """Exhaustive scan for M(n) = 0."""
    idx = np.nonzero(t.values == 0)[0].astype(np.int64) + 1
    return ZeroList(idx, t.limit)


def count_mobius_zeros(t: MobiusTable) -> int:
    """How many k <= N have mu(k) = 0; equals N minus the squarefree count."""
    return int(np.count_nonzero(t.values == 0))


def segment_extrema(t: MertensTable, z: ZeroList) -> list[ExtremumRecord]:
    """One extremum record per open segment between consecutive zeros.

    Segments of width 1 (adjacent zeros) have no interior and are skipped;
    the stretches before the first zero and after the last are not between
    two zeros and contribute nothing.
    """
    if z.source_limit != t.limit:
        raise ValueError("zero list was built from a different table")
    records: list[ExtremumRecord] = []
    zeros = z.indices
    values = t.values
    for i in range(len(zeros) - 1):
        left = int(zeros[i])
        right = int(zeros[i + 1])
        if right - left < 2:
            continue
        seg = values[left : right - 1]  # M(left+1) .. M(right-1)
        if seg[0] > 0:
            value = int(seg.max())
            kind = "maximum"
        else:
            value = int(seg.min())
            kind = "minimum"
        hits = np.nonzero(seg == value)[0] + left + 1
        records.append(ExtremumRecord(left, right, value, tuple(int(h) for h in hits), kind))
    return records


def global_extrema(t: MertensTable) -> GlobalExtrema:
    """Exact global max and min of M with every attaining index."""
    values = t.values
    max_value = int(values.max())
    min_value = int(values.min())
    max_idx = tuple(int(i) for i in np.nonzero(values == max_value)[0] + 1)
    min_idx = tuple(int(i) for i in np.nonzero(values == min_value)[0] + 1)
    return GlobalExtrema(max_value, max_idx, min_value, min_idx)


def _sample_indices(limit: int, stride: int) -> np.ndarray:
    if stride < 1:
        raise ValueError(f"stride must be positive, got {stride}")
    samples = np.arange(stride, limit + 1, stride, dtype=np.int64)
    if len(samples) == 0 or samples[-1] != limit:
        samples = np.append(samples, limit)
    return samples


def ratio_series(mu: MobiusTable, m: MertensTable, stride: int = 1000) -> RatioSeries:
    """Sampled r1 and r2; the endpoint n = N is always included exactly."""
    if mu.limit != m.limit:
        raise ValueError(f"table limits differ: {mu.limit} vs {m.limit}")
    samples = _sample_indices(m.limit, stride)
    q_running = np.cumsum(np.abs(mu.values), dtype=np.int64)
    q = q_running[samples - 1].astype(np.float64)
    m_vals = m.values[samples - 1].astype(np.float64)
    n = samples.astype(np.float64)
    r1 = q / n - np.abs(m_vals) / n
    r2 = q / n - m_vals / n
    return RatioSeries(samples, r1, r2)


# Rational approximation coefficients for the inverse normal CDF
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on (0, 1).

    Rational approximation (absolute error below 1.2e-8 everywhere) plus
    one Halley step against the erfc-based CDF, which pushes the error to
    a few ulp.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be strictly inside (0, 1), got {p}")
    p_low = 0.02425
    if p < p_low:
        q = sqrt(-2.0 * log(p))
        x = ((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
            (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    elif p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        x = ((((( _A[0]*r + _A[1])*r + _A[2])*r + _A[3])*r + _A[4])*r + _A[5]) * q / \
            ((((( _B[0]*r + _B[1])*r + _B[2])*r + _B[3])*r + _B[4])*r + 1.0)
    else:
        q = sqrt(-2.0 * log(1.0 - p))
        x = -((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
             (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    # one Halley refinement: e is the CDF residual at x
    e = 0.5 * erfc(-x / sqrt(2.0)) - p
    u = e * sqrt(2.0 * pi) * exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def central_quantile(alpha: float) -> float:
    """K with P(|Z| <= K) = 1 - alpha for standard normal Z."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be strictly inside (0, 1), got {alpha}")
    return normal_quantile(1.0 - alpha / 2.0)


def bound_check(m: MertensTable, alpha: float = 0.05, n_min: int = 10) -> BoundCheckReport:
    """Scan M(n) for n in [n_min, N] against the sqrt-scaled bounds."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be strictly inside (0, 1), got {alpha}")
    if not 1 <= n_min <= m.limit:
        raise ValueError(f"n_min={n_min} outside 1..{m.limit}")
    k = central_quantile(alpha)
    start = n_min - 1
    vals = m.values[start:].astype(np.float64)
    roots = np.sqrt(np.arange(n_min, m.limit + 1, dtype=np.float64))
    ratio = vals / roots
    abs_ratio = np.abs(ratio)

    scale = sqrt(SIX_OVER_PI_SQUARED)
    c_quantile = scale * k
    c_chebyshev = scale / sqrt(alpha)

    def counts(c: float, lo: int) -> tuple[int, int]:
        # lo is the smallest n the threshold applies to
        off = max(lo, n_min) - n_min
        return (int(np.count_nonzero(ratio[off:] > c)),
                int(np.count_nonzero(abs_ratio[off:] > c)))

    one_q, two_q = counts(c_quantile, n_min)
    one_c, two_c = counts(c_chebyshev, n_min)
    one_half, two_half = counts(0.5, 10)
    one_deep, two_deep = counts(0.1333, 1664)

    arg_abs = int(np.argmax(abs_ratio))
    arg_signed = int(np.argmax(ratio))
    return BoundCheckReport(
        alpha=alpha,
        k_quantile=k,
        n_range=(n_min, m.limit),
        exceed_count_quantile=one_q,
        exceed_count_quantile_abs=two_q,
        exceed_count_chebyshev=one_c,
        exceed_count_chebyshev_abs=two_c,
        max_ratio=float(abs_ratio[arg_abs]),
        argmax_ratio=arg_abs + n_min,
        max_signed_ratio=float(ratio[arg_signed]),
        argmax_signed_ratio=arg_signed + n_min,
        half_threshold_count=one_half,
        half_threshold_count_abs=two_half,
        deep_threshold_count=one_deep,
        deep_threshold_count_abs=two_deep,
    )
