"""Three independent small-n identities for the Mertens function.

Each of these computes M(n) without any Moebius values, so they serve as
oracles against the table builders:

  * determinant of the n x n Redheffer matrix (entry 1 iff j = 1 or i | j),
    taken exactly by fraction-free Bareiss elimination over Python ints;
  * the exponential sum sum exp(2*pi*i*a/b) over the Farey sequence of
    order n, whose imaginary parts cancel and whose real part is M(n);
  * the signed count M(n) = sum_k (-1)^k D_k(n) of lattice points under
    k-dimensional hyperboloids, where D_k(n) counts k-tuples of integers
    >= 2 with product <= n.

All three are exponential or cubic against the sieve's O(N), hence the
caps; their whole point is exactness, not speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, gcd, pi, sin

import numpy as np

from .errors import NumericalError

REDHEFFER_CAP = 200
FAREY_CAP = 1000
HYPERBOLIC_CAP = 10**5


@dataclass(frozen=True)
class RedhefferMatrix:
    """0/1 matrix of order n with entry(i, j) = 1 iff j = 1 or i divides j."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")
        if self.entries.shape != (self.order, self.order):
            raise ValueError(f"entries shape {self.entries.shape} != order {self.order}")


@dataclass(frozen=True)
class FareySequence:
    """Reduced fractions a/b with b <= order, increasing over (0, 1]."""

    order: int
    fractions: np.ndarray  # shape (count, 2), columns a, b

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")


def redheffer_matrix(n: int) -> RedhefferMatrix:
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    entries = np.zeros((n, n), dtype=np.uint8)
    entries[:, 0] = 1
    for i in range(1, n + 1):
        entries[i - 1, i - 1 :: i] = 1
    return RedhefferMatrix(n, entries)


def _bareiss_determinant(rows: list[list[int]]) -> int:
    """Exact integer determinant; every division below is remainder-free."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            row_i = rows[i]
            row_k = rows[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                q, r = divmod(row_i[j] * pivot - lead * row_k[j], prev)
                if r:
                    raise ArithmeticError("fraction-free elimination produced a remainder")
                row_i[j] = q
            row_i[k] = 0
        prev = pivot
    return sign * rows[n - 1][n - 1]


def mertens_redheffer(n: int) -> int:
    """M(n) as det of the Redheffer matrix; exact, O(n^3) big-int work."""
    if not 1 <= n <= REDHEFFER_CAP:
        raise ValueError(f"n={n} outside 1..{REDHEFFER_CAP}")
    entries = redheffer_matrix(n).entries
    rows = [[int(x) for x in row] for row in entries]
    return _bareiss_determinant(rows)


def farey_sequence(n: int) -> FareySequence:
    """All of F_n in (0, 1], built by the mediant next-term recurrence."""
    if not 1 <= n <= FAREY_CAP:
        raise ValueError(f"n={n} outside 1..{FAREY_CAP}")
    out = []
    a, b, c, d = 0, 1, 1, n
    while c <= n:
        out.append((c, d))
        if c == d:  # reached 1/1
            break
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return FareySequence(n, np.array(out, dtype=np.int64))


def totient_summatory(n: int) -> int:
    """sum_{k<=n} phi(k) by an independent totient sieve; |F_n| must equal it."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:  # untouched, hence prime
            phi[p::p] -= phi[p::p] // p
    return int(phi[1:].sum())


def mertens_farey(n: int) -> int:
    """M(n) as the rounded real part of sum exp(2*pi*i*a/b) over F_n.

    The imaginary parts must cancel to rounding noise; a residue above
    1e-6 per fraction, or a real part further than 0.25 from an integer,
    aborts instead of returning a silently wrong value.
    """
    seq = farey_sequence(n).fractions
    count = len(seq)
    angles = 2.0 * pi * (seq[:, 0] / seq[:, 1])
    real = float(np.cos(angles).sum())
    imag = float(np.sin(angles).sum())
    if abs(imag) >= 1e-6 * count:
        raise NumericalError(f"imaginary residue {imag:.3e} too large for |F_{n}| = {count}")
    nearest = round(real)
    if abs(real - nearest) > 0.25:
        raise NumericalError(f"real part {real!r} is not close enough to an integer")
    return int(nearest)


def _distinct_quotients(n: int) -> list[int]:
    # descending list of all distinct floor(n/i)
    vals = []
    i = 1
    while i <= n:
        q = n // i
        vals.append(q)
        i = n // q + 1
    return vals


def mertens_hyperbolic(n: int) -> int:
    """M(n) = sum_k (-1)^k D_k(n), D_k counting k-tuples (each >= 2) with
    product <= n.

    Uses D_k(v) = sum_{a=2..floor(v/2^(k-1))} D_(k-1)(floor(v/a)) evaluated
    over the distinct quotient values of n only, with runs of equal
    floor(v/a) collapsed; the k-th term vanishes once 2^k > n.
    """
    if not 1 <= n <= HYPERBOLIC_CAP:
        raise ValueError(f"n={n} outside 1..{HYPERBOLIC_CAP}")
    quotients = _distinct_quotients(n)
    index = {v: i for i, v in enumerate(quotients)}
    d_prev = [1] * len(quotients)  # D_0(v) = 1 for every v >= 1
    total = 1  # the k = 0 term, D_0(n)
    sign = -1
    k = 1
    while (1 << k) <= n:
        floor_pow = 1 << (k - 1)
        d_cur = [0] * len(quotients)
        for pos, v in enumerate(quotients):
            amax = v // floor_pow
            if amax < 2:
                break  # quotients descend; smaller v cannot contribute either
            acc = 0
            a = 2
            while a <= amax:
                q = v // a
                run_end = min(v // q, amax)
                acc += d_prev[index[q]] * (run_end - a + 1)
                a = run_end + 1
            d_cur[pos] = acc
        total += sign * d_cur[0]
        sign = -sign
        d_prev = d_cur
        k += 1
    return total
