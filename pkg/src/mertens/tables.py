"""Moebius and Mertens tables by recursion and by a linear sieve.

The Moebius function mu(k) is +1 when k is a product of an even number of
distinct primes, -1 for an odd number, and 0 when a prime square divides k.
The Mertens function is the prefix sum M(n) = sum_{k<=n} mu(k).

Two independent routes are provided. The recursive route uses only

    mu(k) = -sum_{m | k, m < k} mu(m),        k >= 2,

which needs nothing but divisibility tests, either as a literal scan over
all m < k or as divisor enumeration by trial division. The sieve route is a
linear smallest-prime-factor sieve, O(N) time, used as the fast oracle the
recursive results are checked against. The recursions are quadratic in
aggregate, so the direct builders are capped by default; the sieve covers
the full study range (2*10**7 in about a second).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log
from pathlib import Path

import numpy as np

from . import storage
from .errors import IntegrityError

DEFAULT_DIRECT_CAP = 10**5
DEFAULT_CHECKPOINT_EVERY = 10**6


@dataclass(frozen=True)
class MobiusTable:
    """mu(1..limit); values[k-1] holds mu(k), each in {-1, 0, +1}."""

    limit: int
    values: np.ndarray

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError(f"limit must be positive, got {self.limit}")
        if len(self.values) != self.limit:
            raise ValueError(f"values length {len(self.values)} != limit {self.limit}")

    def value(self, k: int) -> int:
        if not 1 <= k <= self.limit:
            raise ValueError(f"index {k} outside 1..{self.limit}")
        return int(self.values[k - 1])


@dataclass(frozen=True)
class MertensTable:
    """M(1..limit) as 64-bit signed integers; values[n-1] holds M(n)."""

    limit: int
    values: np.ndarray

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError(f"limit must be positive, got {self.limit}")
        if len(self.values) != self.limit:
            raise ValueError(f"values length {len(self.values)} != limit {self.limit}")

    def value(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError(f"index {n} outside 1..{self.limit}")
        return int(self.values[n - 1])


@dataclass(frozen=True)
class ParityCounts:
    """Counts of mu parities up to n: q = even_count + odd_count squarefree."""

    n: int
    even_count: int
    odd_count: int
    q: int


_sieve_kernel = None


def _get_sieve_kernel():
    # JIT compilation deferred to first use; cached on disk afterwards
    global _sieve_kernel
    if _sieve_kernel is not None:
        return _sieve_kernel
    from numba import njit

    @njit(cache=True)
    def kernel(n, mu, spf, primes):
        count = 0
        mu[0] = 0
        mu[1] = 1
        for i in range(2, n + 1):
            if spf[i] == 0:
                spf[i] = i
                mu[i] = -1
                primes[count] = i
                count += 1
            for j in range(count):
                p = primes[j]
                ip = i * p
                if ip > n:
                    break
                spf[ip] = p
                if p == spf[i]:
                    mu[ip] = 0
                    break
                mu[ip] = -mu[i]
        return mu

    _sieve_kernel = kernel
    return kernel


def mobius_sieve(N: int) -> MobiusTable:
    """Exact mu(1..N) by a linear smallest-prime-factor sieve.

    Each integer is struck exactly once (as i*p with p its smallest prime
    factor), so the run time is O(N). Transient memory is 1 byte of mu plus
    4 bytes of smallest-prime-factor per entry; the factor array is freed
    on return.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    kernel = _get_sieve_kernel()
    try:
        mu = np.empty(N + 1, dtype=np.int8)
        spf = np.zeros(N + 1, dtype=np.int32)
        # prime count bound comfortably above pi(N) for all N
        cap = max(16, int(1.3 * (N + 2) / log(N + 2)) + 16)
        primes = np.empty(cap, dtype=np.int32)
    except MemoryError as exc:
        raise MemoryError(f"cannot allocate {5 * (N + 1)} bytes of sieve state for N={N}") from exc
    kernel(N, mu, spf, primes)
    del spf, primes
    return MobiusTable(N, mu[1:].copy())


def _prior_values(prior) -> np.ndarray:
    if isinstance(prior, MobiusTable):
        return prior.values
    return np.asarray(prior)


def mobius_recursive(k: int, prior, strategy: str = "divisors") -> int:
    """mu(k) from mu(1..k-1) via the proper-divisor sum.

    strategy "scan" walks every m < k with a divisibility test (the literal
    form of the recursion); "divisors" enumerates divisors by trial division
    up to sqrt(k). Both evaluate the same sum and always agree.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    values = _prior_values(prior)
    if len(values) < k - 1:
        raise ValueError(f"prior covers 1..{len(values)}, need 1..{k - 1}")
    if strategy == "scan":
        ms = np.arange(1, k)
        hits = values[: k - 1][(k % ms) == 0]
        return -int(hits.sum(dtype=np.int64))
    if strategy == "divisors":
        total = 0
        for d in range(1, isqrt(k) + 1):
            if k % d == 0:
                total += int(values[d - 1])
                q = k // d
                if q != d and q != k:
                    total += int(values[q - 1])
        return -total
    raise ValueError(f"unknown strategy {strategy!r}")


def mertens_direct(n: int, *, allow_large: bool = False) -> int:
    """M(n) built purely from the recursion, summing mu(1..n).

    Quadratic in n (every k scans all m < k), so intended for small n;
    capped at 10**5 unless allow_large is set.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > DEFAULT_DIRECT_CAP and not allow_large:
        raise ValueError(
            f"n={n} exceeds the default cap {DEFAULT_DIRECT_CAP} for the quadratic "
            "recursion; pass allow_large=True to override"
        )
    mu = np.zeros(n, dtype=np.int8)
    mu[0] = 1
    for k in range(2, n + 1):
        mu[k - 1] = mobius_recursive(k, mu[: k - 1], strategy="scan")
    return int(mu.sum(dtype=np.int64))


class MertensAccumulator:
    """Streaming state for the incremental formula M(n) = M(n-1) - sum of
    proper-divisor mu values; resumable from checkpoints."""

    def __init__(self, mu_prefix: np.ndarray, value: int):
        n = len(mu_prefix)
        if n < 1:
            raise ValueError("state must cover at least index 1")
        self._mu = np.empty(max(1024, n), dtype=np.int8)
        self._mu[:n] = mu_prefix
        self._n = n
        self._value = int(value)

    @classmethod
    def start(cls) -> "MertensAccumulator":
        return cls(np.array([1], dtype=np.int8), 1)

    @property
    def n(self) -> int:
        return self._n

    @property
    def value(self) -> int:
        """M(n) for the current n."""
        return self._value

    def _grow(self):
        buf = np.empty(2 * len(self._mu), dtype=np.int8)
        buf[: self._n] = self._mu[: self._n]
        self._mu = buf

    def step(self) -> int:
        """Advance to n+1; returns mu(n+1)."""
        k = self._n + 1
        # the proper-divisor sum; mu(k) is its negation
        mu_k = mobius_recursive(k, self._mu[: self._n], strategy="divisors")
        if self._n == len(self._mu):
            self._grow()
        self._mu[self._n] = mu_k
        self._n = k
        self._value += mu_k
        return mu_k

    def advance_to(
        self,
        n: int,
        *,
        checkpoint_path: str | Path | None = None,
        checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    ) -> "MertensAccumulator":
        if checkpoint_every < 1:
            raise ValueError(f"checkpoint_every must be positive, got {checkpoint_every}")
        while self._n < n:
            self.step()
            if checkpoint_path is not None and self._n % checkpoint_every == 0:
                self.checkpoint(checkpoint_path)
        return self

    def checkpoint(self, path: str | Path) -> None:
        storage.write_checkpoint(path, self._mu[: self._n], self._value)

    @classmethod
    def resume(cls, path: str | Path) -> "MertensAccumulator":
        mu, value = storage.read_checkpoint(path)
        if len(mu) < 1 or mu[0] != 1:
            raise IntegrityError(f"{path}: checkpoint does not start at mu(1) = 1")
        if int(mu.sum(dtype=np.int64)) != value:
            raise IntegrityError(f"{path}: stored M(n) disagrees with the mu prefix sum")
        return cls(mu, value)

    def mobius(self) -> MobiusTable:
        return MobiusTable(self._n, self._mu[: self._n].copy())

    def mertens(self) -> MertensTable:
        return mertens_from_mobius(self.mobius())


def mertens_from_mobius(t: MobiusTable) -> MertensTable:
    """Running prefix sum of the mu table; O(N)."""
    return MertensTable(t.limit, np.cumsum(t.values, dtype=np.int64))


def parity_counts(t: MobiusTable, n: int) -> ParityCounts:
    """How often mu(k) = +1 and -1 for k <= n; q counts squarefree k."""
    if not 1 <= n <= t.limit:
        raise ValueError(f"n={n} outside 1..{t.limit}")
    head = t.values[:n]
    even = int(np.count_nonzero(head == 1))
    odd = int(np.count_nonzero(head == -1))
    return ParityCounts(n, even, odd, even + odd)
