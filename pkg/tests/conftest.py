"""Shared fixtures: one small table set and one full-study table set per session.

The independent correctness oracle used throughout the tests is plain
trial-division factorization (`mu_trial_division`), which shares no code or
algorithmic idea with the sieve or the recursions under test.
"""

import time

import pytest

from mertens import mertens_from_mobius, mobius_sieve

SMALL_LIMIT = 20_000
STUDY_LIMIT = 20_000_000


def mu_trial_division(n: int) -> int:
    """mu(n) by trial division; independent of every implementation under test."""
    if n < 1:
        raise ValueError(n)
    if n == 1:
        return 1
    sign = 1
    remaining = n
    p = 2
    while p * p <= remaining:
        if remaining % p == 0:
            remaining //= p
            if remaining % p == 0:
                return 0
            sign = -sign
        p += 1 if p == 2 else 2
    if remaining > 1:
        sign = -sign
    return sign


@pytest.fixture(scope="session")
def small_tables():
    mu_t = mobius_sieve(SMALL_LIMIT)
    return mu_t, mertens_from_mobius(mu_t)


@pytest.fixture(scope="session")
def study_tables():
    """Full-study tables plus the wall-clock seconds of the timed build.

    A throwaway small sieve runs first so that just-in-time compilation of the
    sieve kernel is excluded from the recorded build time.
    """
    mobius_sieve(1000)  # warm the compiled kernel
    t0 = time.perf_counter()
    mu_t = mobius_sieve(STUDY_LIMIT)
    m_t = mertens_from_mobius(mu_t)
    build_seconds = time.perf_counter() - t0
    return mu_t, m_t, build_seconds
