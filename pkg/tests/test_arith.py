from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mellinzeta.arith import (MAGIC, cache_path, cached_divisor_table, divisor_sieve, read_cache,
                              write_cache)
from mellinzeta.errors import CapacityError, DomainError


def brute_d(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if n % k == 0)


def test_small_table():
    t = divisor_sieve(6)
    assert list(t.values()) == [1, 2, 2, 3, 2, 4]
    assert divisor_sieve(36)[36] == 9


def test_divisor_summatory_100():
    assert int(divisor_sieve(100).values().sum()) == 482 == sum(100 // k for k in range(1, 101))


@pytest.mark.parametrize("N", [10, 100, 10_000, 1_000_000])
def test_hyperbola_identity(N):
    d = divisor_sieve(N).values().astype(np.int64)
    k = np.arange(1, N + 1, dtype=np.int64)
    assert int(d.sum()) == int((N // k).sum())


def test_primes_have_two_divisors():
    t = divisor_sieve(5000)
    sieve = np.ones(5001, bool)
    sieve[:2] = False
    for p in range(2, 71):
        sieve[p * p::p] = False
    assert t[1] == 1
    assert np.all(t.d[np.nonzero(sieve)[0]] == 2)


def test_multiplicative_on_random_coprime_pairs():
    t = divisor_sieve(10**6)
    rng = np.random.default_rng(11)
    done = 0
    while done < 200:
        m, n = (int(v) for v in rng.integers(1, 1000, 2))
        if math.gcd(m, n) != 1:
            continue
        assert t[m * n] == t[m] * t[n]
        done += 1


@given(st.integers(1, 3000))
def test_matches_brute_force(n):
    assert divisor_sieve(n)[n] == brute_d(n)


def test_guards():
    with pytest.raises(DomainError):
        divisor_sieve(0)
    with pytest.raises(CapacityError):
        divisor_sieve(10**8 + 1)
    with pytest.raises(CapacityError):
        divisor_sieve(10**6, memory_budget=1000)
    with pytest.raises(CapacityError):
        divisor_sieve(10).require(11)


def test_table_is_read_only():
    t = divisor_sieve(10)
    with pytest.raises(ValueError):
        t.d[3] = 7


def test_binary_cache_roundtrip_and_layout(tmp_path):
    t = divisor_sieve(1000)
    p = tmp_path / "d.mzd"
    write_cache(t, p)
    raw = p.read_bytes()
    assert len(raw) == 4 + 8 + 4 * 1000
    assert int.from_bytes(raw[:4], "little") == MAGIC
    assert int.from_bytes(raw[4:12], "little") == 1000
    assert int.from_bytes(raw[12 + 4 * 35:12 + 4 * 36], "little") == 9  # d(36)
    back = read_cache(p)
    assert back.limit == 1000 and np.array_equal(back.d, t.d)


def test_bad_cache_files(tmp_path):
    p = tmp_path / "bad.mzd"
    p.write_bytes(b"\x00" * 20)
    with pytest.raises(ValueError):
        read_cache(p)
    p.write_bytes(MAGIC.to_bytes(4, "little") + (10).to_bytes(8, "little") + b"\x01\x00\x00\x00")
    with pytest.raises(ValueError):
        read_cache(p)


def test_cached_table_written_once(tmp_path):
    a = cached_divisor_table(500, tmp_path)
    path = cache_path(tmp_path, 500)
    assert path.exists()
    stamp = path.stat().st_mtime_ns
    b = cached_divisor_table(500, tmp_path)
    assert path.stat().st_mtime_ns == stamp
    assert np.array_equal(a.d, b.d)
