"""Divisor-function tables d(n) with a small binary on-disk cache."""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .errors import CapacityError, DomainError

MAGIC = 0x4D5A4431  # "MZD1"
_HEADER = struct.Struct("<IQ")
N_MAX_LIMIT = 10**8
DEFAULT_MEMORY_BUDGET = 512 * 2**20  # bytes


@dataclass(frozen=True)
class DivisorTable:
    """d(n) for 1 <= n <= limit.  ``d[0]`` is a zero placeholder so that ``d[n]`` is d(n)."""

    limit: int
    d: np.ndarray

    def __post_init__(self):
        self.d.setflags(write=False)

    def __getitem__(self, n):
        return self.d[n]

    def values(self) -> np.ndarray:
        """d(1..limit) as a read-only view."""
        return self.d[1:]

    def require(self, n: int) -> None:
        if n > self.limit:
            raise CapacityError(f"divisor table holds n <= {self.limit}, need {n}")


def divisor_sieve(n_max: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> DivisorTable:
    """Exact d(n) for n <= n_max by incrementing counts over multiples."""
    n_max = int(n_max)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if n_max > N_MAX_LIMIT or 4 * (n_max + 1) > memory_budget:
        raise CapacityError(f"n_max = {n_max} exceeds the divisor-table budget")
    return DivisorTable(n_max, _backend.divisor_counts(n_max))


def write_cache(table: DivisorTable, path) -> None:
    """Write ``u32 magic, u64 n_max, n_max x u32`` little-endian."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, table.limit))
        fh.write(table.values().astype("<u4").tobytes())
    tmp.replace(path)


def read_cache(path) -> DivisorTable:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, n_max = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic 0x{magic:08X}")
        body = np.frombuffer(fh.read(4 * n_max), dtype="<u4")
    if body.size != n_max:
        raise ValueError(f"{path}: expected {n_max} values, found {body.size}")
    d = np.zeros(n_max + 1, dtype=np.uint32)
    d[1:] = body
    return DivisorTable(int(n_max), d)


def cache_path(cache_dir, n_max: int) -> Path:
    return Path(cache_dir) / f"divisors_{n_max}.mzd"


def cached_divisor_table(n_max: int, cache_dir=None) -> DivisorTable:
    """Load d(n) from ``cache_dir`` when a file keyed by ``n_max`` exists, else sieve and store it."""
    if cache_dir is None:
        return divisor_sieve(n_max)
    path = cache_path(cache_dir, n_max)
    if path.exists():
        try:
            return read_cache(path)
        except ValueError:
            path.unlink()
    table = divisor_sieve(n_max)
    write_cache(table, path)
    return table
