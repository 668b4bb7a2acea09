"""Run configuration shared by the CLI entry points."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .arithmetic import DEFAULT_SEGMENT_SIZE
from .cube import DEFAULT_MAX_N, MIN_N
from .errors import ConfigError
from .monotone import DEFAULT_ZOO_SPECS

FORMATS = ("csv", "json")

# --max-memory is stated in MiB for one float64 table; 8 * 2^n bytes.
BYTES_PER_VALUE = 8


def max_n_for_memory(mib: int) -> int:
    """Largest cube dimension whose table fits in `mib` MiB."""
    if mib < 1:
        raise ConfigError(f"--max-memory must be >= 1 MiB, got {mib}")
    budget = mib * (1 << 20)
    n = MIN_N
    while BYTES_PER_VALUE * (1 << (n + 1)) <= budget:
        n += 1
    return n


@dataclass
class RunConfig:
    """Everything a report run depends on; defaults match the CLI."""

    n_values: tuple[int, ...] = (16,)
    zoo: tuple[str, ...] = DEFAULT_ZOO_SPECS
    K: float = 4.0
    n0: int = 2
    fmt: str = "csv"
    cache_dir: Path | None = None
    out_dir: Path = field(default_factory=lambda: Path("reports"))
    seed: int = 0
    max_n: int = DEFAULT_MAX_N
    sieve_missing: bool = True
    segment_size: int = DEFAULT_SEGMENT_SIZE
    figures: bool = True

    def validate(self) -> None:
        if not self.n_values:
            raise ConfigError("at least one cube dimension is required")
        for n in self.n_values:
            if not isinstance(n, int) or n < MIN_N:
                raise ConfigError(f"cube dimension must be an integer >= {MIN_N}, got {n!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if not self.K > 0:
            raise ConfigError(f"K must be positive, got {self.K}")
        if self.n0 < 0:
            raise ConfigError(f"n0 must be >= 0, got {self.n0}")
        if self.segment_size < 2:
            raise ConfigError(f"segment size must be >= 2, got {self.segment_size}")
