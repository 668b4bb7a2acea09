"""A zoo of monotone 0/1 functions on the cube, plus the spectral
sanity checks that make them useful test inputs.

Monotone means x <= y coordinatewise implies f(x) <= f(y).  Under this
package's sign convention (set bit contributes -1 to a character) the
degree-1 coefficients of a monotone 0/1 function satisfy

    coeffs[{j}] = -Inf_j(f) / 2 <= 0,

where Inf_j is the fraction of j-edges on which f flips.  Two identities
ride on that:

  * influence identity: sum_S |S| coeffs[S]^2 = 1/2 sum_j |coeffs[{j}]|
    (both sides equal one quarter of the total influence);
  * tail bound: sum_j |coeffs[{j}]| <= sqrt(n)/2 by Cauchy-Schwarz with
    sum_j coeffs[{j}]^2 <= Var f <= 1/4, so Markov at level K*sqrt(n)
    gives  sum over |S| > K*sqrt(n) of coeffs[S]^2 <= 1/(4K).

Family specs are parsed from compact strings, e.g. "majority",
"tribes:w=4", "dnf:m=32,w=6,seed=7", "dictator:j=2".  An "|odd" suffix
multiplies the function by the value of bit 0, restricting its support
to odd points (the product of a monotone 0/1 function with a dictator
is again monotone 0/1).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import ceil, sqrt
from typing import NamedTuple

import numpy as np

from .cube import CubeVector, Spectrum, check_dimension, popcounts
from .errors import ConfigError

FAMILIES = (
    "dictator",
    "and_all",
    "or_all",
    "majority",
    "threshold",
    "tribes",
    "recursive_majority3",
    "random_monotone_dnf",
)

_ALIASES = {
    "and": "and_all",
    "or": "or_all",
    "maj": "majority",
    "recmaj3": "recursive_majority3",
    "dnf": "random_monotone_dnf",
}

DEFAULT_ZOO_SPECS = (
    "dictator:j=0",
    "and_all",
    "or_all",
    "majority",
    "threshold:t=7",
    "tribes:w=4",
    "recursive_majority3",
    "dnf:m=32,w=6,seed=7",
)


@dataclass(frozen=True)
class MonotoneFunctionSpec:
    """Everything needed to rebuild one zoo member deterministically."""

    family: str
    n: int
    odd_slice: bool = False
    coord: int = 0  # dictator
    threshold: int | None = None
    width: int | None = None  # tribes, random_monotone_dnf
    terms: int | None = None  # random_monotone_dnf
    seed: int = 0  # random_monotone_dnf

    def describe(self) -> str:
        """Canonical short label, also the `spec` column of reports."""
        parts: list[str] = []
        if self.family == "dictator":
            parts.append(f"j={self.coord}")
        elif self.family == "threshold":
            parts.append(f"t={self.threshold}")
        elif self.family == "tribes":
            parts.append(f"w={self.width}")
        elif self.family == "random_monotone_dnf":
            parts.append(f"m={self.terms}")
            parts.append(f"w={self.width}")
            parts.append(f"seed={self.seed}")
        label = self.family if not parts else f"{self.family}:{','.join(parts)}"
        return label + "|odd" if self.odd_slice else label


class MonotonicityVerdict(NamedTuple):
    monotone: bool
    edge: tuple[int, int] | None  # (lower point, upper point) of first violation
    checked: int  # number of edges examined


@dataclass(frozen=True)
class TailReport:
    K: float
    cutoff: int  # ceil(K * sqrt(n))
    tail: float  # spectral mass strictly above the cutoff level
    bound: float  # 1 / (4K)
    total_influence_fw: float  # sum_S |S| coeffs[S]^2
    degree1_sum: float  # sum_j |coeffs[{j}]|


class InfluenceIdentity(NamedTuple):
    lhs: float  # sum_S |S| coeffs[S]^2
    rhs: float  # 1/2 sum_j |coeffs[{j}]|
    gap: float  # lhs - rhs


def parse_spec(text: str, n: int, *, default_seed: int = 0) -> MonotoneFunctionSpec:
    """Parse a compact family string into a validated spec for dimension n."""
    body = text.strip()
    odd = False
    if body.endswith("|odd"):
        odd = True
        body = body[: -len("|odd")]
    name, _, params_text = body.partition(":")
    family = _ALIASES.get(name.strip(), name.strip())
    if family not in FAMILIES:
        raise ConfigError(f"unknown function family {name.strip()!r} in {text!r}")
    params: dict[str, int] = {}
    if params_text:
        for item in params_text.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in ("j", "t", "w", "m", "seed"):
                raise ConfigError(f"bad parameter {item!r} in {text!r}")
            try:
                params[key] = int(value)
            except ValueError:
                raise ConfigError(f"non-integer value in {item!r} of {text!r}") from None
    spec = MonotoneFunctionSpec(
        family=family,
        n=n,
        odd_slice=odd,
        coord=params.get("j", 0),
        threshold=params.get("t"),
        width=params.get("w"),
        terms=params.get("m"),
        seed=params.get("seed", default_seed),
    )
    _validate(spec)
    return spec


def _validate(spec: MonotoneFunctionSpec) -> None:
    check_dimension(spec.n, max_n=spec.n)
    n = spec.n
    fam = spec.family
    if fam == "dictator" and not 0 <= spec.coord < n:
        raise ConfigError(f"dictator coordinate must lie in [0, {n}), got {spec.coord}")
    if fam == "threshold":
        if spec.threshold is None:
            raise ConfigError("threshold needs t=<int>")
        if not 0 <= spec.threshold <= n:
            raise ConfigError(f"threshold must lie in [0, {n}], got {spec.threshold}")
    if fam == "tribes":
        if spec.width is None:
            raise ConfigError("tribes needs w=<int>")
        if not 1 <= spec.width <= n:
            raise ConfigError(f"tribe width must lie in [1, {n}], got {spec.width}")
    if fam == "recursive_majority3" and n < 3:
        raise ConfigError("recursive_majority3 needs n >= 3")
    if fam == "random_monotone_dnf":
        if spec.width is None or spec.terms is None:
            raise ConfigError("random_monotone_dnf needs m=<int>,w=<int>")
        if not 1 <= spec.width <= n:
            raise ConfigError(f"term width must lie in [1, {n}], got {spec.width}")
        if spec.terms < 1:
            raise ConfigError(f"term count must be >= 1, got {spec.terms}")


def default_zoo(n: int, *, odd_slice: bool = False) -> list[MonotoneFunctionSpec]:
    """The standard eight-member zoo at dimension n."""
    zoo = [parse_spec(text, n) for text in DEFAULT_ZOO_SPECS]
    if odd_slice:
        zoo = [replace(spec, odd_slice=True) for spec in zoo]
    return zoo


def materialize(spec: MonotoneFunctionSpec, *, max_n: int | None = None) -> CubeVector:
    """Evaluate the family on all of {0,1}^n as a 0/1 float64 vector."""
    _validate(spec)
    check_dimension(spec.n, max_n=max_n)
    n = spec.n
    idx = np.arange(1 << n, dtype=np.uint32)
    fam = spec.family
    if fam == "dictator":
        on = ((idx >> spec.coord) & 1).astype(bool)
    elif fam == "and_all":
        on = idx == (1 << n) - 1
    elif fam == "or_all":
        on = idx != 0
    elif fam == "majority":
        # Strict majority of n bits: threshold at ceil((n+1)/2), so even
        # n has no ties to break.
        on = popcounts(n) >= (n + 2) // 2
    elif fam == "threshold":
        on = popcounts(n) >= spec.threshold
    elif fam == "tribes":
        on = _tribes(idx, n, spec.width)
    elif fam == "recursive_majority3":
        on = _recursive_majority3(idx, n)
    elif fam == "random_monotone_dnf":
        on = _random_dnf(idx, n, spec.terms, spec.width, spec.seed)
    else:  # pragma: no cover - parse_spec guards this
        raise ConfigError(f"unknown family {fam!r}")
    values = on.astype(np.float64)
    if spec.odd_slice:
        values *= (idx & 1).astype(np.float64)
    return CubeVector(n, values)


def _tribes(idx: np.ndarray, n: int, width: int) -> np.ndarray:
    # OR over floor(n/width) consecutive blocks of ANDed bits; leftover
    # high bits stay irrelevant.
    on = np.zeros(idx.size, dtype=bool)
    for k in range(n // width):
        mask = np.uint32(((1 << width) - 1) << (k * width))
        on |= (idx & mask) == mask
    return on


def _recursive_majority3(idx: np.ndarray, n: int) -> np.ndarray:
    # Balanced ternary majority tree on the low 3^h bits, h maximal.
    height = 1
    while 3 ** (height + 1) <= n:
        height += 1
    leaves = 3**height
    level = [
        ((idx >> (3 * t)) & 1) + ((idx >> (3 * t + 1)) & 1) + ((idx >> (3 * t + 2)) & 1) >= 2
        for t in range(leaves // 3)
    ]
    while len(level) > 1:
        level = [
            level[3 * t].astype(np.uint8)
            + level[3 * t + 1].astype(np.uint8)
            + level[3 * t + 2].astype(np.uint8)
            >= 2
            for t in range(len(level) // 3)
        ]
    return level[0]


def _random_dnf(idx: np.ndarray, n: int, terms: int, width: int, seed: int) -> np.ndarray:
    # OR of `terms` conjunctions, each over `width` coordinates drawn
    # without replacement; the PCG64 stream makes (m, w, seed) a full
    # reproducible identity for the function.
    rng = np.random.default_rng(seed)
    on = np.zeros(idx.size, dtype=bool)
    for _ in range(terms):
        mask = np.uint32(0)
        for j in rng.choice(n, size=width, replace=False):
            mask |= np.uint32(1) << np.uint32(j)
        on |= (idx & mask) == mask
    return on


def monotonicity_check(
    f: CubeVector,
    mode: str = "exhaustive",
    *,
    samples: int = 1_000_000,
    seed: int = 0,
) -> MonotonicityVerdict:
    """Check monotonicity edge by edge.

    mode="exhaustive" walks all n * 2^(n-1) cube edges; mode="sampled"
    draws `samples` random edges from a seeded generator, useful above
    n ~ 16 where the exhaustive walk starts to cost real time.  Inputs
    must be exactly 0/1-valued.
    """
    v = f.values
    if not (np.logical_or(v == 0.0, v == 1.0)).all():
        raise ValueError("monotonicity_check needs a 0/1-valued vector")
    n = f.n
    if mode == "exhaustive":
        checked = 0
        for j in range(n):
            half = 1 << j
            lower = v.reshape(-1, 2, half)[:, 0, :]
            upper = v.reshape(-1, 2, half)[:, 1, :]
            bad = upper < lower
            checked += lower.size
            if bad.any():
                row, col = np.argwhere(bad)[0]
                lo = int(row) * (2 * half) + int(col)
                return MonotonicityVerdict(False, (lo, lo + half), checked)
        return MonotonicityVerdict(True, None, checked)
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, f.size, size=samples, dtype=np.int64)
        js = rng.integers(0, n, size=samples, dtype=np.int64)
        lowers = xs & ~(1 << js)
        uppers = xs | (1 << js)
        bad = v[uppers] < v[lowers]
        if bad.any():
            first = int(np.argmax(bad))
            return MonotonicityVerdict(False, (int(lowers[first]), int(uppers[first])), samples)
        return MonotonicityVerdict(True, None, samples)
    raise ValueError(f"unknown mode {mode!r}")


def tail_report(s: Spectrum, K: float) -> TailReport:
    """Spectral mass strictly above level ceil(K * sqrt(n)), with the
    1/(4K) monotone-function bound it is compared against."""
    if not K > 0:
        raise ValueError(f"K must be positive, got {K}")
    n = s.n
    levels = popcounts(n).astype(np.float64)
    squares = s.coeffs**2
    cutoff = ceil(K * sqrt(n))
    per_level = np.bincount(popcounts(n), weights=squares, minlength=n + 1)
    tail = float(per_level[cutoff + 1 :].sum())
    total_influence_fw = float((levels * squares).sum())
    degree1_sum = float(sum(abs(s.coeffs[1 << j]) for j in range(n)))
    return TailReport(
        K=K,
        cutoff=cutoff,
        tail=tail,
        bound=1.0 / (4.0 * K),
        total_influence_fw=total_influence_fw,
        degree1_sum=degree1_sum,
    )


def influence_identity_check(s: Spectrum) -> InfluenceIdentity:
    """Both sides of  sum |S| coeffs^2 = 1/2 sum_j |coeffs[{j}]| ."""
    levels = popcounts(s.n).astype(np.float64)
    lhs = float((levels * s.coeffs**2).sum())
    rhs = 0.5 * float(sum(abs(s.coeffs[1 << j]) for j in range(s.n)))
    return InfluenceIdentity(lhs, rhs, lhs - rhs)
