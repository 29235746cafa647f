"""
Exact representation and spectral analysis of binary codes.

Codewords are stored as Python ints: bit ``i`` of the int is coordinate ``i``
of the word, so ``"0111"`` read from a code file is the int ``0b1110``.
Every distribution here is an exact ``Fraction`` vector; floats never enter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "Code",
    "CodeFormatError",
    "DistanceDistribution",
    "DualDistribution",
    "as_fraction",
    "concentration_tail",
    "distance_distribution",
    "dual_distribution",
    "full_space",
    "hamming74",
    "krawtchouk",
    "linear_code",
    "local_weight_distribution",
    "mass_beyond",
    "parity_code",
    "plotkin_average",
    "pless_moment",
    "random_code",
    "read_code",
    "repetition_code",
    "write_code",
]

# Systematic generator of the [7,4] Hamming code, rows written as in a code file.
HAMMING74_GENERATOR = ("1000110", "0100101", "0010011", "0001111")


class CodeFormatError(ValueError):
    """Malformed or inconsistent code data (bad characters, ragged lengths, duplicates)."""


def as_fraction(x) -> Fraction:
    """Convert to an exact rational; floats go through their shortest repr so 0.3 -> 3/10."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def word_from_str(s: str) -> int:
    w = 0
    for i, ch in enumerate(s):
        if ch == "1":
            w |= 1 << i
        elif ch != "0":
            raise CodeFormatError(f"invalid character {ch!r} in codeword {s!r}")
    return w


def word_to_str(w: int, n: int) -> str:
    return "".join("1" if (w >> i) & 1 else "0" for i in range(n))


@dataclass(frozen=True)
class Code:
    """A binary code: ``M`` distinct words of common length ``n``."""

    n: int
    words: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise CodeFormatError(f"word length must be positive, got {self.n}")
        words = tuple(int(w) for w in self.words)
        object.__setattr__(self, "words", words)
        if not words:
            raise CodeFormatError("a code needs at least one word")
        limit = 1 << self.n
        for w in words:
            if not 0 <= w < limit:
                raise CodeFormatError(f"word {w} does not fit in {self.n} bits")
        if len(set(words)) != len(words):
            raise CodeFormatError("duplicate codewords")

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "Code":
        lines = list(lines)
        if not lines:
            raise CodeFormatError("a code needs at least one word")
        n = len(lines[0])
        for s in lines:
            if len(s) != n:
                raise CodeFormatError(f"codeword {s!r} has length {len(s)}, expected {n}")
        return cls(n, tuple(word_from_str(s) for s in lines))

    @property
    def M(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return w in self._index

    @property
    def _index(self) -> dict[int, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {w: i for i, w in enumerate(self.words)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def as_strings(self) -> list[str]:
        return [word_to_str(w, self.n) for w in self.words]


# ---------------------------------------------------------------------------
# Code file I/O


def parse_code(text: str) -> Code:
    lines = []
    for raw in text.splitlines():
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        lines.append(s)
    return Code.from_strings(lines)


def read_code(path: str | Path) -> Code:
    return parse_code(Path(path).read_text())


def write_code(code: Code, path: str | Path, comment: str | None = None) -> None:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.extend(code.as_strings())
    Path(path).write_text("\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# Generators


def full_space(n: int) -> Code:
    return Code(n, tuple(range(1 << n)))


def repetition_code(n: int) -> Code:
    return Code(n, (0, (1 << n) - 1))


def parity_code(n: int) -> Code:
    """Even-weight code of length ``n``."""
    return Code(n, tuple(w for w in range(1 << n) if w.bit_count() % 2 == 0))


def linear_code(n: int, generators: Sequence[int]) -> Code:
    """The GF(2) span of ``generators`` (dependent rows are fine)."""
    span = {0}
    for g in generators:
        span |= {w ^ g for w in span}
    return Code(n, tuple(sorted(span)))


def hamming74() -> Code:
    return linear_code(7, [word_from_str(r) for r in HAMMING74_GENERATOR])


def random_code(n: int, M: int, seed: int) -> Code:
    """``M`` distinct words drawn uniformly without replacement from F_2^n."""
    if M < 1:
        raise ValueError("M must be positive")
    if n < 63 and M > (1 << n):
        raise ValueError(f"cannot draw {M} distinct words of length {n}")
    rng = random.Random(seed)
    seen: set[int] = set()
    words = []
    while len(words) < M:
        w = rng.getrandbits(n)
        if w not in seen:
            seen.add(w)
            words.append(w)
    return Code(n, tuple(words))


# ---------------------------------------------------------------------------
# Krawtchouk polynomials


def krawtchouk(n: int, i: int, j: int) -> int:
    """K_i(j) = sum_k (-1)^k C(j,k) C(n-j,i-k), exactly."""
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError(f"krawtchouk arguments out of range: n={n}, i={i}, j={j}")
    return _krawtchouk(n, i, j)


@lru_cache(maxsize=None)
def _krawtchouk(n: int, i: int, j: int) -> int:
    return sum((-1) ** k * comb(j, k) * comb(n - j, i - k) for k in range(i + 1))


@lru_cache(maxsize=64)
def krawtchouk_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Row ``i`` holds K_i(0..n)."""
    return tuple(tuple(_krawtchouk(n, i, j) for j in range(n + 1)) for i in range(n + 1))


# ---------------------------------------------------------------------------
# Distributions


@dataclass(frozen=True)
class DistanceDistribution:
    n: int
    M: int
    a: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.a) != self.n + 1:
            raise ValueError("distance distribution must have n+1 entries")
        if self.a[0] != 1 or any(x < 0 for x in self.a) or sum(self.a) != self.M:
            raise ValueError("not a valid distance distribution")


@dataclass(frozen=True)
class DualDistribution:
    n: int
    b: tuple[Fraction, ...]
    dual_distance: int = field(init=False)

    def __post_init__(self):
        if len(self.b) != self.n + 1:
            raise ValueError("dual distribution must have n+1 entries")
        dd = next((i for i in range(1, self.n + 1) if self.b[i] != 0), self.n + 1)
        object.__setattr__(self, "dual_distance", dd)


def _pair_counts(code: Code) -> list[int]:
    counts = [0] * (code.n + 1)
    words = code.words
    for u in words:
        for v in words:
            counts[(u ^ v).bit_count()] += 1
    return counts


def distance_distribution(code: Code) -> DistanceDistribution:
    counts = _pair_counts(code)
    M = code.M
    return DistanceDistribution(code.n, M, tuple(Fraction(c, M) for c in counts))


def dual_distribution(dist: DistanceDistribution) -> DualDistribution:
    n, M = dist.n, dist.M
    K = krawtchouk_matrix(n)
    b = tuple(sum(K[i][j] * dist.a[j] for j in range(n + 1)) / M for i in range(n + 1))
    return DualDistribution(n, b)


def local_weight_distribution(code: Code, x: int) -> list[int]:
    """Number of codewords at each distance 0..n from the codeword ``x``."""
    if x not in code:
        raise ValueError("x is not a codeword of this code")
    out = [0] * (code.n + 1)
    for w in code.words:
        out[(w ^ x).bit_count()] += 1
    return out


def mass_beyond(dist: DistanceDistribution, p) -> Fraction:
    """L = sum of a_w over w strictly greater than 2pn."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    cut = 2 * p * dist.n
    return sum((a for w, a in enumerate(dist.a) if w > cut), Fraction(0))


def plotkin_average(dist: DistanceDistribution) -> Fraction:
    """Expected distance between two codewords drawn uniformly with replacement."""
    return sum(i * a for i, a in enumerate(dist.a)) / dist.M


@dataclass(frozen=True)
class PlessMoment:
    r: int
    lhs: Fraction
    rhs: Fraction
    applies: bool


def pless_moment(dist: DistanceDistribution, r: int, dual: DualDistribution | None = None) -> PlessMoment:
    """Both sides of the r-th power-moment identity, and whether r < d-perp."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    n = dist.n
    half = Fraction(n, 2)
    lhs = sum((half - i) ** r * a for i, a in enumerate(dist.a)) / dist.M
    rhs = sum((half - i) ** r * comb(n, i) for i in range(n + 1)) / Fraction(2**n)
    if dual is None:
        dual = dual_distribution(dist)
    return PlessMoment(r, lhs, rhs, r < dual.dual_distance)


@dataclass(frozen=True)
class ConcentrationTail:
    epsilon: Fraction
    exact_tail: Fraction
    chebyshev_bound: Fraction


def concentration_tail(dist: DistanceDistribution, epsilon) -> ConcentrationTail:
    """Pr(d >= n(1/2+eps)) for a with-replacement pair, next to the bound 1/(4 n eps^2)."""
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    n = dist.n
    cut = n * (Fraction(1, 2) + eps)
    tail = sum((a for i, a in enumerate(dist.a) if i >= cut), Fraction(0)) / dist.M
    return ConcentrationTail(eps, tail, 1 / (4 * n * eps * eps))
