"""
Memoryless adversary strategies.

A strategy runs in two phases. ``setup_*`` sees the whole code and draws every
random bit the run will ever use; the resulting :class:`AdversarySession` then
answers ``act(i, b)`` from the position and the current transmitted bit alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .codespace import Code, as_fraction, distance_distribution, mass_beyond

__all__ = [
    "AdversarySession",
    "BscFlip",
    "Confuser",
    "ExactChannel",
    "InstanceTooLarge",
    "Selection",
    "StrongComposite",
    "confuser_kernel",
    "exact_error_model",
    "select_strong_strategy",
    "setup",
    "setup_bsc",
    "setup_confuser",
]

QUARTER = Fraction(1, 4)
DEFAULT_C = 0.1


@dataclass(frozen=True)
class BscFlip:
    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("crossover probability must lie in [0, 1]")

    name = "bsc"


@dataclass(frozen=True)
class Confuser:
    # `p` is the error fraction the run is audited against; the action ignores it.
    p: float = 0.25

    name = "confuser"


@dataclass(frozen=True)
class StrongComposite:
    p: float
    c: float = DEFAULT_C

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if not 0 < self.c < 1:
            raise ValueError("decision constant c must lie in (0, 1)")

    name = "strong"


StrategyKind = Union[BscFlip, Confuser, StrongComposite]


class AdversarySession:
    """Post-setup state of one adversary run; ``act`` is a pure function of (i, b)."""

    __slots__ = ("kind", "n", "hidden", "coins")

    def __init__(self, kind: str, n: int, coins: int, hidden: int | None = None):
        self.kind = kind
        self.n = n
        self.coins = coins
        self.hidden = hidden

    def act(self, i: int, b: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside 0..{self.n - 1}")
        u = (self.coins >> i) & 1
        if self.hidden is None:
            return u
        return u if b != (self.hidden >> i) & 1 else 0

    def error_vector(self, word: int) -> int:
        """Error pattern for a whole transmitted word; bitwise identical to calling act per position."""
        if self.hidden is None:
            return self.coins
        return self.coins & (word ^ self.hidden)

    def coin_list(self) -> list[int]:
        return [(self.coins >> i) & 1 for i in range(self.n)]

    def __repr__(self):
        return f"AdversarySession(kind={self.kind!r}, n={self.n})"


def setup_bsc(p: float, seed: int, n: int) -> AdversarySession:
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    coins = 0
    if p >= 1:
        coins = (1 << n) - 1
    elif p > 0:
        for i in range(n):
            if rng.random() < p:
                coins |= 1 << i
    return AdversarySession("bsc", n, coins)


def setup_confuser(code: Code, seed: int) -> AdversarySession:
    rng = random.Random(seed)
    hidden = code.words[rng.randrange(code.M)]
    coins = rng.getrandbits(code.n)
    return AdversarySession("confuser", code.n, coins, hidden)


@dataclass(frozen=True)
class Selection:
    kind: BscFlip | Confuser
    branch: str  # "bsc-low-p", "confuser", or "bsc-skewed"
    L: Fraction
    ratio: Fraction
    p: float
    c: float

    def as_dict(self) -> dict:
        return {
            "branch": self.branch,
            "resolved": self.kind.name,
            "p": self.p,
            "c": self.c,
            "L": str(self.L),
            "L_float": float(self.L),
            "ratio": str(self.ratio),
            "ratio_float": float(self.ratio),
        }


def select_strong_strategy(code: Code, p: float, c: float = DEFAULT_C) -> Selection:
    """Resolve the strongly-limited strategy for ``code`` at error fraction ``p``.

    p <= 1/4 flips like a BSC(p). Above 1/4 the mass L of the distance
    distribution beyond 2pn decides: L/M < c picks the confuser, otherwise BSC(p).
    """
    StrongComposite(p, c)  # range checks
    L = mass_beyond(distance_distribution(code), p)
    ratio = L / code.M
    if as_fraction(p) <= QUARTER:
        return Selection(BscFlip(p), "bsc-low-p", L, ratio, p, c)
    if ratio < as_fraction(c):
        return Selection(Confuser(p), "confuser", L, ratio, p, c)
    return Selection(BscFlip(p), "bsc-skewed", L, ratio, p, c)


def resolve(code: Code, kind: StrategyKind) -> tuple[BscFlip | Confuser, Selection | None]:
    if isinstance(kind, StrongComposite):
        sel = select_strong_strategy(code, kind.p, kind.c)
        return sel.kind, sel
    return kind, None


def setup(code: Code, kind: StrategyKind, seed: int) -> AdversarySession:
    concrete, _ = resolve(code, kind)
    if isinstance(concrete, BscFlip):
        return setup_bsc(concrete.p, seed, code.n)
    return setup_confuser(code, seed)


# ---------------------------------------------------------------------------
# Exact enumeration


class InstanceTooLarge(ValueError):
    pass


MAX_EXACT_M = 64
MAX_EXACT_N = 16


def _subsets(mask: int):
    s = 0
    while True:
        yield s
        if s == mask:
            return
        s = (s - mask) & mask


def confuser_kernel(c: int, x: int) -> dict[int, Fraction]:
    """Pr(y | transmitted c, hidden x) when the coins are fair."""
    diff = c ^ x
    w = Fraction(1, 2 ** diff.bit_count())
    return {c ^ s: w for s in _subsets(diff)}


@dataclass(frozen=True)
class ExactChannel:
    """Joint law of (transmitted codeword index, received word) under one strategy."""

    code: Code
    kind: BscFlip | Confuser
    joint: dict[tuple[int, int], Fraction]

    def conditional(self, ci: int) -> dict[int, Fraction]:
        M = self.code.M
        return {y: pr * M for (i, y), pr in self.joint.items() if i == ci}

    def expected_error_weight(self) -> Fraction:
        words = self.code.words
        return sum((pr * (words[i] ^ y).bit_count() for (i, y), pr in self.joint.items()), Fraction(0))


def exact_error_model(code: Code, kind: StrategyKind) -> ExactChannel:
    """Enumerate the channel exactly: uniform codeword, hidden pick and every coin pattern."""
    if code.M > MAX_EXACT_M or code.n > MAX_EXACT_N:
        raise InstanceTooLarge(
            f"exact model limited to M <= {MAX_EXACT_M}, n <= {MAX_EXACT_N} (got M={code.M}, n={code.n})"
        )
    concrete, _ = resolve(code, kind)
    M, n, words = code.M, code.n, code.words
    joint: dict[tuple[int, int], Fraction] = {}
    if isinstance(concrete, Confuser):
        w_pair = Fraction(1, M * M)
        for ci, c in enumerate(words):
            for x in words:
                for y, pr in confuser_kernel(c, x).items():
                    key = (ci, y)
                    joint[key] = joint.get(key, 0) + w_pair * pr
    else:
        p = as_fraction(concrete.p)
        q = 1 - p
        by_weight = [p**k * q ** (n - k) / M for k in range(n + 1)]
        for ci, c in enumerate(words):
            for e in range(1 << n):
                pr = by_weight[e.bit_count()]
                if pr:
                    joint[(ci, c ^ e)] = pr
    return ExactChannel(code, concrete, joint)
