"""
Monte Carlo transmission engine and its exact-enumeration counterpart.

Each trial ``t`` owns a ``random.Random`` seeded by mixing ``(master_seed, t)``,
and partial results only carry integer counts, so merging is exact and the
final report does not depend on how trials were spread over workers.
"""

from __future__ import annotations

import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .adversary import (
    BscFlip,
    Confuser,
    ExactChannel,
    StrategyKind,
    StrongComposite,
    exact_error_model,
    resolve,
    setup_bsc,
    setup_confuser,
)
from .codespace import Code

__all__ = [
    "DEFAULT_EPSILONS",
    "SimReport",
    "TrialRecord",
    "exact_error_probability",
    "min_distance_decode",
    "run_trial",
    "run_trials",
    "trial_seed",
    "weak_limit_check",
    "wilson_interval",
]

DEFAULT_EPSILONS = (0.01, 0.05, 0.1)
_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(master_seed: int, t: int) -> int:
    return _splitmix64(_splitmix64(master_seed & _MASK64) ^ t)


def min_distance_decode(code: Code, received: int, tie_rng: random.Random) -> int:
    """Nearest codeword to ``received``; ties broken uniformly with ``tie_rng``."""
    best = None
    best_d = code.n + 1
    for w in code.words:
        d = (w ^ received).bit_count()
        if d < best_d:
            best_d = d
            best = [w]
        elif d == best_d:
            best.append(w)
    if len(best) == 1:
        return best[0]
    return best[tie_rng.randrange(len(best))]


@dataclass(frozen=True)
class TrialRecord:
    transmitted: int
    error_vector: int
    received: int
    decoded: int

    @property
    def success(self) -> bool:
        return self.decoded == self.transmitted


def run_trial(code: Code, kind: BscFlip | Confuser, seed: int) -> TrialRecord:
    rng = random.Random(seed)
    c = code.words[rng.randrange(code.M)]
    adv_seed = rng.getrandbits(64)
    if isinstance(kind, BscFlip):
        session = setup_bsc(kind.p, adv_seed, code.n)
    else:
        session = setup_confuser(code, adv_seed)
    e = session.error_vector(c)
    y = c ^ e
    return TrialRecord(c, e, y, min_distance_decode(code, y, rng))


@dataclass
class _Tally:
    """Integer-only partial counts; ``merge`` is associative and commutative."""

    n: int
    failures: int = 0
    weights: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.weights:
            self.weights = [0] * (self.n + 1)

    def merge(self, other: "_Tally") -> "_Tally":
        return _Tally(
            self.n,
            self.failures + other.failures,
            [a + b for a, b in zip(self.weights, other.weights)],
        )


def _run_range(code: Code, kind: BscFlip | Confuser, master_seed: int, start: int, stop: int) -> _Tally:
    tally = _Tally(code.n)
    for t in range(start, stop):
        rec = run_trial(code, kind, trial_seed(master_seed, t))
        if not rec.success:
            tally.failures += 1
        tally.weights[rec.error_vector.bit_count()] += 1
    return tally


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass(frozen=True)
class SimReport:
    trials: int
    n: int
    p: float
    failures: int
    weight_histogram: tuple[int, ...]
    epsilons: tuple[float, ...]
    strategy: dict
    diagnostics: dict
    seed: int

    @property
    def avg_error_rate(self) -> float:
        return self.failures / self.trials

    @property
    def error_rate_ci95(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)

    @property
    def mean_error_weight(self) -> float:
        """Mean of wt(e)/n over trials."""
        total = sum(w * k for w, k in enumerate(self.weight_histogram))
        return total / (self.trials * self.n)

    @property
    def error_weight_stderr(self) -> float:
        """Standard error of ``mean_error_weight`` from the sample variance."""
        T = self.trials
        if T < 2:
            return 0.0
        s1 = sum(w * k for w, k in enumerate(self.weight_histogram))
        s2 = sum(w * w * k for w, k in enumerate(self.weight_histogram))
        var = max(0.0, (s2 - s1 * s1 / T) / (T - 1))
        return math.sqrt(var / T) / self.n

    def strong_limit_count(self, eps: float) -> int:
        cut = (self.p + eps) * self.n
        return sum(k for w, k in enumerate(self.weight_histogram) if w < cut)

    @property
    def strong_limit_freq(self) -> dict[float, float]:
        return {e: self.strong_limit_count(e) / self.trials for e in self.epsilons}

    @property
    def chernoff_reference(self) -> dict[float, float]:
        return {e: math.exp(-2 * self.n * e * e) for e in self.epsilons}

    def as_dict(self) -> dict:
        lo, hi = self.error_rate_ci95
        return {
            "trials": self.trials,
            "avg_error_rate": self.avg_error_rate,
            "error_rate_ci95": [lo, hi],
            "mean_error_weight": self.mean_error_weight,
            "weight_histogram": {str(w): k for w, k in enumerate(self.weight_histogram) if k},
            "strong_limit_freq": {repr(e): v for e, v in self.strong_limit_freq.items()},
            "chernoff_reference": {repr(e): v for e, v in self.chernoff_reference.items()},
            "strategy": self.strategy,
            "diagnostics": self.diagnostics,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def default_workers() -> int:
    """Worker cap: ADVLAB_THREADS when set, otherwise the CPU count."""
    cap = os.environ.get("ADVLAB_THREADS")
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_trials(
    code: Code,
    kind: StrategyKind,
    trials: int,
    master_seed: int,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    workers: int | None = None,
) -> SimReport:
    """Estimate the average decoding error of ``code`` against one strategy.

    The strong-limit frequencies are Pr(wt(e)/n < p + eps), where ``p`` is the
    strategy's own error fraction (1/4 for a bare confuser).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    concrete, selection = resolve(code, kind)
    if workers is None:
        workers = default_workers()
    workers = max(1, min(workers, trials))

    if workers == 1:
        tally = _run_range(code, concrete, master_seed, 0, trials)
    else:
        bounds = [trials * k // workers for k in range(workers + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_range, code, concrete, master_seed, bounds[k], bounds[k + 1])
                for k in range(workers)
            ]
            tally = _Tally(code.n)
            for fut in futures:
                tally = tally.merge(fut.result())

    strategy = {"requested": kind.name, "kind": concrete.name, "p": kind.p}
    if isinstance(kind, StrongComposite):
        strategy["c"] = kind.c
    diagnostics = selection.as_dict() if selection else {"branch": concrete.name}
    return SimReport(
        trials=trials,
        n=code.n,
        p=float(kind.p),
        failures=tally.failures,
        weight_histogram=tuple(tally.weights),
        epsilons=tuple(float(e) for e in epsilons),
        strategy=strategy,
        diagnostics=diagnostics,
        seed=master_seed,
    )


@dataclass(frozen=True)
class WeakLimitCheck:
    ok: bool
    margin: float
    mean_error_weight: float
    stderr: float


def weak_limit_check(report: SimReport, p: float) -> WeakLimitCheck:
    """Is the empirical mean error fraction within 3 standard errors of at most ``p``?"""
    se = report.error_weight_stderr
    margin = p + 3 * se - report.mean_error_weight
    return WeakLimitCheck(margin >= 0, margin, report.mean_error_weight, se)


def exact_error_probability(code: Code, kind: StrategyKind | ExactChannel) -> Fraction:
    """Exact average error of the min-distance decoder (uniform tie-breaking)."""
    model = kind if isinstance(kind, ExactChannel) else exact_error_model(code, kind)
    words = code.words
    nearest: dict[int, tuple[int, ...]] = {}
    success = Fraction(0)
    for (ci, y), pr in model.joint.items():
        best = nearest.get(y)
        if best is None:
            dists = [(w ^ y).bit_count() for w in words]
            m = min(dists)
            best = tuple(i for i, d in enumerate(dists) if d == m)
            nearest[y] = best
        if ci in best:
            success += pr / len(best)
    return 1 - success
