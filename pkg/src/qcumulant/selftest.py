"""Named end-to-end checks run by ``qcumulant selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .conditions import condition_harness
from .cumulant import correlation_measure, ursell_reconstruct
from .dense_state import random_density_matrix, random_pure_state
from .ghz_analysis import c_coefficient_derivative, c_coefficient_sum
from .stabilizer import dense_measure, random_stabilizer_group, stabilizer_measure
from .states import bell_state, classical_ghz, ghz_state
from .three_qubit import theorem3_harness

KNOWN_C = {2: Fraction(1, 4), 4: Fraction(-1, 8), 6: Fraction(1, 4), 8: Fraction(-17, 16),
           10: Fraction(31, 4), 12: Fraction(-691, 8), 14: Fraction(5461, 4),
           16: Fraction(-929569, 32)}


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


def _random_state(rng: np.random.Generator):
    n = int(rng.integers(2, 5))
    if rng.random() < 0.5:
        return random_pure_state((2,) * n, rng).density()
    return random_density_matrix((2,) * n, rng, rank=int(rng.integers(1, 2 ** n + 1)))


def check_reference_values(seed: int, fast: bool) -> tuple[bool, str]:
    vals = {
        "bell": (correlation_measure(bell_state()), 0.75),
        "classical2": (correlation_measure(classical_ghz(2)), 0.5),
        "classical3": (correlation_measure(classical_ghz(3)), 0.0),
        "ghz3": (correlation_measure(ghz_state(3)), 0.5),
    }
    worst = max(abs(a - b) for a, b in vals.values())
    c_ok = all(c_coefficient_sum(n) == c == c_coefficient_derivative(n) for n, c in KNOWN_C.items())
    return worst <= 1e-10 and c_ok, f"max deviation {worst:.3g}, c_N table {'ok' if c_ok else 'mismatch'}"


def check_conditions(seed: int, fast: bool) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    states = [bell_state(), ghz_state(3)] + [_random_state(rng) for _ in range(3 if fast else 20)]
    trials = 20 if fast else 100
    lui_fails_4 = False
    for i, st in enumerate(states):
        rep = condition_harness(st, seed=rng, trials=trials)
        if not rep.passed("mc"):
            bad = [f"{r.measure}/{r.condition}" for r in rep.failures() if r.measure == "mc"]
            return False, f"state {i}: correlation measure failed {bad}"
        if not rep.passed("mtc"):
            return False, f"state {i}: total correlation failed"
        if not rep.passed("lui", ("1", "2", "3")):
            return False, f"state {i}: LUI-MCF failed conditions 1-3"
        lui_fails_4 |= rep.status("lui", "4") == "fail"
    if not lui_fails_4:
        return False, "LUI-MCF never violated condition 4"
    return True, f"{len(states)} states x {trials} trials"


def check_stabilizer_dense(seed: int, fast: bool) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    count = 10 if fast else 100
    worst = 0.0
    for _ in range(count):
        g = random_stabilizer_group(int(rng.integers(2, 7 if not fast else 5)), rng)
        worst = max(worst, abs(stabilizer_measure(g) - dense_measure(g)))
    return worst <= 1e-9, f"{count} groups, max deviation {worst:.3g}"


def check_ursell(seed: int, fast: bool) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    count = 10 if fast else 50
    worst = 0.0
    for _ in range(count):
        rho = _random_state(rng)
        worst = max(worst, float(np.max(np.abs(ursell_reconstruct(rho).data - rho.data))))
    return worst <= 1e-9, f"{count} states, max deviation {worst:.3g}"


def check_product_detection(seed: int, fast: bool) -> tuple[bool, str]:
    rep = theorem3_harness(seed=seed, trials=1000 if fast else 10_000)
    return rep.ok, f"{rep.trials} samples, {rep.violations} violations, {rep.planted_failures} planted failures"


CHECKS: list[tuple[str, Callable[[int, bool], tuple[bool, str]]]] = [
    ("reference-values", check_reference_values),
    ("conditions", check_conditions),
    ("stabilizer-dense", check_stabilizer_dense),
    ("ursell-identity", check_ursell),
    ("product-detection", check_product_detection),
]


def run_selftest(seed: int = 0, fast: bool = False) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(seed, fast)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, detail))
    return out
