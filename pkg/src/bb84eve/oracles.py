"""Cross-checks between the product forms and the literal enumerations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AttackChain,
    bob_agreement,
    eve_agreement,
    eve_agreement_bruteforce,
    noiseless_bob_agreement,
    noiseless_bob_agreement_bruteforce,
)

TOL = 1e-12


def single_eve_bob(p: float, omega: float) -> float:
    """Bob's agreement for one eavesdropper, written out directly."""
    return (1 - 2 * p / 3) * (1 - omega / 4) + omega * p / 6


def single_eve_eve(p: float, omega: float, q1: float) -> float:
    return 0.5 + omega / 4 - p * omega * q1 / 3


@dataclass(frozen=True)
class CheckResult:
    check: str
    trials: int
    max_abs_error: float

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= TOL


def random_chain(rng: np.random.Generator, n: int) -> AttackChain:
    omegas = rng.random(n)
    qs = rng.dirichlet(np.ones(n + 1))
    # occasionally pin values to the edges of their range
    omegas[rng.random(n) < 0.1] = 1.0
    return AttackChain(tuple(omegas), tuple(qs))


def run_checks(n_eves: int, trials: int, seed: int) -> list[CheckResult]:
    """Product form vs enumeration on random draws, plus single-eavesdropper regressions.

    Each trial draws N uniformly from ``1..n_eves``.
    """
    if n_eves < 1 or trials < 1:
        raise ValueError("n_eves and trials must be >= 1")
    rng = np.random.default_rng(seed)
    bob_err = eve_err = reg_bob = reg_eve = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, n_eves + 1))
        chain = random_chain(rng, n)
        p = float(rng.random())
        bob_err = max(
            bob_err,
            abs(noiseless_bob_agreement(chain) - noiseless_bob_agreement_bruteforce(chain)),
        )
        for m in range(1, n + 1):
            eve_err = max(
                eve_err,
                abs(eve_agreement(m, p, chain) - eve_agreement_bruteforce(m, p, chain)),
            )
        w, q1 = float(rng.random()), float(rng.random())
        single = AttackChain((w,), (q1, 1.0 - q1))
        reg_bob = max(reg_bob, abs(bob_agreement(p, single) - single_eve_bob(p, w)))
        reg_eve = max(reg_eve, abs(eve_agreement(1, p, single) - single_eve_eve(p, w, q1)))
    return [
        CheckResult("bob_product_vs_enumeration", trials, bob_err),
        CheckResult("eve_product_vs_enumeration", trials, eve_err),
        CheckResult("single_eve_bob_regression", trials, reg_bob),
        CheckResult("single_eve_eve_regression", trials, reg_eve),
    ]
