"""Photon-level Monte Carlo of BB84 through a noisy chain of eavesdroppers.

States are kept in the four-element BB84 set (basis, bit) with global phases
dropped.  One depolarizing event happens per photon, in the segment drawn
from ``chain.qs``.  Eavesdropper ``i`` intercepts with probability
``omega_i``, measures in a random basis and re-prepares what she saw; when she
lets the photon pass she writes a random bit in her record instead.

``run`` works on fixed-size photon blocks.  Block ``k`` draws from a
generator seeded by ``(seed, k)``, so the estimate is the same for any number
of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import AttackChain, ChannelNoise, bob_agreement, eve_agreement

Z, X = "Z", "X"
PAULIS = ("I", "X", "Y", "Z")
BLOCK_SIZE = 1 << 16
Z_FLAG = 5.0


class SimulationError(RuntimeError):
    pass


class ZScoreError(SimulationError, ValueError):
    """Zero standard error with a nonzero discrepancy."""


@dataclass(frozen=True)
class PhotonState:
    basis: str
    bit: int

    def __post_init__(self):
        if self.basis not in (Z, X) or self.bit not in (0, 1):
            raise ValueError(f"not a BB84 state: ({self.basis!r}, {self.bit!r})")


def apply_pauli(state: PhotonState, op: str) -> PhotonState:
    """Pauli action on a BB84 state, up to global phase.

    X flips Z-basis states, Z flips X-basis states, Y flips both, I nothing.
    """
    if op not in PAULIS:
        raise ValueError(f"unknown Pauli operator {op!r}")
    flips = op == "Y" or (op == "X" and state.basis == Z) or (op == "Z" and state.basis == X)
    return PhotonState(state.basis, state.bit ^ 1) if flips else state


def apply_depolarizing(state: PhotonState, p: float, rng: np.random.Generator) -> PhotonState:
    u = rng.random()
    if u < 1.0 - p:
        return state
    op = PAULIS[1 + min(int(3.0 * (u - (1.0 - p)) / p), 2)]
    return apply_pauli(state, op)


def measure(state: PhotonState, basis: str, rng: np.random.Generator) -> int:
    """Ideal projective measurement: exact in the matching basis, a coin otherwise."""
    if basis == state.basis:
        return state.bit
    return int(rng.integers(2))


@dataclass(frozen=True)
class Transcript:
    alice: PhotonState
    eve_bits: tuple[int, ...]
    eve_intercepted: tuple[bool, ...]
    bob_basis: str
    bob_bit: int
    noise_segment: int  # 1-based, 1..N+1

    @property
    def sifted(self) -> bool:
        return self.bob_basis == self.alice.basis


def _basis(rng: np.random.Generator) -> str:
    return Z if rng.integers(2) == 0 else X


def transmit_photon(channel, chain: AttackChain, rng: np.random.Generator) -> Transcript:
    """Send one photon from Alice through every eavesdropper to Bob."""
    p = channel.p if isinstance(channel, ChannelNoise) else ChannelNoise(channel).p
    alice = PhotonState(_basis(rng), int(rng.integers(2)))
    segment = 1 + int(rng.choice(chain.n + 1, p=chain.qs))
    photon = alice
    bits, flags = [], []
    for i, omega in enumerate(chain.omegas, start=1):
        if segment == i:
            photon = apply_depolarizing(photon, p, rng)
        if rng.random() < omega:
            basis = _basis(rng)
            bit = measure(photon, basis, rng)
            photon = PhotonState(basis, bit)
            flags.append(True)
        else:
            bit = int(rng.integers(2))
            flags.append(False)
        bits.append(bit)
    if segment == chain.n + 1:
        photon = apply_depolarizing(photon, p, rng)
    bob_basis = _basis(rng)
    bob_bit = measure(photon, bob_basis, rng)
    return Transcript(alice, tuple(bits), tuple(flags), bob_basis, bob_bit, segment)


@dataclass(frozen=True)
class SimConfig:
    n_photons: int
    seed: int = 0

    def __post_init__(self):
        if self.n_photons < 1:
            raise ValueError("n_photons must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float


def _estimate(hits: int, n: int) -> Estimate:
    v = hits / n
    return Estimate(v, math.sqrt(v * (1.0 - v) / n))


@dataclass(frozen=True)
class SimEstimate:
    n_photons: int
    sifted_count: int
    bob_hits: int
    eve_hits: tuple[int, ...]

    @property
    def bob_agreement_hat(self) -> Estimate:
        return _estimate(self.bob_hits, self.sifted_count)

    @property
    def eve_agreement_hats(self) -> tuple[Estimate, ...]:
        return tuple(_estimate(h, self.sifted_count) for h in self.eve_hits)

    @property
    def sifting_rate(self) -> Estimate:
        return _estimate(self.sifted_count, self.n_photons)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _depolarize(basis, bit, active, p, rng) -> np.ndarray:
    op = rng.choice(4, size=basis.size, p=(1.0 - p, p / 3.0, p / 3.0, p / 3.0))
    flip = (op == 2) | ((op == 1) & (basis == 0)) | ((op == 3) & (basis == 1))
    return bit ^ (flip & active).astype(np.int8)


def _simulate_block(
    size: int, p: float, omegas: tuple[float, ...], qs: tuple[float, ...], rng
) -> tuple[int, int, list[int]]:
    # basis 0 = Z, 1 = X
    n = len(omegas)
    a_basis = rng.integers(2, size=size, dtype=np.int8)
    a_bit = rng.integers(2, size=size, dtype=np.int8)
    segment = rng.choice(n + 1, size=size, p=qs)
    basis, bit = a_basis.copy(), a_bit.copy()
    records = []
    for i, omega in enumerate(omegas):
        bit = _depolarize(basis, bit, segment == i, p, rng)
        intercept = rng.random(size) < omega
        e_basis = rng.integers(2, size=size, dtype=np.int8)
        coin = rng.integers(2, size=size, dtype=np.int8)
        seen = np.where(e_basis == basis, bit, coin)
        records.append(np.where(intercept, seen, coin))
        basis = np.where(intercept, e_basis, basis)
        bit = np.where(intercept, seen, bit)
    bit = _depolarize(basis, bit, segment == n, p, rng)
    b_basis = rng.integers(2, size=size, dtype=np.int8)
    coin = rng.integers(2, size=size, dtype=np.int8)
    b_bit = np.where(b_basis == basis, bit, coin)

    sifted = b_basis == a_basis
    bob_hits = int(np.count_nonzero(sifted & (b_bit == a_bit)))
    eve_hits = [int(np.count_nonzero(sifted & (r == a_bit))) for r in records]
    return int(np.count_nonzero(sifted)), bob_hits, eve_hits


def run(
    sim: SimConfig, channel, chain: AttackChain, workers: int | None = None
) -> SimEstimate:
    """Simulate ``sim.n_photons`` photons and estimate sifted agreements.

    Raises:
        SimulationError: if no photon survives sifting.
    """
    p = channel.p if isinstance(channel, ChannelNoise) else ChannelNoise(channel).p
    sizes = [BLOCK_SIZE] * (sim.n_photons // BLOCK_SIZE)
    if sim.n_photons % BLOCK_SIZE:
        sizes.append(sim.n_photons % BLOCK_SIZE)

    def work(k: int):
        return _simulate_block(sizes[k], p, chain.omegas, chain.qs, _block_rng(sim.seed, k))

    if workers is None or workers <= 1:
        results = [work(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, range(len(sizes))))

    sifted = sum(r[0] for r in results)
    if sifted == 0:
        raise SimulationError(f"no sifted photons out of {sim.n_photons}")
    bob = sum(r[1] for r in results)
    eves = tuple(sum(r[2][i] for r in results) for i in range(chain.n))
    return SimEstimate(sim.n_photons, sifted, bob, eves)


@dataclass(frozen=True)
class ZScore:
    party: str
    hat: float
    stderr: float
    expected: float
    z: float

    @property
    def flagged(self) -> bool:
        return abs(self.z) > Z_FLAG


@dataclass
class ComparisonReport:
    bob: ZScore
    eves: list[ZScore] = field(default_factory=list)

    @property
    def rows(self) -> list[ZScore]:
        return [self.bob, *self.eves]

    @property
    def ok(self) -> bool:
        return not any(r.flagged for r in self.rows)


def _zscore(party: str, est: Estimate, expected: float) -> ZScore:
    diff = est.value - expected
    if est.stderr == 0.0:
        if abs(diff) > 1e-12:
            raise ZScoreError(
                f"{party}: zero standard error with discrepancy {diff!r}; z undefined"
            )
        z = 0.0
    else:
        z = diff / est.stderr
    return ZScore(party, est.value, est.stderr, expected, z)


def compare_to_closed_form(estimate: SimEstimate, channel, chain: AttackChain) -> ComparisonReport:
    """z-scores of every simulated agreement against the closed forms."""
    if len(estimate.eve_hits) != chain.n:
        raise ValueError("estimate and chain disagree on the number of eavesdroppers")
    bob = _zscore("bob", estimate.bob_agreement_hat, bob_agreement(channel, chain))
    eves = [
        _zscore(f"eve{m}", est, eve_agreement(m, channel, chain))
        for m, est in enumerate(estimate.eve_agreement_hats, start=1)
    ]
    return ComparisonReport(bob, eves)


def simulate_many(
    scenarios: Sequence[tuple[float, AttackChain]], n_photons: int, seed: int
) -> list[ComparisonReport]:
    """Run and compare a list of ``(p, chain)`` scenarios with derived seeds."""
    reports = []
    for i, (p, chain) in enumerate(scenarios):
        sub_seed = int(np.random.SeedSequence(seed, spawn_key=(i,)).generate_state(1, np.uint64)[0])
        est = run(SimConfig(n_photons, sub_seed), p, chain)
        reports.append(compare_to_closed_form(est, p, chain))
    return reports
