"""Closed-form agreement probabilities and information measures.

Everything here is a pure function of the depolarizing parameter ``p`` and
the attack chain (interception probabilities ``omegas`` and the
noise-location distribution ``qs``).  Agreement probabilities are
``P(receiver bit == Alice bit)`` on sifted positions; the binary symmetric
structure means a single number determines the whole conditional table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

__all__ = [
    "ChannelNoise",
    "AttackChain",
    "SecurityAssessment",
    "BRUTEFORCE_MAX",
    "flip_probability",
    "binary_entropy",
    "mutual_information",
    "noiseless_bob_agreement",
    "noiseless_bob_agreement_bruteforce",
    "bob_agreement",
    "eve_agreement",
    "eve_agreement_bruteforce",
    "eve_information",
    "lost_information",
    "added_error",
    "assess",
]

Q_SUM_TOL = 1e-9
BRUTEFORCE_MAX = 20


def _check_prob(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x!r} is not a probability in [0, 1]")
    return x


def _check_probs(values, name: str) -> tuple[float, ...]:
    out = tuple(map(float, values))
    if not all(0.0 <= x <= 1.0 for x in out):
        for i, x in enumerate(out):
            _check_prob(x, f"{name}[{i}]")
    return out


@dataclass(frozen=True)
class ChannelNoise:
    """Depolarizing channel with parameter ``p``.

    The channel leaves the qubit alone with probability ``1 - p`` and applies
    each Pauli matrix with probability ``p / 3``.
    """

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_prob(self.p, "p"))

    @property
    def delta(self) -> float:
        """Bit-flip rate seen in the preparation basis."""
        return 2.0 * self.p / 3.0


@dataclass(frozen=True)
class AttackChain:
    """N sequential intercept-resend eavesdroppers.

    Attributes:
        omegas: interception probability of each eavesdropper, in the order
            the photon meets them.
        qs: probability that the single noise event occurs in segment i
            (Alice->E1, E1->E2, ..., EN->Bob).  Length ``N + 1``.
    """

    omegas: tuple[float, ...] = ()
    qs: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        omegas = _check_probs(self.omegas, "omega")
        qs = _check_probs(self.qs, "q")
        if len(qs) != len(omegas) + 1:
            raise ValueError(
                f"need len(qs) == len(omegas) + 1, got {len(qs)} and {len(omegas)}"
            )
        total = math.fsum(qs)
        if abs(total - 1.0) > Q_SUM_TOL:
            raise ValueError(f"qs must sum to 1, got {total!r}")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "qs", qs)

    @property
    def n(self) -> int:
        return len(self.omegas)

    @classmethod
    def uniform(cls, omegas: Sequence[float]) -> "AttackChain":
        """Chain whose noise location is uniform over the N + 1 segments."""
        n = len(omegas)
        return cls(tuple(omegas), (1.0 / (n + 1),) * (n + 1))

    @classmethod
    def symmetric(cls, omega: float, n: int, qs: Sequence[float] | None = None) -> "AttackChain":
        """``n`` eavesdroppers sharing the same interception probability."""
        if qs is None:
            return cls.uniform((omega,) * n)
        return cls((omega,) * n, tuple(qs))


@dataclass(frozen=True)
class SecurityAssessment:
    i_ab: float
    i_ae_per_eve: tuple[float, ...]
    i_ae_max: float
    h_delta: float
    i_lost: float
    added_error: float
    secured: bool

    @property
    def margin(self) -> float:
        """Signed security margin ``I(A,B) - I_lost`` in bits."""
        return self.i_ab - self.i_lost


ChannelLike = Union[ChannelNoise, float]


def _p(channel: ChannelLike) -> float:
    if isinstance(channel, ChannelNoise):
        return channel.p
    return ChannelNoise(channel).p


def _omegas(omegas: Sequence[float] | AttackChain) -> tuple[float, ...]:
    if isinstance(omegas, AttackChain):
        return omegas.omegas
    return _check_probs(omegas, "omega")


def flip_probability(channel: ChannelLike) -> float:
    return 2.0 * _p(channel) / 3.0


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with ``0 log 0 = 0``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy domain is [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def mutual_information(agreement: float) -> float:
    """Mutual information of a binary symmetric channel with the given agreement."""
    return 1.0 - binary_entropy(agreement)


def noiseless_bob_agreement(omegas: Sequence[float]) -> float:
    """Bob's agreement on a perfect channel, ``1/2 + 1/2 prod(1 - w_i/2)``.

    Each interception independently randomizes the basis, so ``M``
    interceptions leave agreement ``1/2 + 2**-(M+1)``; averaging ``2**-M``
    over independent interception indicators gives the product.
    """
    ws = _omegas(omegas)
    return 0.5 + 0.5 * math.prod(1.0 - 0.5 * w for w in ws)


def _subset_weights(ws: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """All 2**n interception patterns with their probabilities.

    Returns (number of interceptors per pattern, pattern probability).
    """
    n = len(ws)
    if n == 0:
        return np.zeros(1, dtype=np.int64), np.ones(1)
    patterns = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    w = np.asarray(ws, dtype=float)
    probs = np.where(patterns == 1, w, 1.0 - w).prod(axis=1)
    return patterns.sum(axis=1), probs


def _exact_pattern_sum(ws: Sequence[float], extra: int) -> Fraction:
    total = Fraction(0)
    for pattern in itertools.product((0, 1), repeat=len(ws)):
        weight = Fraction(1)
        for bit, w in zip(pattern, ws):
            fw = Fraction(w)
            weight *= fw if bit else 1 - fw
        m = sum(pattern) + extra
        total += weight * Fraction(2**m + 1, 2 ** (m + 1))
    return total


def noiseless_bob_agreement_bruteforce(omegas: Sequence[float], exact: bool = False) -> float:
    """Literal subset sum over all interception patterns.

    With ``exact=True`` the sum is carried out in rationals (floats are dyadic,
    so the inputs convert without rounding); this is only practical for small N.
    """
    ws = _omegas(omegas)
    if len(ws) > BRUTEFORCE_MAX:
        raise ValueError(f"brute force limited to N <= {BRUTEFORCE_MAX}, got {len(ws)}")
    if exact:
        return float(_exact_pattern_sum(ws, 0))
    counts, probs = _subset_weights(ws)
    # (2^m + 1) / 2^(m+1): agreement after m random-basis re-preparations
    coeffs = (2.0**counts + 1.0) / 2.0 ** (counts + 1)
    return math.fsum(coeffs * probs)


def bob_agreement(channel: ChannelLike, omegas: Sequence[float] | AttackChain) -> float:
    """Alice-Bob agreement with noise; does not depend on where the noise hits."""
    p = _p(channel)
    return noiseless_bob_agreement(omegas) * (1.0 - 4.0 * p / 3.0) + 2.0 * p / 3.0


def _check_index(m: int, chain: AttackChain) -> None:
    if not 1 <= m <= chain.n:
        raise IndexError(f"eavesdropper index {m} outside 1..{chain.n}")


def eve_agreement(m: int, channel: ChannelLike, chain: AttackChain) -> float:
    """Agreement between Alice and the m-th eavesdropper (1-based)."""
    _check_index(m, chain)
    p = _p(channel)
    ws = chain.omegas
    w_m = ws[m - 1]
    a_m = w_m * (0.5 + 0.25 * math.prod(1.0 - 0.5 * w for w in ws[: m - 1]))
    q_m = math.fsum(chain.qs[:m])
    guess = 0.5 * (1.0 - w_m)
    noisy = (1.0 - 4.0 * p / 3.0) * a_m + guess + (2.0 * p / 3.0) * w_m
    clean = guess + a_m
    return q_m * noisy + (1.0 - q_m) * clean


def eve_agreement_bruteforce(m: int, channel: ChannelLike, chain: AttackChain) -> float:
    """Eve m's agreement from the literal pattern enumeration.

    The intercepted branch sums, over interception patterns of eavesdroppers
    ``1..m-1``, the pattern probability times ``omega_m`` times the coefficient
    for ``m - k`` re-preparations (``k`` = non-interceptors).  The noisy and
    clean branches are then combined with weights ``Q_m`` and ``1 - Q_m``.
    """
    _check_index(m, chain)
    if m > BRUTEFORCE_MAX:
        raise ValueError(f"brute force limited to m <= {BRUTEFORCE_MAX}, got {m}")
    p = _p(channel)
    ws = chain.omegas
    w_m = ws[m - 1]
    counts, probs = _subset_weights(ws[: m - 1])
    # counts = interceptors among 1..m-1, so k = (m - 1) - counts and m - k = counts + 1
    coeffs = (2.0 ** (counts + 1) + 1.0) / 2.0 ** (counts + 2)
    inner = math.fsum(coeffs * probs * w_m)
    q_m = math.fsum(chain.qs[:m])
    noisy = (1.0 - 4.0 * p / 3.0) * inner + 0.5 * (1.0 - w_m) + (2.0 / 3.0) * p * w_m
    clean = 0.5 * (1.0 - w_m) + inner
    return noisy * q_m + clean * (1.0 - q_m)


def eve_information(channel: ChannelLike, chain: AttackChain) -> tuple[float, ...]:
    """``I(A, E_m)`` for every eavesdropper m = 1..N."""
    return tuple(
        mutual_information(eve_agreement(m, channel, chain)) for m in range(1, chain.n + 1)
    )


def lost_information(channel: ChannelLike, chain: AttackChain) -> float:
    i_ae = eve_information(channel, chain)
    return max(i_ae, default=0.0) + binary_entropy(flip_probability(channel))


def added_error(channel: ChannelLike, omegas: Sequence[float] | AttackChain) -> float:
    """Error probability added by the attack on top of the channel noise.

    Disagreement at the given omegas minus disagreement with no attack, which
    reduces to ``(1 - B) (1 - 4p/3)``.
    """
    p = _p(channel)
    return (1.0 - noiseless_bob_agreement(omegas)) * (1.0 - 4.0 * p / 3.0)


def assess(channel: ChannelLike, chain: AttackChain) -> SecurityAssessment:
    """Evaluate every information quantity at one parameter point.

    The key counts as secured only when ``I(A,B) > I(A,E) + H(delta)``
    strictly; a tie is reported unsecured.
    """
    channel = channel if isinstance(channel, ChannelNoise) else ChannelNoise(channel)
    i_ab = mutual_information(bob_agreement(channel, chain))
    i_ae = eve_information(channel, chain)
    i_ae_max = max(i_ae, default=0.0)
    h_delta = binary_entropy(channel.delta)
    i_lost = i_ae_max + h_delta
    return SecurityAssessment(
        i_ab=i_ab,
        i_ae_per_eve=i_ae,
        i_ae_max=i_ae_max,
        h_delta=h_delta,
        i_lost=i_lost,
        added_error=added_error(channel, chain),
        secured=i_ab > i_lost,
    )
