"""Security thresholds and the sweep tables behind the phase diagrams.

All root finding is one-dimensional bisection along a direction in which the
security margin ``I(A,B) - I_lost`` is known to be monotone decreasing:

* in a common interception probability ``omega`` (Bob's information falls,
  every eavesdropper's information rises or stays put);
* in the last eavesdropper's ``omega_3`` of a three-eavesdropper chain.

The bracket ends are always evaluated first.  When the signs do not straddle
zero a status sentinel is returned instead of a root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    AttackChain,
    ChannelNoise,
    added_error,
    assess,
    binary_entropy,
    lost_information,
)
from .tables import SweepTable

OK = "OK"
ALL_SECURED = "ALL_SECURED"
ALL_UNSECURED = "ALL_UNSECURED"

BISECT_TOL = 1e-10
ROOT_MARGIN_TOL = 1e-8

DEFAULT_P_GRID = np.linspace(0.0, 0.20, 200)
DEFAULT_OMEGA_GRID = np.linspace(0.0, 1.0, 50)


class NoThresholdError(ValueError):
    """No secured/unsecured transition exists along the bisected direction."""

    def __init__(self, status: str, p: float):
        super().__init__(f"no threshold at p={p!r}: {status}")
        self.status = status
        self.p = p


@dataclass(frozen=True)
class QRule:
    """How the noise-location distribution is chosen for an N-eavesdropper chain.

    ``kind="uniform"`` puts the noise event in each of the N + 1 segments with
    probability ``1 / (N + 1)``; ``kind="explicit"`` uses ``qs`` as given.
    """

    kind: str = "uniform"
    qs: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "explicit"):
            raise ValueError(f"unknown q rule {self.kind!r}")
        if self.kind == "explicit":
            if self.qs is None:
                raise ValueError("explicit q rule needs qs")
            object.__setattr__(self, "qs", tuple(float(q) for q in self.qs))
            # validates range and normalization
            AttackChain((0.0,) * (len(self.qs) - 1), self.qs)

    @classmethod
    def explicit(cls, qs: Sequence[float]) -> "QRule":
        return cls("explicit", tuple(qs))

    def qs_for(self, n: int) -> tuple[float, ...]:
        if self.kind == "uniform":
            return (1.0 / (n + 1),) * (n + 1)
        if len(self.qs) != n + 1:
            raise ValueError(f"q rule has {len(self.qs)} entries, need {n + 1} for N={n}")
        return self.qs

    def chain(self, omega: float, n: int) -> AttackChain:
        return AttackChain((omega,) * n, self.qs_for(n))


UNIFORM = QRule()


@dataclass(frozen=True)
class PhaseBoundaryPoint:
    p: float
    omega_star: float | None
    status: str = OK

    @property
    def numeric(self) -> bool:
        return self.status == OK


@dataclass(frozen=True)
class QberPoint:
    p: float
    qber: float
    omega_star: float


def security_margin(channel, chain: AttackChain) -> float:
    """``I(A,B) - I_lost`` in bits; positive means secured."""
    return assess(channel, chain).margin


def bisect_decreasing(
    f: Callable[[float], float], lo: float, hi: float, tol: float = BISECT_TOL
) -> tuple[float | None, str]:
    """Root of a decreasing function on ``[lo, hi]``.

    Returns ``(root, OK)``, or ``(None, ALL_SECURED)`` when ``f(hi) > 0`` and
    ``(None, ALL_UNSECURED)`` when ``f(lo) <= 0``.
    """
    f_lo = f(lo)
    if f_lo <= 0.0:
        return None, ALL_UNSECURED
    f_hi = f(hi)
    if f_hi > 0.0:
        return None, ALL_SECURED
    if f_hi == 0.0:
        return hi, OK
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, OK
        if f_mid > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), OK


def _check_n(n_eves: int) -> int:
    if int(n_eves) != n_eves or n_eves < 1:
        raise ValueError(f"n_eves must be a positive integer, got {n_eves!r}")
    return int(n_eves)


def critical_omega(p: float, n_eves: int, q_rule: QRule = UNIFORM) -> PhaseBoundaryPoint:
    """Common interception probability at which the key stops being secured."""
    n = _check_n(n_eves)
    channel = ChannelNoise(p)
    q_rule.qs_for(n)
    root, status = bisect_decreasing(
        lambda w: security_margin(channel, q_rule.chain(w, n)), 0.0, 1.0
    )
    return PhaseBoundaryPoint(channel.p, root, status)


def qber_at(p: float, n_eves: int, q_rule: QRule = UNIFORM) -> QberPoint:
    """Error probability added by the attack exactly at the security threshold.

    Raises:
        NoThresholdError: when the whole omega range is secured or unsecured.
    """
    point = critical_omega(p, n_eves, q_rule)
    if not point.numeric:
        raise NoThresholdError(point.status, point.p)
    n = _check_n(n_eves)
    qber = added_error(point.p, (point.omega_star,) * n)
    return QberPoint(point.p, qber, point.omega_star)


def _check_grid(grid: Sequence[float], name: str = "p_grid") -> list[float]:
    values = [float(x) for x in grid]
    if not values:
        raise ValueError(f"{name} is empty")
    return values


def _check_increasing(values: list[float], name: str = "p_grid") -> None:
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")


QBER_COLUMNS = ("p", "omega_star", "qber", "i_ab", "i_ae_max", "h_delta", "status")


def qber_curve(p_grid: Sequence[float], n_eves: int, q_rule: QRule = UNIFORM) -> SweepTable:
    """QBER threshold as a function of p.

    Rows without a threshold leave ``omega_star`` and ``qber`` empty and carry
    the sentinel in ``status``; their information columns are evaluated at the
    bracket end that decided the sentinel (omega = 0 for ``ALL_UNSECURED``,
    omega = 1 for ``ALL_SECURED``).
    """
    ps = _check_grid(p_grid)
    _check_increasing(ps)
    n = _check_n(n_eves)
    table = SweepTable(QBER_COLUMNS)
    for p in ps:
        point = critical_omega(p, n, q_rule)
        if point.numeric:
            omega = point.omega_star
            qber = added_error(p, (omega,) * n)
        else:
            omega = 0.0 if point.status == ALL_UNSECURED else 1.0
            qber = None
        a = assess(p, q_rule.chain(omega, n))
        table.append(
            (p, point.omega_star, qber, a.i_ab, a.i_ae_max, a.h_delta, point.status)
        )
    return table


def lost_info_curve(
    p_grid: Sequence[float], omega: float, q1_values: Sequence[float]
) -> SweepTable:
    """Lost information for a single eavesdropper over p, for several noise positions."""
    ps = _check_grid(p_grid)
    q1s = _check_grid(q1_values, "q1_values")
    table = SweepTable(("p", "q1", "i_lost"))
    for q1 in q1s:
        chain = AttackChain((omega,), (q1, 1.0 - q1))
        for p in ps:
            table.append((p, q1, lost_information(p, chain)))
    return table


def phase_boundary_2d(
    p_grid: Sequence[float] = DEFAULT_P_GRID, n_eves: int = 1, q_rule: QRule = UNIFORM
) -> SweepTable:
    """Secured/unsecured boundary in the (p, omega) plane."""
    ps = _check_grid(p_grid)
    table = SweepTable(("p", "omega_star", "status"))
    for p in ps:
        point = critical_omega(p, n_eves, q_rule)
        table.append((point.p, point.omega_star, point.status))
    return table


def critical_omega3(
    omega1: float, omega2: float, p: float, qs: Sequence[float]
) -> PhaseBoundaryPoint:
    """Threshold in the third eavesdropper's interception probability."""
    channel = ChannelNoise(p)
    qs = tuple(qs)
    if len(qs) != 4:
        raise ValueError(f"three-eavesdropper chain needs 4 q values, got {len(qs)}")
    AttackChain((omega1, omega2, 0.0), qs)
    root, status = bisect_decreasing(
        lambda w3: security_margin(channel, AttackChain((omega1, omega2, w3), qs)), 0.0, 1.0
    )
    return PhaseBoundaryPoint(channel.p, root, status)


def phase_surface_3d(
    omega1_grid: Sequence[float] = DEFAULT_OMEGA_GRID,
    omega2_grid: Sequence[float] = DEFAULT_OMEGA_GRID,
    p: float = 0.05,
    qs: Sequence[float] = (0.25, 0.25, 0.25, 0.25),
) -> SweepTable:
    """Boundary surface ``omega3*(omega1, omega2)`` for three eavesdroppers."""
    w1s = _check_grid(omega1_grid, "omega1_grid")
    w2s = _check_grid(omega2_grid, "omega2_grid")
    table = SweepTable(("omega1", "omega2", "omega3_star", "status"))
    for w1 in w1s:
        for w2 in w2s:
            point = critical_omega3(w1, w2, p, qs)
            table.append((w1, w2, point.omega_star, point.status))
    return table


def critical_noise_no_attack(tol: float = BISECT_TOL) -> float:
    """Depolarizing parameter above which even an unattacked key is unsecured.

    Solves ``H(2p/3) = 1/2``; the entropy rises monotonically for p in [0, 3/4].
    """
    lo, hi = 0.0, 0.75
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(2.0 * mid / 3.0) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid(lo: float, hi: float, steps: int) -> np.ndarray:
    """Inclusive evenly spaced grid with ``steps`` points."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, steps)
