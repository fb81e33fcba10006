"""Exact expected agreements by walking every branch of the protocol.

The photon is tracked as a Bloch vector, so the depolarizing channel is the
contraction ``r -> (1 - 4p/3) r`` and a measurement along axis ``e`` gives
outcome ``+1`` with probability ``(1 + r_e) / 2``.  Nothing here reuses the
package's closed forms.
"""

import numpy as np

AXES = {"Z": np.array([0.0, 0.0, 1.0]), "X": np.array([1.0, 0.0, 0.0])}


def exact_agreements(p, omegas, qs):
    n = len(omegas)
    bob = 0.0
    eves = np.zeros(n)

    def walk(i, r, prob, agree, seg, axis, sign):
        nonlocal bob, eves
        if seg == i:
            r = (1.0 - 4.0 * p / 3.0) * r
        if i == n:
            bob += prob * (1.0 + sign * (r @ AXES[axis])) / 2.0
            eves += prob * np.asarray(agree)
            return
        w = omegas[i]
        if w < 1.0:
            walk(i + 1, r, prob * (1.0 - w), agree + [0.5], seg, axis, sign)
        if w > 0.0:
            for e in ("Z", "X"):
                for outcome in (1.0, -1.0):
                    p_out = (1.0 + outcome * (r @ AXES[e])) / 2.0
                    if p_out == 0.0:
                        continue
                    # bit 0 <-> outcome +1 in either basis
                    hit = 1.0 if outcome == sign else 0.0
                    walk(i + 1, outcome * AXES[e], prob * w * 0.5 * p_out,
                         agree + [hit], seg, axis, sign)

    for axis in ("Z", "X"):
        for sign in (1.0, -1.0):
            for seg in range(n + 1):
                if qs[seg] > 0.0:
                    walk(0, sign * AXES[axis], 0.25 * qs[seg], [], seg, axis, sign)
    return bob, list(eves)
