"""Security thresholds and phase-diagram tables.

Computes the tables behind each figure-style sweep and writes them as CSV
into ``demo_output/``.  Plot them with any tool you like.

    python demos/02_phase_diagrams.py
"""

from pathlib import Path

import numpy as np

from bb84eve import (
    QRule,
    critical_noise_no_attack,
    critical_omega,
    lost_info_curve,
    phase_boundary_2d,
    phase_surface_3d,
    qber_at,
    qber_curve,
)

out = Path("demo_output")
out.mkdir(exist_ok=True)

# %% Even without eavesdroppers the key is lost once H(2p/3) reaches 1/2.
p_crit = critical_noise_no_attack()
print(f"no-attack threshold p = {p_crit:.6f}")

# %% The boundary omega*(p) for one eavesdropper with q1 = 1/2.
half = QRule.explicit((0.5, 0.5))
for p in (0.0, 0.05, 0.1, 0.15, 0.17):
    print(p, critical_omega(p, 1, half))

# %% QBER at the threshold.  At p = 0 a single eavesdropper gives the textbook
# 25 %; two of them need a lower omega but disturb more in total.
for n in (1, 2, 3):
    print(f"N={n}: QBER(p=0) = {qber_at(0.0, n).qber:.6f}")

# %% Tables.
ps = np.linspace(0.0, 0.2, 200)
(out / "qber_n1.csv").write_text(qber_curve(np.linspace(0, 0.25, 200), 1, half).to_csv())
(out / "lost_info.csv").write_text(
    lost_info_curve(np.linspace(0, 0.25, 200), 0.8, [0.0, 0.5, 1.0]).to_csv()
)
(out / "phase2d_n1.csv").write_text(phase_boundary_2d(ps, 1, half).to_csv())
for n in (1, 2, 3):
    (out / f"phase2d_uniform_n{n}.csv").write_text(phase_boundary_2d(ps, n).to_csv())
    (out / f"qber_uniform_n{n}.csv").write_text(qber_curve(ps, n).to_csv())
g = np.linspace(0, 1, 50)
for p in (0.05, 0.1):
    (out / f"phase3d_p{p}.csv").write_text(phase_surface_3d(g, g, p).to_csv())
print("wrote", sorted(f.name for f in out.glob("*.csv")))
