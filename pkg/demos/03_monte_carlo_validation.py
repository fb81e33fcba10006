"""Photon-by-photon simulation checked against the closed forms.

    python demos/03_monte_carlo_validation.py
"""

import numpy as np

from bb84eve import AttackChain
from bb84eve.montecarlo import SimConfig, compare_to_closed_form, run, transmit_photon

# %% A few photons by hand.
rng = np.random.default_rng(1)
chain = AttackChain((0.7, 0.4), (0.2, 0.5, 0.3))
for _ in range(5):
    print(transmit_photon(0.2, chain, rng))

# %% A million photons per scenario; every z-score should sit well inside +-5.
scenarios = [
    (0.0, AttackChain((1.0,), (0.5, 0.5))),
    (0.3, AttackChain((1.0,), (1.0, 0.0))),
    (0.1, AttackChain((0.3, 0.8, 0.5), (0.1, 0.2, 0.3, 0.4))),
]
for seed, (p, chain) in enumerate(scenarios):
    est = run(SimConfig(1_000_000, seed), p, chain, workers=4)
    report = compare_to_closed_form(est, p, chain)
    print(f"p={p} omegas={chain.omegas} sifted={est.sifted_count}")
    for row in report.rows:
        print(f"   {row.party:5s} hat={row.hat:.5f} closed={row.expected:.5f} z={row.z:+.2f}")

# %% Bob cannot tell where the noise hit; Eve can.
a = run(SimConfig(1_000_000, 10), 0.3, AttackChain((1.0,), (1.0, 0.0)))
b = run(SimConfig(1_000_000, 11), 0.3, AttackChain((1.0,), (0.0, 1.0)))
print("Bob:", a.bob_agreement_hat.value, b.bob_agreement_hat.value)
print("Eve:", a.eve_agreement_hats[0].value, b.eve_agreement_hats[0].value)
