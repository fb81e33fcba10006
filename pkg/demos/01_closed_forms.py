"""Closed-form agreement and information quantities.

Walks from the noise-only channel to a single intercept-resend attack and on
to a chain of three eavesdroppers, printing the numbers the security verdict
is built from.

    python demos/01_closed_forms.py
"""

from bb84eve import (
    AttackChain,
    ChannelNoise,
    assess,
    binary_entropy,
    bob_agreement,
    eve_agreement,
    eve_agreement_bruteforce,
    noiseless_bob_agreement,
    noiseless_bob_agreement_bruteforce,
)

# %% Noise only: the bit flips with probability 2p/3 whatever the basis.
for p in (0.0, 0.05, 0.1, 0.165, 0.2):
    a = assess(ChannelNoise(p), AttackChain())
    print(f"p={p:<6} I(A,B)={a.i_ab:.4f}  H(delta)={a.h_delta:.4f}  secured={a.secured}")

# %% One eavesdropper who always intercepts, on a perfect channel.  Bob and
# Eve end up with the same 3/4 agreement, so the margin is exactly zero and
# the point counts as unsecured.
chain = AttackChain((1.0,), (0.5, 0.5))
print("Bob:", bob_agreement(0.0, chain), " Eve:", eve_agreement(1, 0.0, chain))
print(assess(0.0, chain))

# %% Where the noise strikes matters to Eve but never to Bob.
for qs in [(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)]:
    c = AttackChain((0.8,), qs)
    print(f"qs={qs}: Bob {bob_agreement(0.1, c):.5f}  Eve {eve_agreement(1, 0.1, c):.5f}")

# %% Three eavesdroppers.  The product forms agree with the literal
# enumeration over interception patterns.
chain = AttackChain((0.3, 0.8, 0.5), (0.25, 0.25, 0.25, 0.25))
print("noiseless Bob:", noiseless_bob_agreement(chain), noiseless_bob_agreement_bruteforce(chain))
for m in (1, 2, 3):
    print(f"Eve {m}:", eve_agreement(m, 0.1, chain), eve_agreement_bruteforce(m, 0.1, chain))
a = assess(0.1, chain)
print("I(A,E_m) =", [round(x, 5) for x in a.i_ae_per_eve], " margin =", round(a.margin, 5))
print("H(0.11) =", binary_entropy(0.11))
