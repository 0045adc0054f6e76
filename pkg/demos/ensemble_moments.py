"""Sanity-check the Haar sampler against closed-form spin moments.

For states drawn uniformly from the Hilbert sphere, the moments of the
populations and of <S_z> have exact rational values; this script estimates
them by Monte Carlo and prints z-scores against the closed forms.

Run:  python demos/ensemble_moments.py
"""

from conjmeas import run_variances, spin_moments_closed_form

SEED = 424242
N_SAMPLES = 100_000
SPINS = [0.5, 1.0, 1.5]

print("closed forms:")
for s in SPINS:
    m = spin_moments_closed_form(s)
    print(
        f"  s={s}:  V_I={m.v_i}  V_F={m.v_f}  C={m.C}  D={m.D}  E={m.E}"
    )

print()
print(f"Monte Carlo with {N_SAMPLES} samples per spin, seed {SEED}:")
table = run_variances(SPINS, samples=N_SAMPLES, seed=SEED)
print("  s    qty   estimate    target      stderr     z")
for s, name, est, target, se, z in table.rows:
    flag = "" if abs(z) < 4 else "  <-- out of band!"
    print(f"  {s:<4} {name:<4} {est:.8f}  {target:.8f}  {se:.2e}  {z:+5.2f}{flag}")

print()
print("all |z| < 4 is expected for a correct sampler.")
