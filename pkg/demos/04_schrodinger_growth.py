#!/usr/bin/env python3
"""Discrete anharmonic oscillators: converged spectra and eigenvalue growth.

Eigenvalues of -Delta + |k|^(2l) on the unit lattice grow like j^(2l),
twice the continuum rate: sorted potential values (the diagonal part)
already show it, and Hermitian perturbation keeps the true eigenvalues
within the hopping norm of them.
"""

import numpy as np

import lattice_pdo as lp

spec = lp.LatticeSpec(1.0, 1)

for l in (1, 2):
    pot = lp.PotentialSpec.anharmonic(1.0, l)
    res = lp.spectrum_converged(spec, pot, j_max=300, tol=1e-8, max_dim=1001)
    oracle = lp.weyl_oracle(spec, pot, lp.BoxTruncation(res.radius_used), 300)
    fit = lp.fit_growth_exponent(res, (100, 300), pot.mu)

    print(f"V(k) = |k|^{2 * l}   (order mu = {pot.mu:.0f})")
    print(f"  converged radii scanned: {res.radii_scanned}, final box radius "
          f"{res.radius_used} ({2 * res.radius_used + 1} points)")
    print(f"  lowest eigenvalues: {np.round(res.eigenvalues[:5], 6)}")
    print(f"  max deviation from the sorted-potential oracle: "
          f"{np.max(np.abs(res.eigenvalues - oracle)):.3f}  (hopping bound: 4)")
    print(f"  growth exponent fitted on j in [100, 300]: {fit.slope:.3f}")
    for r, ok in sorted(fit.r_bound_satisfied.items()):
        print(f"    lower bound C j^(1/{r:.2f}) holds on the window: {ok}")
    print()

print("continuum harmonic oscillator eigenvalues grow like j; on the lattice")
print("the harmonic slope above is ~2, and the quartic ~4: the discrete")
print("spectrum grows at the full polynomial order of the potential.")
