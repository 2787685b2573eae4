#!/usr/bin/env python3
"""Walk through symbols, torus Fourier coefficients and kernel assembly.

The forward difference operator f(k+1) - f(k) is the guiding example: its
symbol is exp(2 pi i theta) - 1, its coefficient row has exactly two
nonzeros, and its truncated matrix reproduces the textbook column action
on basis vectors.
"""

import numpy as np

import lattice_pdo as lp

spec = lp.LatticeSpec(hbar=1.0, dim=1)
box = lp.BoxTruncation(radius=3)

print("lattice points of the radius-3 box:")
print(" ", lp.enumerate_box(spec, box).ravel())

# --- the difference symbol and its coefficients -------------------------
sym = lp.difference_symbol()
print("\nsigma(k, theta) = exp(2 pi i theta) - 1 at a few theta:")
for theta in (0.0, 0.25, 0.5):
    print(f"  theta={theta:4.2f}: {lp.eval_symbol(sym, 0, theta):+.3f}")

print("\ncoefficient of sigma(k, .) at frequencies -2..2 (closed form):")
coeffs = [lp.toroidal_coefficient(sym, 0, m) for m in range(-2, 3)]
print(" ", np.round(coeffs, 12))

print("same by 64-point quadrature (exact for trig polynomials):")
coeffs_q = [lp.toroidal_coefficient(sym, 0, m, force_quadrature=True) for m in range(-2, 3)]
print(" ", np.round(coeffs_q, 12))

# --- kernel assembly and the column display -----------------------------
K = lp.assemble(sym, spec, box)
print("\ntruncated matrix (entry (k, m) = coefficient at m - k):")
print(K.entries.real.astype(int))

print("\napplying the kernel to the basis vector at k=0:")
e0 = np.zeros(K.size)
e0[lp.index_of(spec, box, 0.0)] = 1.0
out = lp.apply(K, e0)
for k, v in zip(K.points().ravel(), out.real):
    if v != 0:
        print(f"  (T e_0)({k:+.0f}) = {v:+.0f}")
print("which is +1 at k = -1 and -1 at k = 0: the difference stencil.")

# --- any finite matrix is such an operator ------------------------------
rng = np.random.default_rng(1)
M = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
K0 = lp.KernelMatrix(spec, box, M)
sigma = lp.symbol_from_matrix(K0)
K1 = lp.assemble(sigma, spec, box)
print("\nmatrix -> symbol -> matrix roundtrip error:",
      f"{np.max(np.abs(K1.entries - K0.entries)):.2e}")
