#!/usr/bin/env python3
"""Criterion sums versus the order-condition decision engine.

Two contrasting symbols: the decaying family (1+|k|)^-3 (2 + cos) whose
sums settle as the box grows, and the unbounded multiplier |k| whose
l1 -> linf criterion value doubles with every box doubling.  The engine
predicts both from the symbol order alone.
"""

import lattice_pdo as lp

spec = lp.LatticeSpec(1.0, 1)

# --- a symbol whose operator is nuclear ----------------------------------
sym = lp.decaying_test_symbol(s=3.0, a=2.0, b=1.0)
print("decaying symbol, order mu =", sym.order.mu)
print("nuclear partial sums (r=1, p2=2):")
for radius in (50, 100, 200, 400):
    K = lp.assemble(sym, spec, lp.BoxTruncation(radius))
    print(f"  R={radius:4d}: {lp.nuclear_sum(K, 1.0, 2.0):.9f}")

query = lp.CriterionQuery(p=2.0, r=1.0, p2=2.0, n=1)
report = lp.order_conditions(sym.order, query)
print("engine verdicts:", report.verdicts)
print("eigenvalue decay exponent t:", report.decay_exponent_t)

# --- the sharpness witness ------------------------------------------------
mult = lp.multiplication_symbol(epsilon=1.0)
print("\nmultiplier |k|, order mu = +1; sup-entry values under box doubling:")
prev = None
for radius in (50, 100, 200):
    v = lp.sup_entry(lp.assemble(mult, spec, lp.BoxTruncation(radius)))
    ratio = f"  (x{v / prev:.2f})" if prev else ""
    print(f"  R={radius:4d}: {v:8.1f}{ratio}")
    prev = v
print("engine verdicts:", lp.order_conditions(mult.order, query).verdicts)

# --- empirical decay constants and the neglected-mass bound ---------------
decay = lp.estimate_decay_constant(sym, q_tilde=1, k_radius=20, m_radius=6)
print(f"\nempirical decay constant (q~=1): {decay.constant:.3f}, "
      f"coefficient support radius: {decay.support_radius}")
for radius in (50, 100, 200):
    tb = lp.truncation_tail_bound(sym.order, decay, radius)
    print(f"  mass outside the R={radius} box is at most {tb.value:.3e}")
