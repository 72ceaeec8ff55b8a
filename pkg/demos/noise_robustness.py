"""
How much white noise can the witness tolerate?
==============================================

The witness value of p * ideal + (1 - p) * noise is affine in p, so a
single root marks where entanglement detection stops.
"""

import numpy as np

from fockwitness import (enumerate_basis, evaluate, mix, mixture_threshold, phi_partition,
                         uniform_mixture)
from fockwitness.witness import sample_separable_witness

law = mixture_threshold(4, 2)
print(f"W(p) = {law.slope:.4f} p {law.offset:+.4f}, positive above p = {law.threshold:.4f}")

b = enumerate_basis(4, 2)
for p in np.linspace(0, 1, 6):
    rho = mix([(p, phi_partition(4, 2)), (1 - p, uniform_mixture(b, b))])
    print(f"  p={p:.1f}  W={evaluate(rho).witness_value:+.4f}")

# random product states stay below zero
values = sample_separable_witness(4, 2, samples=500, seed=1)
print("largest witness value over 500 product states:", f"{values.max():+.4f}")

# larger systems
for M, N in [(5, 2), (6, 3)]:
    law = mixture_threshold(M, N)
    print(f"M={M}, N={N}: ideal W={law.value(1):.4f}, noise threshold p={law.threshold:.4f}")
