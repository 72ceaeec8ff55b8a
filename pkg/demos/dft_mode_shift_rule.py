"""
DFT outputs and cyclic pattern classes
======================================

A discrete Fourier transform maps the eigenstates of the cyclic mode shift
onto output patterns with a fixed K-value. Inputs that are invariant under
the shift can only produce K = 0 outputs.
"""

import numpy as np

from fockwitness import (apply, class_eigenstate, decompose_dft_output, dft_matrix,
                         enumerate_basis, k_value, pattern_class, pattern_classes,
                         pattern_state)

M, N = 4, 2

for cls in pattern_classes(M, N):
    print(f"class {cls.representative}: d={cls.cardinality} allowed K={cls.allowed_K}")
    print("   elements:", " ".join(map(str, cls.elements)))

# the two shift eigenstates of the 1010 class
c = pattern_class((1, 0, 1, 0))
for K in c.allowed_K:
    v = class_eigenstate(c, K)
    print(f"|E_1010,K={K}> =", np.round(v.amplitudes[np.abs(v.amplitudes) > 0], 4))

# which input eigenstates lead to output 1100?
for cls, K, coeff in decompose_dft_output((1, 1, 0, 0)):
    print(f"  {cls.representative} K={K} coefficient {np.round(coeff, 4)}")

# suppression: 1111 has a single-element class
basis = enumerate_basis(M, M)
out = apply(dft_matrix(M), pattern_state("1111")).probabilities()
leak = sum(p for q, p in zip(basis, out) if k_value(q) != 0)
print("probability of K != 0 outputs from 1111:", f"{leak:.1e}")
