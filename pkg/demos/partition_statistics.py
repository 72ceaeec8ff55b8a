"""
Photon-number partitions after beam splitting
=============================================

M single photons each meet a 50/50 beam splitter. The number of photons
reaching side A is binomial, and every partition carries its own
entangled state.
"""

from fockwitness import (gaussian_partition_estimate, generate_psi, partition_probability,
                         schmidt_rank)

M = 4

# exact partition probabilities, next to the large-M Gaussian estimate
for N in range(M + 1):
    exact = partition_probability(M, N, exact=True)
    print(f"N_A={N}  P={str(exact):>5}  gaussian={gaussian_partition_estimate(M, N):.4f}")

# all photons on one side leaves nothing to entangle
empty = partition_probability(M, 0, exact=True) + partition_probability(M, M, exact=True)
print("no photons at A or B:", empty, " usable:", 1 - empty)

# the full state before post-selection
psi = generate_psi(M)
print("Schmidt rank of the full state:", schmidt_rank(psi))
for (na, nb), p in psi.partition_probabilities().items():
    block = psi.project(na)
    print(f"  ({na},{nb}) weight {p:.4f}, Schmidt rank {schmidt_rank(block)}")
