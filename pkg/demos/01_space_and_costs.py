"""Tour of the search space and the cost model.

The space is a 9-slot kernel-choice vector over a fixed three-stage ResNet:
each residual block's first convolution picks a 3x3, 5x5, or 7x7 kernel.
That gives 3^9 = 19,683 architectures, small enough to enumerate outright.
"""

import numpy as np

from mfnas import (PAPER_SPACE, count_macs, count_params, decode, encode,
                   enumerate_space, genotype_to_string, mutate_one_slot, p_min,
                   sample_uniform)

print(f"space size: {PAPER_SPACE.num_configurations}")

# Genotypes and arch_ids are interchangeable: base-3 digits, slot 0 most
# significant.
g = (0, 1, 2, 0, 1, 2, 0, 1, 2)
print(f"genotype {genotype_to_string(g)} <-> arch_id {encode(g)}")
assert decode(encode(g)) == g

# The cost model charges bias-free convs, 2 scalars per normalized channel,
# and a 1x1 projection shortcut at each stage transition.
smallest = (0,) * 9
print(f"all-3x3: {count_params(smallest):,} params, {count_macs(smallest):,} MACs")
print(f"all-7x7: {count_params((2,) * 9):,} params")
print(f"space minimum p_min = {p_min():,}")

# Costs are strictly monotone in every slot's kernel, so the extremes above
# really are the extremes. Enumerating the whole space takes well under a
# second:
params = [count_params(g) for g in enumerate_space(PAPER_SPACE)]
print(f"param range over all {len(params):,} architectures: "
      f"{min(params):,} .. {max(params):,}")

# Random sampling and single-slot mutation are the raw material of the
# search strategies.
rng = np.random.default_rng(0)
parent = sample_uniform(rng)
child = mutate_one_slot(parent, rng)
print(f"parent {genotype_to_string(parent)} -> child {genotype_to_string(child)} "
      f"(Hamming distance {sum(a != b for a, b in zip(parent, child))})")
