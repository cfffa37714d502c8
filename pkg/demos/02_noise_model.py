"""Surface-code noise: distance profiles and per-level logical error rates.

The per-cycle logical error rate is eps' * (p')^{d_e} with the effective
distance d_e = ceil(d/2). Because an even distance shares its d_e with
the odd distance below it, the odd-paired profile (1,1,3,3,5,5,... read
from the leaves) matches the linear profile's rates level for level while
using smaller patches.
"""

import numpy as np

from hetqram import (
    DistanceProfile,
    SurfaceParams,
    effective_distance,
    level_error_rate,
    logical_error_rate,
    sample_layer_errors,
)

params = SurfaceParams(epsilon_prime=0.03, p_ratio=0.1)

print("d  d_e  rate per cycle")
for d in range(1, 9):
    print(f"{d}   {effective_distance(d)}   {logical_error_rate(params, d):.2e}")

n = 6
linear = DistanceProfile.linear(n)
paired = DistanceProfile.odd_paired(n)
print("\nlevel  linear-d  paired-d  rate (identical)")
for level in range(n + 1):
    assert level_error_rate(params, linear, level) == level_error_rate(params, paired, level)
    print(
        f"{level}      {linear.distance(level)}         {paired.distance(level)}"
        f"         {level_error_rate(params, linear, level):.2e}"
    )

# sampling: each code cycle flips X and Z coins per qubit
rng = np.random.default_rng(1)
events = sample_layer_errors(rng, {0: 0.2, 1: 0.2, 2: 0.0}, cycles=5)
print("\nsampled events over 5 cycles at rate 0.2:", events)

# the aggregate mode draws one net parity flip per qubit instead
events = sample_layer_errors(rng, [0.2] * 3, cycles=5, mode="aggregate")
print("aggregate-mode events:", events)
