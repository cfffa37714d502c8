"""Closed-form infidelity bounds and their asymptotes.

The uniform tree's bound grows quadratically with depth. The
heterogeneous bounds weight each distance's error rate by its coherence
window; with windows polynomial in the distance the sum converges, so the
block-routing bound approaches a constant while the pipelined variant's
conservative estimate grows linearly.
"""

from hetqram import (
    BoundInputs,
    CycleCost,
    DistanceProfile,
    SurfaceParams,
    bb_infidelity_bound,
    expected_good_fraction,
    ft_infidelity_bound,
    hetero_bound,
    k_factor,
    uniform_bb_infidelity,
)
from hetqram.analytics import bb_coherence_time_by_distance, vacuous

params = SurfaceParams(epsilon_prime=0.03, p_ratio=0.01)
cost = CycleCost()

print("n    uniform(d=7)  block-routing  pipelined")
for n in (5, 10, 20, 40):
    inputs = BoundInputs(n, params, cost)
    u = uniform_bb_infidelity(inputs, 7)
    f, f_closed = ft_infidelity_bound(inputs)
    b, b_asym = bb_infidelity_bound(inputs)
    print(f"{n:2d}   {u:.5f}       {f:.5f}        {b:.5f}")

inputs = BoundInputs(40, params, cost)
f, f_closed = ft_infidelity_bound(inputs)
print(f"\nblock-routing exact sum {f:.8f} vs closed form {f_closed:.8f}")
b, b_asym = bb_infidelity_bound(inputs)
print(f"pipelined finite sum    {b:.8f} vs asymptote   {b_asym:.8f}")
print("vacuous at p'=0.1, n=30?",
      vacuous(bb_infidelity_bound(BoundInputs(30, SurfaceParams(0.03, 0.1), cost))[0]))

# the generic machinery: K(n) sums rate-weighted coherence windows
inputs = BoundInputs(12, params, cost)
k = k_factor(inputs, lambda d: bb_coherence_time_by_distance(inputs, d))
print(f"\nK(12) with pipelined windows = {k:.4f}; bound = {hetero_bound(inputs, lambda d: bb_coherence_time_by_distance(inputs, d)):.4f}")

exact, approx = expected_good_fraction(
    inputs, DistanceProfile.linear(12), lambda level: 50.0
)
print(f"good fraction, 50-cycle windows: exact {exact.value:.6f}, "
      f"first-order approximation {approx.value:.6f}")
