"""Equal-fidelity overhead: uniform tree vs the heterogeneous one.

For each depth, find the smallest uniform code distance whose query bound
matches the heterogeneous target, then compare physical qubit counts.
The uniform overhead climbs in integer-distance steps; by depth 30 the
pipelined heterogeneous tree is about five times cheaper.
"""

from hetqram import ExperimentConfig, compare_resources

config = ExperimentConfig(n_values=(30,))

print(" n   target      d   uniform/entry  hetero/entry  ratio")
for n in range(6, 33, 2):
    row = compare_resources(n, config, architecture="bb-hetero", mode="analytic")
    entries = 1 << n
    flag = " (vacuous)" if row.target_vacuous else ""
    print(
        f"{n:2d}   {row.target_infidelity:9.4f}{flag:10s} {row.uniform_distance}"
        f"   {row.uniform_physical_qubits / entries:8.0f}"
        f"      {row.hetero_physical_qubits / entries:8.1f}"
        f"     {row.ratio:5.2f}"
    )

row = compare_resources(30, config, architecture="bb-hetero", mode="analytic")
print(f"\nat depth 30 the uniform tree needs {row.ratio:.1f}x more physical qubits")

row = compare_resources(30, config, architecture="ft-hetero", mode="analytic")
print(f"against block routing the ratio is {row.ratio:.2f}x")

# below the simulation ceiling the target can come from Monte Carlo instead
config_sim = ExperimentConfig(n_values=(6,), trials=2000, seed=8)
row = compare_resources(6, config_sim, architecture="bb-hetero", mode="simulated")
print(f"\nsimulated target at n=6: infidelity {row.target_infidelity:.4f} "
      f"-> uniform distance {row.uniform_distance}, ratio {row.ratio:.2f}")
