"""Sparse branch states: classical words with amplitudes.

A query superposition over a handful of basis words never needs the full
2^n statevector: the gate set (swaps, controlled swaps, X, Z) only
permutes words and flips signs, so the branch list is invariant in size.
"""

from hetqram import BranchState, inner_product

# a three-qubit basis state and a Bell-like two-branch state
psi = BranchState.basis("010")
print("basis state:", psi)

bell = BranchState.superposition([("00", 1.0), ("11", 1.0)])
print("two-branch state:", bell)
print("norm:", bell.norm())

# routing primitive: a controlled swap steered by qubit 0 moves the
# payload on q1 only in the branch whose control is set
state = BranchState.superposition([("110", 1.0), ("010", 1.0)])
state.cswap([(0, 1)], 1, 2)
print("after cswap(ctrl=q0, q1<->q2):", state)

# phase flips change signs, never words
plus = BranchState.superposition([("0", 1.0), ("1", 1.0)])
minus = plus.copy().z(0)
print("overlap <+|-> =", inner_product(plus, minus))

# gates preserve the branch count and the norm exactly
state = BranchState.superposition([("0110", 2.0), ("1001", 1.0), ("1111", -0.5)])
before = len(state.branches)
state.swap(0, 3).cswap([(0, 0), (1, 1)], 2, 3).x(1).z(2)
print(f"branches {before} -> {len(state.branches)}, norm {state.norm():.12f}")
