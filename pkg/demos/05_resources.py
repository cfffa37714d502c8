"""Physical qubit counts at surface-code packing (3 d^2 per logical qubit).

Per memory entry, the heterogeneous trees approach constant overheads:
192 per entry for block routing and 108 for the pipelined variant, or
153 and 82 with the odd-paired distance assignment that exploits equal
effective distances.
"""

from hetqram import bb_resources, ft_resources, uniform_resources

print("block-routing per-level table, n=4:")
print("level  logical  distance")
for level, logical, d in ft_resources(4).per_layer:
    print(f"{level}      {logical:3d}      {d}")

print("\nper-entry physical overhead M/N:")
print(" n   block  pipelined  block(odd)  pipelined(odd)")
for n in (5, 10, 20, 30, 40):
    entries = 1 << n
    print(
        f"{n:2d}   {ft_resources(n).physical_total / entries:6.1f}"
        f"  {bb_resources(n).physical_total / entries:7.1f}"
        f"   {ft_resources(n, efficient=True).physical_total / entries:7.1f}"
        f"     {bb_resources(n, efficient=True).physical_total / entries:7.1f}"
    )

print("\nuniform tree at distance d costs 18 d^2 per entry:")
for d in (3, 5, 7):
    est = uniform_resources(20, d)
    print(f"d={d}: {est.physical_total / (1 << 20):6.0f} per entry")
