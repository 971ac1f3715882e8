"""A Picard rank two K3 where every exceptional class is divisorial.

NS has Gram diag(28, -4) and v = (1, 0, -1), so v^2 = 2.  A flop would need a
class a with (v, a) = 1 and a^2 = -2; a residue argument mod 4 rules it out,
while spherical classes orthogonal to v do exist.
"""

import itertools

from k3walls.cones import exceptional_sources, fibration_classes
from k3walls.lattice import mukai_from_ns

L = mukai_from_ns([[28, 0], [0, -4]])
v = (1, 0, 0, -1)
ample = (-1, 1, 0, -1)

residues = {(28 * a * a - 4 * b * b - 2 * r * (r - 1)) % 4
            for r, a, b in itertools.product(range(4), repeat=3)}
print("a^2 mod 4 over classes with (v, a) = 1:", sorted(residues), "(-2 = 2 mod 4 never occurs)")

print("\nExceptional sources (divisor ray, class):")
for D, a in exceptional_sources(L, v, ample, norm_bound=400):
    kind = "spherical" if L.square(a) == -2 else f"isotropic, (v,a)={L.pairing(v, a)}"
    print(f"  {str(D):>28}  <- {a}  [{kind}]")

fib = fibration_classes(L, v)
print("\nIsotropic classes in v-perp (fibration candidates):", list(fib)[:4],
      "" if fib.complete else "(bounded search)")
