"""Walk through the wall structure of Hilb^n on a K3 surface of Picard rank one.

Run:  python3 demos/hilbert_walls.py [d] [n]
"""

import sys

from k3walls.hilbert import HilbSetup, movable_hilb, nef_hilb_n2, walls_table

d, n = (int(x) for x in sys.argv[1:3]) if len(sys.argv) > 2 else (1, 7)
S = HilbSetup(d, n)
print(f"K3 of degree {2 * d}, Hilbert scheme of {n} points, v = {S.v}, v^2 = {S.lattice.square(S.v)}")
print("Divisors are H~ - Gamma*B; positive for Gamma^2 <", f"{d}/{n - 1}")

m = movable_hilb(d, n)
print(f"\nMovable boundary: case {m.case}, Gamma = {m.gamma}, witness {m.witness}, Pell {m.pell}")

print(f"\n{'Gamma':>10}  {'a':>16}  a^2  (v,a)  type")
for row in walls_table(d, n):
    print(f"{str(row.gamma):>10}  {str(row.a):>16}  {row.a_square:>3}  {row.pairing:>5}  {row.label}")

if n == 2:
    nb = nef_hilb_n2(d)
    print(f"\nNef boundary: Gamma = {nb.gamma}, spherical class {nb.spherical}, Pell {nb.pell}")
else:
    print("\nFor n = 2 the nef boundary has a closed form, e.g.:")
    nb = nef_hilb_n2(31)
    print(f"  d = 31: Gamma = {nb.gamma} from the spherical class {nb.spherical}")
