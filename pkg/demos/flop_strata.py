"""Strata of a flopping wall: positive partitions of v and how they refine each other.

The first lattice has only isolated maximal strata; the second has two
maximal strata glued along a common refinement.
"""

from k3walls.flops import strata_components, strata_poset
from k3walls.walls import WallLattice


def show(title, H):
    P = strata_poset(H)
    s = strata_components(H)
    print(f"== {title}: Gram {H.gram2.gram}, v = {H.v_coords}")
    print(f"   {len(P.nodes)} partitions, {len(P.edges)} Hasse edges")
    for i, node in enumerate(P.nodes):
        if len(node) > 1:
            extra = f"  codim {P.codim[i]}" if i in P.codim else ""
            print(f"   {node.parts}{extra}")
    print(f"   irreducible components {s.irreducible}, connected components {s.connected}")
    shared = [q.parts for q in s.common_refinements if q is not None]
    if shared:
        print(f"   finest stratum per component: {shared}")
    print()


show("isolated strata", WallLattice.from_gram([[-4, 60], [60, 4]], (3, 2)))
show("connected strata", WallLattice.from_gram([[2, 10], [10, 2]], (1, 2)))
