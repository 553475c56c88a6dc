"""
Checking the engine against brute force
=======================================

The oracle never looks at group expressions.  It rotates orbits of subtrees,
closes under composition, and compares order, element orders and the
abelianization with what the engine claims.
"""

from reebtorus import corpus as cp
from reebtorus import engine as en
from reebtorus import oracle as orc
from reebtorus.model import tree_from_document

for name in ["tree_a", "three_prong", "z2_wr_z2", "z3_wr_z2", "wreath_depth3", "swap_circles"]:
    tree = tree_from_document(cp.small_trees()[name])
    rep = orc.compare(en.analyze_piece(tree), tree)
    print(f"{name:>14}: {rep.count:3d} automorphisms, orders {rep.histogram}, "
          f"abelianization {rep.abelianization} -> {rep.verdict}")

# a grid scan over the points with denominator L finds fixed points directly
tree = tree_from_document(cp.small_trees()["z2_wr_z2"])
action = en.analyze_piece(tree).action
for g in list(action.elements())[1:4]:
    A = action.evaluate(g)
    print(A, " fixed point on the grid:", orc.grid_fixed_point_scan(A))
