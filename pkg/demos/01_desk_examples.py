"""
Three small pieces by hand
==========================

Tree A has two maxima at the same height over one saddle, so the stabilizer
can swap them.  Tree B has the maxima at different heights and cannot.
"""

from reebtorus import corpus as cp
from reebtorus import engine as en
from reebtorus.model import parse_instance

# Tree A: the swap survives as Z_2 acting on a circle by a half turn
res = en.analyze_instance(cp.instance(cp.tree_a()))
print("Tree A  source", res.pieces[0].source, " target", res.target)
print("        G order", res.order, " p =", res.p, " H1 =", res.h1)
print("       ", res.verdict.homotopy_type())

# Tree B: nothing to permute, only the Dehn twist along the boundary
res = en.analyze_instance(cp.instance(cp.tree_b()))
print("Tree B ", res.verdict.homotopy_type(), " H1 =", res.h1)

# both pieces at once: the half turn acts on one coordinate of T^2
res = en.analyze_instance(parse_instance(cp.two_piece()))
for g, A in res.action.generator_maps():
    print("two pieces, generator acts by", A)
print("two pieces", res.verdict.homotopy_type(), " H1 =", res.h1)
