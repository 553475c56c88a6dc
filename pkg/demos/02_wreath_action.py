"""
The wreath action on T^(pm+1)
=============================

Z_2 acting on the circle by a half turn, wreathed with Z_2: a group of order 8
acting freely on T^3.  Elements swap the two circle blocks and rotate them,
while the last coordinate moves by k/2.
"""

from fractions import Fraction

import numpy as np

from reebtorus import groups as gr
from reebtorus import torus as tr

action = tr.act_wreath(tr.act_cyclic(2), 2)
G = action.group
elements = list(action.elements())
print("group", gr.pretty(G), "of order", len(elements), "on T^%d" % action.dim)

# every element as an affine map; the identity is first
for g in elements:
    print(f"{gr.format_element(G, g):>16}  {action.evaluate(g)}")

# the action axiom, checked on the whole multiplication table
table = np.array([[action.evaluate(gr.mul(G, g, h)) == tr.compose(action.evaluate(g), action.evaluate(h))
                   for h in elements] for g in elements])
print("evaluate(gh) == evaluate(g) then evaluate(h) everywhere:", table.all())

# freeness: each non-identity map has a permutation cycle with non-integral sum
print(tr.is_free(action).status)

# the element (alpha, 1) with alpha = (half turn, identity)
g = gr.WreathElement((gr.cyclic_element(2, 1), gr.cyclic_element(2, 0)), 1)
x = tr.TorusPoint((Fraction(1, 8), Fraction(3, 8), Fraction(0)))
print(x, "->", tr.apply(action.evaluate(g), x))

# not every quotient is a torus: here the blocks are permuted
crystal = tr.CrystalGroup(action)
print("H1 of T^3/G:", tr.homology_h1(crystal), " abelianization of G:", gr.abelianization(G))
