"""
Generic maps give tori
======================

With distinct critical values and one saddle per atom nothing can be
permuted, so every quotient is the torus itself and H1 is free of rank p.
"""

import time

from reebtorus import corpus as cp
from reebtorus import engine as en
from reebtorus.model import parse_instance

t0 = time.perf_counter()
for i, doc in enumerate(cp.generic_corpus()):
    res = en.analyze_instance(parse_instance(doc))
    sizes = [len(t.vertices) for t in res.instance.pieces]
    print(f"{i:2d} vertices {str(sizes):>14}  generic={res.generic}  p={res.p:2d}  "
          f"H1={str(res.h1):>6}  {res.verdict.homotopy_type()}")
print(f"{time.perf_counter() - t0:.2f}s")
