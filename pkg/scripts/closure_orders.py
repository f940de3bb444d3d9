"""Closure of the certificate leaf generators mod p, compared with |Sp(2g, p)|."""

import sys

from sixfold.engine import leaf_generators, prove
from sixfold.homrep import closure_mod_p, sp_order

cases = [(2, 2), (2, 3), (3, 2)]
if len(sys.argv) > 2:
    cases = [(int(sys.argv[1]), int(sys.argv[2]))]
for g, p in cases:
    gens = leaf_generators(prove(g, closure=False))
    res = closure_mod_p(gens, p)
    print(f"g={g} p={p} generators={len(gens)} order={res.order} "
          f"target={sp_order(g, p)} full={res.is_full} ({res.elapsed:.2f}s)")
