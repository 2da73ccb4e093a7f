"""Monochromatic factorizations u = u_1 u_2 u_3 ...

Under the factorization coloring every part must be a prefix of u with the
same color as the first part. The search explores all such cuttings inside the
window and reports that every branch dies.
"""

from __future__ import annotations

from substitutive import builtin, fixed_point
from substitutive.colorings import ConstantColoring, FactorizationColoring
from substitutive.verifiers import replay_frontier, search_monochromatic_factorization

for name, K in [("ex1111", None), ("fibonacci", 0), ("dekking", None)]:
    u = fixed_point(builtin(name), 10_000)
    c = FactorizationColoring.build(u, K=K)
    print(f"{name}: constants {c.ctx.to_dict()}")
    cert = search_monochromatic_factorization(c, u)
    frontier = cert.extra["frontier"]
    print(f"  {cert.outcome}: {len(frontier)} positions reached, all with known children,"
          f" replay identical: {replay_frontier(cert, c, u)}")

# with one color the Fibonacci word is cut into prefixes without trouble
u = fixed_point(builtin("fibonacci"), 2048)
cert = search_monochromatic_factorization(ConstantColoring(), u)
parts = cert.witnesses[0]["parts"]
print(f"fibonacci, one color: {cert.outcome} with {len(parts)} parts of lengths",
      [len(p) for p in parts[:8]], "...")
