"""Uniform monochromatic powers in the fixed point of 0 -> 0100, 1 -> 1101.

We build the window, estimate the recognizability index, color every factor
with the uniform coloring and show that no four consecutive blocks of equal
length share a color.
"""

from __future__ import annotations

from substitutive import builtin, fixed_point
from substitutive.colorings import UniformColoring, check_well_defined
from substitutive.verifiers import scan_uniform_monochromatic

u = fixed_point(builtin("ex1111"), 2**16)
print("u =", u.prefix(48), "...")

c = UniformColoring.build(u)
print(f"K_hat = {c.ctx.K}, r = {c.ctx.r}, colors are literal up to length {c.threshold}")

# a few colors, computed at the first occurrence of each word
for lo, hi in [(2, 10), (1, 16), (3, 14)]:
    w = u.factor(lo, hi)
    print(f"  c(u[{lo}..{hi}]) = c({w}) = {c.color(w).to_json()}")

# the color does not depend on which occurrence is used
report = check_well_defined(c, max_len=64)
print(f"well-defined on {report.factors_checked} repeated factors: {report.passed}")

cert = scan_uniform_monochromatic(c, u, 4, range(1, 65))
print(f"uniform 4-powers, block lengths 1..64: {cert.outcome}")

lengths = [l for l in range(9, 65) if l % 4]
cert = scan_uniform_monochromatic(c, u, 2, lengths)
print(f"uniform squares, block lengths 9..64 not divisible by 4: {cert.outcome}")
