"""Letter frequencies of the Dekking word a -> aabc, b -> bbc, c -> acc, and
monochromatic powers with bounded gaps under the frequency coloring.
"""

from __future__ import annotations

from substitutive import builtin, fixed_point
from substitutive.colorings import FrequencyColoring
from substitutive.frequency import FrequencyVector
from substitutive.substitution import empirical_frequencies
from substitutive.verifiers import scan_abelian_powers, scan_bounded_gap_monochromatic

zeta = builtin("dekking")
fv = FrequencyVector(zeta)
print("characteristic polynomial factor:", fv.minpoly.as_expr())
print("frequencies:", {a: round(d, 12) for a, d in zip(zeta.alphabet, fv.approx())})

u = fixed_point(zeta, 10**6)
emp = empirical_frequencies(u, u.W)
for a, e, d in zip(zeta.alphabet, emp, fv.approx()):
    print(f"  {a}: empirical {float(e):.6f}  exact {d:.6f}  diff {float(e) - d:+.1e}")

# abelian cubes do not occur
cert = scan_abelian_powers(fixed_point(zeta, 10_000), 3, 300)
print("abelian 3-powers with parts up to 300, W=10^4:", cert.outcome)

# the longest monochromatic chain of short parts stops growing with the window
c = FrequencyColoring(fv)
for W in (25_000, 50_000, 100_000):
    cert = scan_bounded_gap_monochromatic(c, fixed_point(zeta, W), 30)
    wit = cert.witnesses[0]
    print(f"W={W}: longest chain of parts shorter than 30 has k={wit['k']} with color {wit['color'].to_json()}")
