"""Scanning extremal quantities as the modulus grows.

Writes a CSV and a self-contained SVG per scan; prime moduli are drawn
filled.  The free density of the dilation pair drifts toward 1/2 through
the primes, while composite moduli can sit visibly off the prime trend.
"""

import tempfile
from fractions import Fraction
from pathlib import Path

from cyclicforms import dilate_pair, scan_convergence, three_ap

out = Path(tempfile.mkdtemp(prefix="cyclicforms-scan-"))

records, _ = scan_convergence(
    three_ap(), "m", Fraction(2, 5), [5, 7, 9, 11, 13, 15], mode="exact", out_dir=out
)
print("m_3AP(2/5, N), exact:")
for r in records:
    marker = "prime" if r.is_prime else "     "
    print(f"  N = {r.n:2d} {marker}  {r.value:.6f}")

primes = [5, 7, 11, 13, 101, 499, 1009, 4093, 10007]
records, _ = scan_convergence(dilate_pair(2), "d", None, primes, mode="exact", out_dir=out)
print("\nfree density of (x, 2x) through the primes, approaching 1/2:")
for r in records:
    print(f"  p = {r.n:5d}  d = {r.value:.6f}")

print(f"\nCSV and SVG artifacts written under {out}")
