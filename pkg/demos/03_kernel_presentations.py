"""Kernel presentations: the image of a form system as a mod-N kernel.

The Smith normal form of the coefficient matrix produces an integer
matrix whose mod-N kernel equals the image of the system whenever N is
coprime to the product of the nontrivial invariant factors.
"""

import math

from cyclicforms import LinearFormSystem, image_mod_n, kernelize, three_ap

for system in (
    three_ap(),
    LinearFormSystem(((1, 0), (1, 2)), name="skew-pair"),
    LinearFormSystem(((1, 0), (0, 1), (1, 1)), name="sum-triple"),
):
    kp = kernelize(system)
    print(f"{system.name}: forms {system.forms}")
    print(f"  presentation rows {kp.matrix}")
    print(f"  invariant factors {kp.invariant_factors}, bad modulus K = {kp.bad_modulus}")
    for n in (5, 6):
        if math.gcd(n, kp.bad_modulus) != 1:
            print(f"  N = {n}: shares a factor with K, presentation not applicable")
            continue
        image = image_mod_n(system, n)
        if kp.k:
            kernel = kp.kernel_mod_n(n)
            print(f"  N = {n}: image has {len(image)} points; equals kernel: {image == kernel}")
        else:
            print(f"  N = {n}: full image, {len(image)} of {n ** system.t} points")
    print()
