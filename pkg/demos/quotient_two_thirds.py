"""Fusion of A_5^(2) as a quotient of B_3^(1), and where the sign pattern breaks.

Level 1 of A_5^(2) comes from level 2 of B_3^(1) by folding under the Weyl
group extended by translations in (k+h) times the root lattice. The quotient
has two elements and the nontrivial one squares to the identity.

The 2/3 check then looks for negative constants in which at least two of the
three weights lie in the root lattice, at even level.
"""
from kacfusion import affine_data, hong_quotient, two_thirds_check

q = hong_quotient(affine_data("A5~2"), 1)
print("source:", q.info["untwisted_type"], "level", q.info["source_level"])
print("basis:", [str(w.finite) for w in q.basis])
for i in range(len(q)):
    print(q.L(i))

for t in ("D4~2", "A3~2", "A5~2"):
    rep = two_thirds_check(hong_quotient(affine_data(t), 2))
    print(f"{t} level 2: {len(rep.negatives)} negative constants, "
          f"{len(rep.violations)} with two or more weights in the root lattice")
