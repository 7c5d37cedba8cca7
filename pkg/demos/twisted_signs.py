"""Negative structure constants for the twisted algebra A_2^(2).

At even level 2n the dominant weights are a*Lambda for 0 <= a <= n, and the
product has constants of both signs. The sign of N_{ab}^c is (-1)^(a+b+c),
which the sign-twist check tests on the full table.
"""
from kacfusion import affine_data, sign_twist_check, twisted_verlinde
from kacfusion.twisted import a2_even_product

data = affine_data("A2~2")
for n in (1, 2, 3):
    alg = twisted_verlinde(data, 2 * n)
    print(f"level {2 * n}: chi_{n} * chi_{n} =", a2_even_product(n, n, n))
    rep = sign_twist_check(alg)
    print(f"  sign twist holds on {rep.checked} nonzero constants: {rep.conjecture_holds}")

print("\nAt odd level the algebra is ordinary: level 5 has no negative constants:",
      all(v > 0 for row in twisted_verlinde(data, 5).table.values() for v in row.values()))
