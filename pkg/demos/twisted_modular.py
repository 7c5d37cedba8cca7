"""The congruence-subgroup action on twisted characters.

For r = 2, 3 only u_12 = T^{-1} and u_21^r act. The u_21^r matrix is built
through the transpose algebra and compared with a direct theta-function
computation on the lattice of the twisted algebra itself.
"""
from kacfusion import affine_data, modular_action
from kacfusion.modular import projective_residual, theta_u21r, u21_action

for t, k in (("A3~2", 1), ("D4~2", 1), ("D4~3", 2)):
    d = affine_data(t)
    ma = modular_action(d, k)
    rel = {key: f"{v:.1e}" for key, v in ma.relations_residuals.items()}
    _, gap = projective_residual(u21_action(d, k).matrix, theta_u21r(d, k).matrix)
    print(f"{t} level {k}: {len(ma.basis)} characters, residuals {rel}, "
          f"theta route differs by {gap:.1e}")

ma = modular_action(affine_data("A2~2"), 2)
print("\nA2~2 level 2, plain T:", f"{ma.relations_residuals['(u12 u21^2)^4']:.2f}",
      " graded T:", f"{ma.relations_residuals['(u12 u21^2)^4 with graded T']:.1e}")
