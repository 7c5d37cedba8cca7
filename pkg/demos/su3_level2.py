"""Fusion rules of su(3) at level 2, two ways.

Kac-Walton folds finite tensor products into the level-5 alcove; the
Verlinde formula reads the same numbers off the S-matrix. Both are printed
as left-multiplication matrices L_lambda with entry [nu, mu] = N_{lambda mu}^nu.
"""
import numpy as np

from kacfusion import affine_data, fusion_verlinde, s_matrix, verlinde_algebra

data = affine_data("A2~1")
alg = verlinde_algebra(data, 2)
print(f"{len(alg)} integrable weights at level 2:",
      ", ".join(str(w.finite) for w in alg.basis))

for i, w in enumerate(alg.basis):
    print(f"\nL for {w.finite}:")
    print(alg.L(i))

numeric = fusion_verlinde(s_matrix(data, 2))
print("\nVerlinde agrees:", alg.same_tensor(numeric),
      f"(largest distance from an integer {numeric.max_residue:.1e})")
print("S is unitary:", np.allclose(s_matrix(data, 2).S @ s_matrix(data, 2).S.conj().T, np.eye(len(alg))))
