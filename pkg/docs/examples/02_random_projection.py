"""
Cancelable templates by random projection
=========================================

A seed picks an orthonormal projection. Changing the seed reissues a template
that has nothing in common with the old one.
"""

import numpy as np

from bdat import gen_matrix, project

d, k = 512, 128
key = gen_matrix(seed=2024, d=d, k=k)
print("max |R R^T - I|:", np.abs(key.rows @ key.rows.T - np.eye(k)).max())

# distances survive the projection up to a small spread
rng = np.random.default_rng(1)
u, v = rng.normal(size=(2, 1000, d))
ratios = np.linalg.norm(project(key, u) - project(key, v), axis=1) / np.linalg.norm(u - v, axis=1)
print(f"distance ratio: median {np.median(ratios):.3f}, "
      f"5-95% range {np.percentile(ratios, 5):.3f}..{np.percentile(ratios, 95):.3f}")

# %%
# Revocation: same face, new seed, unrelated template
face = rng.normal(size=d)
old = project(gen_matrix(1, d, k), face)
new = project(gen_matrix(2, d, k), face)
print(f"correlation between old and new template: {np.corrcoef(old, new)[0, 1]:+.3f}")
