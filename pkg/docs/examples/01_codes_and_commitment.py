"""
Error-correcting codes and the fuzzy commitment
===============================================

A binary BCH code turns a random message into a codeword that survives a few
bit flips. The commitment hides a binary template behind such a codeword.
"""

import numpy as np

from bdat import build_code, commit, hamming, verify

# BCH(63, 36) corrects up to five flipped bits
code = build_code(6, 5)
print(code.code_ref, "minimum distance", code.d_min)

rng = np.random.default_rng(0)
message = rng.integers(0, 2, code.k)
codeword = code.encode(message)

# flip five positions and decode them away
noisy = codeword.copy()
noisy[rng.choice(code.n, 5, replace=False)] ^= 1
result = code.decode(noisy)
print("corrected", result.errors_corrected, "errors, exact:",
      np.array_equal(result.codeword, codeword))

# six flips is beyond the guarantee; decode gives up or lands elsewhere
noisy[rng.choice(np.flatnonzero(noisy == codeword), 1)] ^= 1
again = code.decode(noisy)
if again is None:
    print("six errors: decoder gave up")
else:
    print("six errors: decoded to original?", np.array_equal(again.codeword, codeword))

# %%
# Commit to a binary template. Only the mask T xor c and a salted hash of c
# are kept, so the template itself never sits on disk.
template = code.random_codewords(1, 7)[0]
c = commit(template, code, seed=1)
print("mask equals template:", np.array_equal(c.mask, template))

for flips in (0, 3, 5, 6, 10):
    query = template.copy()
    query[:flips] ^= 1
    v = verify(c, query, code)
    print(f"{flips:2d} flipped bits (distance {hamming(query, template)}):",
          "ACCEPT" if v.accepted else "REJECT")
