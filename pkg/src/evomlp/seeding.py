"""Deterministic seed derivation for nested experiment stages.

Mixing is a SHA-256 digest over the master seed and context labels, so
derived seeds are stable across platforms and independent of evaluation
order, and label collisions are as unlikely as hash collisions.
"""

import hashlib


def derive_seed(master_seed, *labels):
    """Collision-resistant 64-bit seed from a master seed and labels."""
    text = "|".join([repr(master_seed)] + [repr(l) for l in labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
