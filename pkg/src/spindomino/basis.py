"""Computational-basis conventions and bit utilities.

Spin ``i`` (1-based, left end of the chain = spin 1) lives on bit ``n - i``
of the basis index, so spin 1 is the most significant bit.  Bit value 0
means "up" (sigma_z eigenvalue +1) and bit value 1 means "down".  State
labels are strings such as ``"1000"`` read spin 1..n left to right:
``"0000"`` is the all-up state, ``"1000"`` has only spin 1 down.
"""

import numpy as np

from .errors import ValidationError


def spin_mask(n_spins: int, i: int) -> int:
    """Bit mask selecting spin ``i`` in a basis index."""
    if not 1 <= i <= n_spins:
        raise ValidationError(f"spin index {i} out of range 1..{n_spins}")
    return 1 << (n_spins - i)


def label_to_index(label: str) -> int:
    """Basis index of a '0'/'1' state label."""
    if not label or any(ch not in "01" for ch in label):
        raise ValidationError(f"state label must be a nonempty string of 0/1, got {label!r}")
    return int(label, 2)


def index_to_label(index: int, n_spins: int) -> str:
    return format(index, f"0{n_spins}b")


def sigma_z_diagonal(n_spins: int, i: int) -> np.ndarray:
    """Diagonal of sigma_z for spin ``i``: +1 where the spin is up, -1 where down."""
    bits = (np.arange(1 << n_spins) >> (n_spins - i)) & 1
    return 1.0 - 2.0 * bits


def z_table(n_spins: int) -> np.ndarray:
    """(n_spins, 2**n_spins) array of sigma_z diagonals, one row per spin."""
    return np.stack([sigma_z_diagonal(n_spins, i) for i in range(1, n_spins + 1)])


def flip_permutation(n_spins: int, i: int) -> np.ndarray:
    """Index permutation implementing sigma_x on spin ``i`` (bit flip)."""
    return np.arange(1 << n_spins) ^ spin_mask(n_spins, i)
