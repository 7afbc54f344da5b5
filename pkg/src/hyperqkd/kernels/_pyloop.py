"""Pure-NumPy Monte Carlo accumulation kernel.

Same contract as the compiled kernel in ``_fastloop``: given one chunk of
pre-drawn round data it returns sifted-pair and error counts per (DOF,
basis).  Both kernels must produce bit-identical counts for identical
inputs; the outcome index is the number of CDF entries <= u (a right-side
search), so zero-width intervals are never selected even on exact boundary
hits.
"""
from __future__ import annotations

import numpy as np


def mc_chunk(a_basis: np.ndarray, a_bit: np.ndarray,
             b_basis: np.ndarray, b_bit: np.ndarray,
             survived: np.ndarray, u_bell: np.ndarray,
             cdf: np.ndarray, flip: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate one chunk of rounds.

    Parameters
    ----------
    a_basis, a_bit, b_basis, b_bit : uint8 arrays of shape (rounds, n_dofs)
    survived : uint8 array of shape (rounds,)
    u_bell : float64 array of shape (rounds, n_dofs), uniforms in [0, 1)
    cdf : float64 array of shape (n_dofs, 16, 4); row index is the packed
        choice (((a_basis*2 + a_bit)*2 + b_basis)*2 + b_bit), columns are the
        cumulative Bell-outcome probabilities with the last entry >= 1
    flip : uint8 array of shape (2, 4); flip[basis][bell] is Bob's bit flip

    Returns
    -------
    (pairs, errors) : int64 arrays of shape (n_dofs, 2), indexed by
        (DOF, basis)
    """
    m, n = a_basis.shape
    combo = (((a_basis.astype(np.intp) * 2 + a_bit) * 2 + b_basis) * 2 + b_bit)
    rows = cdf[np.arange(n)[None, :], combo]            # (m, n, 4)
    outcome = np.sum(rows <= u_bell[..., None], axis=2)  # (m, n)
    same = (a_basis == b_basis) & survived.astype(bool)[:, None]
    corrected = b_bit ^ flip[a_basis, outcome]
    err = (corrected != a_bit)
    pairs = np.zeros((n, 2), dtype=np.int64)
    errors = np.zeros((n, 2), dtype=np.int64)
    for k in range(n):
        for basis in (0, 1):
            mask = same[:, k] & (a_basis[:, k] == basis)
            pairs[k, basis] = int(np.count_nonzero(mask))
            errors[k, basis] = int(np.count_nonzero(mask & err[:, k]))
    return pairs, errors
