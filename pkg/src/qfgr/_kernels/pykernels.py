"""Pure-numpy implementations of the hot assembly kernels.

These are the reference implementations; `qfgr._kernels` swaps in the
compiled extension with the same signatures when it is available.  All
superoperators act on row-major vectorized matrices, index (a, b) -> a*n + b.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def kernel_weights(x: np.ndarray, eta: float, sharp: bool) -> np.ndarray:
    """Regularized energy-matching weight, units 1/energy.

    gaussian: exp(-x^2 / 2 eta^2) / (sqrt(2 pi) eta)
    sharp:    1 / (sqrt(2 pi) eta) inside |x| <= eta, else 0
    """
    x = np.asarray(x, dtype=float)
    peak = 1.0 / (_SQRT_2PI * eta)
    if sharp:
        return np.where(np.abs(x) <= eta, peak, 0.0)
    return peak * np.exp(-(x * x) / (2.0 * eta * eta))


def build_rate_tensor(
    hp: np.ndarray,
    energies: np.ndarray,
    hbar: float,
    eta: float,
    sharp: bool,
    symmetrized: bool,
) -> np.ndarray:
    """Four-index generalized scattering rates P[a, b, c, d], units 1/time.

    P[a,b,c,d] = (2 pi / hbar) * H'[a,c] * conj(H'[b,d]) * w(arg) with
    arg = e[b] - e[d] for the conventional flavor and
    arg = (e[a] + e[b])/2 - (e[c] + e[d])/2 for the symmetrized one.
    """
    n = energies.shape[0]
    if symmetrized:
        avg = 0.5 * (energies[:, None] + energies[None, :])
        arg = avg[:, :, None, None] - avg[None, None, :, :]
    else:
        diff = energies[:, None] - energies[None, :]
        arg = np.broadcast_to(diff[None, :, None, :], (n, n, n, n))
    w = kernel_weights(arg, eta, sharp)
    pref = 2.0 * np.pi / hbar
    return pref * hp[:, None, :, None] * np.conj(hp)[None, :, None, :] * w


def _conjugation_image(s: np.ndarray, n: int) -> np.ndarray:
    """Superoperator of rho -> (S(rho^dag))^dag, i.e. the Hermitian-conjugate map."""
    return np.conj(s.reshape(n, n, n, n).transpose(1, 0, 3, 2)).reshape(n * n, n * n)


def rate_superoperator(p: np.ndarray) -> np.ndarray:
    """Assemble the collision superoperator from a rate tensor.

    Implements drho[a,b] = (1/2) sum_{c,d} (P[a,b,c,d] rho[c,d]
    - P[a,d,c,c] rho[d,b]) plus the Hermitian conjugate of the whole map.
    """
    n = p.shape[0]
    eye = np.eye(n)
    out = np.einsum("adcc->ad", p)
    half = 0.5 * p.reshape(n * n, n * n) - 0.5 * np.kron(out, eye)
    return half + _conjugation_image(half, n)


def double_commutator_superoperator(ops: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -(1/2) sum_k [L_k, [L_k, rho]]."""
    k, n = ops.shape[0], ops.shape[1]
    s = np.zeros((n * n, n * n), dtype=complex)
    eye = np.eye(n)
    for i in range(k):
        L = ops[i]
        L2 = L @ L
        s += -0.5 * (np.kron(L2, eye) - 2.0 * np.kron(L, L.T) + np.kron(eye, L2.T))
    return s
