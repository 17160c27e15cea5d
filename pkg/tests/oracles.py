"""Independent brute-force oracles used to pin expected values.

Everything here is written with explicit python loops and elementary matrix
products only, deliberately sharing no code path with qfgr's assembly
kernels.
"""
import math

import numpy as np


def delta_weight(x: float, mode: str, eta: float) -> float:
    peak = 1.0 / (math.sqrt(2.0 * math.pi) * eta)
    if mode == "sharp":
        return peak if abs(x) <= eta else 0.0
    return peak * math.exp(-(x * x) / (2.0 * eta * eta))


def rate_entry(hp, e, hbar, mode, eta, a, b, c, d, symmetrized) -> complex:
    if symmetrized:
        arg = (e[a] + e[b]) / 2.0 - (e[c] + e[d]) / 2.0
    else:
        arg = e[b] - e[d]
    return (2.0 * math.pi / hbar) * hp[a, c] * np.conj(hp[b, d]) * delta_weight(arg, mode, eta)


def rate_tensor_loops(hp, e, hbar, mode, eta, symmetrized) -> np.ndarray:
    n = len(e)
    p = np.zeros((n, n, n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    p[a, b, c, d] = rate_entry(hp, e, hbar, mode, eta, a, b, c, d, symmetrized)
    return p


def balance_rhs_loops(p: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Four-index in/out balance applied to a Hermitian rho, plus its H.c."""
    n = rho.shape[0]
    m = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            acc = 0.0 + 0.0j
            for c in range(n):
                for d in range(n):
                    acc += p[a, b, c, d] * rho[c, d]
                    acc -= p[a, d, c, c] * rho[d, b]
            m[a, b] = 0.5 * acc
    return m + m.conj().T


def double_commutator_apply(x: np.ndarray, y: np.ndarray, rho: np.ndarray) -> np.ndarray:
    inner = y @ rho - rho @ y
    return x @ inner - inner @ x


def k_matrix(hp, e, hbar, mode, eta) -> np.ndarray:
    n = len(e)
    k = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            k[a, b] = 2.0 * math.pi * hp[a, b] * delta_weight(e[a] - e[b], mode, eta)
    return k


def conventional_apply(hp, e, hbar, mode, eta, rho) -> np.ndarray:
    """Operator-form conventional generator: -(1/2)[H'/hbar, [K, rho]]."""
    return -0.5 * double_commutator_apply(hp / hbar, k_matrix(hp, e, hbar, mode, eta), rho)


def frequency_family_loops(hp, e, hbar, eta):
    """Sharp-kernel frequency-grouped operators, assembled with loops.

    Index pairs are grouped by half energy difference; pairs within eta of an
    existing group join it.
    """
    n = len(e)
    peak = delta_weight(0.0, "sharp", eta)
    groups = []  # list of (values, members)
    for a in range(n):
        for b in range(n):
            nu = (e[a] - e[b]) / 2.0
            placed = False
            for values, members in groups:
                if min(abs(nu - v) for v in values) <= eta:
                    values.append(nu)
                    members.append((a, b))
                    placed = True
                    break
            if not placed:
                groups.append(([nu], [(a, b)]))
    ops = []
    for _, members in groups:
        op = np.zeros((n, n), dtype=complex)
        for (a, b) in members:
            op[a, b] = math.sqrt(2.0 * math.pi / hbar * peak) * hp[a, b]
        ops.append(op)
    return ops


def symmetrized_family_apply(hp, e, hbar, eta, rho) -> np.ndarray:
    """Operator-form symmetrized generator via the sharp-kernel family."""
    out = np.zeros_like(rho)
    for op in frequency_family_loops(hp, e, hbar, eta):
        out = out - 0.5 * double_commutator_apply(op, op, rho)
    return out


def purity_entropy_eig(rho: np.ndarray):
    eigs = np.linalg.eigvalsh(rho)
    purity = float(sum(x * x for x in eigs))
    entropy = -float(sum(x * math.log(x) for x in eigs if x > 0))
    return purity, entropy
