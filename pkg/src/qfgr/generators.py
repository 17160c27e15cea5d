"""Collision generators for a discrete spectrum with a Hermitian coupling.

Four generators are built here, all as dense matrices acting on row-major
vectorized density matrices (index pair (a, b) maps to a*n + b):

* the exact coherent Liouvillian -(i/hbar)[H, rho];
* the conventional Markov collision superoperator, assembled from the rate
  tensor P[a,b,c,d] = (2 pi/hbar) H'[a,c] conj(H'[b,d]) w(e_b - e_d);
* the time-symmetrized collision superoperator, either from the analogous
  rate tensor with the pair-averaged energy argument, or equivalently as a
  sum of double commutators over a family of frequency-grouped operators;
* the semiclassical golden-rule rate matrix and its rate-equation right-hand
  side.

The energy-conserving delta is regularized by a DeltaKernel; see
`qfgr.core.DeltaKernel` for the two modes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    DeltaKernel,
    DimensionError,
    Distribution,
    SystemSpec,
    _readonly,
)

__all__ = [
    "RateTensor",
    "Superoperator",
    "LindbladFamily",
    "FgrMatrix",
    "delta_kernel",
    "conventional_rates",
    "symmetrized_rates",
    "rates_to_superoperator",
    "lindblad_family",
    "lindblad_superoperator",
    "coherent_liouvillian",
    "fgr_rates",
    "boltzmann_rhs",
    "trace_defect",
    "hermiticity_defect",
]


@dataclass(frozen=True)
class RateTensor:
    """Four-index generalized scattering rates P[a,b,c,d], units 1/time."""

    p: np.ndarray
    flavor: str  # "conventional" | "symmetrized"

    def __post_init__(self) -> None:
        a = np.asarray(self.p, dtype=complex)
        if a.ndim != 4 or len(set(a.shape)) != 1:
            raise DimensionError(f"rate tensor must be n^4, got shape {a.shape}")
        object.__setattr__(self, "p", _readonly(a))

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def diagonal_slice(self) -> np.ndarray:
        """P[a,a,c,c] as an n x n real matrix (the semiclassical rates)."""
        n = self.n
        idx = np.arange(n)
        return self.p[idx[:, None], idx[:, None], idx[None, :], idx[None, :]].real


@dataclass(frozen=True)
class Superoperator:
    """Dense n^2 x n^2 generator on row-major vectorized matrices, units 1/time."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.matrix, dtype=complex)
        n = int(round(np.sqrt(a.shape[0]))) if a.ndim == 2 else 0
        if a.ndim != 2 or a.shape[0] != a.shape[1] or n * n != a.shape[0]:
            raise DimensionError(f"superoperator must be n^2 x n^2, got {a.shape}")
        object.__setattr__(self, "matrix", _readonly(a))

    @property
    def n(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        n = self.n
        return (self.matrix @ np.asarray(rho, dtype=complex).reshape(n * n)).reshape(n, n)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        return Superoperator(self.matrix + other.matrix)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class LindbladFamily:
    """Frequency-grouped operator family (omega, L_omega), units of L: 1/sqrt(time).

    Each operator is supported on the index pairs (a, b) whose half energy
    difference (e_a - e_b)/2 matches -hbar*omega under the kernel's matching
    rule; the family is closed under (omega, L) -> (-omega, L^dagger).  When
    the grouping cannot resolve the matching exactly (gaussian kernel, or
    clusters wider than the window) `approximate` is set and the assembled
    generator only approximates the rate-tensor construction.
    """

    n: int
    terms: tuple
    approximate: bool

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class FgrMatrix:
    """Semiclassical golden-rule rates P[a,c] >= 0, units 1/time; symmetric."""

    p: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.p, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"rate matrix must be square, got {a.shape}")
        object.__setattr__(self, "p", _readonly(a))

    @property
    def n(self) -> int:
        return self.p.shape[0]


def delta_kernel(x, kernel: DeltaKernel):
    """Regularized energy-matching weight w(x), units 1/energy."""
    arr = np.asarray(x, dtype=float)
    out = _kernels.kernel_weights(arr, kernel.eta, kernel.sharp)
    if arr.ndim == 0:
        return float(out)
    return out


def conventional_rates(spec: SystemSpec) -> RateTensor:
    """Rate tensor with the second-slot energy-difference matching argument."""
    p = _kernels.build_rate_tensor(
        spec.interaction, spec.energies, spec.hbar, spec.kernel.eta,
        spec.kernel.sharp, False,
    )
    return RateTensor(p, "conventional")


def symmetrized_rates(spec: SystemSpec) -> RateTensor:
    """Rate tensor with the pair-averaged energy matching argument."""
    p = _kernels.build_rate_tensor(
        spec.interaction, spec.energies, spec.hbar, spec.kernel.eta,
        spec.kernel.sharp, True,
    )
    return RateTensor(p, "symmetrized")


def rates_to_superoperator(rates: RateTensor) -> Superoperator:
    """Collision superoperator of a rate tensor.

    Implements drho[a,b]/dt = (1/2) sum_{c,d} (P[a,b,c,d] rho[c,d]
    - P[a,d,c,c] rho[d,b]) plus the Hermitian conjugate of the map, which is
    the explicit form of the in/out-scattering double-commutator structure.
    """
    return Superoperator(_kernels.rate_superoperator(rates.p))


def _frequency_classes(nu_values: np.ndarray, eta: float) -> list[np.ndarray]:
    """Partition flat nu values into clusters: transitive closure of |gap| <= eta."""
    order = np.argsort(nu_values, kind="stable")
    classes: list[list[int]] = []
    for k in order:
        if classes and nu_values[k] - nu_values[classes[-1][-1]] <= eta:
            classes[-1].append(int(k))
        else:
            classes.append([int(k)])
    return [np.array(c, dtype=int) for c in classes]


def lindblad_family(spec: SystemSpec) -> LindbladFamily:
    """Group index pairs by half energy difference and emit one operator per class.

    Entry weights are sqrt((2 pi/hbar) * w) * H'[a,b] where w is the kernel
    weight of the entry's mismatch from its class center, so that for a sharp
    kernel with resolved classes the assembled double-commutator generator
    equals the symmetrized rate-tensor superoperator exactly.
    """
    n = spec.n
    e = spec.energies
    eta = spec.kernel.eta
    nu = ((e[:, None] - e[None, :]) / 2.0).reshape(-1)
    classes = _frequency_classes(nu, eta)

    exact = spec.kernel.sharp
    pref = 2.0 * np.pi / spec.hbar
    hp_flat = spec.interaction.reshape(-1)
    terms = []
    for members in classes:
        center = float(nu[members].mean())
        diameter = float(nu[members].max() - nu[members].min())
        if diameter > eta:
            exact = False
        if spec.kernel.sharp:
            w = np.full(members.size, delta_kernel(0.0, spec.kernel))
        else:
            w = delta_kernel(2.0 * (nu[members] - center), spec.kernel)
        op = np.zeros(n * n, dtype=complex)
        op[members] = np.sqrt(pref * w) * hp_flat[members]
        if np.abs(op).max() == 0.0:
            continue
        terms.append((-center / spec.hbar, _readonly(op.reshape(n, n))))
    return LindbladFamily(n=n, terms=tuple(terms), approximate=not exact)


def lindblad_superoperator(family: LindbladFamily) -> Superoperator:
    """Sum of double commutators: rho -> -(1/2) sum_omega [L_w, [L_w, rho]]."""
    if not family.terms:
        return Superoperator(np.zeros((family.n**2, family.n**2), dtype=complex))
    ops = np.ascontiguousarray([op for _, op in family.terms], dtype=complex)
    return Superoperator(_kernels.double_commutator_superoperator(ops))


def coherent_liouvillian(spec: SystemSpec, include_interaction: bool = False) -> Superoperator:
    """Exact commutator generator -(i/hbar)[H, rho] with H = H0 (+ H' optionally)."""
    h = np.diag(spec.energies).astype(complex)
    if include_interaction:
        h = h + spec.interaction
    eye = np.eye(spec.n)
    mat = (-1j / spec.hbar) * (np.kron(h, eye) - np.kron(eye, h.T))
    return Superoperator(mat)


def fgr_rates(spec: SystemSpec) -> FgrMatrix:
    """Golden-rule matrix (2 pi/hbar) |H'[a,c]|^2 w(e_a - e_c).

    Mirrors the arithmetic of the rate tensors' diagonal slice, so the three
    agree to the last bits rather than merely to truncation error.
    """
    hp = spec.interaction
    w = _kernels.kernel_weights(
        spec.energies[:, None] - spec.energies[None, :],
        spec.kernel.eta,
        spec.kernel.sharp,
    )
    pref = 2.0 * np.pi / spec.hbar
    return FgrMatrix(((pref * hp) * np.conj(hp)).real * w)


def boltzmann_rhs(rates: FgrMatrix, f: Distribution) -> np.ndarray:
    """Rate-equation right-hand side df_a/dt = sum_c (P[a,c] f_c - P[c,a] f_a)."""
    if rates.n != f.n:
        raise DimensionError(
            f"rate matrix dimension {rates.n} does not match distribution {f.n}"
        )
    p = rates.p
    return p @ f.f - p.sum(axis=0) * f.f


def trace_defect(s: Superoperator) -> float:
    """Largest column sum of the trace functional applied to the generator.

    Zero (within round-off) means every output of the generator is traceless,
    i.e. the induced flow preserves tr rho.
    """
    n = s.n
    rows = np.arange(n) * n + np.arange(n)
    return float(np.abs(s.matrix[rows, :].sum(axis=0)).max())


def hermiticity_defect(s: Superoperator) -> float:
    """Deviation from S[(a,b),(c,d)] = conj(S[(b,a),(d,c)]); zero means S maps
    Hermitian matrices to Hermitian matrices."""
    n = s.n
    image = np.conj(s.matrix.reshape(n, n, n, n).transpose(1, 0, 3, 2)).reshape(n * n, n * n)
    return float(np.abs(s.matrix - image).max())
