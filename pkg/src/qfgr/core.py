"""Domain types, validation, and seeded random instance generation.

Conventions used throughout the package: energies are dimensionless multiples
of a reference energy, times are measured in hbar over that reference energy,
and hbar itself is carried explicitly (default 1.0) so rate formulas can be
written literally.  All types are immutable values after construction and all
operations are pure functions of their arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: default tolerance for structural invariants (hermiticity, trace, positivity)
STRUCTURAL_TOL = 1e-12


class DimensionError(ValueError):
    """Input has the wrong shape or an unusable dimension."""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DeltaKernel:
    """Finite-width stand-in for the energy-conserving delta on a discrete spectrum.

    mode "gaussian": w(x) = exp(-x^2 / 2 eta^2) / (sqrt(2 pi) eta).
    mode "sharp":    w(x) = 1 / (sqrt(2 pi) eta) for |x| <= eta, else 0.

    Both modes have units 1/energy and share the same peak weight, so results
    in the two modes are directly comparable as eta shrinks.
    """

    mode: str
    eta: float

    def __post_init__(self) -> None:
        if self.mode not in ("gaussian", "sharp"):
            raise ParameterError(f"unknown kernel mode {self.mode!r}")
        if not self.eta > 0:
            raise ParameterError("kernel width eta must be > 0")

    @property
    def sharp(self) -> bool:
        return self.mode == "sharp"

    def to_dict(self) -> dict:
        return {"mode": self.mode, "eta": self.eta}

    @staticmethod
    def from_dict(d: dict) -> "DeltaKernel":
        return DeltaKernel(mode=d["mode"], eta=float(d["eta"]))


@dataclass(frozen=True)
class SystemSpec:
    """A noninteracting spectrum with a Hermitian coupling matrix.

    energies[i] is the energy of basis state i; interaction is the matrix of
    the perturbation in that basis.  Construction rejects non-Hermitian input
    beyond a 1e-12 relative tolerance and symmetrizes the rest away so that
    downstream code may rely on exact hermiticity.
    """

    energies: np.ndarray
    interaction: np.ndarray
    kernel: DeltaKernel
    hbar: float = 1.0

    def __post_init__(self) -> None:
        e = np.asarray(self.energies, dtype=float).reshape(-1)
        h = np.asarray(self.interaction, dtype=complex)
        if e.size < 2:
            raise DimensionError("at least two basis states are required")
        if h.shape != (e.size, e.size):
            raise DimensionError(
                f"interaction shape {h.shape} does not match {e.size} energies"
            )
        if not self.hbar > 0:
            raise ParameterError("hbar must be > 0")
        scale = max(np.abs(h).max(), 1.0)
        defect = np.abs(h - h.conj().T).max()
        if defect > STRUCTURAL_TOL * scale:
            raise ParameterError(
                f"interaction is not Hermitian (defect {defect:.3e} at scale {scale:.3e})"
            )
        object.__setattr__(self, "energies", _readonly(e))
        object.__setattr__(self, "interaction", _readonly((h + h.conj().T) / 2.0))

    @property
    def n(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class ValidationReport:
    """Scalar defects of a density-matrix candidate; pass/fail is the caller's call."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tol: float = STRUCTURAL_TOL

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= self.tol
            and self.trace_defect <= self.tol
            and self.min_eigenvalue >= -self.tol
        )


def validate_density(data: np.ndarray, tol: float = STRUCTURAL_TOL) -> ValidationReport:
    """Measure hermiticity defect, trace defect, and minimum eigenvalue of `data`.

    Raises DimensionError for non-square input.  The report never raises on
    defective values; construction-time enforcement lives in DensityMatrix.
    """
    a = np.asarray(data, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"density matrix candidate must be square, got {a.shape}")
    herm = float(np.abs(a - a.conj().T).max())
    trace = float(abs(a.trace() - 1.0))
    min_eig = float(np.linalg.eigvalsh((a + a.conj().T) / 2.0)[0])
    return ValidationReport(herm, trace, min_eig, tol)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state matrix.

    Use `DensityMatrix.raw` to wrap evolution snapshots without validation;
    trajectory snapshots are allowed to violate positivity, measuring that
    violation is part of what this package is for.
    """

    data: np.ndarray
    validated: bool = True

    def __post_init__(self) -> None:
        a = np.asarray(self.data, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"density matrix must be square, got {a.shape}")
        if self.validated:
            report = validate_density(a)
            if not report.ok:
                raise ParameterError(
                    "invalid density matrix: hermiticity defect "
                    f"{report.hermiticity_defect:.3e}, trace defect "
                    f"{report.trace_defect:.3e}, min eigenvalue "
                    f"{report.min_eigenvalue:.3e}"
                )
        object.__setattr__(self, "data", _readonly(a))

    @staticmethod
    def raw(data: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(data, validated=False)

    @staticmethod
    def maximally_mixed(n: int) -> "DensityMatrix":
        if n < 1:
            raise DimensionError("dimension must be >= 1")
        return DensityMatrix(np.eye(n, dtype=complex) / n)

    @staticmethod
    def pure(n: int, level: int) -> "DensityMatrix":
        if n < 1:
            raise DimensionError("dimension must be >= 1")
        if not 0 <= level < n:
            raise ParameterError(f"pure level {level} outside 0..{n - 1}")
        a = np.zeros((n, n), dtype=complex)
        a[level, level] = 1.0
        return DensityMatrix(a)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class Distribution:
    """Semiclassical occupation numbers over the noninteracting basis."""

    f: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.f, dtype=float).reshape(-1)
        if a.size == 0:
            raise DimensionError("distribution must not be empty")
        if a.min() < -STRUCTURAL_TOL:
            raise ParameterError(f"negative occupation {a.min():.3e}")
        object.__setattr__(self, "f", _readonly(a))

    @property
    def n(self) -> int:
        return self.f.size


def _complex_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    re = rng.standard_normal((n, n))
    im = rng.standard_normal((n, n))
    return re + 1j * im


def random_density(seed: int, n: int) -> DensityMatrix:
    """Ginibre-ensemble state: A A^dag / tr(A A^dag) with A standard complex Gaussian.

    Deterministic for fixed (seed, n); always unit-trace and positive
    semidefinite by construction.
    """
    if n < 1:
        raise DimensionError("dimension must be >= 1")
    a = _complex_gaussian(np.random.default_rng(seed), n)
    rho = a @ a.conj().T
    return DensityMatrix(rho / rho.trace().real)


def random_system(
    seed: int,
    n: int,
    level_spacing: float,
    coupling_scale: float,
    kernel: DeltaKernel,
    hbar: float = 1.0,
) -> SystemSpec:
    """Seeded random instance: sorted uniform energies and a GUE-like coupling.

    Energies are drawn uniformly in [0, (n-1)*level_spacing] and sorted; the
    coupling is (B + B^dag)/2 with B a standard complex Gaussian scaled by
    coupling_scale, so the output is exactly Hermitian.
    """
    if n < 2:
        raise DimensionError("at least two basis states are required")
    if not level_spacing > 0:
        raise ParameterError("level_spacing must be > 0")
    if coupling_scale < 0:
        raise ParameterError("coupling_scale must be >= 0")
    rng = np.random.default_rng(seed)
    energies = np.sort(rng.uniform(0.0, (n - 1) * level_spacing, size=n))
    b = coupling_scale * _complex_gaussian(rng, n)
    return SystemSpec(
        energies=energies,
        interaction=(b + b.conj().T) / 2.0,
        kernel=kernel,
        hbar=hbar,
    )


def instance_seeds(master_seed: int, index: int, count: int = 2) -> tuple[int, ...]:
    """Derive `count` independent integer seeds for ensemble instance `index`.

    Uses numpy's SeedSequence so that results are independent of how instances
    are distributed over workers.
    """
    state = np.random.SeedSequence((int(master_seed), int(index))).generate_state(count)
    return tuple(int(x) for x in state)
