"""Comparative diagnostics: positivity scans, a seeded violation search,
conditional complete positivity of generators, and population-coherence
block coupling.

The conditional-CP criterion works on the generator itself rather than on
exponentiated channels: a trace-preserving, hermiticity-preserving generator
produces a completely positive semigroup iff its Choi matrix, projected onto
the orthocomplement of the maximally entangled vector, is positive
semidefinite.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    DeltaKernel,
    DensityMatrix,
    SystemSpec,
    instance_seeds,
    random_density,
    random_system,
)
from .evolution import TimeGrid, Trajectory, propagate
from .generators import (
    Superoperator,
    coherent_liouvillian,
    conventional_rates,
    hermiticity_defect,
    rates_to_superoperator,
    trace_defect,
)

__all__ = [
    "ScanResult",
    "ViolationReport",
    "CpReport",
    "T3Norms",
    "PurityEntropy",
    "positivity_scan",
    "search_positivity_violation",
    "conditional_cp_check",
    "choi_matrix",
    "t3_block_norm",
    "purity_entropy",
]


@dataclass(frozen=True)
class ScanResult:
    min_eigenvalue: float
    time_index: int
    time: float


def positivity_scan(traj: Trajectory) -> ScanResult:
    """Minimum snapshot eigenvalue over a trajectory and where it occurs."""
    idx = int(np.argmin(traj.min_eigenvalues))
    return ScanResult(
        min_eigenvalue=float(traj.min_eigenvalues[idx]),
        time_index=idx,
        time=float(traj.times[idx]),
    )


@dataclass(frozen=True)
class ViolationReport:
    """Worst positivity excursion found by the seeded search.

    Carries every seed needed to rebuild the witness instance exactly.
    """

    master_seed: int
    instance_index: int
    spec_seed: int
    rho_seed: int
    n: int
    level_spacing: float
    coupling_scale: float
    kernel: DeltaKernel
    min_eigenvalue: float
    time: float
    grid_t1: float
    grid_steps: int
    violation: bool

    def to_dict(self) -> dict:
        d = {
            "master_seed": self.master_seed,
            "instance_index": self.instance_index,
            "spec_seed": self.spec_seed,
            "rho_seed": self.rho_seed,
            "n": self.n,
            "level_spacing": self.level_spacing,
            "coupling_scale": self.coupling_scale,
            "kernel": self.kernel.to_dict(),
            "min_eigenvalue": self.min_eigenvalue,
            "time": self.time,
            "grid_t1": self.grid_t1,
            "grid_steps": self.grid_steps,
            "violation": self.violation,
        }
        return d

    @staticmethod
    def from_dict(d: dict) -> "ViolationReport":
        return ViolationReport(
            master_seed=int(d["master_seed"]),
            instance_index=int(d["instance_index"]),
            spec_seed=int(d["spec_seed"]),
            rho_seed=int(d["rho_seed"]),
            n=int(d["n"]),
            level_spacing=float(d["level_spacing"]),
            coupling_scale=float(d["coupling_scale"]),
            kernel=DeltaKernel.from_dict(d["kernel"]),
            min_eigenvalue=float(d["min_eigenvalue"]),
            time=float(d["time"]),
            grid_t1=float(d["grid_t1"]),
            grid_steps=int(d["grid_steps"]),
            violation=bool(d["violation"]),
        )


def _score_instance(
    master_seed: int,
    index: int,
    n_range: tuple[int, int],
    level_spacing: float,
    coupling_scale: float,
    kernel: DeltaKernel,
    spans: float,
    steps: int,
) -> tuple[float, float, int, int, int, float]:
    spec_seed, rho_seed, n_pick = instance_seeds(master_seed, index, count=3)
    n = n_range[0] + n_pick % (n_range[1] - n_range[0] + 1)
    spec = random_system(spec_seed, n, level_spacing, coupling_scale, kernel)
    rho0 = random_density(rho_seed, n)
    dissipator = rates_to_superoperator(conventional_rates(spec))
    scale = dissipator.norm()
    t1 = spans / scale if scale > 1e-12 else 1.0
    grid = TimeGrid(0.0, t1, steps)
    gen = dissipator + coherent_liouvillian(spec)
    traj = propagate(gen, rho0, grid, method="expm")
    scan = positivity_scan(traj)
    return scan.min_eigenvalue, scan.time, spec_seed, rho_seed, n, grid.t1


def search_positivity_violation(
    master_seed: int,
    budget: int,
    n_range: tuple[int, int] = (3, 6),
    coupling_scale: float = 0.3,
    kernel: DeltaKernel = DeltaKernel("gaussian", 0.05),
    level_spacing: float = 1.0,
    spans: float = 10.0,
    steps: int = 240,
    threads: int = 1,
    violation_threshold: float = -1e-9,
) -> ViolationReport:
    """Random search for conventional-generator positivity violations.

    Propagates `budget` seeded (system, state) instances under the
    conventional collision generator plus the coherent term and returns the
    instance with the most negative trajectory eigenvalue.  Scores are pure
    functions of (master_seed, index), so the result is identical for any
    thread count.  Finding no violation is a valid outcome: the report then
    carries the least-positive margin seen.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if n_range[0] < 2 or n_range[1] < n_range[0]:
        raise ValueError(f"bad dimension range {n_range}")

    def score(i: int):
        return _score_instance(
            master_seed, i, n_range, level_spacing, coupling_scale, kernel, spans, steps
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(score, range(budget)))
    else:
        results = [score(i) for i in range(budget)]

    best_index = min(range(budget), key=lambda i: (results[i][0], i))
    min_eig, time, spec_seed, rho_seed, n, t1 = results[best_index]
    return ViolationReport(
        master_seed=master_seed,
        instance_index=best_index,
        spec_seed=spec_seed,
        rho_seed=rho_seed,
        n=n,
        level_spacing=level_spacing,
        coupling_scale=coupling_scale,
        kernel=kernel,
        min_eigenvalue=min_eig,
        time=time,
        grid_t1=t1,
        grid_steps=steps,
        violation=min_eig < violation_threshold,
    )


def choi_matrix(gen: Superoperator) -> np.ndarray:
    """Choi matrix of a superoperator: C[(a,c),(b,d)] = S[(a,b),(c,d)]."""
    n = gen.n
    return gen.matrix.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


@dataclass(frozen=True)
class CpReport:
    """Conditional complete positivity of a generator at a scale-relative tolerance."""

    choi_min_eigenvalue: float
    verdict: str  # "cp" | "not-cp"
    tol: float

    @property
    def cp(self) -> bool:
        return self.verdict == "cp"


def conditional_cp_check(gen: Superoperator, tol_factor: float = 1e-10) -> CpReport:
    """Decide whether a generator produces a completely positive semigroup.

    Requires a trace-preserving, hermiticity-preserving input (checked
    first).  The verdict is "cp" iff the Choi matrix of the generator,
    compressed to the orthocomplement of the maximally entangled vector, has
    minimum eigenvalue >= -tol with tol = tol_factor * ||gen||.
    """
    scale = float(np.linalg.norm(gen.matrix))
    precheck_tol = 1e-9 * max(scale, 1.0)
    td = trace_defect(gen)
    hd = hermiticity_defect(gen)
    if td > precheck_tol:
        raise ValueError(f"generator is not trace-preserving (defect {td:.3e})")
    if hd > precheck_tol:
        raise ValueError(f"generator is not hermiticity-preserving (defect {hd:.3e})")
    n = gen.n
    c = choi_matrix(gen)
    omega = np.eye(n, dtype=complex).reshape(-1) / np.sqrt(n)
    q = np.eye(n * n, dtype=complex) - np.outer(omega, omega.conj())
    m = q @ c @ q
    m = (m + m.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(m)[0])
    tol = tol_factor * scale
    return CpReport(
        choi_min_eigenvalue=min_eig,
        verdict="cp" if min_eig >= -tol else "not-cp",
        tol=tol,
    )


@dataclass(frozen=True)
class T3Norms:
    """Frobenius norms of the population<->coherence coupling blocks."""

    pop_to_coh: float
    coh_to_pop: float


def t3_block_norm(gen: Superoperator, spec: SystemSpec) -> T3Norms:
    """Coupling between the population and coherence sectors of a generator.

    The partition is taken in the eigenbasis of the noninteracting
    Hamiltonian: populations are the diagonal index pairs of the vectorized
    state, coherences the off-diagonal ones.
    """
    n = gen.n
    if spec.n != n:
        raise ValueError(f"spec dimension {spec.n} does not match generator {n}")
    idx = np.arange(n)
    pop = idx * n + idx
    coh = np.setdiff1d(np.arange(n * n), pop)
    s = gen.matrix
    return T3Norms(
        pop_to_coh=float(np.linalg.norm(s[np.ix_(coh, pop)])),
        coh_to_pop=float(np.linalg.norm(s[np.ix_(pop, coh)])),
    )


@dataclass(frozen=True)
class PurityEntropy:
    purity: float
    entropy: float


def purity_entropy(rho: DensityMatrix) -> PurityEntropy:
    """tr rho^2 and the von Neumann entropy -tr rho ln rho (natural log).

    Eigenvalues are clipped at zero before the logarithm, so slightly
    defective states do not produce NaNs.
    """
    eigs = np.linalg.eigvalsh((rho.data + rho.data.conj().T) / 2.0)
    clipped = np.clip(eigs, 0.0, None)
    purity = float((eigs**2).sum())
    nonzero = clipped[clipped > 0]
    entropy = float(-(nonzero * np.log(nonzero)).sum())
    return PurityEntropy(purity=purity, entropy=entropy)
