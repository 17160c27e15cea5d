"""Time propagation of density matrices and semiclassical distributions.

Propagation never aborts on positivity violations: the violation is the
observable of interest, so every snapshot is recorded together with its
trace, hermiticity defect, minimum eigenvalue, and purity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import DensityMatrix, DimensionError, Distribution, ParameterError
from .generators import FgrMatrix, Superoperator

__all__ = [
    "TimeGrid",
    "Trajectory",
    "PropagationError",
    "NoSteadyStateError",
    "StepSizeError",
    "SteadyStateResult",
    "propagate",
    "steady_state",
    "propagate_boltzmann",
    "relaxation_grid",
]


class PropagationError(RuntimeError):
    """Stepping produced a non-finite state; carries the last valid snapshot index."""

    def __init__(self, message: str, last_valid_index: int):
        super().__init__(message)
        self.last_valid_index = last_valid_index


class NoSteadyStateError(RuntimeError):
    """The generator has no null vector with nonzero trace at tolerance."""


class StepSizeError(RuntimeError):
    """Integration produced occupations below tolerance; a finer grid is needed."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of steps+1 points on [t0, t1]."""

    t0: float
    t1: float
    steps: int

    def __post_init__(self) -> None:
        if not self.t1 > self.t0:
            raise ParameterError("t1 must be greater than t0")
        if self.steps < 1:
            raise ParameterError("at least one step is required")

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / self.steps

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.steps + 1)


@dataclass(frozen=True)
class Trajectory:
    """Snapshots plus per-snapshot diagnostics on a TimeGrid.

    Snapshots are stored unvalidated; they may violate positivity.
    """

    grid: TimeGrid
    states: tuple
    traces: np.ndarray
    hermiticity_defects: np.ndarray
    min_eigenvalues: np.ndarray
    purities: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def relaxation_grid(gen: Superoperator, spans: float = 10.0,
                    steps_per_unit: int = 200, max_steps: int = 4000) -> TimeGrid:
    """Grid covering `spans` characteristic times 1/||gen|| of a generator.

    Falls back to a unit horizon for a (near-)zero generator.
    """
    scale = gen.norm()
    t1 = spans / scale if scale > 1e-12 else 1.0
    steps = int(min(max(steps_per_unit, round(steps_per_unit * spans)), max_steps))
    return TimeGrid(0.0, t1, steps)


def _diagnose(snapshots: np.ndarray) -> tuple[np.ndarray, ...]:
    herm = np.abs(snapshots - np.conj(np.swapaxes(snapshots, 1, 2))).max(axis=(1, 2))
    traces = np.einsum("kii->k", snapshots)
    sym = (snapshots + np.conj(np.swapaxes(snapshots, 1, 2))) / 2.0
    eigs = np.linalg.eigvalsh(sym)
    return traces, herm, eigs[:, 0].real, (eigs**2).sum(axis=1).real


def propagate(gen: Superoperator, rho0: DensityMatrix, grid: TimeGrid,
              method: str = "expm") -> Trajectory:
    """Propagate rho0 under a time-independent generator.

    "expm" computes exp(gen*dt) once by scaling-and-squaring and applies it
    repeatedly; "rk4" takes classical fourth-order steps.  Diagnostics are
    recorded at every snapshot regardless of their values.
    """
    if gen.n != rho0.n:
        raise DimensionError(f"generator dimension {gen.n} does not match state {rho0.n}")
    if method not in ("expm", "rk4"):
        raise ParameterError(f"unknown propagation method {method!r}")
    n = gen.n
    s = gen.matrix
    dt = grid.dt
    v = rho0.data.reshape(-1).astype(complex)
    snapshots = np.empty((grid.steps + 1, n, n), dtype=complex)
    snapshots[0] = v.reshape(n, n)

    if method == "expm":
        stepper = scipy.linalg.expm(s * dt)
        for k in range(1, grid.steps + 1):
            v = stepper @ v
            if not np.all(np.isfinite(v.view(float))):
                raise PropagationError(f"non-finite state at step {k}", k - 1)
            snapshots[k] = v.reshape(n, n)
    else:
        for k in range(1, grid.steps + 1):
            k1 = s @ v
            k2 = s @ (v + 0.5 * dt * k1)
            k3 = s @ (v + 0.5 * dt * k2)
            k4 = s @ (v + dt * k3)
            v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(v.view(float))):
                raise PropagationError(f"non-finite state at step {k}", k - 1)
            snapshots[k] = v.reshape(n, n)

    traces, herm, min_eigs, purities = _diagnose(snapshots)
    return Trajectory(
        grid=grid,
        states=tuple(DensityMatrix.raw(m) for m in snapshots),
        traces=traces,
        hermiticity_defects=herm,
        min_eigenvalues=min_eigs,
        purities=purities,
    )


@dataclass(frozen=True)
class SteadyStateResult:
    state: DensityMatrix
    residual: float
    degenerate: bool


def steady_state(gen: Superoperator, tol: float = 1e-10) -> SteadyStateResult:
    """Trace-normalized null-space element of the generator.

    The null space is taken at relative tolerance `tol` on the singular
    values; if it is multi-dimensional the trace-carrying element is returned
    and the result is flagged degenerate.
    """
    s = gen.matrix
    n = gen.n
    _, sing, vh = np.linalg.svd(s)
    cutoff = tol * max(float(sing.max()), 1e-300)
    null_rows = vh[sing <= cutoff]
    if null_rows.shape[0] == 0:
        raise NoSteadyStateError(f"no singular value below {cutoff:.3e}")
    basis = null_rows.conj()
    trace_vec = np.eye(n, dtype=complex).reshape(-1)
    overlaps = basis @ trace_vec.conj()
    if np.abs(overlaps).max() <= tol:
        raise NoSteadyStateError("null space carries no trace")
    vec = overlaps.conj() @ basis
    rho = vec.reshape(n, n)
    rho = (rho + rho.conj().T) / 2.0
    rho = rho / rho.trace().real
    residual = float(np.linalg.norm(s @ rho.reshape(-1)))
    return SteadyStateResult(
        state=DensityMatrix.raw(rho),
        residual=residual,
        degenerate=null_rows.shape[0] > 1,
    )


def propagate_boltzmann(rates: FgrMatrix, f0: Distribution, grid: TimeGrid,
                        negativity_tol: float = 1e-12) -> list[Distribution]:
    """Classical rk4 integration of the semiclassical rate equation.

    The right-hand side conserves sum(f) exactly; occupations that dip below
    -negativity_tol indicate too coarse a grid and raise StepSizeError.
    """
    if rates.n != f0.n:
        raise DimensionError(f"rate matrix dimension {rates.n} does not match {f0.n}")
    p = rates.p
    loss = p.sum(axis=0)
    dt = grid.dt

    def rhs(f: np.ndarray) -> np.ndarray:
        return p @ f - loss * f

    f = f0.f.astype(float)
    out = [f.copy()]
    for k in range(grid.steps):
        k1 = rhs(f)
        k2 = rhs(f + 0.5 * dt * k1)
        k3 = rhs(f + 0.5 * dt * k2)
        k4 = rhs(f + dt * k3)
        f = f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if f.min() < -negativity_tol:
            raise StepSizeError(
                f"occupation {f.min():.3e} below -{negativity_tol:g} at step {k + 1}; "
                "use a finer grid"
            )
        out.append(f.copy())
    return [Distribution(f) for f in out]
