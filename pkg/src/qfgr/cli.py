"""Scenario-driven command line front end.

Subcommands:
  run      propagate one scenario, write trajectory.csv + manifest.json
  compare  propagate the same scenario under conventional / qfgr-rates / exact
  search   random search for conventional-generator positivity violations
  rates    dump the nonzero rate-tensor entries and the golden-rule matrix

Configuration is a JSON document; the schema is documented in the README.
Complex matrices are encoded as {"re": [[...]], "im": [[...]]} row-major
arrays.  Every output file is written atomically (temp file + rename) and
every command writes a manifest.json sufficient to reproduce the run
bit-identically; `run --config manifest.json` replays it.

Exit codes: 0 completed (including "no violation found"), 1 usage or
configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .core import (
    DeltaKernel,
    DensityMatrix,
    DimensionError,
    Distribution,
    ParameterError,
    SystemSpec,
    random_density,
    random_system,
)
from .diagnostics import (
    ViolationReport,
    positivity_scan,
    search_positivity_violation,
)
from .evolution import (
    NoSteadyStateError,
    PropagationError,
    StepSizeError,
    TimeGrid,
    propagate,
    propagate_boltzmann,
)
from .generators import (
    Superoperator,
    coherent_liouvillian,
    conventional_rates,
    fgr_rates,
    lindblad_family,
    lindblad_superoperator,
    rates_to_superoperator,
    symmetrized_rates,
)

GENERATORS = ("exact", "conventional", "qfgr-rates", "qfgr-lindblad", "boltzmann")


class ConfigError(ValueError):
    """Unusable configuration; maps to exit status 1."""


# ---------------------------------------------------------------------------
# config decoding


def _decode_complex(obj: dict) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad complex matrix encoding: {exc}") from exc
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ConfigError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    return re + 1j * im


def _build_kernel(cfg: dict) -> DeltaKernel:
    try:
        return DeltaKernel.from_dict(cfg)
    except (KeyError, ParameterError) as exc:
        raise ConfigError(f"bad kernel: {exc}") from exc


def _build_spec(cfg: dict) -> SystemSpec:
    if "kernel" not in cfg:
        raise ConfigError("spec.kernel is required")
    kernel = _build_kernel(cfg["kernel"])
    hbar = float(cfg.get("hbar", 1.0))
    try:
        if "random" in cfg:
            r = cfg["random"]
            return random_system(
                int(r["seed"]), int(r["n"]), float(r["level_spacing"]),
                float(r["coupling_scale"]), kernel, hbar,
            )
        return SystemSpec(
            energies=np.asarray(cfg["energies"], dtype=float),
            interaction=_decode_complex(cfg["interaction"]),
            kernel=kernel,
            hbar=hbar,
        )
    except (KeyError, DimensionError, ParameterError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad spec: {exc}") from exc


def _build_rho0(cfg, n: int) -> DensityMatrix:
    try:
        if cfg == "maximally-mixed":
            return DensityMatrix.maximally_mixed(n)
        if isinstance(cfg, dict) and "pure" in cfg:
            return DensityMatrix.pure(n, int(cfg["pure"]))
        if isinstance(cfg, dict) and "seed" in cfg:
            return random_density(int(cfg["seed"]), n)
        if isinstance(cfg, dict) and "matrix" in cfg:
            return DensityMatrix(_decode_complex(cfg["matrix"]))
    except (DimensionError, ParameterError, ValueError) as exc:
        raise ConfigError(f"bad rho0: {exc}") from exc
    raise ConfigError(
        'rho0 must be "maximally-mixed", {"pure": k}, {"seed": s}, or {"matrix": ...}'
    )


def _build_grid(cfg: dict) -> TimeGrid:
    try:
        return TimeGrid(float(cfg["t0"]), float(cfg["t1"]), int(cfg["steps"]))
    except (KeyError, ParameterError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}") from exc


def _dissipator(name: str, spec: SystemSpec) -> Superoperator:
    if name == "conventional":
        return rates_to_superoperator(conventional_rates(spec))
    if name == "qfgr-rates":
        return rates_to_superoperator(symmetrized_rates(spec))
    if name == "qfgr-lindblad":
        return lindblad_superoperator(lindblad_family(spec))
    raise ConfigError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")


def _build_generator(name: str, spec: SystemSpec, include_coherent: bool) -> Superoperator:
    if name == "exact":
        return coherent_liouvillian(spec, include_interaction=True)
    gen = _dissipator(name, spec)
    if include_coherent:
        gen = gen + coherent_liouvillian(spec)
    return gen


def _element_list(scenario: dict, n: int) -> list[tuple[int, int]]:
    outputs = scenario.get("outputs", {})
    elements = outputs.get("elements")
    if elements is None:
        return [(a, b) for a in range(n) for b in range(n)]
    out = []
    for pair in elements:
        a, b = int(pair[0]), int(pair[1])
        if not (0 <= a < n and 0 <= b < n):
            raise ConfigError(f"output element ({a},{b}) outside dimension {n}")
        out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# output helpers


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(headers: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(headers)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _sha256(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _write_manifest(out_dir: Path, command: str, scenario: dict, files: dict[str, str]) -> None:
    manifest = {
        "kind": "qfgr-manifest",
        "command": command,
        "scenario": scenario,
        "outputs": {name: _sha256(text) for name, text in files.items()},
        "versions": {
            "qfgr": __version__,
            "numpy": np.__version__,
            "scipy": __import__("scipy").__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
            "kernel_backend": BACKEND,
        },
    }
    _atomic_write(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def _resolve_out_dir(args) -> Path:
    if args.out_dir is not None:
        return Path(args.out_dir)
    env = os.environ.get("QFGR_OUT_DIR")
    return Path(env) if env else Path("./out")


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: line {exc.lineno}, {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    if cfg.get("kind") == "qfgr-manifest":
        return cfg["scenario"]
    return cfg


def _apply_seed_override(scenario: dict, seed: int | None, command: str) -> dict:
    if seed is None:
        return scenario
    scenario = json.loads(json.dumps(scenario))  # deep copy
    if command == "search":
        scenario["master_seed"] = seed
        return scenario
    rho0 = scenario.get("rho0")
    if isinstance(rho0, dict) and "seed" in rho0:
        rho0["seed"] = seed
        return scenario
    raise ConfigError("--seed override requires a seeded rho0 in this scenario")


# ---------------------------------------------------------------------------
# trajectory tables


def _trajectory_rows(traj, elements):
    headers = ["t", "trace_re", "herm_defect", "min_eig", "purity"]
    headers.extend(
        f"rho_{a}_{b}_{part}" for a, b in elements for part in ("re", "im")
    )
    rows = []
    for k, t in enumerate(traj.times):
        row = [
            _fmt(t),
            _fmt(traj.traces[k].real),
            _fmt(traj.hermiticity_defects[k]),
            _fmt(traj.min_eigenvalues[k]),
            _fmt(traj.purities[k]),
        ]
        state = traj.states[k].data
        for a, b in elements:
            row.append(_fmt(state[a, b].real))
            row.append(_fmt(state[a, b].imag))
        rows.append(row)
    return headers, rows


def _distribution_rows(grid, snapshots, elements):
    headers = ["t", "trace_re", "herm_defect", "min_eig", "purity"]
    headers.extend(
        f"rho_{a}_{b}_{part}" for a, b in elements for part in ("re", "im")
    )
    rows = []
    for k, t in enumerate(grid.times):
        f = snapshots[k].f
        row = [
            _fmt(t),
            _fmt(f.sum()),
            _fmt(0.0),
            _fmt(f.min()),
            _fmt((f**2).sum()),
        ]
        for a, b in elements:
            row.append(_fmt(f[a] if a == b else 0.0))
            row.append(_fmt(0.0))
        rows.append(row)
    return headers, rows


# ---------------------------------------------------------------------------
# subcommands


def _cmd_run(scenario: dict, out_dir: Path) -> int:
    spec = _build_spec(scenario.get("spec") or {})
    grid = _build_grid(scenario.get("grid") or {})
    generator = scenario.get("generator", "qfgr-rates")
    include_coherent = bool(scenario.get("include_coherent", True))
    method = scenario.get("method", "expm")
    rho0 = _build_rho0(scenario.get("rho0", "maximally-mixed"), spec.n)
    elements = _element_list(scenario, spec.n)

    if generator == "boltzmann":
        off_diag = np.abs(rho0.data - np.diag(np.diag(rho0.data))).max()
        if off_diag > 1e-12:
            raise ConfigError(
                "boltzmann generator requires a diagonal rho0 "
                f"(off-diagonal magnitude {off_diag:.3e})"
            )
        f0 = Distribution(np.diag(rho0.data).real)
        snapshots = propagate_boltzmann(fgr_rates(spec), f0, grid)
        headers, rows = _distribution_rows(grid, snapshots, elements)
        final_trace_defect = abs(snapshots[-1].f.sum() - f0.f.sum())
        min_eig = min(s.f.min() for s in snapshots)
        purities = [float((s.f**2).sum()) for s in snapshots]
    else:
        gen = _build_generator(generator, spec, include_coherent)
        traj = propagate(gen, rho0, grid, method=method)
        headers, rows = _trajectory_rows(traj, elements)
        final_trace_defect = abs(traj.traces[-1] - 1.0)
        min_eig = positivity_scan(traj).min_eigenvalue
        purities = list(traj.purities)

    csv_text = _csv(headers, rows)
    _atomic_write(out_dir / "trajectory.csv", csv_text)
    _write_manifest(out_dir, "run", scenario, {"trajectory.csv": csv_text})
    print(f"final trace defect: {final_trace_defect:.3e}")
    print(f"min eigenvalue over trajectory: {min_eig:.6e}")
    print(f"purity range: [{min(purities):.6f}, {max(purities):.6f}]")
    return 0


_COMPARE_GENERATORS = ("conventional", "qfgr-rates", "exact")


def _cmd_compare(scenario: dict, out_dir: Path) -> int:
    spec = _build_spec(scenario.get("spec") or {})
    grid = _build_grid(scenario.get("grid") or {})
    include_coherent = bool(scenario.get("include_coherent", True))
    method = scenario.get("method", "expm")
    rho0 = _build_rho0(scenario.get("rho0", "maximally-mixed"), spec.n)
    elements = _element_list(scenario, spec.n)

    trajs = {}
    for name in _COMPARE_GENERATORS:
        gen = _build_generator(name, spec, include_coherent)
        trajs[name] = propagate(gen, rho0, grid, method=method)

    suffix = {name: name.replace("-", "_") for name in _COMPARE_GENERATORS}
    headers = ["t"]
    for name in _COMPARE_GENERATORS:
        s = suffix[name]
        headers.extend([f"trace_re_{s}", f"herm_defect_{s}", f"min_eig_{s}", f"purity_{s}"])
        headers.extend(
            f"rho_{a}_{b}_{part}_{s}" for a, b in elements for part in ("re", "im")
        )
    pairs = [
        ("conventional", "qfgr-rates"),
        ("conventional", "exact"),
        ("qfgr-rates", "exact"),
    ]
    headers.extend(f"diff_{suffix[x]}_{suffix[y]}" for x, y in pairs)

    rows = []
    for k, t in enumerate(grid.times):
        row = [_fmt(t)]
        for name in _COMPARE_GENERATORS:
            traj = trajs[name]
            row.extend([
                _fmt(traj.traces[k].real),
                _fmt(traj.hermiticity_defects[k]),
                _fmt(traj.min_eigenvalues[k]),
                _fmt(traj.purities[k]),
            ])
            state = traj.states[k].data
            for a, b in elements:
                row.append(_fmt(state[a, b].real))
                row.append(_fmt(state[a, b].imag))
        for x, y in pairs:
            d = np.linalg.norm(trajs[x].states[k].data - trajs[y].states[k].data)
            row.append(_fmt(float(d)))
        rows.append(row)

    csv_text = _csv(headers, rows)
    _atomic_write(out_dir / "compare.csv", csv_text)
    _write_manifest(out_dir, "compare", scenario, {"compare.csv": csv_text})
    for x, y in pairs:
        worst = max(
            float(np.linalg.norm(trajs[x].states[k].data - trajs[y].states[k].data))
            for k in range(grid.steps + 1)
        )
        print(f"max |rho_{suffix[x]} - rho_{suffix[y]}|_F: {worst:.6e}")
    return 0


def _cmd_search(config: dict, out_dir: Path, threads: int) -> int:
    try:
        master_seed = int(config["master_seed"])
        budget = int(config["budget"])
        n_lo, n_hi = (int(x) for x in config.get("n_range", (3, 6)))
        coupling_scale = float(config.get("coupling_scale", 0.3))
        level_spacing = float(config.get("level_spacing", 1.0))
        kernel = _build_kernel(config.get("kernel", {"mode": "gaussian", "eta": 0.05}))
        spans = float(config.get("spans", 10.0))
        steps = int(config.get("steps", 240))
        threshold = float(config.get("threshold", -1e-9))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad search config: {exc}") from exc
    if budget < 1 or n_lo < 2 or n_hi < n_lo:
        raise ConfigError(f"bad search ranges: budget={budget}, n_range=({n_lo},{n_hi})")

    report = search_positivity_violation(
        master_seed, budget, (n_lo, n_hi), coupling_scale, kernel,
        level_spacing=level_spacing, spans=spans, steps=steps,
        threads=max(1, threads), violation_threshold=threshold,
    )

    report_text = json.dumps(report.to_dict(), indent=2) + "\n"
    files = {"report.json": report_text}
    _atomic_write(out_dir / "report.json", report_text)
    if report.violation:
        witness_text = json.dumps(witness_scenario(report), indent=2) + "\n"
        _atomic_write(out_dir / "witness_scenario.json", witness_text)
        files["witness_scenario.json"] = witness_text
    _write_manifest(out_dir, "search", config, files)

    if report.violation:
        print(
            f"violation found: min eigenvalue {report.min_eigenvalue:.6e} "
            f"(instance {report.instance_index}, n={report.n}, t={report.time:.4g})"
        )
    else:
        print(f"no violation found: margin {report.min_eigenvalue:.6e}")
    return 0


def witness_scenario(report: ViolationReport) -> dict:
    """Runnable scenario reproducing a search witness trajectory."""
    return {
        "spec": {
            "random": {
                "seed": report.spec_seed,
                "n": report.n,
                "level_spacing": report.level_spacing,
                "coupling_scale": report.coupling_scale,
            },
            "kernel": report.kernel.to_dict(),
            "hbar": 1.0,
        },
        "generator": "conventional",
        "include_coherent": True,
        "rho0": {"seed": report.rho_seed},
        "grid": {"t0": 0.0, "t1": report.grid_t1, "steps": report.grid_steps},
        "method": "expm",
    }


def _rate_rows(p: np.ndarray) -> tuple[list[str], list[list[str]]]:
    headers = ["lam1", "lam2", "lam1p", "lam2p", "re", "im"]
    n = p.shape[0]
    rows = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    v = p[a, b, c, d]
                    if v != 0:
                        rows.append([str(a), str(b), str(c), str(d),
                                     _fmt(v.real), _fmt(v.imag)])
    return headers, rows


def _cmd_rates(scenario: dict, out_dir: Path) -> int:
    spec = _build_spec(scenario.get("spec") or {})
    files = {}
    for name, tensor in (
        ("rates_conventional.csv", conventional_rates(spec)),
        ("rates_symmetrized.csv", symmetrized_rates(spec)),
    ):
        headers, rows = _rate_rows(tensor.p)
        files[name] = _csv(headers, rows)
    fgr = fgr_rates(spec)
    fgr_rows = [
        [str(a), str(c), _fmt(fgr.p[a, c])]
        for a in range(spec.n)
        for c in range(spec.n)
    ]
    files["fgr.csv"] = _csv(["lam", "lamp", "rate"], fgr_rows)
    for name, text in files.items():
        _atomic_write(out_dir / name, text)
    _write_manifest(out_dir, "rates", scenario, files)
    nonzero = sum(len(text.splitlines()) - 1 for name, text in files.items()
                  if name.startswith("rates_"))
    print(f"wrote {nonzero} nonzero rate entries and the golden-rule matrix")
    return 0


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qfgr",
        description="Collision-superoperator laboratory: build, propagate, diagnose.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("run", "propagate one scenario and write trajectory.csv"),
        ("compare", "propagate under conventional, qfgr-rates, and exact generators"),
        ("search", "seeded random search for positivity violations"),
        ("rates", "dump rate tensors and the golden-rule matrix"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to JSON config")
        p.add_argument("--out-dir", default=None,
                       help="output directory (default $QFGR_OUT_DIR or ./out)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        if name == "search":
            p.add_argument("--threads", type=int, default=1,
                           help="worker threads for the search")
    args = parser.parse_args(argv)
    out_dir = _resolve_out_dir(args)

    try:
        config = _load_config(args.config)
        config = _apply_seed_override(config, args.seed, args.command)
        if args.command == "run":
            return _cmd_run(config, out_dir)
        if args.command == "compare":
            return _cmd_compare(config, out_dir)
        if args.command == "search":
            return _cmd_search(config, out_dir, args.threads)
        return _cmd_rates(config, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (PropagationError, StepSizeError, NoSteadyStateError,
            np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
