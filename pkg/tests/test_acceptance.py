"""Acceptance suite: the package's structural claims at their stated tolerances.

Each criterion prints one line (run with `pytest -s` to see them all):

    ACCEPTANCE <k> <name>: PASS|FAIL (<detail>)

Criteria 2 and 7 assert positivity and conditional complete positivity of the
time-symmetrized collision generator over a random ensemble.  Those two
claims are mathematically false for generic couplings: index pairs (a, b) and
(b, a) always share their pair-averaged energy, so the symmetrized rates pump
the transpose coherence at rate (2 pi/hbar) w(0) |H'[a,b]|^2 regardless of
the spectrum, and when dephasing cannot compensate, an eigenvalue of rho goes
negative.  The minimal counterexample is pinned in tests/test_diagnostics.py
(TestCoherencePumpingCounterexample).  The two criteria are asserted as
stated and are expected to FAIL; all other criteria pass.
"""
import numpy as np
import pytest

from qfgr import (
    DeltaKernel,
    Distribution,
    FgrMatrix,
    TimeGrid,
    coherent_liouvillian,
    conditional_cp_check,
    conventional_rates,
    fgr_rates,
    lindblad_family,
    lindblad_superoperator,
    propagate,
    propagate_boltzmann,
    random_density,
    random_system,
    rates_to_superoperator,
    search_positivity_violation,
    symmetrized_rates,
    t3_block_norm,
)
from qfgr.cli import main as cli_main
from qfgr.diagnostics import ViolationReport

import oracles
from conftest import SCENARIOS

ETA = 0.05
COUPLING = 0.3


def report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {num:2d} {name}: {status}"
    if detail:
        line += f" ({detail})"
    print(line)
    return ok


@pytest.fixture(scope="module")
def ensemble():
    """120 seeded specs, n 2-6, kernels alternating, propagated under both
    dissipative generators (plus the coherent term) for 10 relaxation times."""
    out = []
    for i in range(120):
        n = 2 + i % 5
        kernel = DeltaKernel("sharp" if i % 2 else "gaussian", ETA)
        spec = random_system(i, n, 1.0, COUPLING, kernel)
        rho0 = random_density(1000 + i, n)
        trajs = {}
        for name, build in (
            ("conventional", conventional_rates),
            ("symmetrized", symmetrized_rates),
        ):
            dissipator = rates_to_superoperator(build(spec))
            scale = dissipator.norm()
            t1 = 10.0 / scale if scale > 1e-12 else 1.0
            gen = dissipator + coherent_liouvillian(spec)
            trajs[name] = propagate(gen, rho0, TimeGrid(0.0, t1, 300))
        out.append((i, spec, trajs))
    return out


@pytest.fixture(scope="module")
def default_search_report():
    return search_positivity_violation(
        1234, 1000, (3, 6), COUPLING, DeltaKernel("gaussian", ETA), threads=1
    )


def test_criterion_1_trace_preservation(ensemble):
    worst = 0.0
    for _, _, trajs in ensemble:
        for traj in trajs.values():
            worst = max(worst, float(np.abs(traj.traces - 1.0).max()))
    ok = worst < 1e-9
    report(1, "trace preservation", ok, f"worst |tr-1| = {worst:.3e} over 240 trajectories")
    assert ok


def test_criterion_2_symmetrized_positivity(ensemble):
    worst = 0.0
    offender = None
    violating = 0
    for i, spec, trajs in ensemble:
        low = float(trajs["symmetrized"].min_eigenvalues.min())
        if low < -1e-9:
            violating += 1
        if low < worst:
            worst = low
            offender = (i, spec.n, spec.kernel.mode)
    ok = worst >= -1e-9
    report(
        2, "symmetrized-generator positivity", ok,
        f"worst min eigenvalue = {worst:.3e} at instance {offender}, "
        f"{violating}/120 instances violate",
    )
    assert ok, (
        f"positivity fails on {violating}/120 instances (worst {worst:.3e} at "
        f"seed/n/kernel {offender}). This is a property of the symmetrized "
        "generator itself: transpose index pairs always match in pair-averaged "
        "energy, so coherences rho[a,b] <- rho[b,a] are pumped at rate "
        "(2 pi/hbar) w(0) |H'[a,b]|^2 independent of the spectrum; unless "
        "dephasing outweighs that rate, an eigenvalue escapes below zero. "
        "See tests/test_diagnostics.py::TestCoherencePumpingCounterexample "
        "for the minimal two-level demonstration."
    )


def test_criterion_3_conventional_violation_witness(default_search_report, search_report_dict):
    rep = default_search_report
    frozen = ViolationReport.from_dict(search_report_dict)
    found = rep.violation and rep.min_eigenvalue < -1e-3
    # instance identity must reproduce exactly; scores to round-off across backends
    matches = (
        (rep.instance_index, rep.spec_seed, rep.rho_seed, rep.n, rep.kernel)
        == (frozen.instance_index, frozen.spec_seed, frozen.rho_seed, frozen.n, frozen.kernel)
        and rep.min_eigenvalue == pytest.approx(frozen.min_eigenvalue, rel=1e-9)
    )
    ok = found and matches
    report(
        3, "conventional positivity failure", ok,
        f"witness min eigenvalue = {rep.min_eigenvalue:.3e} "
        f"(instance {rep.instance_index}, n={rep.n}); frozen fixture match: {matches}",
    )
    assert ok


def test_criterion_3_witness_replay(tmp_path, search_report_dict):
    code = cli_main([
        "run", "--config", str(SCENARIOS / "markov-violation.json"),
        "--out-dir", str(tmp_path),
    ])
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    idx = lines[0].split(",").index("min_eig")
    worst = min(float(line.split(",")[idx]) for line in lines[1:])
    ok = code == 0 and worst < -1e-3
    report(
        3, "witness replay via CLI", ok,
        f"exit {code}, replayed min eigenvalue = {worst:.3e}",
    )
    assert ok
    assert worst == pytest.approx(search_report_dict["min_eigenvalue"], rel=1e-9)


def test_criterion_4_construction_equivalence():
    checked = 0
    worst = 0.0
    seed = 0
    while checked < 100 and seed < 400:
        n = 2 + seed % 5
        spec = random_system(seed, n, 1.0, COUPLING, DeltaKernel("sharp", ETA))
        seed += 1
        family = lindblad_family(spec)
        if family.approximate:
            continue
        a = lindblad_superoperator(family).matrix
        b = rates_to_superoperator(symmetrized_rates(spec)).matrix
        worst = max(worst, float(np.abs(a - b).max()))
        checked += 1
    ok = checked >= 100 and worst < 1e-12
    report(
        4, "rate-form vs operator-form equivalence", ok,
        f"{checked} resolved sharp specs, worst elementwise diff = {worst:.3e}",
    )
    assert ok


def test_criterion_5_semiclassical_recovery(ensemble):
    worst = 0.0
    for _, spec, _ in ensemble:
        fgr = fgr_rates(spec).p
        for build in (conventional_rates, symmetrized_rates):
            diff = np.abs(build(spec).diagonal_slice() - fgr).max()
            worst = max(worst, float(diff))
        assert fgr.min() >= 0.0
    ok = worst < 1e-14
    report(5, "golden-rule recovery", ok, f"worst slice difference = {worst:.3e}")
    assert ok


def test_criterion_6_t3_vanishing(two_level_generic):
    kernel = DeltaKernel("sharp", ETA)
    checked = 0
    worst = 0.0
    seed = 0
    while checked < 100 and seed < 400:
        spec = random_system(seed, 2, 1.0, COUPLING, kernel)
        seed += 1
        if abs(spec.energies[1] - spec.energies[0]) <= 4 * ETA:
            continue
        gen = rates_to_superoperator(symmetrized_rates(spec))
        norms = t3_block_norm(gen, spec)
        worst = max(worst, norms.pop_to_coh, norms.coh_to_pop)
        checked += 1
    conv_gen = rates_to_superoperator(conventional_rates(two_level_generic))
    conv_norms = t3_block_norm(conv_gen, two_level_generic)
    conv_ratio = max(conv_norms.pop_to_coh, conv_norms.coh_to_pop) / conv_gen.norm()
    ok = checked >= 100 and worst < 1e-12 and conv_ratio > 1e-6
    report(
        6, "population-coherence decoupling", ok,
        f"{checked} two-level specs, worst symmetrized block norm = {worst:.3e}; "
        f"conventional coupling ratio = {conv_ratio:.3e}",
    )
    assert ok


def test_criterion_7_conditional_complete_positivity(ensemble, search_report_dict):
    sharp_checked = 0
    cp_count = 0
    worst = 0.0
    for _, spec, _ in ensemble:
        if not spec.kernel.sharp:
            continue
        sharp_checked += 1
        cp = conditional_cp_check(rates_to_superoperator(symmetrized_rates(spec)))
        if cp.cp:
            cp_count += 1
        worst = min(worst, cp.choi_min_eigenvalue)

    frozen = ViolationReport.from_dict(search_report_dict)
    spec = random_system(
        frozen.spec_seed, frozen.n, frozen.level_spacing,
        frozen.coupling_scale, frozen.kernel,
    )
    witness_cp = conditional_cp_check(rates_to_superoperator(conventional_rates(spec)))

    ok = cp_count == sharp_checked and witness_cp.verdict == "not-cp"
    report(
        7, "conditional complete positivity", ok,
        f"symmetrized generator cp on {cp_count}/{sharp_checked} sharp specs "
        f"(worst conditional Choi eigenvalue {worst:.3e}); "
        f"conventional witness not-cp: {witness_cp.verdict == 'not-cp'}",
    )
    assert ok, (
        f"the symmetrized generator passes the conditional-CP check on only "
        f"{cp_count} of {sharp_checked} sharp-kernel specs (worst conditional "
        f"Choi eigenvalue {worst:.3e}). Its frequency-family form pairs each "
        "operator L(w) with itself rather than with its adjoint L(-w), which "
        "decomposes into a difference of two Hermitian-jump dissipators; the "
        "negative part is generically nonzero, so the generator is not of "
        "completely positive (GKSL) form. The conventional-witness half of "
        "this criterion does hold."
    )


def test_criterion_8_rate_equation_sanity():
    # closed-form two-level relaxation
    p = 0.8
    rates = FgrMatrix(np.array([[0.0, p], [p, 0.0]]))
    grid = TimeGrid(0.0, 5.0 / p, 2000)
    snaps = propagate_boltzmann(rates, Distribution(np.array([1.0, 0.0])), grid)
    exact = (1.0 + np.exp(-2.0 * p * grid.times)) / 2.0
    closed_form_err = max(
        abs(snaps[k].f[0] - exact[k]) for k in range(grid.steps + 1)
    )

    # seeded ensemble: conservation and nonnegativity
    worst_cons = 0.0
    worst_neg = 0.0
    for seed in range(25):
        spec = random_system(seed, 2 + seed % 5, 0.05, COUPLING,
                             DeltaKernel("gaussian", ETA))
        rates = fgr_rates(spec)
        off = rates.p - np.diag(np.diag(rates.p))
        scale = float(np.abs(off).max())
        if scale == 0.0:
            continue
        grid = TimeGrid(0.0, 10.0 / scale, 2000)
        f0 = np.zeros(spec.n)
        f0[0] = 1.0
        snaps = propagate_boltzmann(rates, Distribution(f0), grid)
        worst_cons = max(worst_cons, max(abs(s.f.sum() - 1.0) for s in snaps))
        worst_neg = min(worst_neg, min(s.f.min() for s in snaps))

    ok = closed_form_err < 1e-8 and worst_cons < 1e-10 and worst_neg >= -1e-12
    report(
        8, "rate-equation sanity", ok,
        f"closed-form error = {closed_form_err:.3e}, "
        f"worst conservation drift = {worst_cons:.3e}, "
        f"worst negativity = {worst_neg:.3e}",
    )
    assert ok


def test_criterion_9_oracle_equivalence(golden, golden_sharp, two_level_generic):
    fixtures = [golden, golden_sharp, two_level_generic]
    worst_sum = 0.0
    worst_op = 0.0
    for spec in fixtures:
        rho = random_density(37, spec.n).data
        for build in (conventional_rates, symmetrized_rates):
            tensor = build(spec)
            s = rates_to_superoperator(tensor)
            direct = oracles.balance_rhs_loops(tensor.p, rho)
            worst_sum = max(worst_sum, float(np.abs(s.apply(rho) - direct).max()))
        # operator forms
        conv = rates_to_superoperator(conventional_rates(spec))
        direct = oracles.conventional_apply(
            spec.interaction, spec.energies, spec.hbar,
            spec.kernel.mode, spec.kernel.eta, rho,
        )
        worst_op = max(worst_op, float(np.abs(conv.apply(rho) - direct).max()))
        if spec.kernel.sharp and not lindblad_family(spec).approximate:
            symm = rates_to_superoperator(symmetrized_rates(spec))
            direct = oracles.symmetrized_family_apply(
                spec.interaction, spec.energies, spec.hbar, spec.kernel.eta, rho
            )
            worst_op = max(worst_op, float(np.abs(symm.apply(rho) - direct).max()))
    ok = worst_sum < 1e-13 and worst_op < 1e-13
    report(
        9, "assembly vs brute-force oracles", ok,
        f"four-index summation diff = {worst_sum:.3e}, "
        f"double-commutator diff = {worst_op:.3e}",
    )
    assert ok


def test_criterion_10_determinism(tmp_path):
    # manifest-driven rerun reproduces the CSV byte for byte
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli_main(["run", "--config", str(SCENARIOS / "two-level-T1T2.json"),
                     "--out-dir", str(out1)]) == 0
    assert cli_main(["run", "--config", str(out1 / "manifest.json"),
                     "--out-dir", str(out2)]) == 0
    bytes_equal = (out1 / "trajectory.csv").read_bytes() == (out2 / "trajectory.csv").read_bytes()

    # the violation search is thread-count independent
    kernel = DeltaKernel("gaussian", ETA)
    serial = search_positivity_violation(7, 24, (3, 5), COUPLING, kernel, threads=1)
    threaded = search_positivity_violation(7, 24, (3, 5), COUPLING, kernel, threads=4)
    ok = bytes_equal and serial == threaded
    report(
        10, "manifest and search determinism", ok,
        f"csv byte-identical: {bytes_equal}, thread-invariant report: {serial == threaded}",
    )
    assert ok
