"""End-to-end acceptance runs for the product contracts.

One test per contract clause (split where a clause has independently
meaningful halves); each prints a single PASS/FAIL line, collected and
echoed in the terminal summary.  Three clauses are expected to fail at
the reference operating point; their tests state the measured values and
the analysis lives alongside the assertion so the failure output is
self-explanatory.
"""

import dataclasses
import math
import time
from pathlib import Path

import numpy as np
import pytest

from _oracles import brute_force_gate_fidelity
from resgate.cli import main
from resgate.device import coupling_g, dqd_hamiltonian, energy_gap, mixing_angle, validate_regime
from resgate.gate import GateInputs, gate_fidelity, photon_loss_eta_global, sweep_coupling_variation, sweep_photon_number
from resgate.scattering import (
    joint_state,
    joint_states,
    reflect_filter_pulse,
    reflect_meanfield,
    reflection_filter,
    scatter_all_states,
    xi_analytic,
    xi_effective,
)

DEFAULT_CFG = Path(__file__).resolve().parent.parent / "configs" / "default.cfg"


def _report(collector, num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    collector.append(line)
    print(line)


def test_criterion_01_zero_frequency_identities(ref, acceptance_report):
    t0 = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng(101)
    cases = [(ref.g_coupling, ref.kappa, ref.t1)]
    cases += [
        (
            rng.uniform(0.05, 10.0) * ref.g_coupling,
            rng.uniform(0.05, 10.0) * ref.kappa,
            rng.uniform(0.05, 10.0) * ref.t1,
        )
        for _ in range(50)
    ]
    for g, k, t1 in cases:
        for st in joint_states():
            got = reflection_filter(0.0, st.g_eff(g), k, t1)
            worst = max(worst, abs(got - xi_analytic(st, g, k, t1)))
    ok = worst < 1e-12
    _report(
        acceptance_report, 1, ok,
        f"reflection identities at zero offset, worst |err| = {worst:.2e} "
        f"(tol 1e-12, 51 parameter sets, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_02_exact_decay_laws(ref, photon_decay_run, charge_decay_run, acceptance_report):
    t0 = time.perf_counter()
    t = photon_decay_run.times
    n_traj = photon_decay_run.expectations["n"].real
    rel_n = float(np.max(np.abs(n_traj - np.exp(-ref.kappa * t)) / np.exp(-ref.kappa * t)))

    t2 = charge_decay_run.times
    pa = charge_decay_run.expectations["pa"].real
    rel_p = float(np.max(np.abs(pa - np.exp(-t2 / ref.t1)) / np.exp(-t2 / ref.t1)))

    ok = rel_n < 1e-6 and rel_p < 1e-6
    _report(
        acceptance_report, 2, ok,
        f"photon decay rel err {rel_n:.2e}, charge decay rel err {rel_p:.2e} "
        f"(tol 1e-6 over 5 lifetimes, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_03_filter_vs_meanfield(ref, ref_pulse, acceptance_report):
    t0 = time.perf_counter()
    worst = 0.0
    for lab in ("00", "01", "11"):
        st = joint_state(lab)
        d = abs(
            xi_effective(reflect_filter_pulse(ref_pulse, st, ref))
            - xi_effective(reflect_meanfield(ref_pulse, 0.1, st, ref))
        )
        worst = max(worst, d)
    ok = worst < 1e-3
    _report(
        acceptance_report, 3, ok,
        f"filter vs mean-field effective reflection at alpha=0.1, "
        f"worst gap {worst:.2e} (tol 1e-3, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_03_meanfield_vs_master(ref, ref_pulse, master_half_runs, acceptance_report):
    t0 = time.perf_counter()
    rms = {}
    for lab in ("00", "01", "11"):
        c_ms = master_half_runs[lab].diagnostics["c_trajectory"]
        c_mf = reflect_meanfield(ref_pulse, 0.5, joint_state(lab), ref).diagnostics["c_trajectory"]
        peak = float(np.max(np.abs(c_ms)))
        rms[lab] = float(np.sqrt(np.mean(np.abs(c_mf - c_ms) ** 2))) / peak
    worst = max(rms.values())
    ok = worst <= 0.02
    _report(
        acceptance_report, 3, ok,
        "mean-field vs density-matrix cavity amplitude at alpha=0.5, RMS/peak "
        + ", ".join(f"{k}:{v:.3f}" for k, v in rms.items())
        + f" (tol 0.02, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok, (
        f"RMS/peak per state {rms}; both integrators were cross-checked against an "
        "adaptive-step reference solver to ~2e-10, so the gap is physical, not "
        "numerical: at alpha=0.5 the charge excitation peaks near 10%, past the "
        "few-percent range where the factorized (semiclassical) equations track "
        "the full density matrix.  The 2% target is unreachable at this amplitude."
    )


def test_criterion_04_truncated_fock_oracle(ref, ref_pulse, acceptance_report):
    t0 = time.perf_counter()
    xis = {
        lab: xi_analytic(joint_state(lab), ref.g_coupling, ref.kappa, ref.t1)
        for lab in ("00", "01", "10", "11")
    }
    worst = 0.0
    for alpha in (0.3, 0.8, 1.5):
        res = scatter_all_states(ref_pulse, alpha, ref, backend="analytic")
        fid = gate_fidelity(GateInputs(alpha, res))
        worst = max(worst, abs(fid - brute_force_gate_fidelity(alpha, xis)))
    ok = worst < 1e-6
    _report(
        acceptance_report, 4, ok,
        f"closed-form fidelity vs brute-force Fock overlaps, worst |diff| = {worst:.2e} "
        f"(tol 1e-6, alpha in {{0.3, 0.8, 1.5}}, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_05_limit_and_monotonicity(ref, acceptance_report):
    t0 = time.perf_counter()
    pts = sweep_photon_number(ref, list(range(23)), backend="filter")
    fids = [p.fidelity for p in pts]
    limit_ok = fids[0] == 1.0 and sweep_photon_number(ref, [1e-3], backend="filter")[0].fidelity > 1.0 - 1e-4
    mono_ok = all(b <= a + 1e-12 for a, b in zip(fids, fids[1:]))
    ok = limit_ok and mono_ok
    _report(
        acceptance_report, 5, ok,
        f"zero-amplitude limit F = {fids[0]:.6f}, non-increasing over alpha grid 0..22 "
        f"({'yes' if mono_ok else 'no'}, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_05_high_fidelity_endpoint(ref, acceptance_report):
    t0 = time.perf_counter()
    fid = sweep_photon_number(ref, [20.0], backend="filter")[0].fidelity
    ok = fid >= 0.97
    _report(
        acceptance_report, 5, ok,
        f"F(alpha=20) = {fid:.6f} (target >= 0.97, {time.perf_counter() - t0:.2f} s)",
    )
    assert ok, (
        f"F(alpha=20) = {fid:.6f}.  The per-state reflection is as good as the "
        "physics allows here (pulse-shape mismatch 0.033/0.165/0.689 for the "
        "coupled/uncoupled configurations at tau*kappa = 10), and the overlap "
        "exponents scale with |alpha|^2 = 400, so even per-mille imperfections "
        "are amplified ~400-fold in the exponent.  A >= 0.97 value at this "
        "amplitude is not reachable with this pulse length; the quoted "
        "high-fidelity endpoint is reproduced only in the small-alpha limit."
    )


def test_criterion_06_coupling_robustness(ref, acceptance_report):
    t0 = time.perf_counter()
    fracs = [float(x) for x in np.linspace(-0.5, 0.5, 11)]
    pts = sweep_coupling_variation(ref, fracs, 20.0, backend="filter")
    by_x = {round(p.x_value, 3): p.fidelity for p in pts}
    diff = abs(by_x[-0.5] - by_x[0.0])
    spread = max(by_x.values()) - min(by_x.values())
    ok = diff <= 5e-3 and spread <= 1e-2
    _report(
        acceptance_report, 6, ok,
        f"|F(g/2) - F(g)| = {diff:.4f} (target <= 5e-3), spread over +/-50% = {spread:.4f} "
        f"(target <= 1e-2) at alpha=20 ({time.perf_counter() - t0:.2f} s)",
    )
    assert ok, (
        f"diff {diff:.4f}, spread {spread:.4f}.  At alpha=20 the fidelity is far "
        "from its small-alpha plateau (criterion 5), and in this regime F rises "
        "steadily with coupling because the reflection ratio s grows as g^2, so "
        "the curve is nowhere near flat.  The insensitivity claim holds only "
        "where F is near 1; at this amplitude both targets are missed."
    )


def test_criterion_07_loss_scaling(ref, ref_pulse, acceptance_report):
    t0 = time.perf_counter()

    def eta_at(params):
        res = scatter_all_states(ref_pulse, 0.5, params, backend="filter")
        return photon_loss_eta_global(GateInputs(0.5, res))

    # same s ladder {36, 144, 576} walked with either knob
    eta_t1 = [eta_at(dataclasses.replace(ref, t1=sc * ref.t1)) for sc in (0.25, 1.0, 4.0)]
    eta_g = [eta_at(dataclasses.replace(ref, g_coupling=sc * ref.g_coupling)) for sc in (0.5, 1.0, 2.0)]

    mono = eta_t1[0] > eta_t1[1] > eta_t1[2] and eta_g[0] > eta_g[1] > eta_g[2]
    # lifetime knob leaves the dressed-mode structure alone, so the pure
    # 1/s law shows up step by step; the coupling knob also moves the
    # response bandwidth, so only the two-decade aggregate is clean
    ratios_t1 = [eta_t1[0] / eta_t1[1], eta_t1[1] / eta_t1[2]]
    prop_t1 = all(3.2 <= r <= 4.8 for r in ratios_t1)
    prop_g = 14.0 <= eta_g[0] / eta_g[2] <= 18.0
    ok = mono and prop_t1 and prop_g
    _report(
        acceptance_report, 7, ok,
        f"global loss over s = 36/144/576: lifetime knob {eta_t1[0]:.2e}/{eta_t1[1]:.2e}/"
        f"{eta_t1[2]:.2e} (step ratios {ratios_t1[0]:.2f}, {ratios_t1[1]:.2f}, expect ~4), "
        f"coupling knob end-to-end x{eta_g[0] / eta_g[2]:.1f} (expect ~16, "
        f"{time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_08_device_formulas(ref, ref_tau, acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(808)
    worst = 0.0
    for _ in range(100):
        t = rng.uniform(1e6, 1e11)
        d = rng.uniform(-10.0, 10.0) * t
        ev = np.linalg.eigvalsh(dqd_hamiltonian(d, t))
        worst = max(worst, abs(energy_gap(d, t) - (ev[1] - ev[0])) / (ev[1] - ev[0]))

    g_geom = coupling_g(ref.circuit, mixing_angle(ref.delta, ref.tunneling))
    ratio = ref.g_coupling / g_geom
    factor_ok = 1.0 / 3.0 <= ratio <= 3.0

    checks = validate_regime(ref, tau=ref_tau)
    regime_ok = all(c.status == "pass" for c in checks)

    ok = worst < 1e-12 and factor_ok and regime_ok
    _report(
        acceptance_report, 8, ok,
        f"gap vs eigensplitting worst rel err {worst:.2e}; geometry coupling off by "
        f"x{ratio:.2f} (within x3); regime checks "
        f"{'all pass' if regime_ok else 'FAILED'} ({time.perf_counter() - t0:.2f} s)",
    )
    assert ok


def test_criterion_09_numerical_hygiene(
    photon_decay_run, charge_decay_run, master_half_runs, master_hygiene, acceptance_report
):
    # the fixture arguments force every density-matrix run in the suite
    # to exist before the bookkeeping is inspected
    assert len(master_hygiene) >= 5
    worst_drift = max(h[1] for h in master_hygiene)
    worst_eig = min(h[2] for h in master_hygiene)
    worst_tail = max(h[3] for h in master_hygiene)
    ok = worst_drift < 1e-6 and worst_eig > -1e-7 and worst_tail < 1e-4
    _report(
        acceptance_report, 9, ok,
        f"{len(master_hygiene)} density-matrix runs: max trace drift {worst_drift:.1e}, "
        f"min eigenvalue {worst_eig:.1e}, max truncation tail {worst_tail:.1e}",
    )
    assert ok


def test_criterion_10_deterministic_cli(tmp_path, acceptance_report):
    t0 = time.perf_counter()
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    assert main(["fidelity", "--config", str(DEFAULT_CFG), "--out", str(out1)]) == 0
    assert main(["fidelity", "--config", str(DEFAULT_CFG), "--out", str(out2)]) == 0
    b1 = (out1 / "fidelity.csv").read_bytes()
    b2 = (out2 / "fidelity.csv").read_bytes()
    ok = b1 == b2 and len(b1) > 0
    _report(
        acceptance_report, 10, ok,
        f"two sweep runs produced byte-identical CSVs ({len(b1)} bytes, "
        f"{time.perf_counter() - t0:.2f} s)",
    )
    assert ok
