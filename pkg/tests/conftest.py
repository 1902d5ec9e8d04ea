from __future__ import annotations

import numpy as np
import pytest

from resgate.device import reference_device
from resgate.pulse import TimeGrid, default_grid, gaussian_pulse
from resgate.qmath import DensityMatrix, HilbertSpace
from resgate.scattering import evolve_master, joint_state, reflect_master


@pytest.fixture(scope="session")
def ref():
    return reference_device()


@pytest.fixture(scope="session")
def ref_tau(ref):
    return 10.0 / ref.kappa


@pytest.fixture(scope="session")
def ref_pulse(ref, ref_tau):
    return gaussian_pulse(ref_tau, default_grid(ref_tau, ref.kappa))


@pytest.fixture(scope="session")
def master_hygiene():
    """(label, trace_drift, min_eigenvalue, fock_tail) for every
    density-matrix propagation performed through the shared fixtures."""
    return []


@pytest.fixture(scope="session")
def photon_decay_run(ref, master_hygiene):
    # one photon, no dipole, no drive: <n> must follow exp(-kappa t)
    space = HilbertSpace(16)
    grid = TimeGrid(0.0, 5.0 / ref.kappa / 256, 257)
    vec = np.zeros(space.dim)
    vec[1] = 1.0
    n_op = space.cavity_op().conj().T @ space.cavity_op()
    run = evolve_master(
        space,
        0.0,
        ref,
        grid,
        np.zeros(grid.n_samples, dtype=complex),
        DensityMatrix.pure(space, vec),
        record_ops={"n": n_op},
    )
    master_hygiene.append(
        ("photon_decay", run.trace_drift, run.final_state.min_eigenvalue(), run.final_state.fock_tail())
    )
    return run


@pytest.fixture(scope="session")
def charge_decay_run(ref, master_hygiene):
    # excited charge, empty cavity: P_a must follow exp(-t/T1).  The
    # coarse step is chosen so the fastest Fock decay (15 kappa at
    # fock_dim 16) stays inside the RK4 stability region.
    space = HilbertSpace(16)
    grid = TimeGrid(0.0, 5.0 * ref.t1 / 1024, 1025)
    vec = np.zeros(space.dim)
    vec[space.fock_dim] = 1.0
    pa = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(space.fock_dim):
        pa[space.fock_dim + k, space.fock_dim + k] = 1.0
    run = evolve_master(
        space,
        0.0,
        ref,
        grid,
        np.zeros(grid.n_samples, dtype=complex),
        DensityMatrix.pure(space, vec),
        record_ops={"pa": pa},
    )
    master_hygiene.append(
        ("charge_decay", run.trace_drift, run.final_state.min_eigenvalue(), run.final_state.fock_tail())
    )
    return run


@pytest.fixture(scope="session")
def master_half_runs(ref, ref_pulse, master_hygiene):
    """Density-matrix reflection of the reference pulse at alpha = 0.5."""
    out = {}
    for lab in ("00", "01", "11"):
        r = reflect_master(ref_pulse, 0.5, joint_state(lab), ref, fock_dim=16)
        d = r.diagnostics
        master_hygiene.append(
            (f"reflect_{lab}", d["trace_drift"], d["min_eigenvalue"], d["fock_tail"])
        )
        out[lab] = r
    return out


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collector for the one-line-per-criterion summary printed at the end."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
