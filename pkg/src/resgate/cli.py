"""Batch front-end: read a sectioned config, run a subcommand, write artifacts.

All frequencies in the config are given as f/2pi in MHz (key names carry
the unit) to match how the operating point is usually stated; everything
internal is angular (rad/s).  Outputs are deterministic: fixed significant
digits, '.' decimal separator, stable column order.

Exit codes: 0 success, 2 configuration problem, 3 numerical-contract
failure (passivity, trace drift, invalid sweep values).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .device import (
    CircuitParams,
    DeviceParams,
    ZeemanParams,
    charge_dephasing_estimate,
    coupling_g,
    dqd_hamiltonian,
    energy_gap,
    mixing_angle,
    resonator_fundamental,
    s_parameter,
    spin_dephasing_estimate,
    validate_regime,
)
from .errors import ConfigError, NumericsError
from .gate import gate_time_estimate, sweep_coupling_variation, sweep_photon_number
from .pulse import TimeGrid, default_grid, gaussian_pulse
from .scattering import STATE_LABELS, scatter_all_states, xi_effective
from .svgplot import save_chart

_TWO_PI_MHZ = 2.0 * math.pi * 1e6
_BACKENDS = ("analytic", "filter", "meanfield", "master")

FIDELITY_COLUMNS = (
    "x_value",
    "fidelity",
    "eps_00",
    "eps_01",
    "eps_11",
    "eta_00",
    "eta_01",
    "eta_11",
    "xi_00",
    "xi_01",
    "xi_11",
    "mean_photon_exact",
)


@dataclass
class RunConfig:
    device: DeviceParams
    gradient_field: float | None     # T, for the spin dephasing estimate
    tau: float
    samples: int | None
    sweep_kind: str
    sweep_points: list[float]
    sweep_alpha: complex
    backend: str
    fock_dim: int
    levels_span: float               # |delta| range in units of tunneling
    levels_points: int
    output_dir: Path


def _get(cp: configparser.ConfigParser, section: str, key: str, default=None) -> str:
    try:
        return cp.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        if default is not None:
            return default
        raise ConfigError(f"[{section}] missing key '{key}'") from None


def _get_float(cp, section, key, default=None) -> float:
    raw = _get(cp, section, key, default)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None


def _get_int(cp, section, key, default=None) -> int:
    raw = _get(cp, section, key, default)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None


def _parse_points(text: str, section: str) -> list[float]:
    """Either 'start:stop:count' or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return [float(x) for x in np.linspace(a, b, n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(
            f"[{section}] points = {text!r}: expected 'start:stop:count' or a comma list"
        ) from None


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    cp.optionxform = str        # keys carry unit suffixes with capitals
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    rate = _get_float(cp, "device", "relaxation_rate_over_2pi_MHz")
    if rate <= 0:
        raise ConfigError("[device] relaxation_rate_over_2pi_MHz must be positive")

    circuit = None
    if cp.has_section("circuit"):
        circuit = CircuitParams(
            length_L=_get_float(cp, "circuit", "length_m"),
            cap_per_len_C0=_get_float(cp, "circuit", "cap_per_len_pF_per_m") * 1e-12,
            impedance_Z0=_get_float(cp, "circuit", "impedance_ohm"),
            coupling_ratio_v=_get_float(cp, "circuit", "coupling_ratio"),
        )

    zeeman = None
    gradient = None
    if cp.has_section("zeeman"):
        zeeman = ZeemanParams(
            g_factor=_get_float(cp, "zeeman", "g_factor"),
            b_field=_get_float(cp, "zeeman", "b_field_T"),
        )
        gradient = _get_float(cp, "zeeman", "gradient_field_mT", "0") * 1e-3

    try:
        device = DeviceParams(
            delta=_get_float(cp, "device", "delta_over_2pi_MHz") * _TWO_PI_MHZ,
            tunneling=_get_float(cp, "device", "tunneling_over_2pi_MHz") * _TWO_PI_MHZ,
            g_coupling=_get_float(cp, "device", "g_over_2pi_MHz") * _TWO_PI_MHZ,
            kappa=_get_float(cp, "device", "kappa_over_2pi_MHz") * _TWO_PI_MHZ,
            detuning=_get_float(cp, "device", "detuning_over_2pi_MHz") * _TWO_PI_MHZ,
            t1=1.0 / (rate * _TWO_PI_MHZ),
            tb=_get_float(cp, "device", "tb_ns", "0") * 1e-9,
            circuit=circuit,
            zeeman=zeeman,
        )
    except ValueError as exc:
        raise ConfigError(f"[device] {exc}") from None

    tau_k = _get_float(cp, "pulse", "tau_over_kappa")
    if tau_k <= 0:
        raise ConfigError("[pulse] tau_over_kappa must be positive")
    samples = _get_int(cp, "pulse", "samples", "0")
    if samples < 0:
        raise ConfigError("[pulse] samples must be >= 0 (0 selects automatic)")

    kind = _get(cp, "sweep", "kind", "photon").strip()
    if kind not in ("photon", "coupling"):
        raise ConfigError(f"[sweep] kind = {kind!r}: expected photon or coupling")
    points = _parse_points(_get(cp, "sweep", "points"), "sweep")
    alpha = _get_float(cp, "sweep", "alpha", "1")

    backend = _get(cp, "run", "backend", "filter").strip()
    if backend not in _BACKENDS:
        raise ConfigError(f"[run] backend = {backend!r}: expected one of {_BACKENDS}")
    fock_dim = _get_int(cp, "run", "fock_dim", "16")
    if fock_dim < 2:
        raise ConfigError("[run] fock_dim must be >= 2")

    levels_span = _get_float(cp, "levels", "delta_max_over_T", "50")
    levels_points = _get_int(cp, "levels", "points", "201")
    if levels_span <= 0 or levels_points < 3:
        raise ConfigError("[levels] needs delta_max_over_T > 0 and points >= 3")

    return RunConfig(
        device=device,
        gradient_field=gradient,
        tau=tau_k / device.kappa,
        samples=samples or None,
        sweep_kind=kind,
        sweep_points=points,
        sweep_alpha=complex(alpha),
        backend=backend,
        fock_dim=fock_dim,
        levels_span=levels_span,
        levels_points=levels_points,
        output_dir=Path("out"),
    )


def _g12(x: float) -> str:
    return f"{x:.12g}"


def _write_rows(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _g12(v) for v in row])


def cmd_levels(cfg: RunConfig, plot: bool) -> int:
    t = cfg.device.tunneling
    if t == 0:
        raise ConfigError("[device] tunneling_over_2pi_MHz must be nonzero for levels")
    deltas = np.linspace(-cfg.levels_span * t, cfg.levels_span * t, cfg.levels_points)
    rows = []
    for d in deltas:
        ev = np.linalg.eigvalsh(dqd_hamiltonian(d, t))
        rows.append((d, ev[0], ev[1], ev[1] - ev[0]))
    out = cfg.output_dir / "levels.csv"
    _write_rows(
        out,
        ("delta_rad_per_s", "energy_low_rad_per_s", "energy_high_rad_per_s", "gap_rad_per_s"),
        rows,
    )
    if plot:
        save_chart(
            cfg.output_dir / "levels.svg",
            [r[0] for r in rows],
            [r[3] for r in rows],
            title="charge gap vs bias",
            x_label="delta (rad/s)",
            y_label="gap (rad/s)",
        )
    print(f"wrote {out} ({len(rows)} rows); min gap {_g12(min(r[3] for r in rows))} rad/s")
    return 0


def _pulse_for(cfg: RunConfig):
    grid = default_grid(cfg.tau, cfg.device.kappa, n_samples=cfg.samples)
    return gaussian_pulse(cfg.tau, grid)


def cmd_reflect(cfg: RunConfig, plot: bool) -> int:
    f_in = _pulse_for(cfg)
    alpha = cfg.sweep_alpha
    if alpha == 0:
        raise ConfigError("[sweep] alpha must be nonzero for reflect")
    try:
        results = scatter_all_states(
            f_in, alpha, cfg.device, backend=cfg.backend, fock_dim=cfg.fock_dim
        )
    except (NumericsError, ValueError) as exc:
        raise NumericsError(f"backend {cfg.backend}: {exc}") from exc

    times = f_in.grid.times()
    summary = []
    for label in STATE_LABELS:
        r = results[label]
        g_in = alpha * f_in.envelope
        g_out = abs(r.alpha_out) * r.f_out.envelope
        _write_rows(
            cfg.output_dir / f"reflect_{label}.csv",
            ("time_s", "in_re", "in_im", "out_re", "out_im"),
            zip(times, g_in.real, g_in.imag, g_out.real, g_out.imag),
        )
        xi_eff = xi_effective(r)
        summary.append(
            (
                label,
                float(np.real(r.xi)),
                xi_eff.real,
                xi_eff.imag,
                r.epsilon,
                r.eta,
                r.phase,
                r.alpha_out.real,
                r.alpha_out.imag,
                r.backend,
            )
        )
    out = cfg.output_dir / "reflect_summary.csv"
    _write_rows(
        out,
        (
            "state",
            "xi_analytic",
            "xi_eff_re",
            "xi_eff_im",
            "epsilon",
            "eta",
            "phase_rad",
            "alpha_out_re",
            "alpha_out_im",
            "backend",
        ),
        summary,
    )
    if plot:
        for label in STATE_LABELS:
            r = results[label]
            save_chart(
                cfg.output_dir / f"reflect_{label}.svg",
                times,
                np.abs(abs(r.alpha_out) * r.f_out.envelope) ** 2,
                title=f"reflected power, state {label}",
                x_label="t (s)",
                y_label="|g_out|^2",
            )
    print(f"wrote {out}")
    for row in summary:
        print(
            f"  state {row[0]}: xi_eff = {row[2]:+.6f}{row[3]:+.6f}j"
            f"  eps = {row[4]:.4g}  eta = {row[5]:.4g}  phase = {row[6]:+.4f}"
        )
    return 0


def cmd_fidelity(cfg: RunConfig, plot: bool) -> int:
    if cfg.sweep_kind == "photon":
        points = sweep_photon_number(
            cfg.device,
            cfg.sweep_points,
            backend=cfg.backend,
            tau=cfg.tau,
            fock_dim=cfg.fock_dim,
        )
        x_label = "mean photon number |alpha|^2"
    else:
        points = sweep_coupling_variation(
            cfg.device,
            cfg.sweep_points,
            cfg.sweep_alpha,
            backend=cfg.backend,
            tau=cfg.tau,
            fock_dim=cfg.fock_dim,
        )
        x_label = "fractional coupling change"

    rows = []
    for p in points:
        per = p.per_state
        rows.append(
            (
                p.x_value,
                p.fidelity,
                per["00"][1],
                per["01"][1],
                per["11"][1],
                per["00"][2],
                per["01"][2],
                per["11"][2],
                per["00"][0],
                per["01"][0],
                per["11"][0],
                p.mean_photon,
            )
        )
    out = cfg.output_dir / "fidelity.csv"
    _write_rows(out, FIDELITY_COLUMNS, rows)
    if plot:
        save_chart(
            cfg.output_dir / "fidelity.svg",
            [r[0] for r in rows],
            [r[1] for r in rows],
            title="gate fidelity",
            x_label=x_label,
            y_label="F",
        )
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_regime(cfg: RunConfig, plot: bool) -> int:
    d = cfg.device
    two_pi = 2 * math.pi
    print("operating-regime report")
    print(
        f"  configured: g/2pi = {d.g_coupling / two_pi / 1e6:.6g} MHz, "
        f"kappa/2pi = {d.kappa / two_pi / 1e6:.6g} MHz, "
        f"1/(2pi T1) = {1.0 / d.t1 / two_pi / 1e6:.6g} MHz"
    )

    for chk in validate_regime(d, tau=cfg.tau):
        margin = "" if chk.margin is None else f"  margin {chk.margin:.3g}"
        print(f"  check {chk.name:<18} {chk.status:<7}{margin}  {chk.detail}")

    s = s_parameter(d.g_coupling, d.t1, d.kappa) if d.g_coupling > 0 else 0.0
    print(f"  s = g^2 T1 / kappa = {s:.6g}")
    print(f"  photon-loss scale 1/s = {1.0 / s if s else math.inf:.4g}")

    gap = energy_gap(d.delta, d.tunneling)
    print(f"  charge gap/2pi = {gap / two_pi / 1e9:.6g} GHz")
    if d.circuit is not None:
        w0 = resonator_fundamental(d.circuit)
        g_formula = coupling_g(d.circuit, mixing_angle(d.delta, d.tunneling))
        print(f"  resonator fundamental/2pi = {w0 / two_pi / 1e9:.6g} GHz")
        print(
            f"  coupling from circuit geometry/2pi = {g_formula / two_pi / 1e6:.6g} MHz "
            f"(configured {d.g_coupling / two_pi / 1e6:.6g} MHz, "
            f"ratio {d.g_coupling / g_formula:.3g})"
        )
    else:
        print("  coupling from circuit geometry: skipped (no [circuit] section)")

    if d.tb > 0:
        t2 = charge_dephasing_estimate(gap, d.tb)
        print(f"  charge dephasing estimate T2 = {t2 * 1e9:.4g} ns (switching time {d.tb * 1e9:.3g} ns)")
    else:
        print("  charge dephasing estimate: skipped (tb_ns not set)")
    if d.zeeman is not None and cfg.gradient_field:
        t2s = spin_dephasing_estimate(d.zeeman.g_factor, cfg.gradient_field)
        print(
            f"  spin dephasing estimate T2* = {t2s * 1e9:.4g} ns "
            f"(gradient {cfg.gradient_field * 1e3:.4g} mT)"
        )
    else:
        print("  spin dephasing estimate: skipped (no gradient_field_mT)")

    t_gate = gate_time_estimate(cfg.tau)
    print(f"  gate time (one pulse, tau) = {t_gate * 1e9:.4g} ns vs T1 = {d.t1 * 1e9:.4g} ns")
    print("  alternate duration figure: ~100 ns (does not follow from tau*kappa; listed for comparison)")
    return 0


_DISPATCH = {
    "levels": cmd_levels,
    "reflect": cmd_reflect,
    "fidelity": cmd_fidelity,
    "regime": cmd_regime,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sim",
        description="Resonator-mediated two-qubit gate simulator",
    )
    ap.add_argument("command", choices=sorted(_DISPATCH))
    ap.add_argument("--config", required=True, help="sectioned key-value config file")
    ap.add_argument("--backend", choices=_BACKENDS, help="override [run] backend")
    ap.add_argument("--plot", action="store_true", help="also write SVG charts")
    ap.add_argument("--out", help="output directory (default: out)")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.backend:
            cfg.backend = args.backend
        if args.out:
            cfg.output_dir = Path(args.out)
        return _DISPATCH[args.command](cfg, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericsError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
