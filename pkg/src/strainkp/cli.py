"""Command-line front end: stress sweeps with deterministic CSV/JSON output.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.  All floats are written with 9 significant digits and LF
line endings, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import axis as axis_mod
from . import kp_bulk, optics, qw
from ._parallel import map_ordered
from .elasticity import (ActuatorGeometry, StrainState, actuator_strain,
                         biaxial_strain, superpose, uniaxial_strain)
from .kp_bulk import NonHermitianError
from .materials import (MaterialParams, ParameterLoadError,
                        default_parameter_table, load_parameter_table)

__all__ = ["ConfigError", "RunConfig", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Invalid run configuration."""


# section -> {key: default}; units are spelled out in the key names
_DEFAULTS = {
    "run": {"material": "GaAs", "output_format": "csv",
            "parameter_file": ""},
    "prestress": {"biaxial_stress_gpa": "-0.12"},
    "sweep": {"stress_min_gpa": "-2.0", "stress_max_gpa": "2.0",
              "steps": "201"},
    "axis": {"theta_steps": "61", "phi_deg": "0.0"},
    "qw": {"thicknesses_nm": "12, 4", "barrier_thickness_nm": "20.0",
           "barrier_al_fraction": "0.4", "grid_points": "301",
           "sweep_steps": "21"},
    "emulation": {"cb_shift_mev": "52.8", "hh_shift_mev": "9.1",
                  "lh_shift_mev": "10.0", "transition_steps": "201"},
    "calibration": {"reference_lifetime_ps": "250.0"},
    "dipoles": {"snapshot_stresses_gpa": ""},
}


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") \
            from exc
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key}: must be finite")
    return value


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") \
            from exc


def _parse_float_list(section: str, key: str, raw: str) -> tuple[float, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    return tuple(_parse_float(section, key, item)
                 for item in raw.split(","))


@dataclass
class RunConfig:
    material: str = "GaAs"
    output_format: str = "csv"
    parameter_file: str = ""
    prestress_biaxial_gpa: float = -0.12
    stress_min_gpa: float = -2.0
    stress_max_gpa: float = 2.0
    steps: int = 201
    theta_steps: int = 61
    phi_deg: float = 0.0
    qw_thicknesses_nm: tuple = (12.0, 4.0)
    qw_barrier_nm: float = 20.0
    qw_barrier_al_fraction: float = 0.4
    qw_grid_points: int = 301
    qw_sweep_steps: int = 21
    emulation_cb_mev: float = 52.8
    emulation_hh_mev: float = 9.1
    emulation_lh_mev: float = 10.0
    transition_steps: int = 201
    lifetime_ps: float = 250.0
    snapshot_stresses_gpa: tuple = ()

    @classmethod
    def load(cls, path: Path | None) -> "RunConfig":
        values = {s: dict(keys) for s, keys in _DEFAULTS.items()}
        if path is not None:
            cp = configparser.ConfigParser()
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") \
                    from exc
            try:
                cp.read_string(text)
            except configparser.Error as exc:
                raise ConfigError(f"cannot parse config {path}: {exc}") \
                    from exc
            for section in cp.sections():
                if section not in values:
                    raise ConfigError(f"unknown config section [{section}]")
                for key, raw in cp[section].items():
                    if key not in values[section]:
                        raise ConfigError(
                            f"unknown config key {key!r} in [{section}]")
                    values[section][key] = raw
        cfg = cls(
            material=values["run"]["material"].strip(),
            output_format=values["run"]["output_format"].strip(),
            parameter_file=values["run"]["parameter_file"].strip(),
            prestress_biaxial_gpa=_parse_float(
                "prestress", "biaxial_stress_gpa",
                values["prestress"]["biaxial_stress_gpa"]),
            stress_min_gpa=_parse_float(
                "sweep", "stress_min_gpa", values["sweep"]["stress_min_gpa"]),
            stress_max_gpa=_parse_float(
                "sweep", "stress_max_gpa", values["sweep"]["stress_max_gpa"]),
            steps=_parse_int("sweep", "steps", values["sweep"]["steps"]),
            theta_steps=_parse_int(
                "axis", "theta_steps", values["axis"]["theta_steps"]),
            phi_deg=_parse_float(
                "axis", "phi_deg", values["axis"]["phi_deg"]),
            qw_thicknesses_nm=_parse_float_list(
                "qw", "thicknesses_nm", values["qw"]["thicknesses_nm"]),
            qw_barrier_nm=_parse_float(
                "qw", "barrier_thickness_nm",
                values["qw"]["barrier_thickness_nm"]),
            qw_barrier_al_fraction=_parse_float(
                "qw", "barrier_al_fraction",
                values["qw"]["barrier_al_fraction"]),
            qw_grid_points=_parse_int(
                "qw", "grid_points", values["qw"]["grid_points"]),
            qw_sweep_steps=_parse_int(
                "qw", "sweep_steps", values["qw"]["sweep_steps"]),
            emulation_cb_mev=_parse_float(
                "emulation", "cb_shift_mev",
                values["emulation"]["cb_shift_mev"]),
            emulation_hh_mev=_parse_float(
                "emulation", "hh_shift_mev",
                values["emulation"]["hh_shift_mev"]),
            emulation_lh_mev=_parse_float(
                "emulation", "lh_shift_mev",
                values["emulation"]["lh_shift_mev"]),
            transition_steps=_parse_int(
                "emulation", "transition_steps",
                values["emulation"]["transition_steps"]),
            lifetime_ps=_parse_float(
                "calibration", "reference_lifetime_ps",
                values["calibration"]["reference_lifetime_ps"]),
            snapshot_stresses_gpa=_parse_float_list(
                "dipoles", "snapshot_stresses_gpa",
                values["dipoles"]["snapshot_stresses_gpa"]),
        )
        return cfg

    def validate(self) -> None:
        if self.output_format not in ("csv", "json"):
            raise ConfigError(
                f"output_format must be csv or json, got "
                f"{self.output_format!r}")
        if not self.stress_min_gpa < self.stress_max_gpa:
            raise ConfigError("sweep needs stress_min_gpa < stress_max_gpa")
        for name, steps in (("sweep steps", self.steps),
                            ("theta_steps", self.theta_steps),
                            ("qw sweep_steps", self.qw_sweep_steps),
                            ("transition_steps", self.transition_steps)):
            if steps < 2:
                raise ConfigError(f"{name} must be at least 2, got {steps}")
        if not self.qw_thicknesses_nm:
            raise ConfigError("qw thicknesses_nm must not be empty")
        if not self.lifetime_ps > 0:
            raise ConfigError("reference_lifetime_ps must be positive")
        try:
            for t in self.qw_thicknesses_nm:
                qw.QwGeometry(t, self.qw_barrier_nm,
                              self.qw_barrier_al_fraction,
                              self.qw_grid_points)
        except ValueError as exc:
            raise ConfigError(f"invalid qw geometry: {exc}") from exc

    def load_table(self) -> dict[str, MaterialParams]:
        try:
            if self.parameter_file:
                table = load_parameter_table(self.parameter_file)
            else:
                table = default_parameter_table()
        except (OSError, ParameterLoadError) as exc:
            raise ConfigError(f"cannot load parameter table: {exc}") from exc
        if self.material not in table:
            raise ConfigError(
                f"material {self.material!r} not in parameter table "
                f"(has {sorted(table)})")
        return table

    def stress_sweep(self, steps: int | None = None) -> np.ndarray:
        return np.linspace(self.stress_min_gpa, self.stress_max_gpa,
                           steps if steps is not None else self.steps)


def _fmt(value) -> str:
    return format(float(value), ".9g")


def _write_table(path: Path, columns, rows, output_format: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if output_format == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        payload = {"columns": list(columns),
                   "rows": [[float(_fmt(v)) for v in row] for row in rows]}
        path.write_text(json.dumps(payload, separators=(",", ":"),
                                   sort_keys=True) + "\n", encoding="utf-8")


def _outfile(out: Path, stem: str, output_format: str) -> Path:
    return out / f"{stem}.{output_format}"


def _prestress(cfg: RunConfig, p: MaterialParams):
    return biaxial_strain(cfg.prestress_biaxial_gpa, p)


def cmd_mixing_curve(cfg: RunConfig, out: Path, fmt: str, threads: int,
                     steps: int | None) -> int:
    table = cfg.load_table()
    p = table[cfg.material]
    stresses = cfg.stress_sweep(steps)
    pre = _prestress(cfg, p)
    results = []
    for name, ax in (("z", axis_mod.QuantizationAxis(0.0)),
                     ("x", axis_mod.QuantizationAxis(math.pi / 2.0))):
        rows = axis_mod.mixing_curve(stresses, pre, ax, p, threads=threads)
        results.append((f"mixing_curve_{name}", rows))
    for stem, rows in results:
        _write_table(_outfile(out, stem, fmt),
                     axis_mod.MIXING_CURVE_COLUMNS, rows, fmt)
    return EXIT_OK


def cmd_mixing_map(cfg: RunConfig, out: Path, fmt: str, threads: int,
                   steps: int | None) -> int:
    table = cfg.load_table()
    p = table[cfg.material]
    stresses = cfg.stress_sweep(steps)
    thetas = axis_mod.default_theta_grid(cfg.theta_steps)
    phi = math.radians(cfg.phi_deg)
    th, strain_xx, phh = axis_mod.mixing_map(
        stresses, _prestress(cfg, p), p, thetas=thetas, phi=phi,
        threads=threads)
    rows = [(th[i], strain_xx[j], phh[i, j])
            for i in range(len(th)) for j in range(len(strain_xx))]
    _write_table(_outfile(out, "mixing_map", fmt),
                 ("theta_rad", "strain_xx", "p_hh"), rows, fmt)
    return EXIT_OK


_QW_COLUMNS = ("strain_xx", "p_hh_z", "p_lh_z", "p_so_z",
               "p_hh_x", "p_lh_x", "p_so_x", "converged")


def cmd_qw(cfg: RunConfig, out: Path, fmt: str, threads: int,
           steps: int | None) -> int:
    table = cfg.load_table()
    p = table[cfg.material]
    ax_z = axis_mod.QuantizationAxis(0.0)
    ax_x = axis_mod.QuantizationAxis(math.pi / 2.0)
    stresses = cfg.stress_sweep(steps if steps is not None
                                else cfg.qw_sweep_steps)
    results = []
    for t in cfg.qw_thicknesses_nm:
        geometry = qw.QwGeometry(t, cfg.qw_barrier_nm,
                                 cfg.qw_barrier_al_fraction,
                                 cfg.qw_grid_points)
        doubled = qw.QwGeometry(t, cfg.qw_barrier_nm,
                                cfg.qw_barrier_al_fraction,
                                2 * cfg.qw_grid_points + 1)
        e_base = qw.solve_qw(geometry, StrainState(), table, 2)[0].energy
        e_fine = qw.solve_qw(doubled, StrainState(), table, 2)[0].energy
        converged = 1.0 if abs(e_base - e_fine) < 1e-4 else 0.0

        def one(sigma, geometry=geometry, converged=converged):
            strain = uniaxial_strain(sigma, p)
            states = qw.solve_qw(geometry, strain, table, 2)
            pz = qw.envelope_projection(states[:2], ax_z)
            px = qw.envelope_projection(states[:2], ax_x)
            return (strain.exx, pz.p_hh, pz.p_lh, pz.p_so,
                    px.p_hh, px.p_lh, px.p_so, converged)

        rows = map_ordered(one, stresses, threads)
        results.append((f"qw_mixing_{t:g}nm", rows))

    offsets = qw.EmulationOffsets(cfg.emulation_cb_mev * 1e-3,
                                  cfg.emulation_hh_mev * 1e-3,
                                  cfg.emulation_lh_mev * 1e-3)

    def one_transition(sigma):
        strain = uniaxial_strain(sigma, p)
        return (strain.exx, qw.transition_energy(offsets, strain, table))

    trans = map_ordered(one_transition, cfg.stress_sweep(
        cfg.transition_steps), threads)
    results.append(("qw_transition_energy", trans))

    for stem, rows in results:
        columns = _QW_COLUMNS if stem.startswith("qw_mixing") \
            else ("strain_xx", "transition_ev")
        _write_table(_outfile(out, stem, fmt), columns, rows, fmt)
    return EXIT_OK


def cmd_dipoles(cfg: RunConfig, out: Path, fmt: str, threads: int,
                steps: int | None) -> int:
    table = cfg.load_table()
    p = table[cfg.material]
    pre = _prestress(cfg, p)
    calibration = optics.RateCalibration(cfg.lifetime_ps)
    rows = optics.dipole_sweep(cfg.stress_sweep(steps), pre, p, calibration,
                               threads=threads)
    results = [("dipole_sweep", optics.DIPOLE_SWEEP_COLUMNS, rows)]

    for sigma in cfg.snapshot_stresses_gpa:
        strain = superpose(pre, uniaxial_strain(sigma, p))
        doublet = kp_bulk.top_valence_doublet(strain, p)
        densities = [optics.angular_density(s) for s in doublet]
        # doublet-averaged density is basis independent; normalize on
        # the grid before export
        avg = 0.5 * (densities[0].density + densities[1].density)
        dens = densities[0]
        avg = avg / np.sum(avg * dens.weights)
        snap = [(dens.theta[i], dens.phi[j], avg[i, j])
                for i in range(dens.theta.size)
                for j in range(dens.phi.size)]
        results.append((f"angular_density_{sigma:g}gpa",
                        ("theta_rad", "phi_rad", "density"), snap))

    for stem, columns, table_rows in results:
        _write_table(_outfile(out, stem, fmt), columns, table_rows, fmt)
    return EXIT_OK


def cmd_amplify(args) -> int:
    geometry = ActuatorGeometry(args.finger_length_mm, args.gap_um)
    if args.piezo_strain is None:
        print(_fmt(geometry.amplification))
    else:
        print(_fmt(actuator_strain(geometry, args.piezo_strain)))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None,
                        help="run configuration file (INI)")
    common.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory (default: ./out)")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (overrides config)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweeps")
    common.add_argument("--steps", type=int, default=None,
                        help="override the sweep step count")

    parser = argparse.ArgumentParser(
        prog="strainkp",
        description="Strain-driven valence-band mixing, quantum-well hole "
                    "states and optical selection rules for GaAs/AlGaAs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("mixing-curve", parents=[common],
                   help="HH/LH/SO character of the hole ground state vs "
                        "uniaxial stress, for the z and x axes")
    sub.add_parser("mixing-map", parents=[common],
                   help="p_hh over a (theta, strain) grid")
    sub.add_parser("qw", parents=[common],
                   help="quantum-well mixing curves and transition energies")
    sub.add_parser("dipoles", parents=[common],
                   help="dipole strengths/rates vs uniaxial stress")
    amp = sub.add_parser("amplify", parents=[common],
                         help="geometric strain amplification of the "
                              "two-finger actuator")
    amp.add_argument("--finger-length-mm", type=float, required=True)
    amp.add_argument("--gap-um", type=float, required=True)
    amp.add_argument("--piezo-strain", type=float, default=None,
                     help="piezo strain to amplify; omit to print the "
                          "bare 2l/d factor")
    return parser


_COMMANDS = {
    "mixing-curve": cmd_mixing_curve,
    "mixing-map": cmd_mixing_map,
    "qw": cmd_qw,
    "dipoles": cmd_dipoles,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "amplify":
            return cmd_amplify(args)
        cfg = RunConfig.load(args.config)
        cfg.validate()
        if args.steps is not None and args.steps < 2:
            raise ConfigError("--steps must be at least 2")
        fmt = args.format or cfg.output_format
        handler = _COMMANDS[args.command]
        return handler(cfg, args.out, fmt, max(1, args.threads), args.steps)
    except (NonHermitianError, np.linalg.LinAlgError) as exc:
        print(f"strainkp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ParameterLoadError, ValueError) as exc:
        print(f"strainkp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"strainkp: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
