"""Command-line front end.

Scenario files are YAML with explicit unit suffixes on every physical
quantity ("5.8 nm", "1 ms", "0.5 rad", "1.45e-25 kg", "1 um^2"); bare numbers
are rejected for dimensioned fields.  Mode indices in configs are 1-based.

Subcommands:
    run          execute a scenario, write its output files
    sweep        one output row per sweep point, resumable via point markers
    check        run scenario-level invariants (blocking, unitarity, determinism)
    convergence  grid/step self-convergence report for condensate scenarios

Exit codes: 0 success, 2 config/schema error, 3 numerical diagnostic,
4 I/O failure.  Errors emit a machine-readable JSON record on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from . import analytic, gpe
from .circuits import (
    Circuit,
    CrossKerr,
    TruncationBoundaryWarning,
    beam_splitter,
    build_kerr_cascade,
    circuit_hash,
    make_tritter,
    random_linear_coupler,
)
from .fock import (
    BlockPattern,
    CoherentSpec,
    OccupationBasis,
    QuantumState,
    TailTooLarge,
    all_block_patterns,
    apply_blocking,
    make_coherent_state,
    n_max_for_tail,
    superposition_state,
)
from .interference import DetectorModel, intensity_table, sorkin_term
from .output import write_csv, write_intensity_table_csv, write_json

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Scenario file violates the expected schema."""


class DiagnosticError(RuntimeError):
    """A numerical diagnostic tripped during execution."""


_UNIT_SCALES = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "μm": 1e-6, "nm": 1e-9},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "mass": {"kg": 1.0},
    "area": {"m^2": 1.0, "m2": 1.0, "um^2": 1e-12, "µm^2": 1e-12, "μm^2": 1e-12,
             "um2": 1e-12, "nm^2": 1e-18, "nm2": 1e-18},
}

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([^\s0-9]+[^\s]*)\s*$")


def parse_quantity(value, dimension: str, field: str) -> float:
    """Parse a '<number> <unit>' string into SI; bare numbers are rejected."""
    units = _UNIT_SCALES[dimension]
    if isinstance(value, (int, float)):
        raise ConfigError(
            f"{field}: physical quantities need a unit suffix "
            f"(one of {sorted(units)}), got bare number {value!r}"
        )
    if not isinstance(value, str):
        raise ConfigError(f"{field}: expected a quantity string, got {type(value).__name__}")
    match = _QUANTITY_RE.match(value)
    if not match:
        raise ConfigError(f"{field}: cannot parse quantity {value!r}")
    number, unit = match.groups()
    if unit not in units:
        raise ConfigError(f"{field}: unit {unit!r} not valid for {dimension} (use {sorted(units)})")
    try:
        return float(number) * units[unit]
    except ValueError as exc:
        raise ConfigError(f"{field}: bad numeric part in {value!r}") from exc


def _require(cfg: dict, key: str, table: str):
    if key not in cfg:
        raise ConfigError(f"missing required field {table}.{key}")
    return cfg[key]


def _as_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{field}: amplitudes are a number or a [re, im] pair, got {value!r}")


@dataclass(frozen=True)
class Scenario:
    kind: str
    config: dict
    path: Path


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must contain a mapping")
    kind = raw.get("kind")
    if kind not in ("fock", "gpe", "analytic"):
        raise ConfigError(f"kind must be one of fock, gpe, analytic; got {kind!r}")
    return Scenario(kind=kind, config=raw, path=path)


# ---------------------------------------------------------------------------
# fock scenarios


def _coherent_means(input_cfg: dict, modes: int) -> list[float]:
    coh = input_cfg["coherent"]
    if "amplitudes" in coh:
        amps = [_as_complex(a, "input.coherent.amplitudes") for a in coh["amplitudes"]]
        return [abs(a) ** 2 for a in amps]
    mean = float(_require(coh, "mean_photons", "input.coherent"))
    return [mean] * modes


def _build_fock_basis(cfg: dict) -> OccupationBasis:
    modes = int(_require(cfg, "modes", "scenario"))
    trunc = cfg.get("truncation", {})
    if not isinstance(trunc, dict):
        raise ConfigError("truncation must be a mapping")
    input_cfg = _require(cfg, "input", "scenario")
    if "n_max" in trunc:
        return OccupationBasis(modes, int(trunc["n_max"]))
    if "coherent" in input_cfg:
        tol = float(trunc.get("tail_tolerance", 1e-10))
        # headroom: a splitter can pile several modes' light into one output
        headroom = float(trunc.get("headroom", 2.0))
        peak = max(_coherent_means(input_cfg, modes))
        return OccupationBasis(modes, max(1, n_max_for_tail(headroom * peak, tol)))
    if "fock_superposition" in input_cfg:
        terms = input_cfg["fock_superposition"]
        total = max(sum(int(n) for n in t["occupation"]) for t in terms)
        # number conservation keeps every occupation below the largest total
        return OccupationBasis(modes, max(1, total))
    raise ConfigError("input must define 'coherent' or 'fock_superposition'")


def _build_input_state(cfg: dict, basis: OccupationBasis) -> QuantumState:
    input_cfg = _require(cfg, "input", "scenario")
    if "coherent" in input_cfg:
        coh = input_cfg["coherent"]
        if "amplitudes" in coh:
            amps = [_as_complex(a, "input.coherent.amplitudes") for a in coh["amplitudes"]]
        else:
            mean = float(_require(coh, "mean_photons", "input.coherent"))
            amps = [complex(math.sqrt(mean))] * basis.mode_count
        phases = coh.get("phases")
        if phases is not None:
            if len(phases) != basis.mode_count:
                raise ConfigError("input.coherent.phases needs one entry per mode")
            phases = [parse_quantity(p, "angle", "input.coherent.phases") for p in phases]
            amps = [a * np.exp(1j * p) for a, p in zip(amps, phases)]
        if len(amps) != basis.mode_count:
            raise ConfigError("input.coherent.amplitudes needs one entry per mode")
        trunc = cfg.get("truncation", {})
        tol = float(trunc.get("tail_tolerance", 1e-10))
        return make_coherent_state(CoherentSpec(tuple(amps), tail_tol=tol), basis)
    terms = {}
    for i, term in enumerate(input_cfg["fock_superposition"]):
        occ = tuple(int(n) for n in _require(term, "occupation", f"input.fock_superposition[{i}]"))
        if len(occ) != basis.mode_count:
            raise ConfigError(f"input.fock_superposition[{i}]: occupation length mismatch")
        amp = _as_complex(
            _require(term, "amplitude", f"input.fock_superposition[{i}]"),
            f"input.fock_superposition[{i}].amplitude",
        )
        terms[occ] = terms.get(occ, 0) + amp
    return superposition_state(basis, terms)


def _mode_pair(raw, field: str, modes: int) -> tuple[int, int]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(f"{field}: expected a pair of 1-based mode indices")
    a, b = int(raw[0]) - 1, int(raw[1]) - 1
    if not (0 <= a < modes and 0 <= b < modes) or a == b:
        raise ConfigError(f"{field}: indices out of range or equal")
    return a, b


def _build_circuit(cfg: dict) -> Circuit:
    modes = int(_require(cfg, "modes", "scenario"))
    spec = _require(cfg, "circuit", "scenario")
    if not isinstance(spec, list) or not spec:
        raise ConfigError("circuit must be a non-empty list of elements")
    elements = []
    for i, entry in enumerate(spec):
        if not isinstance(entry, dict) or len(entry) != 1:
            raise ConfigError(f"circuit[{i}]: each element is a single-key mapping")
        (name, body), = entry.items()
        body = body or {}
        if name == "kerr_cascade":
            theta = parse_quantity(_require(body, "theta", f"circuit[{i}]"), "angle", "theta")
            elements.extend(build_kerr_cascade(modes, theta).elements)
        elif name == "cross_kerr":
            j, k = _mode_pair(_require(body, "modes", f"circuit[{i}]"), f"circuit[{i}].modes", modes)
            theta = parse_quantity(_require(body, "theta", f"circuit[{i}]"), "angle", "theta")
            elements.append(CrossKerr(j, k, theta))
        elif name == "beam_splitter":
            a, b = _mode_pair(_require(body, "modes", f"circuit[{i}]"), f"circuit[{i}].modes", modes)
            elements.append(beam_splitter(a, b, modes))
        elif name == "tritter":
            if modes != 3:
                raise ConfigError(f"circuit[{i}]: the tritter needs a 3-mode scenario")
            elements.append(make_tritter())
        elif name == "random_coupler":
            seed = int(_require(body, "seed", f"circuit[{i}]"))
            elements.append(random_linear_coupler(modes, seed))
        else:
            raise ConfigError(f"circuit[{i}]: unknown element {name!r}")
    return Circuit(modes, tuple(elements))


def _build_detector(cfg: dict) -> DetectorModel:
    det = cfg.get("detector", {"kind": "ideal"})
    if not isinstance(det, dict):
        raise ConfigError("detector must be a mapping")
    kind = det.get("kind", "ideal")
    if kind == "ideal":
        return DetectorModel.ideal()
    if kind == "saturating":
        return DetectorModel.saturating(float(_require(det, "epsilon", "detector")))
    if kind == "noisy":
        if "poisson_mean" in det:
            from scipy import stats

            mu = float(det["poisson_mean"])
            top = int(stats.poisson.isf(1e-13, mu)) + 1 if mu > 0 else 1
            dist = stats.poisson.pmf(np.arange(top + 1), mu)
            dist = dist / dist.sum()
            return DetectorModel.noisy(dist)
        counts = det.get("counts")
        if counts is None:
            raise ConfigError("noisy detector needs poisson_mean or counts")
        return DetectorModel.noisy([float(c) for c in counts])
    raise ConfigError(f"unknown detector kind {kind!r}")


def _out_mode(cfg: dict, modes: int) -> int:
    raw = int(cfg.get("out_mode", 1)) - 1
    if not 0 <= raw < modes:
        raise ConfigError("out_mode out of range")
    return raw


def _run_fock(cfg: dict, out_dir: Path, basename: str, fmt: str) -> list[Path]:
    basis = _build_fock_basis(cfg)
    state = _build_input_state(cfg, basis)
    circuit = _build_circuit(cfg)
    detector = _build_detector(cfg)
    out_mode = _out_mode(cfg, basis.mode_count)
    table = intensity_table(state, circuit, detector, out_mode)
    term = sorkin_term(table)
    trunc = cfg.get("truncation", {})
    metadata = {
        "kind": "fock",
        "modes": basis.mode_count,
        "n_max": basis.n_max,
        "tail_tolerance": float(trunc.get("tail_tolerance", 1e-10)),
        "out_mode": out_mode + 1,
        "detector": json.dumps(detector.describe(), sort_keys=True),
        "circuit_hash": circuit_hash(circuit),
    }
    written = []
    if fmt == "csv":
        written.append(write_intensity_table_csv(table, out_dir / f"{basename}_table.csv", metadata))
    else:
        payload = {"metadata": metadata, "rows": [[p.label(), v] for p, v in table.rows()]}
        written.append(write_json(out_dir / f"{basename}_table.json", payload))
    written.append(
        write_json(
            out_dir / f"{basename}_sorkin.json",
            {"metadata": metadata, "order": basis.mode_count, "sorkin_term": term},
        )
    )
    return written


# ---------------------------------------------------------------------------
# gpe scenarios


def _build_gpe(cfg: dict):
    grid_cfg = _require(cfg, "grid", "scenario")
    grid = gpe.Grid1D(
        parse_quantity(_require(grid_cfg, "x_min", "grid"), "length", "grid.x_min"),
        parse_quantity(_require(grid_cfg, "x_max", "grid"), "length", "grid.x_max"),
        int(_require(grid_cfg, "points", "grid")),
    )
    comp_cfg = _require(cfg, "components", "scenario")
    components = [
        gpe.GaussianComponent(
            center=parse_quantity(_require(c, "center", f"components[{i}]"), "length", "center"),
            sigma=parse_quantity(_require(c, "sigma", f"components[{i}]"), "length", "sigma"),
            weight=_as_complex(c.get("weight", 1.0), f"components[{i}].weight"),
        )
        for i, c in enumerate(comp_cfg)
    ]
    cond = _require(cfg, "condensate", "scenario")
    params = gpe.CondensateParams(
        atoms=float(_require(cond, "atoms", "condensate")),
        scattering_length=parse_quantity(
            _require(cond, "scattering_length", "condensate"), "length", "scattering_length"
        ),
        mass=parse_quantity(_require(cond, "mass", "condensate"), "mass", "mass"),
        tau=parse_quantity(_require(cond, "evolution_time", "condensate"), "time", "evolution_time"),
        transverse_area=parse_quantity(
            cond.get("transverse_area", "1 um^2"), "area", "transverse_area"
        ),
    )
    solver = cfg.get("solver", {})
    dt = parse_quantity(solver.get("dt", "1e-7 s"), "time", "solver.dt")
    return components, params, grid, dt


def _gpe_metadata(components, params, grid, dt) -> dict:
    return {
        "kind": "gpe",
        "atoms": params.atoms,
        "scattering_length_m": params.scattering_length,
        "mass_kg": params.mass,
        "tau_s": params.tau,
        "transverse_area_m2": params.transverse_area,
        "coupling_J_m": params.coupling,
        "dt_s": dt,
        "points": grid.points,
        "x_min_m": grid.x_min,
        "x_max_m": grid.x_max,
        "components": json.dumps(
            [[c.center, c.sigma, c.weight.real, c.weight.imag] for c in components]
        ),
        "x_unit": "um",
        "density_unit": "1/m",
    }


def _run_gpe(cfg: dict, out_dir: Path, basename: str, fmt: str) -> list[Path]:
    components, params, grid, dt = _build_gpe(cfg)
    if len(components) != 3:
        raise ConfigError("condensate scenarios use exactly three components")
    profiles = gpe.pattern_profiles(components, params, grid, dt)
    i3 = np.zeros(grid.points)
    for pattern in all_block_patterns(3):
        i3 += pattern.sign * profiles[pattern.label()]
    metadata = _gpe_metadata(components, params, grid, dt)
    labels = [p.label() for p in all_block_patterns(3)]
    header = ["x_um", "i3", "i3_atom_scaled"] + [f"density_{lab}" for lab in labels]
    x_um = grid.x * 1e6
    rows = [
        [x_um[i], i3[i], i3[i] * params.atoms] + [profiles[lab][i] for lab in labels]
        for i in range(grid.points)
    ]
    written = []
    if fmt == "csv":
        written.append(write_csv(out_dir / f"{basename}_profile.csv", header, rows, metadata))
    else:
        payload = {"metadata": metadata, "header": header, "rows": rows}
        written.append(write_json(out_dir / f"{basename}_profile.json", payload))
    written.append(
        write_json(
            out_dir / f"{basename}_summary.json",
            {"metadata": metadata, "max_abs_i3": float(np.max(np.abs(i3)))},
        )
    )
    return written


# ---------------------------------------------------------------------------
# analytic scenarios


def _build_analytic_params(cfg: dict) -> analytic.KerrCascadeParams:
    return analytic.KerrCascadeParams(
        mean_n=float(_require(cfg, "mean_photons", "scenario")),
        theta=parse_quantity(_require(cfg, "theta", "scenario"), "angle", "theta"),
        order=int(_require(cfg, "order", "scenario")),
        phi1=parse_quantity(cfg.get("phi1", "0 rad"), "angle", "phi1"),
        phi2=parse_quantity(cfg.get("phi2", "0 rad"), "angle", "phi2"),
    )


def _run_analytic(cfg: dict, out_dir: Path, basename: str, fmt: str) -> list[Path]:
    params = _build_analytic_params(cfg)
    fringe = analytic.kerr_cascade_interference(params)
    payload = {
        "mean_photons": params.mean_n,
        "theta_rad": params.theta,
        "order": params.order,
        "phi1_rad": params.phi1,
        "phi2_rad": params.phi2,
        "magnitude": fringe.magnitude,
        "offset_rad": fringe.offset,
        "value": fringe.value,
    }
    return [write_json(out_dir / f"{basename}_fringe.json", payload)]


# ---------------------------------------------------------------------------
# sweeps


_FOCK_SWEEP_ANGLES = ("theta",)
_ANALYTIC_SWEEP_KEYS = ("theta", "phi1", "phi2", "order", "mean_photons")


def _sweep_values(cfg: dict) -> tuple[str, list[float]]:
    sweep = _require(cfg, "sweep", "scenario")
    param = _require(sweep, "parameter", "sweep")
    if "values" in sweep:
        return param, [float(v) for v in sweep["values"]]
    steps = int(_require(sweep, "steps", "sweep"))
    if steps < 1:
        raise ConfigError("sweep.steps must be positive")
    if param in ("theta", "phi1", "phi2") or re.fullmatch(r"phi\d+", str(param)):
        start = parse_quantity(_require(sweep, "start", "sweep"), "angle", "sweep.start")
        stop = parse_quantity(_require(sweep, "stop", "sweep"), "angle", "sweep.stop")
    else:
        start = float(_require(sweep, "start", "sweep"))
        stop = float(_require(sweep, "stop", "sweep"))
    endpoint = bool(sweep.get("endpoint", False))
    values = np.linspace(start, stop, steps, endpoint=endpoint)
    return param, [float(v) for v in values]


def _apply_sweep_value(cfg: dict, param: str, value: float) -> dict:
    cfg = json.loads(json.dumps(cfg))  # deep copy, YAML-safe structures only
    kind = cfg["kind"]
    if kind == "analytic":
        if param not in _ANALYTIC_SWEEP_KEYS:
            raise ConfigError(f"sweep parameter {param!r} not supported for analytic scenarios")
        if param in ("theta", "phi1", "phi2"):
            cfg[param] = f"{value!r} rad"
        elif param == "order":
            cfg[param] = int(round(value))
        else:
            cfg[param] = value
        return cfg
    if kind == "fock":
        match = re.fullmatch(r"phi(\d+)", str(param))
        if match:
            mode = int(match.group(1))
            coh = cfg.get("input", {}).get("coherent")
            if coh is None:
                raise ConfigError("phase sweeps need a coherent input")
            modes = int(cfg["modes"])
            if not 1 <= mode <= modes:
                raise ConfigError(f"sweep parameter {param!r} out of range")
            phases = coh.get("phases") or ["0 rad"] * modes
            phases[mode - 1] = f"{value!r} rad"
            coh["phases"] = phases
            return cfg
        if param == "theta":
            touched = 0
            for entry in cfg.get("circuit", []):
                for name, body in entry.items():
                    if name in ("kerr_cascade", "cross_kerr"):
                        body["theta"] = f"{value!r} rad"
                        touched += 1
            if not touched:
                raise ConfigError("theta sweep needs a kerr_cascade or cross_kerr element")
            return cfg
        raise ConfigError(f"sweep parameter {param!r} not supported for fock scenarios")
    raise ConfigError("sweeps are not supported for gpe scenarios")


def _sweep_point(cfg: dict, param: str, value: float) -> dict:
    point_cfg = _apply_sweep_value(cfg, param, value)
    kind = point_cfg["kind"]
    if kind == "analytic":
        fringe = analytic.kerr_cascade_interference(_build_analytic_params(point_cfg))
        return {
            param: value,
            "magnitude": fringe.magnitude,
            "offset_rad": fringe.offset,
            "value": fringe.value,
        }
    basis = _build_fock_basis(point_cfg)
    state = _build_input_state(point_cfg, basis)
    circuit = _build_circuit(point_cfg)
    detector = _build_detector(point_cfg)
    table = intensity_table(state, circuit, detector, _out_mode(point_cfg, basis.mode_count))
    return {param: value, "sorkin": sorkin_term(table)}


def _run_sweep(scenario: Scenario, out_dir: Path, basename: str, workers: int, resume: bool) -> Path:
    cfg = scenario.config
    param, values = _sweep_values(cfg)
    marker_dir = out_dir / f"{basename}_points"
    marker_dir.mkdir(parents=True, exist_ok=True)

    pending = []
    for index, value in enumerate(values):
        marker = marker_dir / f"point_{index:04d}.json"
        if resume and marker.exists():
            continue
        pending.append((index, value, marker))

    def finish(index, value, marker, row):
        write_json(marker, {"index": index, "row": row})

    if workers > 1 and pending:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                (index, value, marker, pool.submit(_sweep_point, cfg, param, value))
                for index, value, marker in pending
            ]
            for index, value, marker, fut in futures:
                finish(index, value, marker, fut.result())
    else:
        for index, value, marker in pending:
            finish(index, value, marker, _sweep_point(cfg, param, value))

    rows = []
    header: list[str] | None = None
    for index in range(len(values)):
        marker = marker_dir / f"point_{index:04d}.json"
        payload = json.loads(marker.read_text())
        row = payload["row"]
        if header is None:
            param_col = f"{param}_rad" if param.startswith("phi") or param == "theta" else param
            header = [param_col] + [k for k in row if k != param]
        rows.append([row[param]] + [row[k] for k in header[1:]])
    metadata = {"kind": cfg["kind"], "sweep_parameter": param, "sweep_points": len(values)}
    return write_csv(out_dir / f"{basename}_sweep.csv", header, rows, metadata)


# ---------------------------------------------------------------------------
# invariant checks


def _check_fock(cfg: dict, seed: int) -> list[tuple[str, bool, str]]:
    basis = _build_fock_basis(cfg)
    state = _build_input_state(cfg, basis)
    circuit = _build_circuit(cfg)
    detector = _build_detector(cfg)
    out_mode = _out_mode(cfg, basis.mode_count)
    results = []
    rng = np.random.default_rng(seed)
    bits = tuple(int(b) for b in rng.integers(0, 2, basis.mode_count))
    pattern = BlockPattern(bits)

    once = apply_blocking(state, pattern)
    twice = apply_blocking(once, pattern)
    dist = np.max(np.abs(once.density() - twice.density())) if basis.dim <= 4096 else abs(
        once.trace() - twice.trace()
    )
    results.append(("blocker idempotence", dist < 1e-12, f"distance {dist:.2e}"))

    trace_err = abs(once.trace() - state.trace())
    results.append(("blocker trace preservation", trace_err < 1e-12, f"error {trace_err:.2e}"))

    evolved = circuit.apply(state)
    norm_err = abs(evolved.trace() - state.trace())
    results.append(("circuit norm preservation", norm_err < 1e-9, f"error {norm_err:.2e}"))

    all_blocked = BlockPattern((1,) * basis.mode_count)
    dark = intensity_table(state, circuit, DetectorModel.ideal(), out_mode)[all_blocked.bits]
    results.append(("all-blocked intensity zero", abs(dark) < 1e-12, f"value {dark:.2e}"))

    t1 = intensity_table(state, circuit, detector, out_mode)
    t2 = intensity_table(state, circuit, detector, out_mode)
    same = all(t1[p.bits] == t2[p.bits] for p in all_block_patterns(basis.mode_count))
    results.append(("intensity table determinism", same, "recomputation identical"))
    return results


def _check_gpe(cfg: dict) -> list[tuple[str, bool, str]]:
    components, params, grid, dt = _build_gpe(cfg)
    results = []
    full = gpe.init_superposition(components, BlockPattern((0,) * len(components)), grid)
    evolved = gpe.evolve(full, params, dt)
    norm_err = abs(evolved.norm_integral() - full.norm_integral())
    results.append(("norm conservation", norm_err < 1e-9, f"error {norm_err:.2e}"))

    linear = replace(params, scattering_length=0.0)
    i3 = gpe.sorkin3_profile(components, linear, grid, dt)
    floor = float(np.max(np.abs(i3)))
    results.append(("interaction-free null profile", floor < 1e-9, f"max {floor:.2e}"))
    return results


def _check_analytic(cfg: dict) -> list[tuple[str, bool, str]]:
    params = _build_analytic_params(cfg)
    fringe = analytic.kerr_cascade_interference(params)
    results = [(
        "fringe value within magnitude",
        abs(fringe.value) <= fringe.magnitude + 1e-12,
        f"|{fringe.value:.3e}| vs {fringe.magnitude:.3e}",
    )]
    mags = [
        analytic.kerr_cascade_interference(replace(params, order=m)).magnitude
        for m in (params.order, params.order + 1, params.order + 2)
    ]
    base = abs(analytic.coherent_overlap(math.sqrt(params.mean_n), params.theta) - 1)
    monotone = all(a >= b - 1e-15 for a, b in zip(mags, mags[1:])) or base >= 1
    results.append(("magnitude decay in order", monotone, f"magnitudes {mags}"))
    return results


# ---------------------------------------------------------------------------
# entry points


def _emit_error(code: int, exc: BaseException) -> int:
    record = {"error": {"code": code, "type": type(exc).__name__, "message": str(exc)}}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def run(scenario_file: str, out_dir: str = ".", fmt: str = "csv") -> list[Path]:
    scenario = load_scenario(scenario_file)
    cfg = scenario.config
    basename = cfg.get("output", {}).get("basename") or scenario.path.stem
    out = Path(out_dir)
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationBoundaryWarning)
        warnings.simplefilter("error", gpe.NonlinearStepWarning)
        if scenario.kind == "fock":
            return _run_fock(cfg, out, basename, fmt)
        if scenario.kind == "gpe":
            return _run_gpe(cfg, out, basename, fmt)
        return _run_analytic(cfg, out, basename, fmt)


def sweep(scenario_file: str, out_dir: str = ".", workers: int = 1, resume: bool = True) -> Path:
    scenario = load_scenario(scenario_file)
    basename = scenario.config.get("output", {}).get("basename") or scenario.path.stem
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationBoundaryWarning)
        return _run_sweep(scenario, Path(out_dir), basename, workers, resume)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="hoisim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep", "check", "convergence"):
        p = sub.add_parser(name)
        p.add_argument("scenario", help="scenario YAML file")
        p.add_argument("--out-dir", default=".")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "sweep":
            p.add_argument("--no-resume", action="store_true")
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            written = run(args.scenario, args.out_dir, args.format)
            for path in written:
                print(path)
            return EXIT_OK
        if args.command == "sweep":
            path = sweep(args.scenario, args.out_dir, args.workers, not args.no_resume)
            print(path)
            return EXIT_OK
        scenario = load_scenario(args.scenario)
        if args.command == "check":
            if scenario.kind == "fock":
                results = _check_fock(scenario.config, args.seed)
            elif scenario.kind == "gpe":
                results = _check_gpe(scenario.config)
            else:
                results = _check_analytic(scenario.config)
            ok = True
            for name, passed, detail in results:
                print(f"{'PASS' if passed else 'FAIL'}: {name} ({detail})")
                ok &= passed
            return EXIT_OK if ok else EXIT_NUMERICAL
        # convergence
        if scenario.kind != "gpe":
            raise ConfigError("convergence reports apply to gpe scenarios")
        components, params, grid, dt = _build_gpe(scenario.config)
        report = gpe.convergence_report(components, params, grid, dt)
        print(report.summary())
        basename = scenario.config.get("output", {}).get("basename") or scenario.path.stem
        write_json(
            Path(args.out_dir) / f"{basename}_convergence.json",
            {
                "coarse_max": report.coarse_max,
                "fine_max": report.fine_max,
                "change": report.change,
                "mode": report.mode,
                "tolerance": report.tolerance,
                "passed": report.passed,
            },
        )
        return EXIT_OK if report.passed else EXIT_NUMERICAL
    except ConfigError as exc:
        return _emit_error(EXIT_CONFIG, exc)
    except (TailTooLarge, gpe.BoundaryMassError, DiagnosticError) as exc:
        return _emit_error(EXIT_NUMERICAL, exc)
    except Warning as exc:  # escalated numerical diagnostics
        return _emit_error(EXIT_NUMERICAL, exc)
    except OSError as exc:
        return _emit_error(EXIT_IO, exc)


if __name__ == "__main__":
    sys.exit(main())
