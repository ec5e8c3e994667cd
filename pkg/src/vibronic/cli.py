"""Command-line front end: config-driven scans with CSV/JSON artifacts.

Usage::

    vibronic <task> --config <file> [--out DIR] [--threads N] [--modes reduced|full]

Tasks: ``graph``, ``gs-scan-xi``, ``gs-scan-kappa``, ``gs-scan-omega``,
``wigner``, ``bopes-scan``, ``compare``.  The config file is UTF-8 JSON; every
run writes a ``run-manifest.json`` recording the resolved parameters and tool
version alongside the task artifacts.  Outputs are deterministic: identical
configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    bogoliubov_w,
    critical_points,
    epsilon2,
    epsilon4,
    perpendicular_xi_eff,
    wigner,
    zero_point_correction,
)
from .assembly import (
    assemble_state_hamiltonian,
    build_molecular_model,
    dumbbell_hamiltonian,
    reduce_modes,
)
from .bopes import (
    build_bo_surface,
    light_start_points,
    minimize_bo,
    transition_scan,
    transition_scan_csv,
)
from .errors import ConfigError, InstabilityError, VibronicError
from .fock import converge_cutoff
from .graphs import (
    GEOMETRY_PRESETS,
    Geometry,
    build_resonant_manifold,
    config_from_string,
    export_edge_list,
    export_node_table,
    graph_classify,
)
from .params import (
    ExplicitCouplings,
    PhysicalParams,
    PowerLaw,
    PowerLawSum,
    derive_couplings,
    potential_eval,
)

TASKS = (
    "graph",
    "gs-scan-xi",
    "gs-scan-kappa",
    "gs-scan-omega",
    "wigner",
    "bopes-scan",
    "compare",
)


# ----------------------------------------------------------------------------
# Config parsing and validation


def _require(cfg: dict, key: str, path: str):
    if key not in cfg:
        raise ConfigError(f"{path}.{key}", "missing required key")
    return cfg[key]


def _number(value, path: str, positive=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(path, f"expected a positive number, got {value}")
    return float(value)


def _integer(value, path: str, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"expected at least {minimum}, got {value}")
    return value


def _parse_geometry(cfg: dict) -> Geometry:
    geo = _require(cfg, "geometry", "config")
    if not isinstance(geo, dict):
        raise ConfigError("config.geometry", "expected an object")
    if "preset" in geo:
        name = geo["preset"]
        if name not in GEOMETRY_PRESETS:
            raise ConfigError(
                "config.geometry.preset",
                f"unknown preset {name!r}; choose from {sorted(GEOMETRY_PRESETS)}",
            )
        d = _number(geo.get("d", 1.0), "config.geometry.d", positive=True)
        if name == "tetrahedron":
            return GEOMETRY_PRESETS[name](d)
        return GEOMETRY_PRESETS[name](d, full_3d=bool(geo.get("full_3d", False)))
    if "positions" in geo:
        pos = geo["positions"]
        if not isinstance(pos, list) or not pos:
            raise ConfigError("config.geometry.positions", "expected a nonempty list of [x,y,z]")
        arr = []
        for i, p in enumerate(pos):
            if not isinstance(p, list) or len(p) != 3:
                raise ConfigError(f"config.geometry.positions[{i}]", "expected [x, y, z]")
            arr.append([_number(c, f"config.geometry.positions[{i}][{j}]") for j, c in enumerate(p)])
        n_axes = _integer(geo.get("n_axes", 3), "config.geometry.n_axes", minimum=1)
        return Geometry(np.array(arr), n_axes=n_axes)
    raise ConfigError("config.geometry", 'expected either "preset" or "positions"')


def _parse_potential(cfg: dict):
    pot = _require(cfg, "potential", "config")
    if not isinstance(pot, dict):
        raise ConfigError("config.potential", "expected an object")
    kind = _require(pot, "type", "config.potential")
    if kind == "power-law":
        terms_cfg = _require(pot, "terms", "config.potential")
        if not isinstance(terms_cfg, list) or not terms_cfg:
            raise ConfigError("config.potential.terms", "expected a nonempty list")
        terms = []
        for i, t in enumerate(terms_cfg):
            path = f"config.potential.terms[{i}]"
            if not isinstance(t, dict):
                raise ConfigError(path, "expected an object with c and p")
            c = _number(_require(t, "c", path), f"{path}.c")
            p = _integer(_require(t, "p", path), f"{path}.p", minimum=1)
            terms.append(PowerLaw(c, p))
        return terms[0] if len(terms) == 1 else PowerLawSum(tuple(terms))
    if kind == "explicit":
        return ExplicitCouplings(
            kappa=_number(_require(pot, "kappa", "config.potential"), "config.potential.kappa"),
            xi=_number(_require(pot, "xi", "config.potential"), "config.potential.xi"),
            nu=_number(_require(pot, "nu", "config.potential"), "config.potential.nu", positive=True),
            v_d=_number(pot.get("v_d", 0.0), "config.potential.v_d"),
        )
    raise ConfigError("config.potential.type", f'expected "power-law" or "explicit", got {kind!r}')


def _parse_params(cfg: dict, geometry: Geometry, potential) -> tuple:
    """Returns (PhysicalParams, delta_rule) with x0 resolved."""
    pcfg = cfg.get("params", {})
    if not isinstance(pcfg, dict):
        raise ConfigError("config.params", "expected an object")
    omega = _number(pcfg.get("omega", 1.0), "config.params.omega", positive=True)
    drive = _number(pcfg.get("Omega", 0.0), "config.params.Omega")

    x0 = pcfg.get("x0")
    mass = pcfg.get("mass")
    if x0 is not None:
        x0 = _number(x0, "config.params.x0", positive=True)
    if mass is not None:
        mass = _number(mass, "config.params.mass", positive=True)
    if x0 is None and mass is None and isinstance(potential, ExplicitCouplings):
        x0 = potential.nu * geometry.d
    if x0 is not None and isinstance(potential, ExplicitCouplings):
        implied = potential.nu * geometry.d
        if abs(x0 - implied) > 1e-9 * implied:
            raise ConfigError(
                "config.params.x0",
                f"inconsistent with potential.nu: x0={x0} but nu*d={implied}",
            )

    delta_rule = pcfg.get("delta", "-V")
    if not (delta_rule in ("-V", "-3V") or isinstance(delta_rule, (int, float))):
        raise ConfigError("config.params.delta", 'expected "-V", "-3V", or a number')

    params = PhysicalParams(omega=omega, Omega=drive, d=geometry.d, x0=x0, mass=mass)
    return params, delta_rule


def _resolve_delta(delta_rule, potential, geometry: Geometry) -> float:
    if isinstance(delta_rule, (int, float)) and not isinstance(delta_rule, bool):
        return float(delta_rule)
    if isinstance(potential, ExplicitCouplings):
        v_d = potential.v_d
    else:
        v_d = potential_eval(potential, geometry.d)[0]
    return -v_d if delta_rule == "-V" else -3.0 * v_d


def _parse_solver(cfg: dict) -> dict:
    scfg = cfg.get("solver", {})
    if not isinstance(scfg, dict):
        raise ConfigError("config.solver", "expected an object")
    frame = scfg.get("frame", "bare")
    if frame not in ("bare", "displaced"):
        raise ConfigError("config.solver.frame", f'expected "bare" or "displaced", got {frame!r}')
    return {
        "e_tol": _number(scfg.get("e_tol", 1e-8), "config.solver.e_tol", positive=True),
        "max_cutoff": _integer(scfg.get("max_cutoff", 256), "config.solver.max_cutoff", minimum=4),
        "frame": frame,
        "eig_tol": _number(scfg.get("eig_tol", 1e-11), "config.solver.eig_tol", positive=True),
    }


def _parse_scan(cfg: dict, samples_min: int = 1) -> dict:
    scan = cfg.get("scan", {})
    if not isinstance(scan, dict):
        raise ConfigError("config.scan", "expected an object")
    out = {
        "start": _number(_require(scan, "start", "config.scan"), "config.scan.start"),
        "stop": _number(_require(scan, "stop", "config.scan"), "config.scan.stop"),
        "samples": _integer(
            _require(scan, "samples", "config.scan"), "config.scan.samples", minimum=samples_min
        ),
        "units": scan.get("units", "absolute"),
    }
    if out["units"] not in ("absolute", "critical"):
        raise ConfigError("config.scan.units", 'expected "absolute" or "critical"')
    return out


def load_config(path: str, task: str) -> dict:
    """Parse and validate a run configuration for the given task."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "config", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be an object")
    if "task" in cfg and cfg["task"] != task:
        raise ConfigError("config.task", f"config says {cfg['task']!r} but {task!r} was requested")

    geometry = _parse_geometry(cfg)
    potential = _parse_potential(cfg)
    params, delta_rule = _parse_params(cfg, geometry, potential)
    resolved = {
        "task": task,
        "geometry": geometry,
        "potential": potential,
        "params": params,
        "delta_rule": delta_rule,
        "delta": _resolve_delta(delta_rule, potential, geometry),
        "solver": _parse_solver(cfg),
        "seed": cfg.get("seed"),
        "modes": cfg.get("modes", "reduced"),
        "out": cfg.get("out", "."),
        "raw": cfg,
    }
    if resolved["modes"] not in ("reduced", "full"):
        raise ConfigError("config.modes", 'expected "reduced" or "full"')
    if task in ("gs-scan-xi", "gs-scan-kappa", "gs-scan-omega", "bopes-scan"):
        resolved["scan"] = _parse_scan(cfg, samples_min=2 if task != "bopes-scan" else 32)
    if task == "wigner":
        wcfg = cfg.get("wigner", {})
        if not isinstance(wcfg, dict):
            raise ConfigError("config.wigner", "expected an object")
        resolved["wigner"] = {
            "grid_half_width": _number(
                wcfg.get("grid_half_width", 3.0), "config.wigner.grid_half_width", positive=True
            ),
            "resolution": _integer(wcfg.get("resolution", 101), "config.wigner.resolution", minimum=3),
            "mode": wcfg.get("mode", "perpendicular"),
        }
        if resolved["wigner"]["mode"] not in ("perpendicular", "parallel"):
            raise ConfigError("config.wigner.mode", 'expected "perpendicular" or "parallel"')
    return resolved


# ----------------------------------------------------------------------------
# Output helpers


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value == 0.0:
            value = 0.0  # normalize -0.0
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_csv(path: Path, header, rows, footer_lines=()):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    lines.extend(footer_lines)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(value).items()}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_manifest(outdir: Path, resolved: dict, outputs, results=None):
    manifest = {
        "tool": "vibronic",
        "version": __version__,
        "task": resolved["task"],
        "parameters": {
            "geometry": {
                "name": resolved["geometry"].name,
                "d": resolved["geometry"].d,
                "n_axes": resolved["geometry"].n_axes,
                "positions": resolved["geometry"].positions.tolist(),
            },
            "potential": _jsonable(resolved["potential"]),
            "omega": resolved["params"].omega,
            "Omega": resolved["params"].Omega,
            "x0": resolved["params"].x0,
            "nu": resolved["params"].nu,
            "delta_rule": resolved["delta_rule"],
            "delta": resolved["delta"],
            "solver": resolved["solver"],
            "modes": resolved["modes"],
        },
        "outputs": sorted(outputs),
        "results": _jsonable(results or {}),
    }
    path = outdir / "run-manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _default_seed(geometry: Geometry, delta_rule) -> str:
    n = geometry.n_atoms
    if delta_rule == "-3V":
        return "1" * n
    return "1" + "0" * (n - 1)


def _build_graph(resolved):
    geometry = resolved["geometry"]
    seed_str = resolved["seed"] or _default_seed(geometry, resolved["delta_rule"])
    seed = config_from_string(seed_str)
    if len(seed) != geometry.n_atoms:
        raise ConfigError("config.seed", f"seed has {len(seed)} bits for {geometry.n_atoms} atoms")
    return build_resonant_manifold(
        geometry,
        resolved["delta"],
        resolved["potential"],
        seed,
        omega=resolved["params"].omega,
        Omega=resolved["params"].Omega,
    )


# ----------------------------------------------------------------------------
# Tasks


def _task_graph(resolved, outdir: Path):
    graph = _build_graph(resolved)
    label, degrees = graph_classify(graph)
    (outdir / "edges.txt").write_text(export_edge_list(graph), encoding="utf-8")
    (outdir / "nodes.json").write_text(export_node_table(graph), encoding="utf-8")
    results = {
        "n_nodes": graph.n_nodes,
        "topology": label,
        "degrees": degrees,
        "manifold_energy": graph.manifold_energy,
    }
    _write_manifest(outdir, resolved, ["edges.txt", "nodes.json"], results)
    return 0


def _scan_values(scan: dict, critical_scale: float) -> np.ndarray:
    values = np.linspace(scan["start"], scan["stop"], scan["samples"])
    if scan["units"] == "critical":
        values = values * critical_scale
    return values


def _map_rows(worker, values, threads: int):
    if threads <= 1:
        return [worker(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, values))


def _task_gs_scan_xi(resolved, outdir: Path, threads: int):
    params = resolved["params"]
    potential = resolved["potential"]
    if not isinstance(potential, ExplicitCouplings):
        raise ConfigError(
            "config.potential.type", "gs-scan-xi needs explicit couplings (xi is the scan variable)"
        )
    solver = resolved["solver"]
    xi_c, _ = critical_points(params.omega, potential.nu)
    xis = _scan_values(resolved["scan"], xi_c)

    def worker(xi):
        coup = dataclasses.replace(potential, xi=float(xi))
        model = dumbbell_hamiltonian(params, coup)
        report = converge_cutoff(
            model,
            params=params,
            e_tol=solver["e_tol"],
            max_cutoff=solver["max_cutoff"],
            frame=solver["frame"],
            eig_tol=solver["eig_tol"],
        )
        if params.Omega != 0.0:
            analytic = None
        else:
            try:
                analytic = min(params.omega * epsilon2(coup.kappa, coup.xi, params.omega), 0.0)
            except InstabilityError:
                analytic = "unstable"
        return (float(xi), report.energy, analytic, report.cutoff, report.converged)

    rows = _map_rows(worker, xis, threads)
    _write_csv(outdir / "scan-xi.csv", ["xi", "E_numeric", "E_analytic", "cutoff", "converged"], rows)
    _write_manifest(outdir, resolved, ["scan-xi.csv"], {"xi_c": xi_c})
    return 0


def _task_gs_scan_kappa(resolved, outdir: Path, threads: int):
    params = resolved["params"]
    potential = resolved["potential"]
    if not isinstance(potential, ExplicitCouplings):
        raise ConfigError(
            "config.potential.type",
            "gs-scan-kappa needs explicit couplings (kappa is the scan variable)",
        )
    if params.Omega != 0.0:
        raise ConfigError(
            "config.params.Omega", "gs-scan-kappa solves one doubly excited block; set Omega = 0"
        )
    solver = resolved["solver"]
    _, kappa_c = critical_points(params.omega, potential.nu)
    kappas = _scan_values(resolved["scan"], kappa_c)

    geometry = resolved["geometry"]
    graph = _build_graph(resolved)
    target = next((c for c in graph.configs if sum(c) == 2), None)
    if target is None:
        raise ConfigError("config.seed", "the manifold contains no doubly excited configuration")

    def worker(kappa):
        coup = dataclasses.replace(potential, kappa=float(kappa))
        form = assemble_state_hamiltonian(target, geometry, coup, params)
        basis, reduced = reduce_modes([form], params)
        report = converge_cutoff(
            np.zeros((1, 1)),
            reduced,
            params,
            e_tol=solver["e_tol"],
            max_cutoff=solver["max_cutoff"],
            frame=solver["frame"],
            eig_tol=solver["eig_tol"],
        )
        try:
            if geometry.n_axes == 3:
                eps = epsilon4(coup.kappa, coup.xi, params.omega, coup.nu)
            else:
                eps = epsilon2(coup.kappa, coup.xi, params.omega)
            analytic = params.omega * eps
        except InstabilityError:
            analytic = "unstable"
        return (float(kappa), report.energy, analytic, report.cutoff, report.converged)

    rows = _map_rows(worker, kappas, threads)
    _write_csv(
        outdir / "scan-kappa.csv", ["kappa", "E_numeric", "E_analytic", "cutoff", "converged"], rows
    )
    _write_manifest(outdir, resolved, ["scan-kappa.csv"], {"kappa_c": kappa_c})
    return 0


def _task_gs_scan_omega(resolved, outdir: Path, threads: int):
    params = resolved["params"]
    solver = resolved["solver"]
    graph = _build_graph(resolved)
    coup = derive_couplings(resolved["potential"], params)
    basis, forms = build_molecular_model(
        graph, coup, params, reduce=resolved["modes"] == "reduced"
    )
    drives = _scan_values(resolved["scan"], 1.0)

    def worker(drive):
        run = dataclasses.replace(params, Omega=float(drive))
        report = converge_cutoff(
            graph,
            forms,
            run,
            e_tol=solver["e_tol"],
            max_cutoff=solver["max_cutoff"],
            frame=solver["frame"],
            eig_tol=solver["eig_tol"],
        )
        return (float(drive), report.energy, None, report.cutoff, report.converged)

    rows = _map_rows(worker, drives, threads)
    _write_csv(
        outdir / "scan-omega.csv", ["Omega", "E_numeric", "E_analytic", "cutoff", "converged"], rows
    )
    _write_manifest(outdir, resolved, ["scan-omega.csv"], {"n_modes": basis.dim})
    return 0


def _task_wigner(resolved, outdir: Path):
    params = resolved["params"]
    potential = resolved["potential"]
    coup = derive_couplings(potential, params)
    wcfg = resolved["wigner"]
    if wcfg["mode"] == "perpendicular":
        xi_eff = perpendicular_xi_eff(coup.kappa, coup.nu)
    else:
        xi_eff = coup.xi
    solution = bogoliubov_w(params.omega, xi_eff)
    if not solution.exists:
        raise InstabilityError(
            f"no bounded ground state at xi_eff = {xi_eff}; the mode is beyond its instability"
        )

    half = wcfg["grid_half_width"]
    n = wcfg["resolution"]
    axis = np.linspace(-half, half, n)
    rows = []
    total = 0.0
    cell = (axis[1] - axis[0]) ** 2
    for a_i in axis:
        for a_r in axis:
            val = wigner(solution.w, complex(a_r, a_i))
            rows.append((float(a_r), float(a_i), float(val)))
            total += float(val) * cell
    footer = [f"# normalization {_fmt(total)}"]
    _write_csv(outdir / "wigner.csv", ["alpha_R", "alpha_I", "W"], rows, footer)
    _write_manifest(
        outdir,
        resolved,
        ["wigner.csv"],
        {"w": solution.w, "omega_tilde": solution.omega_tilde, "xi_eff": xi_eff, "normalization": total},
    )
    return 0


def _task_bopes_scan(resolved, outdir: Path):
    params = resolved["params"]
    solver = resolved["solver"]
    graph = _build_graph(resolved)
    coup = derive_couplings(resolved["potential"], params)
    basis, forms = build_molecular_model(
        graph, coup, params, reduce=resolved["modes"] == "reduced"
    )
    drives = _scan_values(resolved["scan"], 1.0)
    starts = light_start_points(build_bo_surface(graph, forms, params, Omega=0.0))
    result = transition_scan(
        graph,
        forms,
        params,
        drives,
        e_tol=solver["e_tol"],
        max_cutoff=solver["max_cutoff"],
        frame=solver["frame"],
        mode_basis=basis,
        starts=starts,
    )
    # closed-form ground energy exists at zero drive only: classical minimum
    # of the displaced branch plus the zero-point shift, floored at zero
    analytic = np.full(drives.size, np.nan)
    zero_rows = np.nonzero(drives == 0.0)[0]
    if zero_rows.size:
        try:
            xibar = coup.xi / (-params.omega / 4.0)
            branch = -(2.0 * coup.kappa**2 / params.omega) / (1.0 - xibar)
            shift = zero_point_correction(
                coup.kappa, coup.xi, params.omega, coup.nu,
                n_perp=resolved["geometry"].n_axes - 1,
            )
            analytic[zero_rows] = min(branch + shift, 0.0)
        except InstabilityError:
            pass
    (outdir / "bopes-scan.csv").write_text(
        transition_scan_csv(result, analytic=analytic), encoding="utf-8"
    )
    results = {
        "kink_Omega": result.kink_omega,
        "kink_uncertainty": result.kink_uncertainty,
        "bo_second_diff_max": result.bo_second_diff_max,
        "quantum_second_diff_max": result.quantum_second_diff_max,
    }
    _write_manifest(outdir, resolved, ["bopes-scan.csv"], results)
    return 0


def _task_compare(resolved, outdir: Path):
    params = resolved["params"]
    solver = resolved["solver"]
    if params.Omega != 0.0:
        raise ConfigError("config.params.Omega", "compare is a zero-drive consistency check")
    graph = _build_graph(resolved)
    coup = derive_couplings(resolved["potential"], params)
    basis, forms = build_molecular_model(graph, coup, params)

    report = converge_cutoff(
        graph,
        forms,
        params,
        e_tol=solver["e_tol"],
        max_cutoff=solver["max_cutoff"],
        frame=solver["frame"],
        eig_tol=solver["eig_tol"],
    )
    surface = build_bo_surface(graph, forms, params, Omega=0.0, mode_basis=basis)
    minima = minimize_bo(surface)
    rows = [
        ("E_numeric", report.energy),
        ("numeric_converged", report.converged),
        ("numeric_cutoff", report.cutoff),
        ("E_BO", minima.global_energy),
        ("BO_degeneracy", minima.degeneracy),
        ("correction_measured", report.energy - minima.global_energy),
    ]
    try:
        rows.append(
            (
                "correction_predicted",
                zero_point_correction(
                    coup.kappa,
                    coup.xi,
                    params.omega,
                    coup.nu,
                    n_perp=resolved["geometry"].n_axes - 1,
                ),
            )
        )
    except InstabilityError:
        rows.append(("correction_predicted", "unstable"))
    _write_csv(outdir / "compare.csv", ["quantity", "value"], rows)
    _write_manifest(outdir, resolved, ["compare.csv"], dict(rows))
    return 0


# ----------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vibronic",
        description="Vibronic models of laser-coupled atom arrays: graphs, spectra, surfaces.",
    )
    parser.add_argument("task", choices=TASKS, help="what to compute")
    parser.add_argument("--config", required=True, help="path to a JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    parser.add_argument("--threads", type=int, default=1, help="parallel scan rows")
    parser.add_argument(
        "--modes",
        choices=("reduced", "full"),
        default=None,
        help="collective-mode treatment (overrides config)",
    )
    return parser


def run(resolved: dict, threads: int = 1) -> int:
    """Dispatch a validated configuration to its task."""
    outdir = Path(resolved["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    task = resolved["task"]
    if task == "graph":
        return _task_graph(resolved, outdir)
    if task == "gs-scan-xi":
        return _task_gs_scan_xi(resolved, outdir, threads)
    if task == "gs-scan-kappa":
        return _task_gs_scan_kappa(resolved, outdir, threads)
    if task == "gs-scan-omega":
        return _task_gs_scan_omega(resolved, outdir, threads)
    if task == "wigner":
        return _task_wigner(resolved, outdir)
    if task == "bopes-scan":
        return _task_bopes_scan(resolved, outdir)
    if task == "compare":
        return _task_compare(resolved, outdir)
    raise ConfigError("task", f"unknown task {task!r}")  # unreachable


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolved = load_config(args.config, args.task)
        if args.out is not None:
            resolved["out"] = args.out
        if args.modes is not None:
            resolved["modes"] = args.modes
        return run(resolved, threads=max(1, args.threads))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except VibronicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
