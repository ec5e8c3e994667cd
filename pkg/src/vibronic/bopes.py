"""Clamped-coordinate potential energy surfaces and structural transitions.

The adiabatic surface at fixed collective coordinates q is the smallest
eigenvalue of the electronic matrix ``M(q) = Omega A + diag(E_s(q))`` where
``E_s`` is the classical (kinetic-free) energy of node s.  This module locates
its minima by deterministic multistart simplex descent, fits local quadratics,
and scans the surface minimum against the drive strength to expose the
symmetry-breaking transition and its smoothing by quantum effects.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .assembly import ModeBasis
from .errors import DomainError
from .fock import converge_cutoff
from .graphs import ResonantGraph
from .params import PhysicalParams

DEFAULT_DEDUP_TOL = 1e-4  # basin deduplication distance, in units of x0
DEFAULT_DEGENERACY_TOL = 1e-8  # energy tolerance for degenerate minima, units of omega


@dataclass(frozen=True, eq=False)
class BoSurface:
    """Electronic matrix data for clamped-coordinate energies."""

    adjacency: np.ndarray
    forms: tuple  # per-node QuadraticVibronic over reduced coordinates
    Omega: float
    omega: float
    x0: float
    mode_basis: ModeBasis = None
    labels: tuple = None

    @property
    def dim(self) -> int:
        return self.forms[0].dim

    @property
    def n_nodes(self) -> int:
        return len(self.forms)

    def with_omega(self, Omega: float) -> "BoSurface":
        return dataclasses.replace(self, Omega=float(Omega))


@dataclass(frozen=True, eq=False)
class MinimaReport:
    """Distinct local minima found by the multistart search, sorted by energy."""

    minima: tuple  # ((q, energy), ...) sorted by energy
    degeneracy: int
    global_energy: float
    degeneracy_tol: float


def build_bo_surface(graph, forms, params: PhysicalParams, Omega: float = None,
                     mode_basis: ModeBasis = None) -> BoSurface:
    """Bundle a graph and its reduced forms into a surface object."""
    if isinstance(graph, ResonantGraph):
        adjacency = np.asarray(graph.adjacency, dtype=float)
        labels = tuple(graph.bitstrings)
    else:
        adjacency = np.asarray(graph, dtype=float)
        labels = tuple(str(i) for i in range(adjacency.shape[0]))
    if adjacency.shape[0] != len(forms):
        raise DomainError(
            f"adjacency has {adjacency.shape[0]} nodes but {len(forms)} forms were given"
        )
    return BoSurface(
        adjacency=adjacency,
        forms=tuple(forms),
        Omega=params.Omega if Omega is None else float(Omega),
        omega=params.omega,
        x0=params.x0,
        mode_basis=mode_basis,
        labels=labels,
    )


def _electronic_matrix(surface: BoSurface, q: np.ndarray) -> np.ndarray:
    m = surface.Omega * surface.adjacency
    diag = [f.energy_at(q) for f in surface.forms]
    return m + np.diag(diag)


def bo_energy(surface: BoSurface, q) -> float:
    """Smallest electronic eigenvalue at clamped coordinates q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (surface.dim,):
        raise DomainError(f"expected {surface.dim} coordinates, got shape {q.shape}")
    if surface.n_nodes == 1:
        return surface.forms[0].energy_at(q)
    return float(np.linalg.eigvalsh(_electronic_matrix(surface, q))[0])


def bo_eigen_gap(surface: BoSurface, q) -> float:
    """Gap between the two lowest electronic eigenvalues at q."""
    q = np.asarray(q, dtype=float)
    if surface.n_nodes == 1:
        return math.inf
    vals = np.linalg.eigvalsh(_electronic_matrix(surface, q))
    return float(vals[1] - vals[0])


def bo_gradient(surface: BoSurface, q) -> np.ndarray:
    """Gradient of the lowest eigenvalue by eigenvector sandwiching.

    Valid away from electronic degeneracies.
    """
    q = np.asarray(q, dtype=float)
    vals, vecs = np.linalg.eigh(_electronic_matrix(surface, q))
    v = vecs[:, 0]
    grad = np.zeros(surface.dim)
    for s, f in enumerate(surface.forms):
        grad += v[s] ** 2 * (f.linear + 2.0 * f.hessian @ q)
    return grad


def default_start_points(surface: BoSurface) -> np.ndarray:
    """Deterministic multistart seeds inside a box of half-width 3 x0.

    Includes the origin, single-coordinate offsets in both signs, every
    node's own stationary point (clipped to the box), and the sign-sector
    corners when the dimension keeps their count reasonable.
    """
    dim, x0 = surface.dim, surface.x0
    half_width = 3.0 * x0
    step = 1.5 * x0
    starts = [np.zeros(dim)]
    for m in range(dim):
        for sign in (+1.0, -1.0):
            v = np.zeros(dim)
            v[m] = sign * step
            starts.append(v)
    for f in surface.forms:
        starts.append(np.clip(f.stationary_point(), -half_width, half_width))
    if dim <= 5:
        for code in range(2**dim):
            corner = np.array([step if (code >> m) & 1 else -step for m in range(dim)])
            starts.append(corner)
    return np.array(starts)


def light_start_points(surface: BoSurface) -> np.ndarray:
    """Reduced seed set for scans: the origin plus every node's stationary point.

    Covers the symmetric basin and each configuration's own displaced basin,
    which is where surface minima live for the preset geometries.
    """
    half_width = 3.0 * surface.x0
    starts = [np.zeros(surface.dim)]
    for f in surface.forms:
        starts.append(np.clip(f.stationary_point(), -half_width, half_width))
    return np.array(starts)


def minimize_bo(
    surface: BoSurface,
    starts=None,
    tol: float = 1e-13,
    degeneracy_tol: float = None,
) -> MinimaReport:
    """Locate the surface minima by deterministic multistart simplex descent.

    Distinct basins are deduplicated at distance ``1e-4 x0``; minima are
    reported sorted by energy and the degeneracy counts those within
    ``degeneracy_tol`` (default ``1e-8 omega``) of the global minimum.
    """
    if starts is None:
        starts = default_start_points(surface)
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if degeneracy_tol is None:
        degeneracy_tol = DEFAULT_DEGENERACY_TOL * surface.omega

    def fun(q):
        return bo_energy(surface, q)

    options = {
        "xatol": 1e-10 * surface.x0,
        "fatol": tol,
        "maxiter": 4000 * surface.dim,
        "maxfev": 4000 * surface.dim,
    }

    found = []
    for x0_start in starts:
        res = _scipy_minimize(fun, x0_start, method="Nelder-Mead", options=options)
        q, e = res.x, float(res.fun)
        # Away from electronic crossings the branch is smooth, so a gradient
        # polish (eigenvector-sandwich gradient) removes the residual simplex
        # stall and lands every start exactly on its basin floor.
        if bo_eigen_gap(surface, q) > 1e-7 * surface.omega:
            polished = _scipy_minimize(
                fun,
                q,
                jac=lambda p: bo_gradient(surface, p),
                method="L-BFGS-B",
                options={"ftol": 1e-18, "gtol": 1e-14, "maxiter": 500},
            )
            if polished.fun <= e:
                q, e = polished.x, float(polished.fun)
        found.append((q, e))

    dedup_dist = DEFAULT_DEDUP_TOL * surface.x0
    found.sort(key=lambda qe: (qe[1], tuple(qe[0])))
    unique = []
    for q, e in found:
        if all(np.linalg.norm(q - uq) > dedup_dist for uq, _ in unique):
            unique.append((q, e))

    global_energy = unique[0][1]
    degeneracy = sum(1 for _, e in unique if e - global_energy <= degeneracy_tol)
    return MinimaReport(
        minima=tuple((q.copy(), e) for q, e in unique),
        degeneracy=degeneracy,
        global_energy=global_energy,
        degeneracy_tol=degeneracy_tol,
    )


@dataclass(frozen=True, eq=False)
class QuadraticFit:
    """Least-squares quadratic model of the surface around a point."""

    center: np.ndarray
    constant: float
    linear: np.ndarray  # gradient coefficients at the center
    quadratic: np.ndarray  # coefficient matrix C in E = const + b.d + d^T C d
    radius: float

    def linear_at_origin(self) -> np.ndarray:
        """Linear coefficient of the same quadratic expanded about q = 0."""
        return self.linear - 2.0 * self.quadratic @ self.center


def bo_quadratic_check(
    surface: BoSurface,
    center,
    radius: float = None,
    gap_tol: float = 1e-9,
    max_shrinks: int = 8,
) -> QuadraticFit:
    """Fit the surface by a quadratic on a small stencil around ``center``.

    If any stencil point approaches an electronic level crossing the stencil
    radius is halved and the fit retried, so the fit always samples a single
    smooth eigenvalue branch.
    """
    center = np.asarray(center, dtype=float)
    dim = surface.dim
    if radius is None:
        radius = 0.1 * surface.x0

    offsets = [np.zeros(dim)]
    for m in range(dim):
        for sign in (+1.0, -1.0):
            v = np.zeros(dim)
            v[m] = sign
            offsets.append(v)
    for m in range(dim):
        for n in range(m + 1, dim):
            for sm, sn in ((1, 1), (1, -1)):
                v = np.zeros(dim)
                v[m], v[n] = sm, sn
                offsets.append(v)
    offsets = np.array(offsets)

    for _ in range(max_shrinks + 1):
        points = center + radius * offsets
        gaps = [bo_eigen_gap(surface, p) for p in points]
        if min(gaps) > gap_tol:
            break
        radius *= 0.5
    else:
        raise DomainError("could not avoid a level crossing around the fit center")

    energies = np.array([bo_energy(surface, p) for p in points])
    # Design matrix over the monomials 1, d_m, d_m d_n (m <= n).
    cols = [np.ones(len(points))]
    deltas = points - center
    for m in range(dim):
        cols.append(deltas[:, m])
    pair_index = []
    for m in range(dim):
        for n in range(m, dim):
            cols.append(deltas[:, m] * deltas[:, n])
            pair_index.append((m, n))
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, energies, rcond=None)

    constant = coef[0]
    linear = coef[1 : 1 + dim]
    quad = np.zeros((dim, dim))
    for (m, n), c in zip(pair_index, coef[1 + dim :]):
        if m == n:
            quad[m, m] = c
        else:
            quad[m, n] = quad[n, m] = c / 2.0
    return QuadraticFit(
        center=center, constant=float(constant), linear=linear, quadratic=quad, radius=radius
    )


@dataclass(frozen=True, eq=False)
class TransitionScanResult:
    """Surface and exact ground energies over a drive-strength grid."""

    omegas: np.ndarray
    e_bo: np.ndarray
    e_quantum: np.ndarray  # NaN entries when the quantum solve was skipped
    quantum_converged: np.ndarray
    quantum_cutoffs: np.ndarray
    kink_omega: float
    kink_uncertainty: float
    bo_second_diff_max: float
    quantum_second_diff_max: float


def _second_differences(values: np.ndarray) -> np.ndarray:
    return values[2:] - 2.0 * values[1:-1] + values[:-2]


def transition_scan(
    graph,
    forms,
    params: PhysicalParams,
    omegas,
    *,
    quantum: bool = True,
    e_tol: float = 1e-8,
    max_cutoff: int = 16,
    frame: str = "bare",
    starts=None,
    refine: bool = True,
    mode_basis: ModeBasis = None,
    min_samples: int = 32,
) -> TransitionScanResult:
    """Scan the surface minimum (and exact ground energy) against the drive.

    The kink of the clamped-coordinate curve is located as the maximizer of
    the discrete second difference, refined once on a finer local grid; its
    uncertainty is the refined grid spacing.  The exact curve is computed with
    the cutoff-doubling solver per grid point when ``quantum`` is true.
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size < min_samples:
        raise DomainError(f"need at least {min_samples} drive samples, got {omegas.size}")
    if np.any(np.diff(omegas) <= 0):
        raise DomainError("drive grid must be strictly increasing")

    base = build_bo_surface(graph, forms, params, Omega=0.0, mode_basis=mode_basis)

    def bo_minimum(omega_drive: float) -> float:
        report = minimize_bo(base.with_omega(omega_drive), starts=starts)
        return report.global_energy

    e_bo = np.array([bo_minimum(o) for o in omegas])

    e_quantum = np.full_like(e_bo, np.nan)
    q_conv = np.zeros(omegas.size, dtype=bool)
    q_cut = np.zeros(omegas.size, dtype=int)
    if quantum:
        for i, o in enumerate(omegas):
            run_params = dataclasses.replace(params, Omega=float(o))
            report = converge_cutoff(
                graph, forms, run_params, e_tol=e_tol, max_cutoff=max_cutoff, frame=frame
            )
            e_quantum[i] = report.energy
            q_conv[i] = report.converged
            q_cut[i] = report.cutoff

    d2_bo = _second_differences(e_bo)
    kink_idx = int(np.argmax(np.abs(d2_bo))) + 1
    kink_omega = float(omegas[kink_idx])
    spacing = float(omegas[1] - omegas[0])
    if refine:
        lo, hi = omegas[kink_idx - 1], omegas[kink_idx + 1]
        fine = np.linspace(lo, hi, 9)
        fine_bo = np.array([bo_minimum(o) for o in fine])
        d2_fine = _second_differences(fine_bo)
        kink_omega = float(fine[int(np.argmax(np.abs(d2_fine))) + 1])
        spacing = float(fine[1] - fine[0])

    d2_q = _second_differences(e_quantum) if quantum else np.array([np.nan])
    return TransitionScanResult(
        omegas=omegas,
        e_bo=e_bo,
        e_quantum=e_quantum,
        quantum_converged=q_conv,
        quantum_cutoffs=q_cut,
        kink_omega=kink_omega,
        kink_uncertainty=spacing,
        bo_second_diff_max=float(np.max(np.abs(d2_bo))),
        quantum_second_diff_max=float(np.nanmax(np.abs(d2_q))) if quantum else math.nan,
    )


def surface_scan_csv(surface: BoSurface, points) -> str:
    """CSV rows ``q components..., E_BO`` for a list of coordinate points."""
    header = ",".join(f"q{m}" for m in range(surface.dim)) + ",E_BO"
    lines = [header]
    for q in points:
        q = np.asarray(q, dtype=float)
        values = [repr(float(x)) for x in q] + [repr(bo_energy(surface, q))]
        lines.append(",".join(values))
    return "\n".join(lines) + "\n"


def transition_scan_csv(result: TransitionScanResult, analytic=None) -> str:
    """CSV rows ``Omega, E_BO, E_quantum, E_analytic, converged, cutoff``.

    ``analytic`` is an optional array aligned with the drive grid; NaN entries
    (and a missing array) leave the column empty.  Closed-form ground energies
    exist only at zero drive, so that is typically the only filled row.
    """
    lines = ["Omega,E_BO,E_quantum,E_analytic,converged,cutoff"]
    for i in range(result.omegas.size):
        eq = result.e_quantum[i]
        ea = math.nan if analytic is None else float(analytic[i])
        lines.append(
            ",".join(
                [
                    repr(float(result.omegas[i])),
                    repr(float(result.e_bo[i])),
                    "" if math.isnan(eq) else repr(float(eq)),
                    "" if math.isnan(ea) else repr(ea),
                    str(bool(result.quantum_converged[i])).lower(),
                    str(int(result.quantum_cutoffs[i])),
                ]
            )
        )
    return "\n".join(lines) + "\n"
