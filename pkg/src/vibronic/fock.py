"""Sparse Fock-space assembly and ground-state solvers.

The molecular operator couples electronic nodes through the adjacency matrix
(weight Omega) while each node carries its own quadratic phonon Hamiltonian
over the shared collective modes.  The product basis is
(node index) x (occupation tuple), with a uniform per-mode cutoff: occupation
numbers run over 0..cutoff-1.  Position-quadratic terms are mapped through
x = x0 (b + b^dag)/sqrt(2) per mode; the trap enters exactly as
omega b^dag b, so the vacuum of a free mode sits at zero energy.

Two frames are supported.  The default "bare" frame uses trap eigenstates:
diagonal blocks are the node Hamiltonians, off-diagonal blocks are
Omega * A_ss' times the phonon identity.  The "displaced" frame shifts each
node's phonon origin to the stationary point of its own quadratic form; this
represents the same operator exactly (off-diagonal blocks become
displacement-overlap matrices with closed-form elements) and converges at far
smaller cutoffs when couplings push the minima far from the trap center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .assembly import ModeBasis, QuadraticVibronic, TwoStateModel
from .errors import DomainError, EigensolverError, ResourceBudgetError
from .graphs import ResonantGraph
from .params import PhysicalParams

SQRT2 = math.sqrt(2.0)

DENSE_CUTOVER = 256  # below this dimension a dense eigensolver is cheaper


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Sparse symmetric molecular operator in a truncated product Fock basis."""

    matrix: sp.csr_matrix
    n_nodes: int
    n_modes: int
    cutoff: int
    omega: float
    x0: float
    node_labels: tuple
    displacements: np.ndarray  # (n_nodes, n_modes) phonon-frame offsets
    mode_basis: ModeBasis = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def basis_state(self, index: int):
        """Decode a basis index into (node index, occupation tuple)."""
        per_node = self.cutoff**self.n_modes
        node, rest = divmod(index, per_node)
        occ = []
        for _ in range(self.n_modes):
            rest, r = divmod(rest, self.cutoff)
            occ.append(r)
        return node, tuple(reversed(occ))


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of the cutoff-doubling convergence protocol."""

    energy: float
    cutoff: int
    converged: bool
    energy_history: tuple  # ((cutoff, energy), ...)


def _ladder_x(cutoff: int) -> sp.csr_matrix:
    """Matrix of b + b^dag."""
    sq = np.sqrt(np.arange(1.0, cutoff))
    return sp.diags([sq, sq], [-1, 1], format="csr")


def _number_op(cutoff: int) -> sp.csr_matrix:
    return sp.diags(np.arange(float(cutoff)), 0, format="csr")


def _momentum_square(cutoff: int) -> np.ndarray:
    """Dense matrix of (i(b^dag - b))^2."""
    n = np.arange(float(cutoff))
    m = np.diag(2.0 * n + 1.0)
    off = np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))
    for i, v in enumerate(off):
        m[i, i + 2] = -v
        m[i + 2, i] = -v
    return m


def displacement_matrix(alpha: float, cutoff: int) -> np.ndarray:
    """Truncated matrix of the displacement operator exp(alpha (b^dag - b)).

    Elements are exact for all retained rows and columns; columns are built by
    the recursion D|n+1> = (b^dag - alpha) D|n> / sqrt(n+1) starting from the
    coherent-state column.
    """
    d = np.zeros((cutoff, cutoff))
    col = np.zeros(cutoff)
    col[0] = math.exp(-(alpha**2) / 2.0)
    for m in range(1, cutoff):
        col[m] = col[m - 1] * alpha / math.sqrt(m)
    d[:, 0] = col
    sqm = np.sqrt(np.arange(float(cutoff)))
    for n in range(cutoff - 1):
        prev = d[:, n]
        nxt = np.empty(cutoff)
        nxt[0] = -alpha * prev[0]
        nxt[1:] = sqm[1:] * prev[:-1] - alpha * prev[1:]
        d[:, n + 1] = nxt / math.sqrt(n + 1.0)
    return d


def _resolve_model(graph, forms, params, coupling):
    """Normalize the (graph, forms, coupling) triple across accepted inputs."""
    if isinstance(graph, TwoStateModel):
        adjacency = np.asarray(graph.adjacency, dtype=float)
        labels = tuple(graph.labels)
        if forms is None:
            forms = list(graph.forms)
        if coupling is None:
            coupling = graph.coupling
    elif isinstance(graph, ResonantGraph):
        adjacency = np.asarray(graph.adjacency, dtype=float)
        labels = tuple(graph.bitstrings)
    else:
        adjacency = np.asarray(graph, dtype=float)
        labels = tuple(str(i) for i in range(adjacency.shape[0]))
    if coupling is None:
        coupling = params.Omega
    if forms is None:
        raise DomainError("forms must be provided unless a TwoStateModel is passed")
    if adjacency.shape[0] != len(forms):
        raise DomainError(
            f"adjacency has {adjacency.shape[0]} nodes but {len(forms)} forms were given"
        )
    return adjacency, list(forms), labels, float(coupling)


def _mode_coefficients(form: QuadraticVibronic, params: PhysicalParams):
    """Map a displacement-convention form to ladder-operator coefficients.

    Returns (constant, l, Q) for  h = const + omega sum b'b + sum_m l_m X_m
    + sum_{mn} Q_mn X_m X_n  with X_m = b_m + b_m^dag.
    """
    x0 = params.x0
    trap = params.omega / (2.0 * x0**2)
    l = form.linear * (x0 / SQRT2)
    q = (form.hessian - trap * np.eye(form.dim)) * (x0**2 / 2.0)
    return form.constant, l, q


# Stationary points farther than this (in oscillator units) indicate a
# numerically singular quadratic form; fall back to the bare frame there.
MAX_FRAME_SHIFT = 1e6


def _frame_displacements(forms, params: PhysicalParams, frame: str) -> np.ndarray:
    n_modes = forms[0].dim
    beta = np.zeros((len(forms), n_modes))
    if frame == "bare":
        return beta
    if frame != "displaced":
        raise DomainError(f'frame must be "bare" or "displaced", got {frame!r}')
    for s, form in enumerate(forms):
        try:
            # Only a positive-definite form has a displaced minimum worth
            # centering on; shifting onto a saddle would hide an instability
            # from the small-cutoff stages of the doubling protocol.
            np.linalg.cholesky(form.hessian)
        except np.linalg.LinAlgError:
            continue
        qstar = form.stationary_point()
        shift = qstar / (SQRT2 * params.x0)
        if np.all(np.isfinite(shift)) and np.abs(shift).max() < MAX_FRAME_SHIFT:
            beta[s] = shift
    return beta


def _estimate_bytes(n_nodes, n_modes, cutoff, adjacency, displacements, coupling) -> int:
    per_node = cutoff**n_modes
    diag_nnz = n_nodes * per_node * (2 + 4 * n_modes + 4 * n_modes**2)
    off_nnz = 0
    if coupling != 0.0:
        for s in range(n_nodes):
            for t in range(s + 1, n_nodes):
                if adjacency[s, t] != 0:
                    width = 1
                    for m in range(n_modes):
                        if displacements[s, m] != displacements[t, m]:
                            width *= cutoff
                    off_nnz += 2 * per_node * width
    return (diag_nnz + off_nnz) * 20


def build_fock_matrix(
    graph,
    forms=None,
    params: PhysicalParams = None,
    cutoff: int = 8,
    *,
    frame: str = "bare",
    coupling: float = None,
    mode_basis: ModeBasis = None,
    max_bytes: int = 2**31,
) -> FockOperator:
    """Assemble the molecular operator in the truncated product Fock basis.

    ``graph`` may be a :class:`ResonantGraph`, a :class:`TwoStateModel`, or a
    plain adjacency matrix.  ``forms`` are the per-node quadratic forms over
    the shared reduced coordinates.  The off-diagonal electronic coupling
    defaults to ``params.Omega`` (a :class:`TwoStateModel` carries its own).
    Raises :class:`ResourceBudgetError` when the estimated size exceeds
    ``max_bytes``.
    """
    if params is None:
        raise DomainError("params is required")
    if cutoff < 2:
        raise DomainError(f"cutoff must be at least 2, got {cutoff}")
    adjacency, forms, labels, omega_coupling = _resolve_model(graph, forms, params, coupling)
    n_nodes = len(forms)
    n_modes = forms[0].dim
    if any(f.dim != n_modes for f in forms):
        raise DomainError("all node forms must share the same mode count")

    beta = _frame_displacements(forms, params, frame)
    est = _estimate_bytes(n_nodes, n_modes, cutoff, adjacency, beta, omega_coupling)
    if est > max_bytes:
        raise ResourceBudgetError(
            f"estimated matrix footprint {est/1e9:.2f} GB exceeds budget {max_bytes/1e9:.2f} GB "
            f"(nodes={n_nodes}, modes={n_modes}, cutoff={cutoff})",
            estimated_bytes=est,
        )

    per_node = cutoff**n_modes
    x_local = _ladder_x(cutoff)
    n_local = _number_op(cutoff)
    eye_local = sp.identity(cutoff, format="csr")

    def embed(op_local, mode):
        left = sp.identity(cutoff**mode, format="csr")
        right = sp.identity(cutoff ** (n_modes - mode - 1), format="csr")
        return sp.kron(sp.kron(left, op_local, format="csr"), right, format="csr")

    x_full = [embed(x_local, m) for m in range(n_modes)]
    n_full = [embed(n_local, m) for m in range(n_modes)]
    trap_op = sum(n_full[1:], n_full[0]) if n_modes > 1 else n_full[0]

    blocks = [[None] * n_nodes for _ in range(n_nodes)]
    for s, form in enumerate(forms):
        const, l, q = _mode_coefficients(form, params)
        b = beta[s]
        const_s = const + params.omega * float(b @ b) + 2.0 * float(l @ b) + 4.0 * float(b @ q @ b)
        l_s = l + params.omega * b + 4.0 * (q @ b)
        h = (params.omega * trap_op) + const_s * sp.identity(per_node, format="csr")
        for m in range(n_modes):
            if l_s[m] != 0.0:
                h = h + l_s[m] * x_full[m]
        for m in range(n_modes):
            for n in range(m, n_modes):
                c = q[m, n] if m == n else 2.0 * q[m, n]
                if c != 0.0:
                    h = h + c * (x_full[m] @ x_full[n])
        blocks[s][s] = h

    for s in range(n_nodes):
        for t in range(s + 1, n_nodes):
            if adjacency[s, t] == 0 or omega_coupling == 0.0:
                continue
            factors = []
            for m in range(n_modes):
                delta = beta[t, m] - beta[s, m]
                if delta == 0.0:
                    factors.append(eye_local)
                else:
                    factors.append(sp.csr_matrix(displacement_matrix(delta, cutoff)))
            overlap = factors[0]
            for f in factors[1:]:
                overlap = sp.kron(overlap, f, format="csr")
            blocks[s][t] = (omega_coupling * adjacency[s, t]) * overlap
            blocks[t][s] = blocks[s][t].T

    matrix = sp.bmat(blocks, format="csr")
    return FockOperator(
        matrix=matrix,
        n_nodes=n_nodes,
        n_modes=n_modes,
        cutoff=cutoff,
        omega=params.omega,
        x0=params.x0,
        node_labels=labels,
        displacements=beta,
        mode_basis=mode_basis,
    )


def ground_state(op: FockOperator, tol: float = 1e-11):
    """Lowest eigenpair of the operator.

    Small problems use a dense solver; larger ones use a Krylov iteration with
    a deterministic all-ones starting vector and a fixed iteration cap.
    Raises :class:`EigensolverError` carrying the best estimate on iteration
    failure.
    """
    matrix = op.matrix if isinstance(op, FockOperator) else op
    dim = matrix.shape[0]
    if dim <= DENSE_CUTOVER:
        vals, vecs = np.linalg.eigh(matrix.toarray())
        return float(vals[0]), vecs[:, 0]
    v0 = np.ones(dim) / math.sqrt(dim)
    maxiter = int(10 * math.sqrt(dim)) + 500
    try:
        vals, vecs = eigsh(matrix, k=1, which="SA", v0=v0, maxiter=maxiter, tol=tol)
    except ArpackNoConvergence as exc:
        best = float(exc.eigenvalues[0]) if len(exc.eigenvalues) else None
        raise EigensolverError(
            f"eigensolver did not converge within {maxiter} iterations", best_estimate=best
        ) from exc
    return float(vals[0]), vecs[:, 0]


def converge_cutoff(
    graph,
    forms=None,
    params: PhysicalParams = None,
    *,
    e_tol: float = 1e-8,
    max_cutoff: int = 256,
    frame: str = "bare",
    coupling: float = None,
    eig_tol: float = 1e-11,
    max_bytes: int = 2**31,
) -> SolveReport:
    """Double the Fock cutoff from 4 until the ground energy stabilizes.

    Stops when consecutive energies differ by less than ``e_tol`` or the
    cutoff would exceed ``max_cutoff``.  Non-convergence is reported in the
    result rather than raised: persistent energy descent under cutoff growth
    is the numerical signature of an instability.
    """
    if max_cutoff < 4:
        raise DomainError(f"max_cutoff must be at least 4, got {max_cutoff}")
    history = []
    energy_prev = None
    converged = False
    cutoff = 4
    while cutoff <= max_cutoff:
        op = build_fock_matrix(
            graph, forms, params, cutoff, frame=frame, coupling=coupling, max_bytes=max_bytes
        )
        try:
            energy, _ = ground_state(op, tol=eig_tol)
        except EigensolverError as exc:
            if exc.best_estimate is None:
                raise
            energy = exc.best_estimate
        history.append((cutoff, energy))
        if energy_prev is not None and abs(energy - energy_prev) < e_tol:
            converged = True
            break
        energy_prev = energy
        cutoff *= 2
    return SolveReport(
        energy=history[-1][1],
        cutoff=history[-1][0],
        converged=converged,
        energy_history=tuple(history),
    )


def _per_node_views(op: FockOperator, state: np.ndarray):
    per_node = op.cutoff**op.n_modes
    return state.reshape(op.n_nodes, *([op.cutoff] * max(op.n_modes, 1)))


def _mode_expectations(op: FockOperator, state: np.ndarray, mode: int, op_local: np.ndarray):
    """Per-node expectation values of a single-mode operator."""
    t = _per_node_views(op, state)
    tm = np.moveaxis(t, 1 + mode, -1)
    flat = tm.reshape(op.n_nodes, -1, op.cutoff)
    out = np.empty(op.n_nodes)
    for s in range(op.n_nodes):
        block = flat[s]
        out[s] = float(np.sum(block * (block @ op_local.T)))
    return out


def quadrature_moments(op: FockOperator, state: np.ndarray, mode: int):
    """Position mean/variance and momentum variance for one mode.

    Returns ``(mean_x, var_x, var_p)`` in length and inverse-length-squared
    units; a bare vacuum gives (0, x0^2/2, 1/(2 x0^2)).
    """
    if not 0 <= mode < op.n_modes:
        raise DomainError(f"mode index {mode} out of range for {op.n_modes} modes")
    state = np.asarray(state)
    if np.iscomplexobj(state):
        if np.abs(state.imag).max() > 1e-12:
            raise DomainError("quadrature_moments expects a real state vector")
        state = state.real
    norm = float(state @ state)
    if abs(norm - 1.0) > 1e-8:
        raise DomainError(f"state vector must be normalized, |psi|^2 = {norm}")

    x_local = _ladder_x(op.cutoff).toarray()
    x2_local = x_local @ x_local
    p2_local = _momentum_square(op.cutoff)

    weights = np.array(
        [float(np.sum(v**2)) for v in _per_node_views(op, state).reshape(op.n_nodes, -1)]
    )
    ex_t = _mode_expectations(op, state, mode, x_local)
    ex2_t = _mode_expectations(op, state, mode, x2_local)
    ep2 = float(_mode_expectations(op, state, mode, p2_local).sum())

    b = op.displacements[:, mode]
    mean_big_x = float(ex_t.sum() + 2.0 * (b * weights).sum())
    mean_big_x2 = float(ex2_t.sum() + 4.0 * (b * ex_t).sum() + 4.0 * (b**2 * weights).sum())
    var_big_x = mean_big_x2 - mean_big_x**2

    mean_x = op.x0 * mean_big_x / SQRT2
    var_x = op.x0**2 * var_big_x / 2.0
    var_p = ep2 / (2.0 * op.x0**2)
    return mean_x, var_x, var_p


def mean_displacements(op: FockOperator, state: np.ndarray) -> np.ndarray:
    """Per-atom mean displacement vectors of a solved state.

    Requires the operator to carry its mode basis; returns an
    ``(n_atoms, n_axes)`` array in length units.
    """
    if op.mode_basis is None:
        raise DomainError("operator carries no mode basis; cannot map modes to atoms")
    q_mean = np.array(
        [quadrature_moments(op, state, m)[0] for m in range(op.n_modes)]
    )
    full = op.mode_basis.to_full(q_mean)
    return full.reshape(op.mode_basis.n_atoms, op.mode_basis.n_axes)


def dump_matrix_coo(op: FockOperator) -> str:
    """Coordinate-format text dump ``row col value`` for cross-validation."""
    coo = op.matrix.tocoo()
    lines = [f"{i} {j} {float(v)!r}" for i, j, v in zip(coo.row, coo.col, coo.data)]
    return "\n".join(lines) + ("\n" if lines else "")
