"""Heisenberg lattices, thermal states, and entanglement-gap witnesses.

The Hamiltonian of a set of spin-1/2 sites with nearest-neighbour
couplings is used as its own entanglement witness: every k-separable
state has energy at least E_ksep, so any state with energy below that
bound is certified k-inseparable (the k = 2 interval is the GME gap).
E_ksep is computed by constrained minimisation over product states of
each canonical k-partition: alternating exact block ground-state
updates, which decrease the energy monotonically, restarted from seeded
random product states.  The result is therefore an upper bound on the
true constrained minimum; detection keeps a slack margin in the
conservative direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .partitions import iter_k_partitions
from .tensor import DensityMatrix, SystemShape, hermitian_spectrum, kron_all, qubits

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_ID = np.eye(2, dtype=complex)

DEFAULT_OPT_SLACK = 1e-6


@dataclass(frozen=True)
class Lattice:
    """Sites and nearest-neighbour edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n, edges):
        n = int(n)
        norm_edges = []
        seen = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i},{j}) invalid for n={n} sites")
            key = frozenset((i, j))
            if key in seen:
                raise DomainError(f"duplicate edge ({i},{j})")
            seen.add(key)
            norm_edges.append((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm_edges))

    @classmethod
    def chain(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def ring(cls, n):
        if n < 3:
            raise DomainError("a ring needs at least 3 sites")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])


@dataclass(frozen=True)
class HeisenbergParams:
    """Couplings in units of Jx, plus external field h."""

    jx: float = 1.0
    jy: float = 1.0
    jz: float = 1.0
    h: float = 0.0

    @classmethod
    def from_gamma(cls, gamma, h=0.0):
        """Anisotropy preset Jx = 1, Jy = 1 - gamma, Jz = 1 - 2*gamma."""
        if not 0.0 <= gamma <= 1.0:
            raise DomainError(f"gamma={gamma} outside [0, 1]")
        return cls(1.0, 1.0 - gamma, 1.0 - 2.0 * gamma, h)


def _site_op(op, site, n):
    factors = [_ID] * n
    factors[site] = op
    return kron_all(factors)


def heisenberg_hamiltonian(lattice, params, max_n=14):
    """Dense spin-1/2 Hamiltonian
    H = 1/2 sum_<ij> (Jx XX + Jy YY + Jz ZZ) + h sum_i Z_i."""
    n = lattice.n
    if n > max_n:
        raise DomainError(f"dense Hamiltonian for n={n} sites exceeds the cap n={max_n}")
    dim = 2 ** n
    h_mat = np.zeros((dim, dim), dtype=complex)
    for i, j in lattice.edges:
        for coupling, op in ((params.jx, _SX), (params.jy, _SY), (params.jz, _SZ)):
            if coupling != 0.0:
                h_mat += 0.5 * coupling * (_site_op(op, i, n) @ _site_op(op, j, n))
    if params.h != 0.0:
        for i in range(n):
            h_mat += params.h * _site_op(_SZ, i, n)
    return h_mat


def _qubit_count(h_mat):
    dim = h_mat.shape[0]
    n = dim.bit_length() - 1
    if h_mat.ndim != 2 or h_mat.shape[0] != h_mat.shape[1] or 2 ** n != dim:
        raise DomainError("expected a square matrix on a qubit register")
    return n


def partition_function(h_mat, kT):
    """Z = sum_i exp(-E_i / kT)."""
    if kT <= 0:
        raise DomainError(f"temperature kT={kT} must be positive")
    energies = hermitian_spectrum(h_mat)
    return float(np.sum(np.exp(-(energies - energies[0]) / kT)) * np.exp(-energies[0] / kT))


def thermal_state(h_mat, kT):
    """Gibbs state exp(-H/kT)/Z via eigendecomposition."""
    if kT <= 0:
        raise DomainError(f"temperature kT={kT} must be positive")
    n = _qubit_count(h_mat)
    evals, evecs = np.linalg.eigh(h_mat)
    weights = np.exp(-(evals - evals[0]) / kT)
    weights /= weights.sum()
    mat = (evecs * weights) @ evecs.conj().T
    return DensityMatrix(qubits(n), mat, validate=False)


def ground_state_dm(h_mat, degeneracy_tol=1e-9):
    """Equal mixture over the (possibly degenerate) ground manifold,
    i.e. the kT -> 0+ limit of the thermal state."""
    n = _qubit_count(h_mat)
    evals, evecs = np.linalg.eigh(h_mat)
    members = evals <= evals[0] + degeneracy_tol
    vecs = evecs[:, members]
    mat = vecs @ vecs.conj().T / vecs.shape[1]
    return DensityMatrix(qubits(n), mat, validate=False)


@dataclass(frozen=True)
class ProductMinimum:
    energy: float
    converged: bool


def _block_layouts(h_mat, blocks, n):
    """Per-block permuted views of H: block qubits first, the remaining
    blocks' qubits grouped after, reshaped to (dA, dR, dA, dR)."""
    dims = (2,) * n
    shape = SystemShape(dims)
    layouts = []
    for j, block in enumerate(blocks):
        order = list(block)
        for i, other in enumerate(blocks):
            if i != j:
                order.extend(other)
        # flat index map: new basis index -> old basis index
        idx = np.empty(2 ** n, dtype=np.intp)
        for x in range(2 ** n):
            bits = shape.decode(x)
            old = [0] * n
            for pos, q in enumerate(order):
                old[q] = bits[pos]
            idx[x] = shape.encode(old)
        da = 2 ** len(block)
        dr = 2 ** (n - len(block))
        hp = h_mat[np.ix_(idx, idx)].reshape(da, dr, da, dr)
        layouts.append(hp)
    return layouts


def min_ksep_energy(h_mat, k, restarts=32, tol=1e-10, seed=0, max_iter=5000,
                    lower_bound=None):
    """Minimal energy over k-separable states (upper bound by local search).

    Minimises <psi|H|psi> over product states of every canonical
    k-partition by alternating exact block ground-state updates; each
    update can only lower the energy, so every restart converges in
    energy.  All restarts of a partition are swept in one batch until the
    largest per-sweep decrement falls below tol.  k = 1 is the
    unconstrained ground energy.  Restarts still above the energy change
    tolerance after max_iter sweeps keep their best value and clear the
    converged flag.  A known lower bound (the exact ground energy) lets
    the partition loop exit early once it is reached.
    """
    n = _qubit_count(h_mat)
    if not 1 <= k <= n:
        raise DomainError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if k == 1:
        return ProductMinimum(float(hermitian_spectrum(h_mat)[0]), True)

    rng = np.random.default_rng(seed)
    best = np.inf
    all_converged = True
    floor = -np.inf if lower_bound is None else lower_bound + tol

    for part in iter_k_partitions(n, k):
        blocks = part.blocks
        layouts = _block_layouts(h_mat, blocks, n)
        states = []
        for block in blocks:
            dim = 2 ** len(block)
            v = rng.standard_normal((restarts, dim)) + 1j * rng.standard_normal(
                (restarts, dim)
            )
            states.append(v / np.linalg.norm(v, axis=1, keepdims=True))
        energies = np.full(restarts, np.inf)
        converged = False
        for _ in range(max_iter):
            prev = energies
            for j in range(len(blocks)):
                rest = np.ones((restarts, 1), dtype=complex)
                for i in range(len(blocks)):
                    if i != j:
                        rest = np.einsum("na,nb->nab", rest, states[i]).reshape(
                            restarts, -1
                        )
                heff = np.einsum(
                    "arbs,nr,ns->nab", layouts[j], rest.conj(), rest, optimize=True
                )
                evals, evecs = np.linalg.eigh(heff)
                states[j] = evecs[..., 0]
                energies = evals[..., 0]
            if np.max(prev - energies) < tol:
                converged = True
                break
        best = min(best, float(energies.min()))
        all_converged = all_converged and converged
        if best <= floor:
            return ProductMinimum(best, all_converged)
    return ProductMinimum(best, all_converged)


@dataclass
class GapReport:
    """Ground energy, per-k product-state minima and the implied gaps."""

    hamiltonian: np.ndarray
    e0: float
    energies: dict = field(default_factory=dict)
    converged: dict = field(default_factory=dict)
    slack: float = DEFAULT_OPT_SLACK
    kT: float | None = None
    z: float | None = None

    def gap(self, k):
        return self.energies[k] - self.e0


def entanglement_gaps(h_mat, ks=None, restarts=32, tol=1e-10, seed=0,
                      slack=DEFAULT_OPT_SLACK):
    """E_ksep for every requested k (default 2..n) plus the exact E_0."""
    n = _qubit_count(h_mat)
    e0 = float(hermitian_spectrum(h_mat)[0])
    report = GapReport(hamiltonian=h_mat, e0=e0, slack=slack)
    for k in ks if ks is not None else range(2, n + 1):
        res = min_ksep_energy(
            h_mat, k, restarts=restarts, tol=tol, seed=seed, lower_bound=e0
        )
        report.energies[int(k)] = res.energy
        report.converged[int(k)] = res.converged
    return report


def gap_witness_detects(rho, report, k, slack=None):
    """True when tr(rho H) sits strictly below E_ksep minus the optimiser
    slack, certifying k-inseparability."""
    if k not in report.energies:
        raise DomainError(f"report carries no E_ksep for k={k}")
    if rho.mat.shape != report.hamiltonian.shape:
        raise DomainError("state and Hamiltonian dimensions do not match")
    energy = float(np.trace(rho.mat @ report.hamiltonian).real)
    margin = report.slack if slack is None else slack
    return energy < report.energies[k] - margin
