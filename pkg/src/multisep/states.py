"""Reference states, noise families, and closed-form element providers.

Dense construction is fine up to a few thousand dimensions; the matrix-
element criteria, however, only ever touch a handful of elements, so the
noise families are also available as closed-form providers that answer
element queries without building the matrix (usable at n = 20 and
beyond).  Every family here is of the form

    rho = sum_t w_t |psi_t><psi_t| + w_noise * I / total

with sparse pure-state amplitude maps psi_t, which is exactly what the
provider evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, sqrt

import numpy as np

from .errors import DomainError
from .tensor import DensityMatrix, StateVector, SystemShape, qudits, vec_to_dm

_BELL_AMPLITUDES = {
    "phi+": {(0, 0): 1 / sqrt(2), (1, 1): 1 / sqrt(2)},
    "phi-": {(0, 0): 1 / sqrt(2), (1, 1): -1 / sqrt(2)},
    "psi+": {(0, 1): 1 / sqrt(2), (1, 0): 1 / sqrt(2)},
    "psi-": {(0, 1): 1 / sqrt(2), (1, 0): -1 / sqrt(2)},
}


class ElementProvider:
    """Closed-form access to density-matrix elements.

    Subclasses implement element(bra, ket) and carry a SystemShape; the
    accessor must be Hermitian-symmetric.  Providers are immutable and
    shareable.
    """

    shape: SystemShape

    def element(self, bra, ket):
        raise NotImplementedError

    def to_dense(self, max_dim=None, validate=True):
        total = self.shape.total
        mat = np.empty((total, total), dtype=complex)
        idx = [self.shape.decode(i) for i in range(total)]
        for i, bra in enumerate(idx):
            for j, ket in enumerate(idx):
                mat[i, j] = self.element(bra, ket)
        return DensityMatrix(self.shape, mat, validate=validate, max_dim=max_dim)


class DenseProvider(ElementProvider):
    """Provider view of a dense DensityMatrix."""

    def __init__(self, rho):
        self.shape = rho.shape
        self._rho = rho

    def element(self, bra, ket):
        return self._rho.element(bra, ket)

    def to_dense(self, max_dim=None, validate=True):
        return self._rho


class MixtureProvider(ElementProvider):
    """sum_t w_t |psi_t><psi_t| + w_noise * I/total with sparse psi_t.

    Each pure term is an amplitude map {multi-index: amplitude}; any pure
    state given this way gets a provider for free.
    """

    def __init__(self, shape, terms, noise_weight=0.0):
        if not isinstance(shape, SystemShape):
            shape = SystemShape(shape)
        self.shape = shape
        self.terms = []
        for weight, amps in terms:
            if weight < 0:
                raise DomainError(f"mixture weight {weight} is negative")
            amps = {shape.validate_index(k): complex(v) for k, v in amps.items()}
            self.terms.append((float(weight), amps))
        if noise_weight < -1e-12:
            raise DomainError(f"noise weight {noise_weight} is negative")
        self.noise_weight = max(float(noise_weight), 0.0)
        total_w = sum(w for w, _ in self.terms) + self.noise_weight
        if abs(total_w - 1.0) > 1e-9:
            raise DomainError(f"mixture weights sum to {total_w}, expected 1")

    def element(self, bra, ket):
        bra = self.shape.validate_index(bra)
        ket = self.shape.validate_index(ket)
        val = 0j
        for weight, amps in self.terms:
            if weight == 0.0:
                continue
            a = amps.get(bra)
            b = amps.get(ket)
            if a is not None and b is not None:
                val += weight * a * b.conjugate()
        if bra == ket:
            val += self.noise_weight / self.shape.total
        return val


class FlippedProvider(ElementProvider):
    """View of a provider with every label flipped j -> d-1-j."""

    def __init__(self, inner):
        self.shape = inner.shape
        self._d = inner.shape.uniform_dim
        self._inner = inner

    def element(self, bra, ket):
        d = self._d
        return self._inner.element(
            tuple(d - 1 - x for x in bra), tuple(d - 1 - x for x in ket)
        )


def as_provider(state):
    """Uniform element access for DensityMatrix or provider inputs."""
    if isinstance(state, ElementProvider):
        return state
    if isinstance(state, DensityMatrix):
        return DenseProvider(state)
    raise DomainError(f"cannot read matrix elements from {type(state).__name__}")


def _vector_from_amplitudes(shape, amps):
    vec = np.zeros(shape.total, dtype=complex)
    for mi, a in amps.items():
        vec[shape.encode(mi)] = a
    return StateVector(shape, vec)


def ghz_amplitudes(n, d=2):
    """Amplitude map of the n-qudit GHZ state (1/sqrt d) sum_i |i>^n."""
    if n < 2 or d < 2:
        raise DomainError(f"GHZ state needs n >= 2 and d >= 2, got n={n}, d={d}")
    return {(i,) * n: 1 / sqrt(d) for i in range(d)}


def dicke_amplitudes(n, m, d=2):
    """Amplitude map of the generalised n-qudit m-Dicke state.

    For d = 2 this is the usual equal superposition of all basis states
    with m excitations; for d > 2 the superposition additionally runs
    over the excitation levels j = 0..d-2, each term carrying |j+1> on
    the m chosen subsystems and |j> elsewhere.
    """
    if not 1 <= m <= n - 1:
        raise DomainError(f"Dicke parameter m must satisfy 1 <= m <= n-1, got m={m}, n={n}")
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    norm = 1 / sqrt(comb(n, m) * (d - 1))
    amps = {}
    for j in range(d - 1):
        for alpha in combinations(range(n), m):
            mi = tuple(j + 1 if s in alpha else j for s in range(n))
            amps[mi] = norm
    return amps


def ghz_state(n, d=2):
    return _vector_from_amplitudes(qudits(n, d), ghz_amplitudes(n, d))


def dicke_state(n, m, d=2):
    return _vector_from_amplitudes(qudits(n, d), dicke_amplitudes(n, m, d))


def w_state(n, d=2):
    """The W state; coincides with the m = 1 Dicke state."""
    return dicke_state(n, 1, d)


def bell_state(label):
    """Two-qubit Bell state; label in {phi+, phi-, psi+, psi-}."""
    if label not in _BELL_AMPLITUDES:
        raise DomainError(f"unknown Bell label {label!r}")
    return _vector_from_amplitudes(qudits(2, 2), _BELL_AMPLITUDES[label])


def basis_product_state(labels, dims=None, d=2):
    """Computational-basis product vector |labels>."""
    labels = tuple(int(x) for x in labels)
    shape = SystemShape(dims) if dims is not None else qudits(len(labels), d)
    return _vector_from_amplitudes(shape, {labels: 1.0})


def maximally_mixed(shape):
    if not isinstance(shape, SystemShape):
        shape = SystemShape(shape)
    return DensityMatrix(shape, np.eye(shape.total) / shape.total, validate=False)


def smolin_state():
    """Four-qubit Smolin state: equal mixture of the GHZ projector and its
    three two-site bit-flipped variants."""
    shape = qudits(4, 2)
    mat = np.zeros((16, 16), dtype=complex)
    for pair in ((), (0, 1), (0, 2), (0, 3)):
        amps = {}
        for base, val in ghz_amplitudes(4, 2).items():
            flipped = tuple(1 - x if s in pair else x for s, x in enumerate(base))
            amps[flipped] = val
        vec = _vector_from_amplitudes(shape, amps)
        mat += 0.25 * np.outer(vec.amp, vec.amp.conj())
    return DensityMatrix(shape, mat)


def mix_white_noise(rho, p):
    """p * rho + (1 - p)/total * identity."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"mixing weight p={p} outside [0, 1]")
    total = rho.shape.total
    mat = p * rho.mat + (1.0 - p) * np.eye(total) / total
    return DensityMatrix(rho.shape, mat, validate=False)


def _check_simplex(*weights):
    if any(w < 0 for w in weights) or sum(weights) > 1.0 + 1e-12:
        raise DomainError(f"mixing weights {weights} outside the simplex")


def family_state(family, *, n=None, d=2, m=1, alpha=None, beta=0.0, p=None,
                 representation="dense"):
    """Parametric noise families, dense or as closed-form providers.

    family:
      ghz-iso    alpha * GHZ_d^n + (1-alpha)/d^n * I
      dicke-iso  p * D_m^n + (1-p)/d^n * I
      ghz-w      alpha * GHZ + beta * W + (1-alpha-beta)/2^n * I   (qubits)
      gmd        alpha * GHZ_d^n + beta * W_d^n + (1-alpha-beta)/d^n * I
    """
    if family == "ghz-iso":
        if n is None or alpha is None:
            raise DomainError("ghz-iso needs n and alpha")
        _check_simplex(alpha)
        terms = [(alpha, ghz_amplitudes(n, d))]
        noise = 1.0 - alpha
    elif family == "dicke-iso":
        if n is None or p is None:
            raise DomainError("dicke-iso needs n and p")
        _check_simplex(p)
        terms = [(p, dicke_amplitudes(n, m, d))]
        noise = 1.0 - p
    elif family == "ghz-w":
        if n is None or alpha is None:
            raise DomainError("ghz-w needs n and alpha (beta defaults to 0)")
        _check_simplex(alpha, beta)
        d = 2
        terms = [(alpha, ghz_amplitudes(n, 2)), (beta, dicke_amplitudes(n, 1, 2))]
        noise = 1.0 - alpha - beta
    elif family == "gmd":
        if n is None or alpha is None:
            raise DomainError("gmd needs n, d and alpha (beta defaults to 0)")
        _check_simplex(alpha, beta)
        terms = [(alpha, ghz_amplitudes(n, d)), (beta, dicke_amplitudes(n, 1, d))]
        noise = 1.0 - alpha - beta
    else:
        raise DomainError(f"unknown family {family!r}")

    provider = MixtureProvider(qudits(n, d), terms, noise)
    if representation == "provider":
        return provider
    if representation == "dense":
        return provider.to_dense()
    raise DomainError(f"unknown representation {representation!r}")


@dataclass(frozen=True)
class StateSpec:
    """Declarative reference-state request (used by make_state and the CLI)."""

    kind: str
    n: int = 0
    d: int = 2
    m: int = 1
    label: str = "phi+"
    labels: tuple = ()

    def __post_init__(self):
        kinds = {"ghz", "w", "dicke", "smolin", "bell", "basis-product"}
        if self.kind not in kinds:
            raise DomainError(f"unknown state kind {self.kind!r}; choose from {sorted(kinds)}")


def make_state(spec):
    """Construct the requested reference state.

    Pure kinds return a StateVector; the Smolin state is mixed and
    returns a DensityMatrix of rank 4.
    """
    if spec.kind == "ghz":
        return ghz_state(spec.n, spec.d)
    if spec.kind == "w":
        return w_state(spec.n, spec.d)
    if spec.kind == "dicke":
        return dicke_state(spec.n, spec.m, spec.d)
    if spec.kind == "smolin":
        return smolin_state()
    if spec.kind == "bell":
        return bell_state(spec.label)
    if spec.kind == "basis-product":
        return basis_product_state(spec.labels, d=spec.d)
    raise DomainError(f"unknown state kind {spec.kind!r}")


def random_pure_state(dim, rng):
    """Haar-uniform pure state amplitudes of the given dimension."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def pure_to_dm(psi_or_vec, shape=None):
    """|psi><psi| from a StateVector or a raw amplitude array."""
    if isinstance(psi_or_vec, StateVector):
        return vec_to_dm(psi_or_vec)
    if shape is None:
        raise DomainError("raw amplitudes need an explicit shape")
    return vec_to_dm(StateVector(shape, psi_or_vec))
