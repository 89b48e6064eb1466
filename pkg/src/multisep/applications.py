"""Pauli-decomposed matrix elements, quantum secret sharing, error
propagation, and the closed-form continuous-variable thresholds.

Density-matrix elements expand into local Pauli expectations, so the
GHZ verification inequality can be evaluated from measured expectation
values alone; half of the sixteen strings needed for the tripartite
check involve only identity/sigma_3 factors and are already measured
during the secret-sharing rounds themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import sqrt

import numpy as np

from .criteria import CriterionReport, DEFAULT_TOL, _report
from .errors import DomainError
from .partitions import stirling2
from .states import ghz_amplitudes
from .tensor import DensityMatrix, kron_all, qubits

# sigma_0..sigma_3 with sigma_2 = i|0><1| - i|1><0|, the transpose of the
# textbook sigma_y; this sign choice keeps the verification expansions in
# the form used throughout this package.
PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# <b|sigma_p|k> / 2 for qubit labels b, k
_SITE_FACTOR = {
    (b, k): tuple(PAULI[p][b, k] / 2.0 for p in range(4))
    for b in (0, 1) for k in (0, 1)
}


def pauli_string_matrix(labels):
    """Dense matrix of the operator sigma_{l1} ⊗ sigma_{l2} ⊗ ..."""
    labels = tuple(int(x) for x in labels)
    if any(not 0 <= x <= 3 for x in labels):
        raise DomainError(f"Pauli labels must be in 0..3, got {labels}")
    return kron_all([PAULI[x] for x in labels])


def pauli_expansion(bra, ket):
    """Expansion of <bra|rho|ket> into Pauli-string expectations.

    Returns {string: coefficient} with only the non-vanishing strings,
    such that <bra|rho|ket> = sum coeff * tr(rho sigma_string) holds
    identically for every qubit state rho.  Diagonal elements expand
    with identity/sigma_3 factors only.
    """
    bra = tuple(int(x) for x in bra)
    ket = tuple(int(x) for x in ket)
    if len(bra) != len(ket):
        raise DomainError("bra and ket must address the same number of qubits")
    if any(x not in (0, 1) for x in bra + ket):
        raise DomainError("the Pauli expansion is defined for qubit indices")
    out = {(): 1.0 + 0j}
    for b, k in zip(bra, ket):
        factors = _SITE_FACTOR[(b, k)]
        nxt = {}
        for prefix, coeff in out.items():
            for p in range(4):
                fac = factors[p]
                if fac != 0:
                    nxt[prefix + (p,)] = coeff * fac
        out = nxt
    return out


def pauli_expectations(rho, strings):
    """tr(rho sigma_string) for each requested string (real numbers)."""
    out = {}
    for s in strings:
        val = np.trace(rho.mat @ pauli_string_matrix(s))
        out[tuple(int(x) for x in s)] = float(val.real)
    return out


# ---------------------------------------------------------------------------
# Quantum secret sharing on the tripartite GHZ state
# ---------------------------------------------------------------------------

_BASIS_VECTORS = {
    "x+": np.array([1, 1], dtype=complex) / sqrt(2),
    "x-": np.array([1, -1], dtype=complex) / sqrt(2),
    "y+": np.array([1, 1j], dtype=complex) / sqrt(2),
    "y-": np.array([1, -1j], dtype=complex) / sqrt(2),
}

_VERIFY_ELEMENTS = (
    ((0, 0, 0), (1, 1, 1)),
    ((0, 0, 1), (0, 0, 1)),
    ((1, 1, 0), (1, 1, 0)),
    ((0, 1, 0), (0, 1, 0)),
    ((1, 0, 1), (1, 0, 1)),
    ((1, 0, 0), (1, 0, 0)),
    ((0, 1, 1), (0, 1, 1)),
)


@dataclass(frozen=True)
class QssRound:
    bases: tuple[str, str, str]       # Alice, Bob, Charlie
    outcomes: tuple[str, str, str]    # e.g. ("x+", "y-", "x+")
    sifted: bool
    alice_state: str                  # label reconstructed by Bob + Charlie


def _ghz3_dm():
    vec = np.zeros(8, dtype=complex)
    for mi, amp in ghz_amplitudes(3, 2).items():
        vec[mi[0] * 4 + mi[1] * 2 + mi[2]] = amp
    return DensityMatrix(qubits(3), np.outer(vec, vec.conj()), validate=False)


def _product_dm():
    vec = np.zeros(8, dtype=complex)
    vec[0] = 1.0
    return DensityMatrix(qubits(3), np.outer(vec, vec.conj()), validate=False)


def _identify_state(amplitudes):
    """Match a single-qubit vector to one of x±, y± up to a global phase."""
    norm = np.linalg.norm(amplitudes)
    if norm < 1e-12:
        return None
    v = amplitudes / norm
    for label, ref in _BASIS_VECTORS.items():
        if abs(np.vdot(ref, v)) > 1.0 - 1e-9:
            return label
    return None


def qss_table():
    """Reconstruction table: (Bob outcome, Charlie outcome) -> Alice state.

    Derived by projecting Bob's and Charlie's outcomes on the GHZ state
    and identifying Alice's conditional pure state.  Symmetric under
    Bob <-> Charlie.
    """
    ghz = np.zeros((2, 2, 2), dtype=complex)
    ghz[0, 0, 0] = ghz[1, 1, 1] = 1 / sqrt(2)
    table = {}
    for bob, bvec in _BASIS_VECTORS.items():
        for charlie, cvec in _BASIS_VECTORS.items():
            alice = np.einsum("abc,b,c->a", ghz, bvec.conj(), cvec.conj())
            label = _identify_state(alice)
            if label is None:
                raise AssertionError("GHZ reconstruction produced an unknown state")
            table[(bob, charlie)] = label
    return table


class QssSimulator:
    """Seeded projective simulation of the tripartite protocol.

    The eavesdrop toggle swaps the GHZ resource for the product state
    |000>, which breaks the reconstruction correlations and makes the
    verification inequality unviolated.
    """

    def __init__(self, eavesdrop=False):
        self.eavesdrop = bool(eavesdrop)
        self.resource = _product_dm() if eavesdrop else _ghz3_dm()
        self._table = qss_table()
        self._bases = [tuple(b) for b in product("xy", repeat=3)]
        self._outcomes = {}
        for bases in self._bases:
            combos = [tuple(b + s for b, s in zip(bases, signs))
                      for signs in product("+-", repeat=3)]
            probs = []
            for combo in combos:
                proj = kron_all([np.outer(_BASIS_VECTORS[c], _BASIS_VECTORS[c].conj())
                                 for c in combo])
                probs.append(max(np.trace(self.resource.mat @ proj).real, 0.0))
            probs = np.array(probs)
            self._outcomes[bases] = (combos, probs / probs.sum())

    def round(self, rng):
        bases = self._bases[rng.integers(0, len(self._bases))]
        combos, probs = self._outcomes[bases]
        outcomes = combos[rng.choice(len(combos), p=probs)]
        alice_state = self._table[(outcomes[1], outcomes[2])]
        sifted = bases[0] == alice_state[0]
        return QssRound(bases=bases, outcomes=outcomes, sifted=sifted,
                        alice_state=alice_state)

    def run(self, rounds, seed=0):
        rng = np.random.default_rng(seed)
        sifted = 0
        matches = 0
        for _ in range(rounds):
            rnd = self.round(rng)
            if rnd.sifted:
                sifted += 1
                if rnd.outcomes[0] == rnd.alice_state:
                    matches += 1
        return {
            "rounds": rounds,
            "sifted": sifted,
            "sift_rate": sifted / rounds if rounds else 0.0,
            "key_matches": matches,
            "match_rate": matches / sifted if sifted else 0.0,
            "eavesdrop": self.eavesdrop,
        }

    def exact_expectations(self, shots=None, seed=0):
        """The sixteen Pauli expectations the verification needs.

        Exact by default; with `shots` each expectation is replaced by a
        binomially sampled estimate (measurement-noise extension).
        """
        exact = pauli_expectations(self.resource, required_pauli_strings())
        if shots is None:
            return exact
        rng = np.random.default_rng(seed)
        noisy = {}
        for s, e in exact.items():
            p = min(max((1.0 + e) / 2.0, 0.0), 1.0)
            noisy[s] = 2.0 * rng.binomial(int(shots), p) / int(shots) - 1.0
        return noisy


def qss_round(seed=0, eavesdrop=False):
    """One seeded protocol round on a fresh simulator."""
    return QssSimulator(eavesdrop=eavesdrop).round(np.random.default_rng(seed))


def required_pauli_strings():
    """The 16 distinct strings appearing in the verification expansion,
    in deterministic order."""
    seen = {}
    for bra, ket in _VERIFY_ELEMENTS:
        for s in pauli_expansion(bra, ket):
            seen[s] = True
    return sorted(seen)


def element_from_expectations(expectations, bra, ket):
    """Reassemble <bra|rho|ket> from measured Pauli expectations."""
    expansion = pauli_expansion(bra, ket)
    missing = [s for s in expansion if s not in expectations]
    if missing:
        raise DomainError(f"missing Pauli expectations for strings {sorted(missing)}")
    return sum(coeff * expectations[s] for s, coeff in expansion.items())


def qss_verification_value(expectations, tol=DEFAULT_TOL) -> CriterionReport:
    """GHZ verification inequality evaluated from expectations only.

    Equals the genuine-multipartite-entanglement criterion with probe
    (000, 111); a positive value certifies that the shared resource is
    genuinely tripartite entangled.
    """
    expectations = {tuple(int(x) for x in k): float(v) for k, v in expectations.items()}
    off = abs(element_from_expectations(expectations, (0, 0, 0), (1, 1, 1)))
    value = off
    for left, right in (((0, 0, 1), (1, 1, 0)), ((0, 1, 0), (1, 0, 1)),
                        ((1, 0, 0), (0, 1, 1))):
        d1 = max(element_from_expectations(expectations, left, left).real, 0.0)
        d2 = max(element_from_expectations(expectations, right, right).real, 0.0)
        value -= sqrt(d1 * d2)
    return _report("qss_verify", value, tol=tol)


# ---------------------------------------------------------------------------
# Error propagation and continuous-variable thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorBudget:
    o: float        # absolute error of the off-diagonal element
    delta: float    # relative error of the diagonal elements
    n: int
    k: int
    xi: float       # propagated bound on the criterion value's error


def error_bound(o, delta, n, k):
    """Gaussian error propagation for the k-separability criterion.

    Xi = sqrt(o^2 + delta^2 * S(n,k) / (8 k^3)); the partition count
    S(n,k) enters because every k-partition contributes its own root
    term.  For delta = 0 the bound reduces to o.
    """
    if o < 0 or delta < 0:
        raise DomainError("error magnitudes must be non-negative")
    n, k = int(n), int(k)
    if not 2 <= k <= n:
        raise DomainError(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")
    xi = sqrt(o ** 2 + delta ** 2 * stirling2(n, k) / (8 * k ** 3))
    return ErrorBudget(o=float(o), delta=float(delta), n=n, k=k, xi=xi)


@dataclass(frozen=True)
class CvThresholds:
    gme_p: object       # number type follows the inputs (floats, Fractions, ...)
    ent_p: object
    always_detected: bool


def cv_detection_thresholds(d, delta, alpha):
    """Closed-form noise thresholds for the triangular-profile state.

    For d > delta the state is detected genuinely multipartite entangled
    for every p > 0; otherwise detection requires
        p > 3 d^3 alpha^2 / (3 d^3 alpha^2 + 2 delta)      (GME)
        p >   d^3 alpha^2 / (  d^3 alpha^2 + 2 delta)      (any entanglement)
    Arithmetic is carried out in the input number types, so exact
    rationals stay exact.
    """
    if d <= 0 or delta <= 0 or alpha <= 0:
        raise DomainError("d, delta and alpha must be positive")
    core = d ** 3 * alpha ** 2
    gme_p = 3 * core / (3 * core + 2 * delta)
    ent_p = core / (core + 2 * delta)
    return CvThresholds(gme_p=gme_p, ent_p=ent_p, always_detected=d > delta)
