"""Effective Heisenberg-picture observables for decaying two-level
systems and time-dependent CHSH bounds over product states.

A measurement on an exponentially decaying qubit is represented by
    O(alpha, phi, t) = (1 - |n|) I + n . sigma
with a Bloch vector n that shrinks like exp(-Gamma t), so the
probability of a positive outcome falls off with the decay law.  The
classical (local-realistic) bounds of a CHSH combination of four such
operators follow by optimising its expectation over pure product
states, which inherits time dependence from the operators; there is no
Schroedinger-picture formulation of measurements at unequal times.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, cosh, exp, sin, sinh, sqrt

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError
from .tensor import kron_all

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_SINGLET = np.array([0, 1, -1, 0], dtype=complex) / sqrt(2)


@dataclass(frozen=True)
class EffectiveOpParams:
    """Measurement direction (alpha, phi), time t, and decay widths."""

    alpha: float
    phi: float = 0.0
    t: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise DomainError("decay widths must be non-negative")
        if self.t < 0:
            raise DomainError("time must be non-negative")

    @property
    def gamma_mean(self):
        return 0.5 * (self.gamma1 + self.gamma2)

    @property
    def gamma_diff(self):
        return 0.5 * (self.gamma1 - self.gamma2)


def bloch_vector(p):
    """The (shrinking) Bloch vector n(t) of the effective operator."""
    dg = p.gamma_diff
    n = np.array([
        cos(p.t + p.phi) * sin(p.alpha),
        sin(p.t + p.phi) * sin(p.alpha),
        sinh(dg * p.t) + cosh(dg * p.t) * cos(p.alpha),
    ])
    return exp(-p.gamma_mean * p.t) * n


def effective_operator(p):
    """O = (1 - |n|) I + n · sigma; eigenvalues 1 and 1 - 2|n|."""
    n = bloch_vector(p)
    mat = (1.0 - np.linalg.norm(n)) * np.eye(2, dtype=complex)
    for comp, sig in zip(n, _SIGMA):
        mat = mat + comp * sig
    return mat


def bell_operator(settings):
    """CHSH combination A1 (B1 + B2) + A2 (B1 - B2) of four effective
    operators; settings = (A1, A2, B1, B2)."""
    a1, a2, b1, b2 = (effective_operator(s) for s in _check_settings(settings))
    return kron_all([a1, b1 + b2]) + kron_all([a2, b1 - b2])


def singlet_value(settings):
    """tr(rho_singlet B) for the CHSH operator of the given settings."""
    mat = bell_operator(settings)
    return float(np.real(_SINGLET.conj() @ (mat @ _SINGLET)))


def _check_settings(settings):
    settings = tuple(settings)
    if len(settings) != 4:
        raise DomainError("need exactly four operator settings (A1, A2, B1, B2)")
    return settings


def _unit(theta, phi):
    return np.array([sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta)])


@dataclass(frozen=True)
class ChshBounds:
    b_minus: float
    b_plus: float
    converged: bool


def chsh_bound(settings, grid=(64, 128), refine=True):
    """Extrema of <a| ⊗ <b| B |a> ⊗ |b> over pure product states.

    With O = c I + n · sigma, the expectation on a product state is
    affine in each party's Bloch vector, so party B's optimum is closed
    form (base ± |coefficient vector|); party A's sphere is gridded
    (theta x phi resolution per `grid`) and the best cell is polished by
    Nelder-Mead.  Local-realistic correlations cannot leave
    [b_minus, b_plus].
    """
    a1, a2, b1, b2 = _check_settings(settings)
    na1, na2 = bloch_vector(a1), bloch_vector(a2)
    nb1, nb2 = bloch_vector(b1), bloch_vector(b2)
    ca1, ca2 = 1.0 - np.linalg.norm(na1), 1.0 - np.linalg.norm(na2)
    cb_sum = (1.0 - np.linalg.norm(nb1)) + (1.0 - np.linalg.norm(nb2))
    cb_diff = (1.0 - np.linalg.norm(nb1)) - (1.0 - np.linalg.norm(nb2))
    nb_sum, nb_diff = nb1 + nb2, nb1 - nb2

    def extremum(avec, sign):
        g1 = ca1 + na1 @ avec
        g2 = ca2 + na2 @ avec
        base = g1 * cb_sum + g2 * cb_diff
        coeff = g1 * nb_sum + g2 * nb_diff
        return base + sign * np.linalg.norm(coeff)

    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)

    results = {}
    converged = True
    for sign, label in ((1.0, "max"), (-1.0, "min")):
        best_val = -np.inf
        best_angles = (0.0, 0.0)
        for th in thetas:
            for ph in phis:
                val = sign * extremum(_unit(th, ph), sign)
                if val > best_val:
                    best_val = val
                    best_angles = (th, ph)
        if refine:
            res = minimize(
                lambda x: -sign * extremum(_unit(x[0], x[1]), sign),
                x0=np.array(best_angles),
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
            )
            converged = converged and bool(res.success)
            best_val = max(best_val, float(-res.fun))
        results[label] = sign * best_val
    return ChshBounds(b_minus=results["min"], b_plus=results["max"], converged=converged)
