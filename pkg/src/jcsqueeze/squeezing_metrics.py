"""Entropic and variance squeezing diagnostics of a qubit density matrix.

Entropies are in nats. All functions accept a scalar QubitDensityMatrix or
one holding arrays of samples and work elementwise.

Sign convention: <sigma_y> = -2 Im rho_eg, so that the probability of the
first sigma_y eigenvector, 1/2 (1 - 2 Im rho_eg), equals 1/2 (1 + <sigma_y>).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import entr

from .errors import CorruptStateError, InvariantViolationError
from .jc_evolution import QubitDensityMatrix

LN2 = math.log(2.0)
PROBABILITY_SLACK = 1e-10
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class PauliProbabilities:
    x1: float
    x2: float
    y1: float
    y2: float
    z1: float  # rho_gg
    z2: float  # rho_ee


def _clamped(p, label, strict):
    p = np.asarray(p, dtype=float)
    bad = (p < -PROBABILITY_SLACK) | (p > 1.0 + PROBABILITY_SLACK)
    if np.any(bad):
        if strict:
            worst = p[bad].flat[0]
            raise CorruptStateError(f"P({label}) = {worst!r} lies outside [0, 1]")
        p = np.where(bad, np.nan, p)
    return _unwrap(np.clip(p, 0.0, 1.0))


def pauli_probabilities(rho: QubitDensityMatrix, strict: bool = True) -> PauliProbabilities:
    """Outcome probabilities of sigma_x, sigma_y, sigma_z measurements.

    Values within 1e-10 of [0, 1] are clamped; anything further out raises
    CorruptStateError, or becomes NaN when ``strict`` is False.
    """
    re, im = np.real(rho.rho_eg), np.imag(rho.rho_eg)
    ee = np.real(rho.rho_ee)
    return PauliProbabilities(
        x1=_clamped(0.5 * (1.0 + 2.0 * re), "sigma_x", strict),
        x2=_clamped(0.5 * (1.0 - 2.0 * re), "sigma_x", strict),
        y1=_clamped(0.5 * (1.0 - 2.0 * im), "sigma_y", strict),
        y2=_clamped(0.5 * (1.0 + 2.0 * im), "sigma_y", strict),
        z1=_clamped(1.0 - ee, "sigma_z", strict),
        z2=_clamped(ee, "sigma_z", strict),
    )


def shannon_entropies(rho: QubitDensityMatrix, strict: bool = True):
    """(H_x, H_y, H_z) with 0 ln 0 = 0."""
    p = pauli_probabilities(rho, strict)
    h_x = entr(p.x1) + entr(p.x2)
    h_y = entr(p.y1) + entr(p.y2)
    h_z = entr(p.z1) + entr(p.z2)
    return _unwrap(h_x), _unwrap(h_y), _unwrap(h_z)


def entropy_squeeze_factors(h_x, h_y, h_z):
    """E(sigma_a) = exp(H_a) - 2 / sqrt(exp(H_z)); negative means squeezed."""
    limit = 2.0 * np.exp(-0.5 * np.asarray(h_z))
    return _unwrap(np.exp(h_x) - limit), _unwrap(np.exp(h_y) - limit)


def pauli_expectations(rho: QubitDensityMatrix):
    exp_x = 2.0 * np.real(rho.rho_eg)
    exp_y = -2.0 * np.imag(rho.rho_eg)
    exp_z = 2.0 * np.real(rho.rho_ee) - 1.0
    return _unwrap(exp_x), _unwrap(exp_y), _unwrap(exp_z)


def variance_squeeze_factors(rho: QubitDensityMatrix):
    """V(sigma_a) = Delta sigma_a - sqrt(|<sigma_z>| / 2) for a = x, y."""
    exp_x, exp_y, exp_z = pauli_expectations(rho)
    limit = np.sqrt(np.abs(exp_z) / 2.0)
    dx = np.sqrt(np.clip(1.0 - np.square(exp_x), 0.0, None))
    dy = np.sqrt(np.clip(1.0 - np.square(exp_y), 0.0, None))
    return _unwrap(dx - limit), _unwrap(dy - limit)


def check_entropic_bound(h_x, h_y, h_z, strict: bool = True):
    """Slack H_x + H_y + H_z - 2 ln 2 of the entropic uncertainty bound.

    Also checks the exponentiated form dH_x dH_y dH_z >= 4. A violation beyond
    rounding means a bug upstream and raises InvariantViolationError.
    """
    slack = np.asarray(h_x) + np.asarray(h_y) + np.asarray(h_z) - 2.0 * LN2
    product = np.exp(h_x) * np.exp(h_y) * np.exp(h_z)
    if strict:
        if np.any(slack < -BOUND_SLACK):
            raise InvariantViolationError(f"entropy sum below 2 ln 2 by {-np.nanmin(slack):.3e}")
        if np.any(product < 4.0 * (1.0 - BOUND_SLACK)):
            raise InvariantViolationError(f"dH_x dH_y dH_z = {np.nanmin(product)!r} < 4")
    return _unwrap(slack)


@dataclass(frozen=True)
class SqueezingSample:
    tau: float
    h_x: float
    h_y: float
    h_z: float
    dh_x: float
    dh_y: float
    dh_z: float
    e_x: float
    e_y: float
    v_x: float
    v_y: float
    exp_x: float
    exp_y: float
    exp_z: float
    entropy_sum_slack: float
    rho_ee: float
    rho_eg: complex


SAMPLE_FIELDS = tuple(f.name for f in fields(SqueezingSample))


def squeezing_table(rho: QubitDensityMatrix, taus, strict: bool = True) -> dict[str, np.ndarray]:
    """Every diagnostic as a column array, one row per entry of ``taus``."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    rho = QubitDensityMatrix(
        np.broadcast_to(np.asarray(rho.rho_ee, dtype=float), taus.shape),
        np.broadcast_to(np.asarray(rho.rho_eg, dtype=complex), taus.shape),
    )
    h_x, h_y, h_z = (np.atleast_1d(h) for h in shannon_entropies(rho, strict))
    e_x, e_y = entropy_squeeze_factors(h_x, h_y, h_z)
    v_x, v_y = variance_squeeze_factors(rho)
    exp_x, exp_y, exp_z = pauli_expectations(rho)
    slack = check_entropic_bound(h_x, h_y, h_z, strict)
    cols = {
        "tau": taus,
        "h_x": h_x, "h_y": h_y, "h_z": h_z,
        "dh_x": np.exp(h_x), "dh_y": np.exp(h_y), "dh_z": np.exp(h_z),
        "e_x": e_x, "e_y": e_y,
        "v_x": v_x, "v_y": v_y,
        "exp_x": exp_x, "exp_y": exp_y, "exp_z": exp_z,
        "entropy_sum_slack": slack,
        "rho_ee": rho.rho_ee,
        "rho_eg": rho.rho_eg,
    }
    return {k: np.atleast_1d(v) for k, v in cols.items()}


def samples_from_table(table) -> list[SqueezingSample]:
    columns = [table[name].tolist() for name in SAMPLE_FIELDS]
    return [SqueezingSample(*row) for row in zip(*columns)]


def sample_at(rho: QubitDensityMatrix, tau: float) -> SqueezingSample:
    return samples_from_table(squeezing_table(rho, [tau]))[0]


def _unwrap(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a
