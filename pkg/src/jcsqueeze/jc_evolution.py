"""Resonant Jaynes-Cummings dynamics of a qubit coupled to one field mode.

Two engines produce the reduced qubit state:

* the oracle: exact evolution of the joint pure state. The interaction
  sigma_+ a + sigma_- a^dag only couples the pairs {|e,n>, |g,n+1>}, so the
  propagator is a set of independent 2x2 rotations by tau*sqrt(n+1).
* the closed form: an explicit series for rho_ee and rho_eg, evaluated
  term by term. It is never trusted on its own; ``cross_validate`` compares it
  against the oracle sub-term by sub-term.

Time is the dimensionless tau = lambda * t everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptStateError, InvalidParameterError
from .field_states import CatFieldSpec, FockAmplitudes, cat_amplitudes, coherent_amplitudes, cat_normalization

CONSISTENCY_THRESHOLD = 1e-8

EE_TERMS = ("ee_excited", "ee_ground", "ee_interference")
EG_TERMS = ("eg_diagonal", "eg_pair", "eg_excited_cross", "eg_ground_cross")


@dataclass(frozen=True)
class QubitSpec:
    """Initial qubit state cos(theta/2)|e> + exp(-i phi) sin(theta/2)|g>."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidParameterError("theta and phi must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidParameterError(f"theta must lie in [0, pi], got {self.theta!r}")


@dataclass(frozen=True)
class JointState:
    """Pure qubit-field state as the two branches |e>|psi_e> + |g>|psi_g>."""

    e_branch: FockAmplitudes
    g_branch: FockAmplitudes

    def __post_init__(self):
        if self.e_branch.n_max != self.g_branch.n_max:
            raise InvalidParameterError("e and g branches must share one truncation")

    @property
    def n_max(self) -> int:
        return self.e_branch.n_max

    def norm_squared(self) -> float:
        return self.e_branch.norm_squared() + self.g_branch.norm_squared()


@dataclass(frozen=True, eq=False)
class QubitDensityMatrix:
    """Reduced qubit state in the {|e>, |g>} basis.

    ``rho_ee`` and ``rho_eg`` may be scalars or equal-shape arrays (one entry
    per time sample); rho_gg and rho_ge follow from trace and hermiticity.
    """

    rho_ee: float | np.ndarray
    rho_eg: complex | np.ndarray

    @property
    def rho_gg(self):
        return 1.0 - self.rho_ee

    @property
    def rho_ge(self):
        return np.conj(self.rho_eg)

    def matrix(self) -> np.ndarray:
        if np.ndim(self.rho_ee):
            raise ValueError("matrix() is only defined for a single time sample")
        return np.array([[self.rho_ee, self.rho_eg], [np.conj(self.rho_eg), 1.0 - self.rho_ee]])

    def __len__(self):
        return np.size(self.rho_ee)

    def __getitem__(self, idx):
        return QubitDensityMatrix(np.asarray(self.rho_ee)[idx], np.asarray(self.rho_eg)[idx])

    def positivity_margin(self):
        """rho_ee * rho_gg - |rho_eg|^2, the determinant; >= 0 for a physical state."""
        return self.rho_ee * (1.0 - self.rho_ee) - np.abs(self.rho_eg) ** 2

    def validate(self, slack: float = 1e-12) -> "QubitDensityMatrix":
        ee = np.asarray(self.rho_ee)
        if np.any(ee < -slack) or np.any(ee > 1.0 + slack):
            raise CorruptStateError(f"rho_ee outside [0, 1]: range [{ee.min()}, {ee.max()}]")
        margin = np.min(self.positivity_margin())
        if margin < -slack:
            raise CorruptStateError(f"density matrix is not positive (det = {margin})")
        return self


def initial_joint_state(qubit: QubitSpec, field: FockAmplitudes) -> JointState:
    c = field.amps
    e = math.cos(0.5 * qubit.theta) * c
    g = complex(math.cos(qubit.phi), -math.sin(qubit.phi)) * math.sin(0.5 * qubit.theta) * c
    return JointState(FockAmplitudes(e), FockAmplitudes(g))


def _evolve_branches(e, g, taus):
    """Apply the block rotations for every tau in ``taus``.

    Returns arrays of shape (len(taus), n_max + 1). The top level |e, n_max>
    has no partner inside the truncated space and is left untouched, which
    keeps the truncated propagator exactly unitary.
    """
    taus = np.asarray(taus, dtype=float).reshape(-1, 1)
    n_max = e.size - 1
    omega = taus * np.sqrt(np.arange(1, n_max + 1))  # block n couples e_n with g_{n+1}
    cos, sin = np.cos(omega), np.sin(omega)

    e_out = np.empty((taus.shape[0], n_max + 1), dtype=complex)
    g_out = np.empty_like(e_out)
    e_out[:, :n_max] = cos * e[:n_max] - 1j * sin * g[1:]
    e_out[:, n_max] = e[n_max]
    g_out[:, 0] = g[0]
    g_out[:, 1:] = cos * g[1:] - 1j * sin * e[:n_max]
    return e_out, g_out


def evolve_exact(state: JointState, tau: float) -> JointState:
    if not math.isfinite(tau):
        raise InvalidParameterError(f"tau must be finite, got {tau!r}")
    e, g = _evolve_branches(state.e_branch.amps, state.g_branch.amps, [tau])
    return JointState(FockAmplitudes(e[0]), FockAmplitudes(g[0]))


def reduce_to_qubit(state: JointState) -> QubitDensityMatrix:
    e, g = state.e_branch.amps, state.g_branch.amps
    return QubitDensityMatrix(float(np.sum(np.abs(e) ** 2)), complex(np.sum(e * np.conj(g))))


def oracle_density(qubit: QubitSpec, field: FockAmplitudes, taus) -> QubitDensityMatrix:
    """Reduced state on a whole time grid, each tau evolved from t = 0."""
    state = initial_joint_state(qubit, field)
    e, g = _evolve_branches(state.e_branch.amps, state.g_branch.amps, taus)
    return QubitDensityMatrix(np.sum(np.abs(e) ** 2, axis=1), np.sum(e * np.conj(g), axis=1))


def oracle_terms(qubit: QubitSpec, field: FockAmplitudes, taus) -> dict[str, np.ndarray]:
    """Oracle counterparts of each closed-form sub-sum.

    The initial state splits into an |e> part and a |g> part. Each part is
    evolved on its own; the bilinear pieces of the reduced state between the
    two evolved parts correspond one-to-one with the series sub-sums.
    """
    state = initial_joint_state(qubit, field)
    zero = np.zeros_like(field.amps)
    ea, ga = _evolve_branches(state.e_branch.amps, zero, taus)
    eb, gb = _evolve_branches(zero, state.g_branch.amps, taus)
    return {
        "ee_excited": np.sum(np.abs(ea) ** 2, axis=1),
        "ee_ground": np.sum(np.abs(eb) ** 2, axis=1),
        "ee_interference": 2.0 * np.real(np.sum(ea * np.conj(eb), axis=1)),
        "eg_diagonal": np.sum(ea * np.conj(gb), axis=1),
        "eg_pair": np.sum(eb * np.conj(ga), axis=1),
        "eg_excited_cross": np.sum(ea * np.conj(ga), axis=1),
        "eg_ground_cross": np.sum(eb * np.conj(gb), axis=1),
    }


def closed_form_terms(qubit: QubitSpec, spec: CatFieldSpec, taus, n_max: int,
                      amend_pair_parity: bool = False) -> dict[str, np.ndarray]:
    """Each sub-sum of the closed-form rho_ee / rho_eg series, on a tau grid.

    Sums run over n = 0 .. n_max; any amplitude with index n - 1 < 0 is zero.
    With ``amend_pair_parity`` the P_{n+1} P*_{n-1} sum uses the parity weight
    (1 - (-1)^n cos rho_c) instead of the printed (1 + (-1)^n cos rho_c).
    """
    taus = np.asarray(taus, dtype=float).reshape(-1, 1)
    theta, phi = qubit.theta, qubit.phi
    beta, rho_c, n_bar = spec.beta, spec.rho_c, spec.n_bar

    p_all = coherent_amplitudes(spec.alpha, n_max + 1).amps
    p = p_all[:-1]
    p_next = p_all[1:]
    p_prev = np.concatenate([[0.0], p_all[:-2]])
    n = np.arange(n_max + 1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    norm2 = cat_normalization(spec) ** 2

    cos1, sin1 = np.cos(taus * np.sqrt(n + 1)), np.sin(taus * np.sqrt(n + 1))
    cos0, sin0 = np.cos(taus * np.sqrt(n)), np.sin(taus * np.sqrt(n))
    weight = 1.0 + math.cos(rho_c) * sign
    pair_weight = 1.0 - math.cos(rho_c) * sign if amend_pair_parity else weight
    c2, s2 = math.cos(0.5 * theta) ** 2, math.sin(0.5 * theta) ** 2
    pn2 = np.abs(p) ** 2

    ee_excited = norm2 * np.sum(pn2 * 2.0 * weight * c2 * cos1 ** 2, axis=1)
    ee_ground = norm2 * np.sum(pn2 * 2.0 * weight * s2 * sin0 ** 2, axis=1)
    ee_interference = -norm2 * np.sum(
        pn2 * sign * np.sqrt(n_bar / (n + 1)) * math.sin(rho_c) * math.sin(theta)
        * math.cos(phi - beta) * np.sin(2.0 * taus * np.sqrt(n + 1)),
        axis=1,
    )

    e_iphi = complex(math.cos(phi), math.sin(phi))
    eg_diagonal = norm2 * math.sin(theta) * np.sum(weight * e_iphi * pn2 * cos1 * cos0, axis=1)
    eg_pair = norm2 * math.sin(theta) * np.sum(
        pair_weight * np.conj(e_iphi) * p_next * np.conj(p_prev) * sin1 * sin0, axis=1
    )
    eg_excited_cross = -2.0 * norm2 * math.sin(rho_c) * np.sum(
        sign * c2 * p * np.conj(p_prev) * cos1 * sin0, axis=1
    )
    eg_ground_cross = -2.0 * norm2 * math.sin(rho_c) * np.sum(
        sign * s2 * p_next * np.conj(p) * sin1 * cos0, axis=1
    )
    return {
        "ee_excited": ee_excited,
        "ee_ground": ee_ground,
        "ee_interference": ee_interference,
        "eg_diagonal": eg_diagonal,
        "eg_pair": eg_pair,
        "eg_excited_cross": eg_excited_cross,
        "eg_ground_cross": eg_ground_cross,
    }


def _assemble(terms) -> QubitDensityMatrix:
    ee = sum(terms[k] for k in EE_TERMS)
    eg = sum(terms[k] for k in EG_TERMS)
    return QubitDensityMatrix(ee, eg)


def closed_form_density(qubit: QubitSpec, spec: CatFieldSpec, tau, n_max: int,
                        amend_pair_parity: bool = False) -> QubitDensityMatrix:
    """Reduced qubit state from the closed-form series.

    Scalar ``tau`` gives a scalar matrix, an array gives one entry per time.
    """
    rho = _assemble(closed_form_terms(qubit, spec, tau, n_max, amend_pair_parity))
    if np.ndim(tau) == 0:
        return QubitDensityMatrix(float(rho.rho_ee[0]), complex(rho.rho_eg[0]))
    return rho


@dataclass(frozen=True)
class ValidationReport:
    status: str
    threshold: float
    max_dev_ee: float
    tau_at_max_ee: float
    max_dev_eg: float
    tau_at_max_eg: float
    term_deviations: dict = field(default_factory=dict)
    swap_residuals: dict = field(default_factory=dict)
    offending_terms: tuple = ()
    parameters: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.status == "CONSISTENT"

    def render(self) -> str:
        lines = [
            f"status: {self.status}",
            f"threshold: {self.threshold:.3e}",
            f"max |d rho_ee|: {self.max_dev_ee:.6e} at tau = {self.tau_at_max_ee:.6g}",
            f"max |d rho_eg|: {self.max_dev_eg:.6e} at tau = {self.tau_at_max_eg:.6g}",
        ]
        if self.parameters:
            lines.append("parameters: " + ", ".join(f"{k}={v:.17g}" for k, v in self.parameters.items()))
        lines.append("sub-term deviation (closed form vs oracle), and total deviation with that term swapped for the oracle value:")
        for name in EE_TERMS + EG_TERMS:
            flag = "  <-- offending" if name in self.offending_terms else ""
            lines.append(
                f"  {name:<18s} dev={self.term_deviations[name]:.6e}  "
                f"after swap={self.swap_residuals[name]:.6e}{flag}"
            )
        if self.status != "CONSISTENT":
            culprits = ", ".join(self.offending_terms) or "no single sub-term; several interact"
            lines.append(f"offending: {culprits}")
        return "\n".join(lines)


def cross_validate(qubit: QubitSpec, spec: CatFieldSpec, tau_grid, n_max: int,
                   threshold: float = CONSISTENCY_THRESHOLD,
                   amend_pair_parity: bool = False) -> ValidationReport:
    """Compare the closed-form series against the oracle on ``tau_grid``.

    When they disagree, every sub-sum is checked against its oracle
    counterpart and swapped in turn; sub-sums whose deviation exceeds the
    threshold are reported as offending.
    """
    taus = np.asarray(tau_grid, dtype=float).ravel()
    if taus.size == 0:
        raise InvalidParameterError("tau grid must not be empty")
    field_amps = cat_amplitudes(spec, n_max)

    closed = closed_form_terms(qubit, spec, taus, n_max, amend_pair_parity)
    exact = oracle_terms(qubit, field_amps, taus)
    reference = oracle_density(qubit, field_amps, taus)

    def deviations(terms):
        rho = _assemble(terms)
        return np.abs(rho.rho_ee - reference.rho_ee), np.abs(rho.rho_eg - reference.rho_eg)

    d_ee, d_eg = deviations(closed)
    i_ee, i_eg = int(np.argmax(d_ee)), int(np.argmax(d_eg))
    max_ee, max_eg = float(d_ee[i_ee]), float(d_eg[i_eg])

    term_dev = {k: float(np.max(np.abs(closed[k] - exact[k]))) for k in closed}
    swap = {}
    for name in closed:
        trial = dict(closed)
        trial[name] = exact[name]
        a, b = deviations(trial)
        swap[name] = float(max(a.max(), b.max()))

    consistent = max_ee < threshold and max_eg < threshold
    offending = () if consistent else tuple(k for k in closed if term_dev[k] >= threshold)
    return ValidationReport(
        status="CONSISTENT" if consistent else "DISCREPANT",
        threshold=threshold,
        max_dev_ee=max_ee,
        tau_at_max_ee=float(taus[i_ee]),
        max_dev_eg=max_eg,
        tau_at_max_eg=float(taus[i_eg]),
        term_deviations=term_dev,
        swap_residuals=swap,
        offending_terms=offending,
        parameters={
            "theta": qubit.theta, "phi": qubit.phi, "n_bar": spec.n_bar,
            "beta": spec.beta, "rho_c": spec.rho_c, "n_max": float(n_max),
        },
    )
