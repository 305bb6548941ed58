"""Truncated Fock-space amplitudes for coherent and Schrodinger-cat field states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, InvalidParameterError

DEFAULT_TAIL_EPS = 1e-12

# Below this the odd cat of (near-)vacuum cannot be normalized to full precision.
_MIN_CAT_NORM_DENOM = 1e-12


@dataclass(frozen=True)
class CatFieldSpec:
    """Field parameters: mean photon number, coherent phase and cat relative phase.

    Phases are kept as given (not wrapped into [0, 2pi)).
    """

    n_bar: float
    beta: float = 0.0
    rho_c: float = 0.0

    def __post_init__(self):
        for name in ("n_bar", "beta", "rho_c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
        if self.n_bar < 0:
            raise InvalidParameterError(f"n_bar must be >= 0, got {self.n_bar!r}")

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.n_bar) * complex(math.cos(self.beta), math.sin(self.beta))


@dataclass(frozen=True, eq=False)
class FockAmplitudes:
    """Complex amplitudes c_0 ... c_{n_max} of a pure single-mode state."""

    amps: np.ndarray

    def __post_init__(self):
        arr = np.array(self.amps, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidParameterError("amplitudes must be a non-empty 1-d array")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    @property
    def n_max(self) -> int:
        return self.amps.size - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def photon_distribution(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __len__(self):
        return self.amps.size

    def __eq__(self, other):
        if not isinstance(other, FockAmplitudes):
            return NotImplemented
        return np.array_equal(self.amps, other.amps)

    __hash__ = None


def coherent_amplitudes(alpha: complex, n_max: int) -> FockAmplitudes:
    """Coherent-state amplitudes exp(-|a|^2/2) a^n / sqrt(n!) for n <= n_max.

    Built by the recurrence c_n = c_{n-1} * alpha / sqrt(n) so that no
    factorial is ever formed.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise InvalidParameterError(f"alpha must be finite, got {alpha!r}")
    n_max = _check_n_max(n_max)

    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return FockAmplitudes(amps)


def cat_normalization(spec: CatFieldSpec) -> float:
    """N = (2 + 2 exp(-2 n_bar) cos rho_c)^(-1/2).

    The denominator is evaluated as 4 cos^2(rho_c/2) + 2 cos(rho_c) expm1(-2 n_bar),
    which is the same quantity without the cancellation near the odd vacuum cat.
    """
    denom = 4.0 * math.cos(0.5 * spec.rho_c) ** 2 + 2.0 * math.cos(spec.rho_c) * math.expm1(
        -2.0 * spec.n_bar
    )
    if denom < _MIN_CAT_NORM_DENOM:
        raise DegenerateStateError(
            f"cat state with n_bar={spec.n_bar!r}, rho_c={spec.rho_c!r} is the zero vector "
            "(odd superposition of vacuum); it cannot be normalized"
        )
    return denom ** -0.5


def cat_amplitudes(spec: CatFieldSpec, n_max: int) -> FockAmplitudes:
    """Amplitudes of N(|alpha> + e^{i rho_c}|-alpha>), alpha = sqrt(n_bar) e^{i beta}."""
    n_max = _check_n_max(n_max)
    norm = cat_normalization(spec)
    coherent = coherent_amplitudes(spec.alpha, n_max).amps
    parity = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    phase = complex(math.cos(spec.rho_c), math.sin(spec.rho_c))
    return FockAmplitudes(norm * coherent * (1.0 + phase * parity))


def choose_truncation(n_bar: float, tail_eps: float = DEFAULT_TAIL_EPS) -> int:
    """Smallest n_max whose Poisson tail beyond it is below ``tail_eps``, plus 2.

    The two extra levels leave room for the n_max + 1 partner amplitudes the
    evolution blocks reach for.
    """
    if not math.isfinite(n_bar) or n_bar < 0:
        raise InvalidParameterError(f"n_bar must be finite and >= 0, got {n_bar!r}")
    if not 0.0 < tail_eps < 1.0:
        raise InvalidParameterError(f"tail_eps must lie in (0, 1), got {tail_eps!r}")
    if n_bar == 0.0:
        return 2

    # Poisson mass past this bound is far below any double-precision tail_eps.
    upper = int(n_bar + 40.0 * math.sqrt(n_bar) + 80.0)
    n = np.arange(upper + 1)
    log_p = -n_bar + n * math.log(n_bar) - np.array([math.lgamma(k + 1.0) for k in n])
    p = np.exp(log_p)
    # tails[k] = sum_{m > k} p_m, summed from the small end.
    tails = np.concatenate([np.cumsum(p[::-1])[::-1][1:], [0.0]])
    n_max = int(np.argmax(tails < tail_eps))
    return n_max + 2


def poisson_tail(n_bar: float, n_max: int) -> float:
    """Probability that a Poisson(n_bar) variable exceeds n_max."""
    if n_bar == 0.0:
        return 0.0
    upper = max(n_max, int(n_bar + 40.0 * math.sqrt(n_bar) + 80.0))
    ks = np.arange(n_max + 1, upper + 1)
    if ks.size == 0:
        return 0.0
    log_p = -n_bar + ks * math.log(n_bar) - np.array([math.lgamma(k + 1.0) for k in ks])
    return float(np.sum(np.exp(log_p)[::-1]))


def vacuum(n_max: int = 0) -> FockAmplitudes:
    amps = np.zeros(_check_n_max(n_max) + 1, dtype=complex)
    amps[0] = 1.0
    return FockAmplitudes(amps)


def _check_n_max(n_max) -> int:
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 0:
        raise InvalidParameterError(f"n_max must be a non-negative integer, got {n_max!r}")
    return int(n_max)
