"""Post-processing of squeezing-factor time series: squeezing intervals,
collapse/revival envelopes and oscillation periods."""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

OPEN_BELOW = -1e-9
CLOSE_AT = 0.0


def squeezing_intervals(taus, values, open_below=OPEN_BELOW, close_at=CLOSE_AT):
    """Maximal runs where a squeezing factor is negative, as (tau_start, tau_end).

    A run opens once the value drops below ``open_below`` and closes when it
    climbs back to ``close_at`` or above; the gap between the two thresholds
    keeps rounding noise near zero from splitting one run into many.
    """
    taus = np.asarray(taus, dtype=float)
    values = np.asarray(values, dtype=float)
    runs = []
    start = None
    for tau, v in zip(taus, values):
        if start is None:
            if v < open_below:
                start = tau
        elif v >= close_at:
            runs.append((start, tau))
            start = None
    if start is not None:
        runs.append((start, taus[-1]))
    return runs


def count_squeezing_intervals(taus, values, **kw) -> int:
    return len(squeezing_intervals(taus, values, **kw))


def rolling_envelope(taus, values, window: float = 1.0):
    """Centered rolling standard deviation over ``window`` units of tau.

    Returns (centers, envelope). Measures the amplitude of the fast Rabi
    oscillations while averaging them out.
    """
    taus = np.asarray(taus, dtype=float)
    values = np.asarray(values, dtype=float)
    step = taus[1] - taus[0]
    width = max(3, int(round(window / step)) | 1)
    if width > values.size:
        raise ValueError("window longer than the series")
    env = sliding_window_view(values, width).std(axis=1)
    half = width // 2
    return taus[half: half + env.size], env


def revival_center(taus, values, window: float = 1.0, collapse_fraction: float = 0.1,
                   revival_fraction: float = 0.5):
    """Time of the first revival after the initial collapse.

    The collapse is where the envelope first falls below ``collapse_fraction``
    of its early maximum. The revival is the first post-collapse lobe reaching
    ``revival_fraction`` of the largest post-collapse envelope; its center is
    the envelope maximum within that lobe, which extends until the envelope
    drops below half the opening level (ripple in the rolling estimate must
    not split a lobe). Returns None if no collapse occurs.
    """
    centers, env = rolling_envelope(taus, values, window)
    initial = env[: max(1, int(np.argmax(centers > centers[0] + window)))].max()
    below = np.nonzero(env < collapse_fraction * initial)[0]
    if below.size == 0:
        return None
    after = below[0]
    tail = env[after:]
    level = revival_fraction * tail.max()
    above = np.nonzero(tail >= level)[0]
    first = above[0]
    stop = first
    while stop + 1 < tail.size and tail[stop + 1] >= 0.5 * level:
        stop += 1
    lobe = tail[first: stop + 1]
    return float(centers[after + first + int(np.argmax(lobe))])


def local_minima(taus, values, below: float = 0.0):
    """Parabolically refined positions of local minima lying under ``below``."""
    taus = np.asarray(taus, dtype=float)
    v = np.asarray(values, dtype=float)
    idx = np.nonzero((v[1:-1] < v[:-2]) & (v[1:-1] <= v[2:]) & (v[1:-1] < below))[0] + 1
    y0, y1, y2 = v[idx - 1], v[idx], v[idx + 1]
    curvature = y0 - 2.0 * y1 + y2
    shift = np.where(curvature > 0, 0.5 * (y0 - y2) / np.where(curvature > 0, curvature, 1.0), 0.0)
    step = taus[1] - taus[0]
    return taus[idx] + shift * step


def oscillation_periods(taus, values, below: float = 0.0):
    """Spacings between successive dips under ``below``."""
    return np.diff(local_minima(taus, values, below))


def period_spread(periods) -> float:
    """(max - min) / mean of a set of periods."""
    periods = np.asarray(periods, dtype=float)
    return float((periods.max() - periods.min()) / periods.mean())
