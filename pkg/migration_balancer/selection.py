"""
Stochastic selection primitives shared by the agent strategies.

Signed scores (agent evaluations, node points) become strictly positive
weights through an exponential transform, are normalised to percentages
and drawn with a roulette wheel. The transform keeps every option
selectable while strongly favouring high scores, which is what damps
agents flickering between nodes.
"""
from typing import List, Sequence

import numpy as np
import numpy.typing as npt

from .errors import ConfigurationError, InputError


def _check_significance(s: float) -> None:
    if not s > 1:
        raise ConfigurationError(f"Error, result significance must be greater than 1, got {s!r}")


def _power(exponents: npt.NDArray[np.float64], s: float) -> npt.NDArray[np.float64]:
    with np.errstate(over='ignore', under='ignore'):
        weights = np.power(s, exponents)
    return np.clip(weights, np.finfo(float).tiny, np.finfo(float).max)


def exp_transform(x: float, s: float) -> float:
    """Return ``s ** x`` clipped to the finite positive floats, so the
    result is strictly positive for every finite ``x`` when ``s > 1``."""
    _check_significance(s)
    return float(_power(np.asarray([x], dtype=float), s)[0])


def normalize_to_100(values: Sequence[float]) -> List[float]:
    """Scale positive weights to percentages summing to 100."""
    if len(values) == 0:
        raise InputError("Error, cannot normalise an empty list of weights")
    weights = np.asarray(values, dtype=float)
    if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise InputError("Error, weights must be finite and strictly positive")
    return [float(value) for value in 100.0 * weights / weights.sum()]


def roulette_select(percentages: Sequence[float], rng: np.random.Generator) -> int:
    """Draw index ``k`` with probability ``percentages[k] / 100``.

    Exactly one uniform draw is consumed from ``rng`` per call.
    """
    cumulative = np.cumsum(np.asarray(percentages, dtype=float))
    point = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, point, side='right'))
    return min(index, len(cumulative) - 1)


def selection_percentages(scores: Sequence[float], s: float) -> List[float]:
    """``normalize_to_100`` of the exponential weights of ``scores``.

    Exponents are shifted by their maximum before the power is taken,
    which leaves the normalised result unchanged while keeping large
    scores from overflowing. Weights share the clipping of
    :func:`exp_transform`, so no option ever drops to a zero chance.
    """
    _check_significance(s)
    exponents = np.asarray(scores, dtype=float)
    if exponents.size == 0:
        raise InputError("Error, cannot select from an empty list of scores")
    weights = _power(exponents - exponents.max(), s)
    return normalize_to_100(weights.tolist())
