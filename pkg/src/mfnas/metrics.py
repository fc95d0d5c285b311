"""Accuracy/size trade-off metrics.

The core quantity is the harmonic mean of accuracy A and the normalized
inverse size s = p_min / P, both in [0, 1]. The weighted variant shifts the
balance with a weight alpha: alpha = 0 recovers A, alpha -> infinity recovers
s, alpha = 1 is the plain harmonic mean. A log-domain composite score over
accuracy, parameters and MACs is provided for comparison.
"""

from __future__ import annotations

import math

from .errors import InvalidAlpha, InvalidCost, InvalidMetricInput, InvalidSpace


def s_prime(params: int, p_min: int) -> float:
    """Normalized inverse model size p_min / params, in (0, 1]."""
    if p_min <= 0:
        raise InvalidSpace(f"p_min must be positive, got {p_min}")
    if params < p_min:
        raise InvalidCost(f"params {params} below space minimum {p_min}")
    return p_min / params


def m_factor(accuracy: float, s: float) -> float:
    """Harmonic mean 2*A*s / (A + s); 0 at the degenerate point A = s = 0."""
    _check_unit("accuracy", accuracy)
    _check_unit("s", s)
    denom = accuracy + s
    if denom == 0.0:
        return 0.0
    return 2.0 * accuracy * s / denom


def m_alpha(accuracy: float, s: float, alpha: float = 1.0) -> float:
    """Weighted variant (1+alpha)*A*s / (alpha*A + s); equals m_factor at alpha=1."""
    _check_unit("accuracy", accuracy)
    _check_unit("s", s)
    if alpha < 0:
        raise InvalidAlpha(f"alpha must be non-negative, got {alpha}")
    if alpha == 1.0:
        return m_factor(accuracy, s)
    denom = alpha * accuracy + s
    if denom == 0.0:
        return 0.0
    return (1.0 + alpha) * accuracy * s / denom


def netscore(accuracy: float, params: int, macs: int, *,
             alpha: float = 2.0, beta: float = 0.5, gamma: float = 0.5,
             p_scale: float = 1e6, m_scale: float = 1e9) -> float:
    """20*log10(A^alpha / ((P/p_scale)^beta * (macs/m_scale)^gamma)).

    Unbounded; larger is better. Scale divisors keep the log arguments near
    unity for typical image models and are configurable.
    """
    if not 0.0 < accuracy <= 1.0:
        raise InvalidMetricInput(f"accuracy must be in (0, 1], got {accuracy}")
    if params <= 0 or macs <= 0:
        raise InvalidMetricInput("params and macs must be positive")
    if p_scale <= 0 or m_scale <= 0:
        raise InvalidMetricInput("scale divisors must be positive")
    return 20.0 * (alpha * math.log10(accuracy)
                   - beta * math.log10(params / p_scale)
                   - gamma * math.log10(macs / m_scale))


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidMetricInput(f"{name} must be in [0, 1], got {value}")
