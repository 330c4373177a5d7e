"""Large-sample distribution of the plug-in estimator.

Scaled by ``sqrt(n)``, the estimation error is asymptotically normal with a
variance that has a closed form: each draw ``(x, y)`` contributes a linear
influence value ``W(x, y)`` with mean zero, and the limit variance is
``Var W``.  This module computes the influence coefficients, the influence
value itself, the exact limit variance by enumerating the ``2 r`` possible
outcomes of one draw, its plug-in counterpart evaluated at the empirical
measures, and the resulting asymptotic confidence interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .estimator import DegenerateSampleError, EstimateResult, empirical_measures
from .model import CountTable, PopulationModel, as_positive_prob_vector, _check_same_length


def normal_cdf(x):
    """Standard normal CDF (vectorized)."""
    return ndtr(x)


def normal_quantile(prob: float) -> float:
    """Standard normal quantile; ``prob`` must lie strictly in (0, 1)."""
    prob = float(prob)
    if not 0.0 < prob < 1.0:
        raise ValueError(f"quantile argument must lie in (0, 1), got {prob!r}")
    return float(ndtri(prob))


@dataclass(frozen=True, eq=False)
class InfluenceCoefficients:
    """Per-symbol sensitivities of the symmetric divergence.

    ``b[j]`` weights perturbations of the label-1 cell of symbol ``j`` and
    ``c[j]`` those of the label-0 cell:

    - ``b_j = 1 + ln(p_j / q_j) - q_j / p_j``
    - ``c_j = 1 + ln(q_j / p_j) - p_j / q_j``
    """

    b: np.ndarray
    c: np.ndarray


def influence_coefficients(cond_p, cond_q) -> InfluenceCoefficients:
    """Coefficients for a strictly positive pair of conditional laws."""
    p = as_positive_prob_vector(cond_p, name="cond_p")
    q = as_positive_prob_vector(cond_q, name="cond_q")
    _check_same_length(p, q)
    log_ratio = np.log(p) - np.log(q)
    b = 1.0 + log_ratio - q / p
    c = 1.0 - log_ratio - p / q
    b.flags.writeable = False
    c.flags.writeable = False
    return InfluenceCoefficients(b=b, c=c)


def influence_value(model: PopulationModel, x: int, y: int) -> float:
    """Influence ``W(x, y)`` of one draw on the scaled estimation error.

    Centered indicator brackets for both label classes, weighted by the
    influence coefficients and accumulated with compensated summation.
    The outcome distribution of one draw gives ``E W = 0``.
    """
    x = int(x)
    y = int(y)
    if not 0 <= x < model.r:
        raise ValueError(f"symbol index must lie in [0, {model.r}), got {x}")
    if y not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {y}")
    coeffs = influence_coefficients(model.cond_p, model.cond_q)
    p = model.label_prob
    q = 1.0 - p
    pv = model.cond_p
    qv = model.cond_q
    ind_y1 = 1.0 if y == 1 else 0.0
    ind_y0 = 1.0 - ind_y1
    ind_x1 = np.zeros(model.r)
    ind_x0 = np.zeros(model.r)
    if y == 1:
        ind_x1[x] = 1.0
    else:
        ind_x0[x] = 1.0
    bracket_p = (ind_x1 - p * pv) / p - pv * (ind_y1 - p)
    bracket_q = (ind_x0 - q * qv) / q - qv * (ind_y0 - q)
    terms = bracket_p * coeffs.b + bracket_q * coeffs.c
    return math.fsum(terms.tolist())


@dataclass(frozen=True)
class VarianceResult:
    """Limit variance together with the enumerated mean as a self-check.

    ``sigma2 >= 0`` always; ``mean_check`` is the enumerated ``E W`` and
    stays below 1e-12 in magnitude for any valid model.
    """

    sigma2: float
    mean_check: float


def _influence_table(model: PopulationModel) -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities and influence values for the 2r draw outcomes.

    The constant-in-j parts of the bracket collapse into two inner products,
    leaving a closed per-outcome form (label-1 outcomes first).
    """
    coeffs = influence_coefficients(model.cond_p, model.cond_q)
    p = model.label_prob
    q = 1.0 - p
    pv = model.cond_p
    qv = model.cond_q
    s_pb = math.fsum((pv * coeffs.b).tolist())
    s_qc = math.fsum((qv * coeffs.c).tolist())
    w1 = coeffs.b / p - (2.0 - p) * s_pb - p * s_qc
    w0 = coeffs.c / q - q * s_pb - (2.0 - q) * s_qc
    probs = np.concatenate([p * pv, q * qv])
    values = np.concatenate([w1, w0])
    return probs, values


def exact_sigma2(model: PopulationModel) -> VarianceResult:
    """Exact limit variance ``Var W`` by enumeration of all 2r outcomes."""
    probs, values = _influence_table(model)
    mean = math.fsum((probs * values).tolist())
    second = math.fsum((probs * values * values).tolist())
    sigma2 = second - mean * mean
    if sigma2 < 0.0:
        sigma2 = 0.0
    return VarianceResult(sigma2=sigma2, mean_check=mean)


def plugin_sigma2(counts: CountTable) -> VarianceResult:
    """Limit variance evaluated at the empirical measures.

    Requires a non-degenerate table: both label classes populated and every
    cell count positive, so the empirical measures form a valid model.

    Raises
    ------
    DegenerateSampleError
        If any empirical measure is undefined or has a zero cell.
    """
    emp = empirical_measures(counts)
    if emp.p_hat is None or emp.q_hat is None:
        raise DegenerateSampleError("empty label class; plug-in variance undefined")
    if np.any(emp.p_hat == 0.0) or np.any(emp.q_hat == 0.0):
        raise DegenerateSampleError("zero empirical cell; plug-in variance undefined")
    empirical_model = PopulationModel(
        label_prob=emp.p_n_hat, cond_p=emp.p_hat, cond_q=emp.q_hat
    )
    return exact_sigma2(empirical_model)


@dataclass(frozen=True)
class ConfidenceInterval:
    """Two-sided asymptotic interval for the symmetric divergence.

    ``degenerate_variance`` marks the collapsed (point) interval produced
    when the plug-in variance is zero.
    """

    lower: float
    upper: float
    level: float
    n: int
    degenerate_variance: bool

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValueError("interval bounds are out of order")

    @property
    def half_width(self) -> float:
        return (self.upper - self.lower) / 2.0

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def confidence_interval(
    estimate: EstimateResult, variance: VarianceResult, level: float
) -> ConfidenceInterval:
    """Interval ``estimate +- z * sqrt(sigma2 / n)`` at the given level.

    ``z`` is the standard normal quantile at ``(1 + level) / 2``.  A zero
    variance yields the flagged point interval.

    Raises
    ------
    DegenerateSampleError
        If the estimate itself is degenerate.
    ValueError
        If ``level`` is outside (0, 1).
    """
    if estimate.degenerate:
        raise DegenerateSampleError(
            f"no interval for a degenerate estimate ({estimate.reason})"
        )
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie strictly in (0, 1), got {level!r}")
    value = estimate.value
    if variance.sigma2 == 0.0:
        return ConfidenceInterval(
            lower=value, upper=value, level=level, n=estimate.n, degenerate_variance=True
        )
    z = normal_quantile((1.0 + level) / 2.0)
    half = z * math.sqrt(variance.sigma2 / estimate.n)
    return ConfidenceInterval(
        lower=value - half,
        upper=value + half,
        level=level,
        n=estimate.n,
        degenerate_variance=False,
    )
