"""Bipartite and tripartite correlation quantifiers for Gaussian states.

Entanglement is measured by the logarithmic negativity max[0, -ln 2 nu~] with
nu~ the smallest symplectic eigenvalue of the partially transposed covariance
matrix; steerability by the Gaussian measure max[0, -sum ln 2 nu_bar] over the
sub-vacuum symplectic eigenvalues of the steered party's conditional state.
Both carry the factor 2 of the vacuum-1/2 convention, so a vacuum gives
exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeDiscriminant
from .gaussian import (
    Bipartition,
    VACUUM_VARIANCE,
    extract_submatrix,
    partial_transpose,
    schur_complement_steered,
    symplectic_eigenvalues,
)

# measures below this are reported as exactly zero to stabilise classification
ZERO_CLAMP = 1e-12

# threshold separating "zero" from "nonzero" in the steering taxonomy
CLASS_TOL = 1e-9

STEERING_CLASSES = (
    "no_way",
    "one_way_ab",
    "one_way_ba",
    "two_way_asymmetric",
    "two_way_symmetric",
)


def _clamp(value: float) -> float:
    return 0.0 if value < ZERO_CLAMP else float(value)


def log_negativity_2mode(cov4: np.ndarray) -> float:
    """Logarithmic negativity of a two-mode state from the closed discriminant.

    Evaluates max[0, -ln 2 theta] with
    theta = sqrt((sigma - sqrt(sigma^2 - 4 det V)) / 2),
    sigma = det X + det Y - 2 det Z.

    Raises
    ------
    NegativeDiscriminant
        If sigma^2 < 4 det V beyond rounding, which signals an unphysical
        input.
    """
    v = np.asarray(cov4, dtype=float)
    if v.shape != (4, 4):
        raise ValueError("expected a 4x4 two-mode covariance matrix")
    x = np.linalg.det(v[:2, :2])
    y = np.linalg.det(v[2:, 2:])
    z = np.linalg.det(v[:2, 2:])
    sigma = x + y - 2.0 * z
    disc = sigma**2 - 4.0 * np.linalg.det(v)
    if disc < -1e-10 * max(1.0, sigma**2):
        raise NegativeDiscriminant(f"sigma^2 - 4 det V = {disc:.3e} < 0")
    theta = math.sqrt(max((sigma - math.sqrt(max(disc, 0.0))) / 2.0, 0.0))
    if theta <= 0.0:
        raise NegativeDiscriminant("smallest symplectic eigenvalue collapsed to zero")
    return _clamp(-math.log(2.0 * theta))


def log_negativity_2mode_pt(cov4: np.ndarray) -> float:
    """Same quantity via the partial-transpose symplectic spectrum.

    Independent code path used to cross-check log_negativity_2mode.
    """
    nu = symplectic_eigenvalues(partial_transpose(cov4, [0]), check_positive=False)
    return _clamp(-math.log(2.0 * float(nu[0])))


def log_negativity_1v2(cov6: np.ndarray, pivot: int) -> float:
    """One-versus-two-mode logarithmic negativity of a three-mode state.

    The pivot mode is partially transposed and the smallest symplectic
    eigenvalue of the resulting matrix enters max[0, -ln 2 nu~].
    """
    v = np.asarray(cov6, dtype=float)
    if v.shape != (6, 6):
        raise ValueError("expected a 6x6 three-mode covariance matrix")
    nu = symplectic_eigenvalues(partial_transpose(v, [pivot]), check_positive=False)
    return _clamp(-math.log(2.0 * float(nu[0])))


def contangle(log_negativity: float) -> float:
    """Squared logarithmic negativity, the continuous-variable tangle."""
    if log_negativity < 0:
        raise ValueError("logarithmic negativity must be non-negative")
    return log_negativity**2


def residual_contangle(cov6: np.ndarray, pivot: int) -> float:
    """Tripartite residual C_{i|jk} - C_{i|j} - C_{i|k} for one pivot mode.

    May be negative; its sign is the monogamy statement itself.
    """
    others = [m for m in range(3) if m != pivot]
    c_one_two = contangle(log_negativity_1v2(cov6, pivot))
    c_pairs = 0.0
    for other in others:
        pair = sorted((pivot, other))
        sub = extract_submatrix(cov6, pair)
        c_pairs += contangle(log_negativity_2mode(sub))
    return c_one_two - c_pairs


def min_residual_contangle(cov6: np.ndarray) -> float:
    """Minimum residual contangle over the three pivots.

    A strictly positive value witnesses genuine tripartite entanglement.
    """
    return min(residual_contangle(cov6, pivot) for pivot in range(3))


def gaussian_steering(cov: np.ndarray, split: Bipartition) -> float:
    """Steerability of party_b by Gaussian measurements on party_a.

    max[0, -sum_j ln(2 nu_j)] over the symplectic eigenvalues nu_j < 1/2 of
    the Schur complement of the steering party's block. Defined for 1->1,
    1->2 and 2->1 splits alike.
    """
    conditional = schur_complement_steered(cov, split)
    total = 0.0
    for nu in symplectic_eigenvalues(conditional, check_positive=False):
        if nu < VACUUM_VARIANCE:
            total += -math.log(2.0 * float(nu))
    return _clamp(max(0.0, total))


def steering_asymmetry(cov: np.ndarray, mode_a: int, mode_b: int) -> float:
    """Absolute difference of the two directed steering measures of a pair."""
    forward = gaussian_steering(cov, Bipartition((mode_a,), (mode_b,)))
    backward = gaussian_steering(cov, Bipartition((mode_b,), (mode_a,)))
    return abs(forward - backward)


def classify_steering(g_ab: float, g_ba: float, tol: float = CLASS_TOL) -> str:
    """Four-way steering taxonomy for a pair with directed measures (ab, ba)."""
    if g_ab < 0 or g_ba < 0:
        raise ValueError("steering measures must be non-negative")
    a_steers = g_ab > tol
    b_steers = g_ba > tol
    if not a_steers and not b_steers:
        return "no_way"
    if a_steers and not b_steers:
        return "one_way_ab"
    if b_steers and not a_steers:
        return "one_way_ba"
    return "two_way_symmetric" if abs(g_ab - g_ba) <= tol else "two_way_asymmetric"


def steering_monogamy_residuals(cov6: np.ndarray, pivot: int) -> tuple[float, float]:
    """Monogamy residuals of the pivot mode against the remaining pair.

    Returns (out_residual, in_residual):
      out = G(pivot -> pair) - G(pivot -> i) - G(pivot -> j)
      in  = G(pair -> pivot) - G(i -> pivot) - G(j -> pivot)
    Both are returned signed; the caller decides on violation reporting.
    """
    i, j = (m for m in range(3) if m != pivot)
    pair = (i, j)
    out_res = (
        gaussian_steering(cov6, Bipartition((pivot,), pair))
        - gaussian_steering(cov6, Bipartition((pivot,), (i,)))
        - gaussian_steering(cov6, Bipartition((pivot,), (j,)))
    )
    in_res = (
        gaussian_steering(cov6, Bipartition(pair, (pivot,)))
        - gaussian_steering(cov6, Bipartition((i,), (pivot,)))
        - gaussian_steering(cov6, Bipartition((j,), (pivot,)))
    )
    return out_res, in_res


# --- full report -------------------------------------------------------------

MODE_LABELS = ("c", "q", "m")
_PAIRS = (("c", "q"), ("c", "m"), ("q", "m"))


@dataclass(frozen=True)
class CorrelationReport:
    """All scalar correlation measures computed at one parameter point.

    Maps are keyed by mode labels ("c", "q", "m") and pair strings ("cq",
    "cm", "qm"); bipartition keys are ordered "a_to_b" strings.
    """

    ln_pairs: dict[str, float]
    ln_one_two: dict[str, float]
    steering: dict[str, float]
    asymmetry: dict[str, float]
    steering_class: dict[str, str]
    contangle_residuals: dict[str, float]
    r_min: float
    steering_monogamy: dict[str, float]

    def to_flat_dict(self) -> dict[str, float | str]:
        """Flat JSON-ready mapping with stable, documented key names."""
        flat: dict[str, float | str] = {}
        for pair, value in self.ln_pairs.items():
            flat[f"LN_{pair}"] = value
        for pivot, value in self.ln_one_two.items():
            others = "".join(lbl for lbl in MODE_LABELS if lbl != pivot)
            flat[f"LN_{pivot}_{others}"] = value
        for key, value in self.steering.items():
            flat[f"G_{key}"] = value
        for pair, value in self.asymmetry.items():
            flat[f"asym_{pair}"] = value
        for pivot, value in self.contangle_residuals.items():
            flat[f"R_{pivot}"] = value
        flat["R_min"] = self.r_min
        for key, value in self.steering_monogamy.items():
            flat[f"mono_{key}"] = value
        for pair, value in self.steering_class.items():
            flat[f"class_{pair}"] = value
        return flat


MEASURE_KEYS = (
    "LN_cq", "LN_cm", "LN_qm",
    "LN_c_qm", "LN_q_cm", "LN_m_cq",
    "G_c_to_q", "G_q_to_c", "G_c_to_m", "G_m_to_c", "G_q_to_m", "G_m_to_q",
    "G_c_to_qm", "G_q_to_cm", "G_m_to_cq",
    "G_qm_to_c", "G_cm_to_q", "G_cq_to_m",
    "asym_cq", "asym_cm", "asym_qm",
    "R_c", "R_q", "R_m", "R_min",
    "mono_out_c", "mono_in_c", "mono_out_q", "mono_in_q", "mono_out_m", "mono_in_m",
    "class_cq", "class_cm", "class_qm",
)


def correlation_report(cov6: np.ndarray) -> CorrelationReport:
    """Compute every supported measure for a three-mode covariance matrix."""
    v = np.asarray(cov6, dtype=float)
    index = {label: k for k, label in enumerate(MODE_LABELS)}

    ln_pairs = {}
    for a, b in _PAIRS:
        sub = extract_submatrix(v, [index[a], index[b]])
        ln_pairs[a + b] = log_negativity_2mode(sub)

    ln_one_two = {label: log_negativity_1v2(v, index[label]) for label in MODE_LABELS}

    steering: dict[str, float] = {}
    for a in MODE_LABELS:
        for b in MODE_LABELS:
            if a != b:
                split = Bipartition((index[a],), (index[b],))
                steering[f"{a}_to_{b}"] = gaussian_steering(v, split)
    for pivot in MODE_LABELS:
        others = [lbl for lbl in MODE_LABELS if lbl != pivot]
        pair_label = "".join(others)
        pair_idx = tuple(index[lbl] for lbl in others)
        steering[f"{pivot}_to_{pair_label}"] = gaussian_steering(
            v, Bipartition((index[pivot],), pair_idx))
        steering[f"{pair_label}_to_{pivot}"] = gaussian_steering(
            v, Bipartition(pair_idx, (index[pivot],)))

    asymmetry = {}
    steering_class = {}
    for a, b in _PAIRS:
        asymmetry[a + b] = abs(steering[f"{a}_to_{b}"] - steering[f"{b}_to_{a}"])
        steering_class[a + b] = classify_steering(
            steering[f"{a}_to_{b}"], steering[f"{b}_to_{a}"])

    # the residuals are plain arithmetic on measures computed above
    contangle_residuals = {}
    steering_monogamy = {}
    for pivot in MODE_LABELS:
        i, j = (lbl for lbl in MODE_LABELS if lbl != pivot)
        pair = i + j
        pair_with_i = "".join(sorted(pivot + i, key=MODE_LABELS.index))
        pair_with_j = "".join(sorted(pivot + j, key=MODE_LABELS.index))
        contangle_residuals[pivot] = (ln_one_two[pivot] ** 2
                                      - ln_pairs[pair_with_i] ** 2
                                      - ln_pairs[pair_with_j] ** 2)
        steering_monogamy[f"out_{pivot}"] = (steering[f"{pivot}_to_{pair}"]
                                             - steering[f"{pivot}_to_{i}"]
                                             - steering[f"{pivot}_to_{j}"])
        steering_monogamy[f"in_{pivot}"] = (steering[f"{pair}_to_{pivot}"]
                                            - steering[f"{i}_to_{pivot}"]
                                            - steering[f"{j}_to_{pivot}"])
    r_min = min(contangle_residuals.values())

    return CorrelationReport(
        ln_pairs=ln_pairs,
        ln_one_two=ln_one_two,
        steering=steering,
        asymmetry=asymmetry,
        steering_class=steering_class,
        contangle_residuals=contangle_residuals,
        r_min=r_min,
        steering_monogamy=steering_monogamy,
    )
