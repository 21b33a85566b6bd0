"""Closed-form steady-state covariance of the feedback-coupled three-mode system.

Independent oracle for the numeric steady-state solver: the six distinct
covariance entries are rational functions of the damping rates, couplings and
bath noise powers, obtained by solving the steady-state condition
Q V + V Q^T = -D symbolically once and hard-coding the result. Each entry is
linear in the three bath noise powers (d_c, d_q, d_m), so the same
coefficients serve both diffusion modes.

All rates are scaled by kappa_c before evaluation: the raw coefficient
polynomials reach eighth order in rates of magnitude ~1e7 rad/s and would
needlessly stress double precision.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateDenominator
from .model import DerivedQuantities, SystemParams, cavity_noise_factor, derive

DENOMINATOR_TOL = 1e-12


def analytic_covariance(
    params: SystemParams, derived: DerivedQuantities | None = None
) -> np.ndarray:
    """Assemble the 6x6 steady-state covariance from the closed forms.

    Raises
    ------
    DegenerateDenominator
        If the shared denominator vanishes (parameters on the stability
        boundary, where no steady state exists).
    """
    d = derived or derive(params)
    scale = params.kappa_c
    gam = params.gamma_q / scale
    k_m = params.kappa_m / scale
    k_fb = d.k_fb / scale
    g_q = params.g_q / scale
    g_m = d.g_m_eff / scale

    d_c = cavity_noise_factor(params) * (1.0 + 2.0 * d.N_c)
    d_q = gam * (1.0 + 2.0 * d.N_q)
    d_m = k_m * (1.0 + 2.0 * d.N_m)

    gm2, gq2 = g_m**2, g_q**2

    den = 2.0 * (gam * gm2 - (gq2 + gam * k_fb) * k_m) * (
        gq2 * (gam + k_fb) + (k_fb + k_m) * (-gm2 + (gam + k_fb) * (gam + k_m))
    )
    if abs(den) <= DENOMINATOR_TOL:
        raise DegenerateDenominator(
            "closed-form denominator vanished; parameters sit on the stability boundary"
        )

    # recurring factors
    f1 = -gam * gm2 + k_m * (gq2 + (gam + k_m) * (k_fb + k_m))
    f2 = gam * ((gam + k_fb) * (gam + k_m) - gm2) + gq2 * k_m
    f3 = gam + k_fb + k_m

    v11 = (
        -(gam * gm2**2
          + (gq2 + gam * (gam + k_fb)) * k_m * (gq2 + (gam + k_m) * (k_fb + k_m))
          - gm2 * (gam**3 + gq2 * (gam + k_m) + gam * k_m * (gam + k_m)
                   + gam * k_fb * (gam + 2.0 * k_m))) * d_c
        - gq2 * f1 * d_q
        - gm2 * f2 * d_m
    ) / den

    v14 = (
        gam * g_q * f1 * d_c
        + g_q * (gm2 * (gam + k_m) * (k_fb + k_m)
                 - k_fb * k_m * (gq2 + (gam + k_m) * (k_fb + k_m))) * d_q
        + gam * g_q * gm2 * f3 * d_m
    ) / den

    v16 = (
        g_m * k_m * f2 * d_c
        + gq2 * g_m * k_m * f3 * d_q
        + g_m * (k_fb * f2 + gam * gq2 * f3) * d_m
    ) / den

    v33 = (
        -gq2 * f1 * d_c
        - (gq2**2 * k_m
           + (k_fb + k_m) * (-gm2 + k_fb * k_m) * (-gm2 + (gam + k_fb) * (gam + k_m))
           + gq2 * (gm2 * (k_m - gam)
                    + k_m * (k_fb * (2.0 * gam + k_fb) + (gam + k_fb) * k_m + k_m**2))) * d_q
        - gq2 * gm2 * f3 * d_m
    ) / den

    v35 = (
        g_q * g_m * (-gam * gm2 + k_m * (gq2 + gam * (gam + 2.0 * k_fb + k_m))) * d_c
        + g_q * g_m * (gq2 * k_m + gm2 * (k_fb + k_m) - k_fb * k_m * (k_fb + k_m)) * d_q
        + g_q * g_m * (gq2 * (gam + k_fb) + gam * (gm2 + k_fb * (gam + k_fb))) * d_m
    ) / den

    v66 = (
        -gm2 * f2 * d_c
        - gm2 * gq2 * f3 * d_q
        + (-gq2**2 * (gam + k_fb)
           + gam * (-gm2 + (gam + k_fb) * (gam + k_m)) * (gm2 - k_fb * (k_fb + k_m))
           + gq2 * (gm2 * (k_m - gam)
                    - (gam + k_fb) * (2.0 * gam * k_fb + (gam + k_fb) * k_m + k_m**2))) * d_m
    ) / den

    return assemble(v11, v14, v16, v33, v35, v66)


def assemble(v11: float, v14: float, v16: float,
             v33: float, v35: float, v66: float) -> np.ndarray:
    """Place the six distinct entries into the full symmetric 6x6 pattern."""
    return np.array([
        [v11, 0.0, 0.0, v14, 0.0, v16],
        [0.0, v11, -v14, 0.0, v16, 0.0],
        [0.0, -v14, v33, 0.0, v35, 0.0],
        [v14, 0.0, 0.0, v33, 0.0, -v35],
        [0.0, v16, v35, 0.0, v66, 0.0],
        [v16, 0.0, 0.0, -v35, 0.0, v66],
    ])
