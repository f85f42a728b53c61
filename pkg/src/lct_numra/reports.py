"""Verification reports: residual tables keyed by condition code.

Reports are plain dictionaries designed for JSON emission: deterministic
for a fixed configuration, carrying the config hash, the tolerance table,
and per-condition residuals.  Condition codes: "2.21"/"2.22" bank
orthonormality (plain/twisted), "2.33" quarter-period power profile,
"3.4a"/"3.4b" scaling sums.
"""

from __future__ import annotations

import numpy as np

from .canonical import CanonicalMatrix, validate
from .filters import (
    PeriodicFilterPair,
    TranslationSet,
    bank_residuals,
    check_m0_period,
    check_orthonormality,
    check_scaling_conditions,
)
from .io import config_hash
from .sampling import gram_matrix, translate_chirp
from .sampling import numra_grid
from .wavelets import haar_scaling, n2_reference_wavelets

#: Default per-condition tolerances for verification reports.
DEFAULT_TOLERANCES = {
    "2.21": 1e-10,
    "2.22": 1e-10,
    "2.33": 1e-10,
    "3.4a": 1e-10,
    "3.4b": 1e-10,
}


def lowpass_report(pair: PeriodicFilterPair, tolerances: dict | None = None) -> dict:
    """Residuals of every admissibility condition for a single low-pass pair."""
    tol = dict(DEFAULT_TOLERANCES if tolerances is None else tolerances)
    r21, r22 = check_orthonormality(pair, pair, same_index=True)
    r34a, r34b = check_scaling_conditions(pair)
    residuals = {
        "2.21": r21,
        "2.22": r22,
        "2.33": check_m0_period(pair),
        "3.4a": r34a,
        "3.4b": r34b,
    }
    violations = sorted(code for code, res in residuals.items() if res > tol[code])
    config = {
        "translation": pair.ts.to_dict(),
        "u_count": pair.u_grid.count,
        "tolerances": tol,
    }
    return {
        "config_hash": config_hash(config),
        "tolerances": tol,
        "residuals": residuals,
        "violations": violations,
        "ok": not violations,
    }


def bank_report(bank: list[PeriodicFilterPair], tolerances: dict | None = None) -> dict:
    """Worst-case residuals over all filter pairs of a bank."""
    tol = dict(DEFAULT_TOLERANCES if tolerances is None else tolerances)
    residuals = bank_residuals(bank)
    violations = sorted(code for code, res in residuals.items() if res > tol[code])
    config = {
        "translation": bank[0].ts.to_dict(),
        "u_count": bank[0].u_grid.count,
        "size": len(bank),
        "tolerances": tol,
    }
    return {
        "config_hash": config_hash(config),
        "tolerances": tol,
        "residuals": residuals,
        "violations": violations,
        "ok": not violations,
    }


def _system_gram_stats(system) -> dict:
    g = gram_matrix(system)
    n = g.shape[0]
    off = g - np.eye(n)
    return {
        "size": n,
        "max_off_identity": float(np.max(np.abs(off))) if n else 0.0,
        "max_diag_deviation": float(np.max(np.abs(np.diag(g) - 1.0))) if n else 0.0,
    }


def anomalous_n2_report(
    *, step: float = 2.0**-10, lambda_window: tuple[float, float] = (-4.0, 4.0)
) -> dict:
    """Deterministic cross-check of the N = 2 reference wavelets.

    Uses the anomalous matrix (0, 1, 2, -1) in permissive mode (its
    determinant -2 is recorded, not rejected), samples the three
    closed-form reference wavelets, and reports the Gram of their chirped
    translates together with the cross-Gram against scaling translates.
    No pass/fail judgment is attached to the reference formulas.
    """
    m = CanonicalMatrix(0.0, 1.0, 2.0, -1.0)
    ts = TranslationSet(N=2, r=1)
    report_cfg = {
        "matrix": m.to_dict(),
        "translation": ts.to_dict(),
        "step": step,
        "lambda_window": list(lambda_window),
    }
    matrix_report = validate(m, allow_nonunimodular=True)
    window = (lambda_window[0] - 2.0, lambda_window[1] + 3.0)
    refinement = max(1, round(1.0 / (2 * ts.N * step)))
    grid = numra_grid(ts, window, refinement=refinement)
    from .filters import omega_enumerate

    lambdas = omega_enumerate(ts, lambda_window)
    psis = n2_reference_wavelets(grid)
    phi = haar_scaling(ts, grid)
    wavelet_system = [
        translate_chirp(psi, lam, m) for psi in psis for lam in lambdas
    ]
    scaling_system = [translate_chirp(phi, lam, m) for lam in lambdas]
    cross = gram_matrix(wavelet_system + scaling_system)
    n_w = len(wavelet_system)
    cross_block = cross[:n_w, n_w:]
    return {
        "config_hash": config_hash(report_cfg),
        "config": report_cfg,
        "matrix_determinant": matrix_report.det,
        "permissive_mode": True,
        "wavelet_gram": _system_gram_stats(wavelet_system),
        "scaling_gram": _system_gram_stats(scaling_system),
        "max_cross_gram": float(np.max(np.abs(cross_block))),
    }
