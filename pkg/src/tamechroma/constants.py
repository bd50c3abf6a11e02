"""Every tolerance and band constant in one table.

Asymptotic statements only become checkable once their hidden constants are
fixed. They are fixed here, and the CLI can print or override them.
"""
from __future__ import annotations

import copy

DEFAULTS: dict[str, float] = {
    # independent-set ratio band for mu_u / mu_a against its predictor
    "mu_ratio_band": 32.0,
    # phi(kappa) vs ln E comparison: C * n * lnln n / ln n
    "phi_band": 10.0,
    # |L0| at the threshold crossing: C * ln^{3/2} n
    "L0_crossing_band": 50.0,
    # |L_k* - L0| after rounding: C * ln^{3/2} n
    "rounding_gap_band": 100.0,
    # L0(k+1) - L0(k) around (2/ln2) ln^2 n: +- C * ln n * lnln n
    "L0_derivative_band": 40.0,
    # y_t around 2 ln n - lnln n
    "y_band": 20.0,
    # |mu_n|, |lambda_n|
    "reparam_bound": 20.0,
    # xi_{i+1} <= C 2^{-i} xi_i
    "ratio_decay": 64.0,
    # T(2) <= C ln^2 n
    "T2_band": 1.0e4,
    # n / k_t within +- C of alpha0 - 1 - 2/ln2
    "average_class_band": 0.5,
    # h_n(i) near -(ln2/2) i^2 for small i
    "h_small_i_band": 0.15,
    # McKay formula vs exact count at tiny scale
    "mckay_low": 0.7,
    "mckay_high": 1.4,
    # solver tolerances
    "newton_tol": 1.0e-12,
    "newton_max_iter": 200,
    "mu_bracket_width": 1.0e-10,
    "x0_tol": 1.0e-6,
    # search budgets
    "chi_node_budget": 5.0e7,
    "event_enum_max_n": 30,
    "mc_batch_size": 10000,
}


def constants(overrides: dict[str, float] | None = None) -> dict[str, float]:
    """Return a copy of the table with ``overrides`` applied.

    Unknown keys raise KeyError so that typos do not pass silently.
    """
    table = copy.deepcopy(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in table:
            raise KeyError(f"unknown constant {key!r}")
        table[key] = float(value)
    return table
