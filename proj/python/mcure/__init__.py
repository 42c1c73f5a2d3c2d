"""Bayesian semiparametric mixture cure models (C++ core)."""

from ._mcure import (
    fit,
    generate_scenario,
    hpd_interval,
    incidence_probability,
    kaplan_meier,
    log_likelihood,
    lpml,
    pe_sample_time,
    population_survival,
    psis_loo,
    psrf,
)

__all__ = [
    "fit",
    "generate_scenario",
    "hpd_interval",
    "incidence_probability",
    "kaplan_meier",
    "log_likelihood",
    "lpml",
    "pe_sample_time",
    "population_survival",
    "psis_loo",
    "psrf",
]
