"""Contingency-table association statistics: chi-square, phi-square,
Cramer's V and modified V under an explicit expectation model, exhaustive
maximum certificates, and seeded Monte Carlo summaries."""

from ._core import (
    BudgetExceeded,
    ContingencyTable,
    DegenerateError,
    Histogram,
    InputError,
    MaxCertificate,
    PhiScan,
    ProbabilityTable,
    SimulationReport,
    StatResult,
    StatSummary,
    UsageError,
    certify_max,
    chi_square,
    composition_count,
    compute_all,
    cramers_v,
    enumerate_tables,
    expected_counts,
    extremal_table,
    generate_table,
    histogram,
    mean_square_contingency,
    modified_v,
    parse_table,
    run_simulation,
    six_number_summary,
    sup_phi_square_scan,
    to_probability,
)

__all__ = [name for name in dir() if not name.startswith("_")]
