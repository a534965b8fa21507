#pragma once

#include <array>
#include <string>
#include <vector>

#include "polykinetic/diagnostics.hpp"

namespace polykinetic {

inline constexpr std::array<const char*, 13> kTraceColumns = {
    "t", "kinetic_energy", "relative_entropy", "fisher_x", "fisher_q", "free_energy", "mass_min",
    "mass_max", "psi_min", "cutoff_active_fraction", "energy_budget_slack", "ck_gap", "ls_gap"};

std::string format_trace_csv(const RunTrace& trace, int cadence = 1);
void write_trace_csv(const RunTrace& trace, const std::string& path, int cadence = 1);

using TraceRow = std::array<double, 13>;
std::vector<TraceRow> read_trace_csv(const std::string& path);

struct TraceAudit {
    int rows = 0;
    double min_budget_slack = 0.0;
    double min_ck_gap = 0.0;
    double min_ls_gap = 0.0;
    double max_mass_error = 0.0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

TraceAudit audit_trace_rows(const std::vector<TraceRow>& rows, double gap_tol = 1e-9, double mass_tol = 1e-8);

} // namespace polykinetic
