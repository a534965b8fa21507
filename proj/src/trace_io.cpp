#include "polykinetic/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "polykinetic/errors.hpp"

namespace polykinetic {

namespace {

void append(std::string& out, double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, r.ptr);
}

} // namespace

std::string format_trace_csv(const RunTrace& trace, int cadence)
{
    std::string out;
    for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
        if (i) out += ',';
        out += kTraceColumns[i];
    }
    out += '\n';
    const std::size_t n = trace.records.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i + 1) % static_cast<std::size_t>(cadence) != 0 && i + 1 != n) continue;
        const auto& r = trace.records[i];
        const double row[13] = {r.t, r.kinetic_energy, r.relative_entropy, r.fisher_x, r.fisher_q, r.free_energy,
                                r.mass_min, r.mass_max, r.psi_min, r.cutoff_active_fraction, r.energy_budget_slack,
                                r.ck_gap, r.ls_gap};
        for (int c = 0; c < 13; ++c) {
            if (c) out += ',';
            append(out, row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_trace_csv(const RunTrace& trace, const std::string& path, int cadence)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::Io, "cannot open trace for writing: " + path);
    const std::string s = format_trace_csv(trace, cadence);
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!os) fail(ErrorKind::Io, "failed writing trace: " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot open trace: " + path);
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::Io, "trace is empty: " + path);
    std::string header;
    for (std::size_t i = 0; i < kTraceColumns.size(); ++i) header += (i ? "," : "") + std::string(kTraceColumns[i]);
    if (line != header) fail(ErrorKind::Io, "trace header does not match the expected 13 columns");
    std::vector<TraceRow> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        TraceRow row{};
        std::size_t pos = 0;
        for (int c = 0; c < 13; ++c) {
            const std::size_t end = c < 12 ? line.find(',', pos) : line.size();
            if (end == std::string::npos) fail(ErrorKind::Io, "trace line " + std::to_string(lineno) + ": too few columns");
            const std::string cell = line.substr(pos, end - pos);
            if (cell == "nan" || cell == "-nan") row[c] = std::numeric_limits<double>::quiet_NaN();
            else if (cell == "inf") row[c] = std::numeric_limits<double>::infinity();
            else if (cell == "-inf") row[c] = -std::numeric_limits<double>::infinity();
            else {
                auto r = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
                if (r.ec != std::errc() || r.ptr != cell.data() + cell.size())
                    fail(ErrorKind::Io, "trace line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            pos = end + 1;
        }
        if (pos <= line.size()) fail(ErrorKind::Io, "trace line " + std::to_string(lineno) + ": too many columns");
        rows.push_back(row);
    }
    return rows;
}

TraceAudit audit_trace_rows(const std::vector<TraceRow>& rows, double gap_tol, double mass_tol)
{
    TraceAudit a;
    a.rows = static_cast<int>(rows.size());
    a.min_budget_slack = a.min_ck_gap = a.min_ls_gap = std::numeric_limits<double>::infinity();
    double prev_t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        for (double v : r)
            if (!std::isfinite(v)) {
                a.failures.push_back("row " + std::to_string(i + 1) + ": non-finite value");
                break;
            }
        if (!(r[0] > prev_t)) a.failures.push_back("row " + std::to_string(i + 1) + ": time stamps not increasing");
        prev_t = r[0];
        a.min_budget_slack = std::min(a.min_budget_slack, r[10]);
        a.min_ck_gap = std::min(a.min_ck_gap, r[11]);
        a.min_ls_gap = std::min(a.min_ls_gap, r[12]);
        a.max_mass_error = std::max({a.max_mass_error, std::abs(r[6] - 1.0), std::abs(r[7] - 1.0)});
    }
    if (a.min_budget_slack < -gap_tol) a.failures.push_back("energy budget violated");
    if (a.min_ck_gap < -gap_tol) a.failures.push_back("Csiszar-Kullback gap negative");
    if (a.min_ls_gap < -gap_tol) a.failures.push_back("log-Sobolev gap negative");
    if (a.max_mass_error > mass_tol) a.failures.push_back("marginal mass deviates from 1");
    return a;
}

} // namespace polykinetic
