#pragma once

#include <iosfwd>

#include "ncbcast/stats.hpp"

namespace ncbcast {

// All writers emit '\n' line endings and fixed "%.10g" float formatting so a
// (config, seed) pair always produces byte-identical files.

void write_trace_csv(std::ostream& os, const RunResult& result);
void write_packets_csv(std::ostream& os, const RunResult& result);

struct SweepRow {
    double rho = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double x = 0.0;
    StatsReport stats;
    std::uint64_t slots = 0;
    std::uint64_t seed = 0;
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, double slope);

std::string report_json(const RunResult& result, const StatsReport& stats);
std::string report_csv(const RunResult& result, const StatsReport& stats);

std::string format_double(double v);

}  // namespace ncbcast
