#pragma once

#include <functional>

#include "ncbcast/csv.hpp"

namespace ncbcast {

struct SweepSpec {
    std::vector<double> rhos;
    double mu = 0.5;
    std::uint64_t slots = 0;
    std::vector<std::uint64_t> seeds{1};
    bool drain = true;
    std::uint64_t warmup = 0;
    AssertLevel assert_level = AssertLevel::Monitor;
    int jobs = 0;  // 0 = hardware concurrency
};

struct SweepOutcome {
    std::vector<SweepRow> rows;          // one per (rho, seed), sorted
    std::vector<ScalingPoint> points;    // per rho, delays seed-averaged
    double slope = 0.0;
};

// Runs every (rho, seed) point on a bounded worker pool and merges results in
// (rho, seed) order. `runner` is injectable so tests can substitute a
// synthetic delay law for the simulator.
SweepOutcome run_sweep(const SweepSpec& spec,
                       const std::function<StatsReport(double rho, std::uint64_t seed)>& runner = {});

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 1 invariant/engine failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace ncbcast
